#pragma once

// Certified enclosures for sin, cos, exp and the constants they need.
// Point values come from truncated Taylor series with the remainder added
// outward; interval arguments are handled by monotonicity (exp) or by
// endpoint evaluation plus critical-point analysis (sin, cos).

#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>

#include "boxroot/dyadic.hpp"
#include "boxroot/errors.hpp"
#include "boxroot/interval.hpp"

namespace boxroot {

namespace detail {

// atan(1/m) by the alternating series; remainder bounded by the first
// omitted term.
inline Interval atan_recip(long m, long wp) {
    Interval sum = Interval::point(Dyadic());
    mpz_class mm(m);
    mpz_class mpow(m); // m^(2k+1)
    RoundingContext ctx{wp + 8, wp + 8};
    long k = 0;
    for (;;) {
        mpz_class den = mpow * (2 * k + 1);
        Dyadic term_lo = div_dir(Dyadic(1), Dyadic(den, 0), wp + 8, RoundDir::Down);
        Dyadic term_hi = div_dir(Dyadic(1), Dyadic(den, 0), wp + 8, RoundDir::Up);
        Interval term(term_lo, term_hi);
        sum = (k % 2 == 0) ? iadd(sum, term, ctx) : isub(sum, term, ctx);
        mpow *= mm * mm;
        ++k;
        if (term_hi < Dyadic::pow2(-wp - 4)) break;
    }
    // Next term bounds the tail.
    mpz_class den = mpow * (2 * k + 1);
    Dyadic tail = div_dir(Dyadic(1), Dyadic(den, 0), wp + 8, RoundDir::Up);
    return Interval(sum.lo - tail, sum.hi + tail);
}

inline const Interval& cached(std::map<long, Interval>& cache, std::mutex& mu, long bits,
                              Interval (*compute)(long)) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(bits);
    if (it == cache.end()) it = cache.emplace(bits, compute(bits)).first;
    return it->second;
}

inline Interval compute_pi(long bits) {
    long wp = bits + 16;
    RoundingContext ctx{wp, wp};
    Interval a5 = atan_recip(5, wp);
    Interval a239 = atan_recip(239, wp);
    // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
    Interval r = isub(Interval(a5.lo.ldexp(4), a5.hi.ldexp(4)),
                      Interval(a239.lo.ldexp(2), a239.hi.ldexp(2)), ctx);
    return round_out(r, bits + 8);
}

inline Interval compute_ln2(long bits) {
    // ln 2 = sum_{k>=1} 1/(k 2^k); tail after N is below 2^-N/(N+1).
    long wp = bits + 16;
    RoundingContext ctx{wp, wp};
    Interval sum = Interval::point(Dyadic());
    for (long k = 1; k <= wp + 2; ++k) {
        Dyadic lo = div_dir(Dyadic(1), Dyadic(k), wp + 8, RoundDir::Down).ldexp(-k);
        Dyadic hi = div_dir(Dyadic(1), Dyadic(k), wp + 8, RoundDir::Up).ldexp(-k);
        sum = iadd(sum, Interval(lo, hi), ctx);
    }
    Dyadic tail = Dyadic::pow2(-wp - 2);
    return round_out(Interval(sum.lo - tail, sum.hi + tail), bits + 8);
}

} // namespace detail

inline Interval pi_enclosure(long bits) {
    static std::map<long, Interval> cache;
    static std::mutex mu;
    return detail::cached(cache, mu, bits, &detail::compute_pi);
}

inline Interval ln2_enclosure(long bits) {
    static std::map<long, Interval> cache;
    static std::mutex mu;
    return detail::cached(cache, mu, bits, &detail::compute_ln2);
}

namespace detail {

inline constexpr double kMaxReductionArg = 1e12;

// x - k * C where C is an interval constant; exact endpoint arithmetic.
inline Interval reduce_by_multiple(const Dyadic& x, long long k, const Interval& c) {
    Dyadic kd(static_cast<long>(k));
    Dyadic t1 = x - kd * c.lo;
    Dyadic t2 = x - kd * c.hi;
    return t1 < t2 ? Interval(t1, t2) : Interval(t2, t1);
}

// Shared series evaluation for sin/cos on a reduced interval argument r.
// kind: 0 = sin, 1 = cos.  Unconditional Lagrange remainder |r|^m / m!.
inline Interval sincos_series(const Interval& r, int kind, long wp) {
    RoundingContext ctx{wp + 8, wp + 8};
    Interval r2 = imul(r, r, ctx);
    Interval term = (kind == 0) ? round_out(r, wp + 8) : Interval::point(Dyadic(1));
    Interval sum = term;
    Dyadic term_mag = term.magnitude();
    Dyadic r_mag = r.magnitude();
    long deg = (kind == 0) ? 1 : 0;
    Dyadic eps = Dyadic::pow2(-wp - 4);
    for (;;) {
        // next term: term * r^2 / ((deg+1)(deg+2)), alternating sign
        term = imul(term, r2, ctx);
        term = idiv(term, Interval::point(Dyadic(static_cast<long>((deg + 1) * (deg + 2)))), ctx);
        term = ineg(term);
        deg += 2;
        sum = iadd(sum, term, ctx);
        term_mag = term.magnitude();
        if (term_mag < eps && deg > r_mag.to_double() + 2) break;
        if (deg > 64 + 4 * wp) break; // safety stop
    }
    // Lagrange remainder for the next omitted term.
    Dyadic tail = err_up(err_mul(term_mag, max(r_mag * r_mag, Dyadic(1))));
    Interval out(sum.lo - tail, sum.hi + tail);
    // Clamp to [-1, 1]; the true value lies there.
    Dyadic one(1);
    return Interval(max(out.lo, -one), min(out.hi, one));
}

inline Interval sincos_point(const Dyadic& x, int kind, long bits) {
    double xd = x.to_double();
    if (std::abs(xd) > kMaxReductionArg)
        throw DomainError("sin/cos: argument too large for reduction");
    long wp = bits + 16;
    long long k = std::llround(xd / 6.283185307179586);
    if (k != 0) {
        long kbits = 64 - static_cast<long>(__builtin_clzll(static_cast<unsigned long long>(std::llabs(k))));
        wp += kbits;
    }
    Interval pi2 = pi_enclosure(wp + 4);
    pi2 = Interval(pi2.lo.ldexp(1), pi2.hi.ldexp(1));
    Interval r = (k == 0) ? Interval::point(x) : reduce_by_multiple(x, k, pi2);
    return round_out(sincos_series(r, kind, wp), bits + 8);
}

} // namespace detail

// Enclosure of sin(x) for a dyadic point, width about 2^-bits.
inline Interval sin_point(const Dyadic& x, long bits) { return detail::sincos_point(x, 0, bits); }
inline Interval cos_point(const Dyadic& x, long bits) { return detail::sincos_point(x, 1, bits); }

inline Interval exp_point(const Dyadic& x, long bits) {
    if (x.is_zero()) return Interval::point(Dyadic(1));
    double xd = x.to_double();
    if (std::abs(xd) > detail::kMaxReductionArg)
        throw DomainError("exp: argument too large");
    long wp = bits + 16;
    long long k = std::llround(xd * 1.4426950408889634); // x / ln 2
    if (k != 0) {
        long kbits = 64 - static_cast<long>(__builtin_clzll(static_cast<unsigned long long>(std::llabs(k))));
        wp += kbits;
    }
    RoundingContext ctx{wp + 8, wp + 8};
    Interval r = (k == 0) ? Interval::point(x)
                          : detail::reduce_by_multiple(x, k, ln2_enclosure(wp + 4));
    // |r| <= 0.5 after reduction; series sum r^j / j!.
    Interval term = Interval::point(Dyadic(1));
    Interval sum = term;
    Dyadic eps = Dyadic::pow2(-wp - 4);
    long j = 0;
    for (;;) {
        term = imul(term, r, ctx);
        term = idiv(term, Interval::point(Dyadic(j + 1)), ctx);
        ++j;
        sum = iadd(sum, term, ctx);
        if (term.magnitude() < eps && j >= 2) break;
        if (j > 64 + 4 * wp) break;
    }
    // Geometric tail bound: |r| <= 1/2 so the tail is below 2 |term_next|.
    Dyadic tail = err_up(err_mul(term.magnitude(), r.magnitude() + r.magnitude()));
    Interval out(sum.lo - tail, sum.hi + tail);
    if (out.lo.sign() < 0) out.lo = Dyadic(); // exp is positive
    out = Interval(out.lo.ldexp(k), out.hi.ldexp(k));
    return round_out(out, bits + 8);
}

// --- tracked range forms ----------------------------------------------------

inline TrackedInterval texp(const TrackedInterval& a, const RoundingContext& ctx) {
    long p = ctx.precision_bits;
    Interval elo = exp_point(a.iv.lo, p);
    Interval ehi = exp_point(a.iv.hi, p);
    Interval iv(elo.lo, ehi.hi);
    Dyadic lip = err_up(ehi.hi); // sup of exp on the enclosure
    Dyadic slack = max(elo.width(), ehi.width());
    return {std::move(iv), err_add(err_mul(lip, a.err), slack)};
}

namespace detail {

// Range of sin (kind 0) or cos (kind 1) over a tracked interval.
inline TrackedInterval sincos_range(const TrackedInterval& a, int kind,
                                    const RoundingContext& ctx) {
    long p = ctx.precision_bits;
    Interval pi = pi_enclosure(p + 8);
    Dyadic one(1);
    Dyadic w = a.iv.width();
    Dyadic two_pi_hi = pi.hi.ldexp(1);
    if (!(w < two_pi_hi + a.err + a.err)) {
        // The ideal interval certainly spans a full period.
        return {Interval(-one, one), Dyadic()};
    }
    if (one < a.err) {
        // Hopelessly wide input error; [-1,1] is off by at most the range width.
        return {Interval(-one, one), Dyadic(2)};
    }
    Interval s_lo = sincos_point(a.iv.lo, kind, p);
    Interval s_hi = sincos_point(a.iv.hi, kind, p);
    Interval base = hull(s_lo, s_hi);
    Dyadic slack = max(s_lo.width(), s_hi.width());

    // Extrema: sin has max at pi/2 + 2m pi, min at -pi/2 + 2m pi;
    // cos has max at 2m pi, min at (2m+1) pi.  Candidates T = (c/2) pi.
    double lo_d = a.iv.lo.to_double(), hi_d = a.iv.hi.to_double();
    auto scan = [&](bool is_max) {
        // critical points t = (c/2) * pi with integer c; sin: c = 1 or -1 mod 4,
        // cos: c = 0 or 2 mod 4.
        int residue = kind == 0 ? (is_max ? 1 : 3) : (is_max ? 0 : 2);
        long long c_lo = static_cast<long long>(std::floor(lo_d / 1.5707963267948966)) - 2;
        long long c_hi = static_cast<long long>(std::ceil(hi_d / 1.5707963267948966)) + 2;
        for (long long c = c_lo; c <= c_hi; ++c) {
            long long m = ((c % 4) + 4) % 4;
            if (m != residue) continue;
            Dyadic cd(static_cast<long>(c));
            Interval t = c >= 0 ? Interval((cd * pi.lo).ldexp(-1), (cd * pi.hi).ldexp(-1))
                                : Interval((cd * pi.hi).ldexp(-1), (cd * pi.lo).ldexp(-1));
            bool intersects = !(t.hi < a.iv.lo) && !(a.iv.hi < t.lo);
            if (!intersects) continue;
            if (is_max) base.hi = one; else base.lo = -one;
            bool inside = a.iv.contains(t);
            if (!inside) slack = err_add(slack, t.width() + a.err);
        }
    };
    scan(true);
    scan(false);
    base = Interval(max(base.lo, -one), min(base.hi, one));
    return {std::move(base), err_add(a.err, slack)};
}

} // namespace detail

inline TrackedInterval tsin(const TrackedInterval& a, const RoundingContext& ctx) {
    return detail::sincos_range(a, 0, ctx);
}

inline TrackedInterval tcos(const TrackedInterval& a, const RoundingContext& ctx) {
    return detail::sincos_range(a, 1, ctx);
}

} // namespace boxroot
