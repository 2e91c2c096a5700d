#pragma once

// Dyadic-endpoint intervals with outward rounding, the metrics used
// throughout (width, magnitude, Hausdorff distance, separation), and
// error-tracked enclosures.
//
// A TrackedInterval carries, next to the outward-rounded interval, a
// certified upper bound on the Hausdorff distance to the ideal interval
// computed without rounding.  The ideal result is always contained in the
// tracked one, so tightening the working precision shrinks enclosures and
// the bound can be driven below any positive accuracy budget.

#include <cassert>
#include <utility>
#include <vector>

#include "boxroot/dyadic.hpp"
#include "boxroot/errors.hpp"

namespace boxroot {

struct Interval {
    Dyadic lo, hi;

    Interval() = default;
    Interval(Dyadic l, Dyadic h) : lo(std::move(l)), hi(std::move(h)) {
        assert(!(hi < lo));
    }

    static Interval point(const Dyadic& x) { return Interval(x, x); }

    Dyadic width() const { return hi - lo; }
    Dyadic magnitude() const { return max(lo.abs(), hi.abs()); }

    // min |x| over the interval; 0 when it contains 0.
    Dyadic mignitude() const {
        if (contains_zero()) return Dyadic();
        return min(lo.abs(), hi.abs());
    }

    Dyadic midpoint() const { return (lo + hi).ldexp(-1); } // exact

    bool contains_zero() const { return lo.sign() <= 0 && hi.sign() >= 0; }
    bool contains(const Dyadic& x) const { return !(x < lo) && !(hi < x); }
    bool contains(const Interval& o) const { return !(o.lo < lo) && !(hi < o.hi); }

    bool operator==(const Interval& o) const { return lo == o.lo && hi == o.hi; }
};

inline Interval hull(const Interval& a, const Interval& b) {
    return Interval(min(a.lo, b.lo), max(a.hi, b.hi));
}

// Both arguments must enclose the same underlying set, so the intersection
// is nonempty and again an enclosure.
inline Interval intersect_enclosures(const Interval& a, const Interval& b) {
    Dyadic lo = max(a.lo, b.lo), hi = min(a.hi, b.hi);
    if (hi < lo) throw Error("intersect_enclosures: disjoint enclosures");
    return Interval(std::move(lo), std::move(hi));
}

// Hausdorff distance q(I, J) = max(|I.lo - J.lo|, |I.hi - J.hi|).  Exact.
inline Dyadic hausdorff(const Interval& a, const Interval& b) {
    return max((a.lo - b.lo).abs(), (a.hi - b.hi).abs());
}

// Gap between the intervals; 0 when they touch or overlap.  Exact.
inline Dyadic separation(const Interval& a, const Interval& b) {
    if (b.hi < a.lo) return a.lo - b.hi;
    if (a.hi < b.lo) return b.lo - a.hi;
    return Dyadic();
}

inline Interval round_out(const Interval& x, long bits) {
    return Interval(round_down(x.lo, bits), round_up(x.hi, bits));
}

// --- outward interval arithmetic -----------------------------------------

inline Interval iadd(const Interval& a, const Interval& b, const RoundingContext& ctx) {
    return round_out(Interval(a.lo + b.lo, a.hi + b.hi), ctx.precision_bits);
}

inline Interval isub(const Interval& a, const Interval& b, const RoundingContext& ctx) {
    return round_out(Interval(a.lo - b.hi, a.hi - b.lo), ctx.precision_bits);
}

inline Interval ineg(const Interval& a) { return Interval(-a.hi, -a.lo); }

inline Interval imul(const Interval& a, const Interval& b, const RoundingContext& ctx) {
    Dyadic p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    Dyadic lo = min(min(p1, p2), min(p3, p4));
    Dyadic hi = max(max(p1, p2), max(p3, p4));
    return round_out(Interval(std::move(lo), std::move(hi)), ctx.precision_bits);
}

inline Interval idiv(const Interval& a, const Interval& b, const RoundingContext& ctx) {
    if (b.contains_zero()) throw DivisionByZeroInterval("idiv: divisor contains 0");
    long p = ctx.precision_bits;
    Dyadic q1 = div_dir(a.lo, b.lo, p, RoundDir::Down);
    Dyadic q2 = div_dir(a.lo, b.hi, p, RoundDir::Down);
    Dyadic q3 = div_dir(a.hi, b.lo, p, RoundDir::Down);
    Dyadic q4 = div_dir(a.hi, b.hi, p, RoundDir::Down);
    Dyadic lo = min(min(q1, q2), min(q3, q4));
    Dyadic u1 = div_dir(a.lo, b.lo, p, RoundDir::Up);
    Dyadic u2 = div_dir(a.lo, b.hi, p, RoundDir::Up);
    Dyadic u3 = div_dir(a.hi, b.lo, p, RoundDir::Up);
    Dyadic u4 = div_dir(a.hi, b.hi, p, RoundDir::Up);
    Dyadic hi = max(max(u1, u2), max(u3, u4));
    return Interval(std::move(lo), std::move(hi));
}

// Tight range of x^k over the interval (k >= 0).
inline Interval ipow(const Interval& a, long k, const RoundingContext& ctx) {
    if (k == 0) return Interval::point(Dyadic(1));
    if (k == 1) return round_out(a, ctx.precision_bits);
    auto dpow = [](const Dyadic& x, long n) {
        Dyadic r(1);
        Dyadic base = x;
        long e = n;
        while (e > 0) {
            if (e & 1) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    };
    Dyadic plo = dpow(a.lo, k), phi = dpow(a.hi, k);
    Interval r;
    if (k % 2 != 0) {
        r = Interval(plo, phi); // odd power is monotone
    } else {
        Dyadic hi = max(plo, phi);
        Dyadic lo = a.contains_zero() ? Dyadic() : min(plo, phi);
        r = Interval(std::move(lo), std::move(hi));
    }
    return round_out(r, ctx.precision_bits);
}

// --- error-tracked enclosures ---------------------------------------------

// Precision for accumulating error bounds; always rounded upward.
inline constexpr long kErrBits = 32;

inline Dyadic err_up(const Dyadic& x) { return round_away(x, kErrBits); }
inline Dyadic err_add(const Dyadic& a, const Dyadic& b) { return err_up(a + b); }
inline Dyadic err_mul(const Dyadic& a, const Dyadic& b) { return err_up(a * b); }
inline Dyadic err_div(const Dyadic& a, const Dyadic& b) {
    return div_dir(a, b, kErrBits, RoundDir::Up);
}

struct TrackedInterval {
    Interval iv;
    Dyadic err; // >= Hausdorff distance to the ideal (unrounded) interval

    TrackedInterval() = default;
    TrackedInterval(Interval i, Dyadic e) : iv(std::move(i)), err(std::move(e)) {}
    static TrackedInterval exact(Interval i) { return TrackedInterval(std::move(i), Dyadic()); }
};

namespace detail {
// Outward rounding plus a bound on the distance it introduced.
inline std::pair<Interval, Dyadic> round_out_bounded(const Interval& x, long bits) {
    Dyadic e = max(round_error_bound(x.lo, bits), round_error_bound(x.hi, bits));
    return {round_out(x, bits), std::move(e)};
}
} // namespace detail

inline TrackedInterval tadd(const TrackedInterval& a, const TrackedInterval& b,
                            const RoundingContext& ctx) {
    auto [iv, rho] = detail::round_out_bounded(
        Interval(a.iv.lo + b.iv.lo, a.iv.hi + b.iv.hi), ctx.precision_bits);
    return {std::move(iv), err_add(err_add(a.err, b.err), rho)};
}

inline TrackedInterval tsub(const TrackedInterval& a, const TrackedInterval& b,
                            const RoundingContext& ctx) {
    auto [iv, rho] = detail::round_out_bounded(
        Interval(a.iv.lo - b.iv.hi, a.iv.hi - b.iv.lo), ctx.precision_bits);
    return {std::move(iv), err_add(err_add(a.err, b.err), rho)};
}

inline TrackedInterval tneg(const TrackedInterval& a) { return {ineg(a.iv), a.err}; }

inline TrackedInterval tmul(const TrackedInterval& a, const TrackedInterval& b,
                            const RoundingContext& ctx) {
    Dyadic p1 = a.iv.lo * b.iv.lo, p2 = a.iv.lo * b.iv.hi;
    Dyadic p3 = a.iv.hi * b.iv.lo, p4 = a.iv.hi * b.iv.hi;
    Interval prod(min(min(p1, p2), min(p3, p4)), max(max(p1, p2), max(p3, p4)));
    auto [iv, rho] = detail::round_out_bounded(prod, ctx.precision_bits);
    // |a'b' - ab| <= |A~| e_B + |B~| e_A over matched corners.
    Dyadic prop = err_add(err_mul(a.iv.magnitude(), b.err), err_mul(b.iv.magnitude(), a.err));
    return {std::move(iv), err_add(prop, rho)};
}

inline TrackedInterval tscale(const Dyadic& c, const TrackedInterval& a,
                              const RoundingContext& ctx) {
    Interval prod = c.sign() >= 0 ? Interval(c * a.iv.lo, c * a.iv.hi)
                                  : Interval(c * a.iv.hi, c * a.iv.lo);
    auto [iv, rho] = detail::round_out_bounded(prod, ctx.precision_bits);
    return {std::move(iv), err_add(err_mul(c.abs(), a.err), rho)};
}

inline TrackedInterval tdiv(const TrackedInterval& a, const TrackedInterval& b,
                            const RoundingContext& ctx) {
    if (b.iv.contains_zero()) throw DivisionByZeroInterval("tdiv: divisor contains 0");
    Interval iv = idiv(a.iv, b.iv, ctx);
    // The directed division rounded each endpoint; bound that by one ulp of
    // the result magnitude.
    Dyadic ulp = iv.magnitude().is_zero()
                     ? Dyadic()
                     : Dyadic::pow2(iv.magnitude().mag2() - ctx.precision_bits + 1);
    Dyadic m = b.iv.mignitude();
    Dyadic m2 = round_down(m * m, kErrBits); // lower bound keeps the quotient an upper bound
    Dyadic prop = err_add(err_div(a.err, m),
                          err_div(err_mul(a.iv.magnitude(), b.err), m2));
    return {std::move(iv), err_add(prop, ulp)};
}

inline TrackedInterval tpow(const TrackedInterval& a, long k, const RoundingContext& ctx) {
    if (k == 0) return TrackedInterval::exact(Interval::point(Dyadic(1)));
    Interval iv = ipow(a.iv, k, ctx);
    if (k == 1) {
        Dyadic rho = max(round_error_bound(a.iv.lo, ctx.precision_bits),
                         round_error_bound(a.iv.hi, ctx.precision_bits));
        return {std::move(iv), err_add(a.err, rho)};
    }
    // Lipschitz bound k * |A~|^(k-1) on the hull, plus one rounding ulp.
    Dyadic lip = Dyadic(k);
    Dyadic mag = err_up(a.iv.magnitude());
    for (long i = 0; i < k - 1; ++i) lip = err_mul(lip, mag);
    Dyadic ulp = iv.magnitude().is_zero()
                     ? Dyadic()
                     : Dyadic::pow2(iv.magnitude().mag2() - ctx.precision_bits + 1);
    return {std::move(iv), err_add(err_mul(lip, a.err), ulp)};
}

// --- small vectors and matrices -------------------------------------------

struct IntervalVector {
    std::vector<Interval> comps;

    IntervalVector() = default;
    explicit IntervalVector(std::size_t n) : comps(n) {}
    explicit IntervalVector(std::vector<Interval> c) : comps(std::move(c)) {}

    std::size_t size() const { return comps.size(); }
    Interval& operator[](std::size_t i) { return comps[i]; }
    const Interval& operator[](std::size_t i) const { return comps[i]; }

    // Max component width.
    Dyadic width() const {
        Dyadic w;
        for (const auto& c : comps) w = max(w, c.width());
        return w;
    }

    bool contains(const IntervalVector& o) const {
        assert(o.size() == size());
        for (std::size_t i = 0; i < size(); ++i)
            if (!comps[i].contains(o.comps[i])) return false;
        return true;
    }
};

struct IntervalMatrix {
    std::size_t n = 0;
    std::vector<Interval> entries; // row-major n x n

    IntervalMatrix() = default;
    explicit IntervalMatrix(std::size_t dim) : n(dim), entries(dim * dim) {}

    Interval& at(std::size_t i, std::size_t j) { return entries[i * n + j]; }
    const Interval& at(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
};

} // namespace boxroot
