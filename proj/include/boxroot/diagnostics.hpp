#pragma once

// Sure-success radii and theory-validation constants for systems with known
// root enclosures: certified lower bounds on the widths below which the MK
// and Jacobian tests are guaranteed to succeed, plus sampled (non-certified)
// exclusion margins.  All disc regions are enclosed by their circumscribing
// boxes, which under-approximates the radii and keeps every claim sound.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "boxroot/aligned_box.hpp"
#include "boxroot/predicates.hpp"
#include "boxroot/system.hpp"

namespace boxroot {

struct RootEnclosure {
    IntervalVector box;   // certified to contain exactly one simple root
    DyadicVector witness; // high-precision approximation of the root
};

struct RadiusResult {
    Dyadic value;
    bool capped = false; // curvature vanished; value is the working cap
};

inline RadiusResult min_radius(const RadiusResult& a, const RadiusResult& b) {
    if (a.value < b.value) return a;
    if (b.value < a.value) return b;
    return {a.value, a.capped && b.capped};
}

namespace detail {

inline IntervalVector pad_box(const IntervalVector& box, const Dyadic& radius) {
    IntervalVector out(box.size());
    for (std::size_t i = 0; i < box.size(); ++i)
        out[i] = Interval(box[i].lo - radius, box[i].hi + radius);
    return out;
}

// Circumscribing box of the disc with Euclidean radius r around the
// enclosure: pad by an upper bound of r in every coordinate.
inline IntervalVector disc_box(const IntervalVector& root_box, const Dyadic& r) {
    return pad_box(root_box, r);
}

inline std::int64_t dyadic_floor_div(const Dyadic& a, const Dyadic& b) {
    // floor(a / b) for b > 0, exact
    mpz_class num = a.mantissa(), den = b.mantissa();
    long shift = a.exponent() - b.exponent();
    if (shift >= 0) num <<= static_cast<unsigned long>(shift);
    else den <<= static_cast<unsigned long>(-shift);
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (!q.fits_slong_p()) throw Error("dyadic_floor_div: quotient out of range");
    return q.get_si();
}

} // namespace detail

// Certified upper bound on ||J^-1(S)||_inf via the midpoint inverse M~ and
// the Neumann bound ||M~|| / (1 - ||I - M~ J(S)||); certifies along the way
// that every point Jacobian in S is nonsingular.
inline Dyadic jinv_norm_bound(const FunctionSystem& sys, const IntervalVector& region,
                              const RoundingContext& ctx) {
    std::size_t n = sys.dimension();
    IntervalMatrix j = jacobian_natural(sys, region, ctx);
    DyadicMatrix mid(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < n; ++c) mid.at(i, c) = j.at(i, c).midpoint();
    DyadicMatrix minv;
    try {
        minv = approx_inverse_with_certificate(mid, ctx).inverse;
    } catch (const SingularToWorkingPrecision&) {
        throw SingularEnclosure("jinv_norm_bound: midpoint Jacobian not invertible");
    }
    // E = I - M~ * J(S)
    IntervalMatrix e(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < n; ++c) {
            TrackedInterval acc = TrackedInterval::exact(
                Interval::point(i == c ? Dyadic(1) : Dyadic()));
            for (std::size_t k = 0; k < n; ++k)
                acc = tsub(acc, tscale(minv.at(i, k), TrackedInterval::exact(j.at(k, c)), ctx), ctx);
            e.at(i, c) = acc.iv;
        }
    Dyadic enorm = inf_norm_upper(e);
    if (!(enorm < Dyadic(1)))
        throw SingularEnclosure("jinv_norm_bound: Neumann residual >= 1 on region");
    return div_dir(inf_norm(minv), Dyadic(1) - enorm, kErrBits, RoundDir::Up);
}

// Upper bound on max_{i,j} K(S)_ij, which is also a Lipschitz constant for
// every natural-form partial on S.
inline Dyadic k_entry_bound(const FunctionSystem& sys, const IntervalVector& region,
                            const RoundingContext& ctx) {
    DyadicMatrix k = k_matrix(sys, region, ctx);
    Dyadic best;
    for (const auto& e : k.entries) best = max(best, e);
    return best;
}

inline Dyadic k_norm_bound(const FunctionSystem& sys, const IntervalVector& region,
                           const RoundingContext& ctx) {
    return inf_norm(k_matrix(sys, region, ctx));
}

// --- certified radii -------------------------------------------------------

// Largest certified r with 27 n ||J^-1(D) K(D)|| r <= 1 over the disc
// D = D(root, 2 sqrt(n) r); any such r is a lower bound on the abstract
// MK sure-success radius.
inline RadiusResult certify_lambda1(const FunctionSystem& sys, const RootEnclosure& root,
                                    const Dyadic& cap, const RoundingContext& ctx) {
    std::size_t n = sys.dimension();
    Dyadic sqrt_n_up = sqrt_up(Dyadic(static_cast<long>(n)), kErrBits);
    Dyadic factor = Dyadic(27 * static_cast<long>(n));

    auto certified_at = [&](const Dyadic& r) -> bool {
        IntervalVector region = detail::disc_box(root.box, err_up(sqrt_n_up * r).ldexp(1));
        Dyadic jn, kn;
        try {
            jn = jinv_norm_bound(sys, region, ctx);
            kn = k_norm_bound(sys, region, ctx);
        } catch (const SingularEnclosure&) {
            return false; // J^-1 not certifiable on this disc
        } catch (const DomainError&) {
            return false;
        }
        return !(Dyadic(1) < err_up(err_mul(err_mul(factor, jn), kn) * r));
    };

    // The smallest disc must certify, otherwise the enclosure is unusable.
    Dyadic tiny = cap.ldexp(-48);
    if (!certified_at(tiny))
        throw SingularEnclosure("certify_lambda1: no certifiable radius at the root enclosure");
    if (certified_at(cap)) {
        // Zero or tame curvature; the true radius may exceed the cap.
        return {cap, true};
    }
    Dyadic lo = tiny, hi = cap;
    for (int it = 0; it < 70 && lo < hi; ++it) {
        Dyadic mid = (lo + hi).ldexp(-1);
        mid = round_down(mid, 24); // keep bisection points short
        if (!(lo < mid && mid < hi)) break;
        if (certified_at(mid)) lo = mid;
        else hi = mid;
    }
    return {lo, false};
}

// lambda-hat-1 = 1 / (64 n^2 L ||J^-1(D_alpha)||) with L a Lipschitz bound
// for the natural-form partials on D_alpha.
inline RadiusResult lambda_hat1(const FunctionSystem& sys, const RootEnclosure& root,
                                const RadiusResult& lambda1, const Dyadic& cap,
                                const RoundingContext& ctx) {
    std::size_t n = sys.dimension();
    Dyadic sqrt_n_up = sqrt_up(Dyadic(static_cast<long>(n)), kErrBits);
    IntervalVector delta = detail::disc_box(root.box, err_up(sqrt_n_up * lambda1.value).ldexp(1));
    Dyadic lip = k_entry_bound(sys, delta, ctx);
    if (lip.is_zero()) return {cap, true};
    Dyadic jn = jinv_norm_bound(sys, delta, ctx);
    Dyadic denom = err_up(Dyadic(64 * static_cast<long>(n * n)) * lip * jn);
    Dyadic value = div_dir(Dyadic(1), denom, kErrBits, RoundDir::Down);
    if (cap < value) return {cap, true};
    return {value, false};
}

inline RadiusResult certify_lambda2(const FunctionSystem& sys, const RootEnclosure& root,
                                    const Dyadic& cap, const RoundingContext& ctx) {
    RadiusResult l1 = certify_lambda1(sys, root, cap, ctx);
    RadiusResult lh = lambda_hat1(sys, root, l1, cap, ctx);
    return min_radius(l1, lh);
}

struct JacobianRadius {
    RadiusResult radius;
    Dyadic det_lower; // certified lower bound on |det J(alpha)|
    Dyadic u_bound;   // certified upper bound on max |J(alpha)_ij|
    Dyadic v_bound;   // curvature (or Lipschitz) bound used in the equation
};

namespace detail {

inline Dyadic dyadic_pow(const Dyadic& x, long k) {
    Dyadic r(1);
    for (long i = 0; i < k; ++i) r = r * x;
    return r;
}

// Largest x (up to cap) with 3 n n! V (U + 3 V x)^(n-1) x <= margin * D.
// Exact dyadic evaluation on the left-hand side.
inline RadiusResult solve_width_equation(std::size_t n, const Dyadic& det_lower, const Dyadic& u,
                                         const Dyadic& v, const Dyadic& cap) {
    if (v.is_zero()) return {cap, true};
    long factorial = 1;
    for (std::size_t i = 2; i <= n; ++i) factorial *= static_cast<long>(i);
    Dyadic coeff = Dyadic(3 * static_cast<long>(n) * factorial) * v;
    Dyadic target = det_lower - det_lower.ldexp(-24); // (1 - 2^-24) margin
    auto ok = [&](const Dyadic& x) {
        Dyadic lhs = coeff * dyadic_pow(u + Dyadic(3) * v * x, static_cast<long>(n) - 1) * x;
        return !(target < lhs);
    };
    if (ok(cap)) return {cap, true};
    Dyadic lo, hi = cap;
    for (int it = 0; it < 80 && lo < hi; ++it) {
        Dyadic mid = (lo + hi).ldexp(-1);
        mid = round_down(mid, 40);
        if (!(lo < mid && mid < hi)) break;
        if (ok(mid)) lo = mid;
        else hi = mid;
    }
    return {lo, false};
}

} // namespace detail

// Sure-success radius for the Jacobian test: below it, the determinant
// enclosure on 3B cannot reach 0.  V is a curvature bound over a region
// covering 3B for every candidate box up to the cap.
inline JacobianRadius certify_lambda3(const FunctionSystem& sys, const RootEnclosure& root,
                                      const Dyadic& cap, const RoundingContext& ctx) {
    JacobianRadius out;
    IntervalMatrix j = jacobian_natural(sys, root.box, ctx);
    Interval det = interval_matrix_det(j, ctx);
    if (det.contains_zero())
        throw SingularEnclosure("certify_lambda3: Jacobian determinant enclosure reaches 0");
    out.det_lower = det.mignitude();
    for (const auto& e : j.entries) out.u_bound = max(out.u_bound, e.magnitude());
    // Curvature over a region wide enough to cover 3B for every candidate
    // width up to the cap; shrink the cap if evaluation leaves the domain.
    Dyadic use_cap = cap;
    bool have_v = false;
    for (int t = 0; t < 24 && !have_v; ++t) {
        try {
            out.v_bound = k_entry_bound(sys, detail::pad_box(root.box, use_cap.ldexp(1)), ctx);
            have_v = true;
        } catch (const DomainError&) {
            use_cap = use_cap.ldexp(-1);
        }
    }
    if (!have_v) throw SingularEnclosure("certify_lambda3: curvature not evaluable near the root");
    out.radius = detail::solve_width_equation(sys.dimension(), out.det_lower, out.u_bound,
                                              out.v_bound, use_cap);
    return out;
}

// Interval/effective variant: the curvature bound is replaced by a global
// Lipschitz constant for the components and partials on 3B0, bumped by 1/8
// to absorb the effective forms' rounding allowance.
inline JacobianRadius certify_lambda4(const FunctionSystem& sys, const RootEnclosure& root,
                                      const IntervalVector& roi_box, const Dyadic& cap,
                                      const RoundingContext& ctx) {
    JacobianRadius out;
    IntervalMatrix j = jacobian_natural(sys, root.box, ctx);
    Interval det = interval_matrix_det(j, ctx);
    if (det.contains_zero())
        throw SingularEnclosure("certify_lambda4: Jacobian determinant enclosure reaches 0");
    out.det_lower = det.mignitude();
    for (const auto& e : j.entries) out.u_bound = max(out.u_bound, e.magnitude());

    IntervalVector triple(roi_box.size());
    for (std::size_t i = 0; i < roi_box.size(); ++i) {
        Dyadic w = roi_box[i].width();
        triple[i] = Interval(roi_box[i].lo - w, roi_box[i].hi + w);
    }
    Dyadic lhat;
    for (std::size_t i = 0; i < sys.dimension(); ++i) {
        lhat = max(lhat, lipschitz_bound(sys.components[i], triple, ctx));
        for (std::size_t c = 0; c < sys.dimension(); ++c)
            lhat = max(lhat, lipschitz_bound(sys.first_partials[i][c], triple, ctx));
    }
    lhat = lhat + Dyadic(1).ldexp(-3);
    out.v_bound = lhat;
    out.radius = detail::solve_width_equation(sys.dimension(), out.det_lower, out.u_bound,
                                              out.v_bound, cap);
    return out;
}

// --- sampled exclusion margins (NON-CERTIFIED) -------------------------------

struct ExclusionEstimate {
    Dyadic d0;         // sampled inf over R0 of max_i dist(p, Z(f_i))
    Dyadic lambda_c0;  // d0 / (2 sqrt(n))
    Dyadic u;          // sampled inf of max_i |f_i(p)| / L-hat
    Dyadic lambda_ic0; // u / 2
    long samples_used = 0;
};

// Heuristic sampling estimate of the exclusion-test margins over
// 2B0 minus the root discs of radius ell1.  Nested dyadic grids keep the
// estimate weakly decreasing in the sample count.
inline ExclusionEstimate estimate_exclusion_margin(const FunctionSystem& sys,
                                                   const IntervalVector& roi_box,
                                                   const std::vector<DyadicVector>& roots,
                                                   const Dyadic& ell1, long samples,
                                                   const RoundingContext& ctx) {
    std::size_t n = sys.dimension();
    IntervalVector big2(n), big3(n);
    for (std::size_t i = 0; i < n; ++i) {
        Dyadic w = roi_box[i].width();
        big2[i] = Interval(roi_box[i].lo - w.ldexp(-1), roi_box[i].hi + w.ldexp(-1));
        big3[i] = Interval(roi_box[i].lo - w, roi_box[i].hi + w);
    }
    DyadicVector row_lip(n);
    Dyadic lhat;
    for (std::size_t i = 0; i < n; ++i) {
        row_lip[i] = lipschitz_bound(sys.components[i], big3, ctx);
        lhat = max(lhat, row_lip[i]);
        for (std::size_t c = 0; c < n; ++c)
            lhat = max(lhat, lipschitz_bound(sys.first_partials[i][c], big3, ctx));
    }
    Dyadic ell1_sq = ell1 * ell1;

    ExclusionEstimate est;
    bool first = true;
    std::vector<long> idx(n);
    for (int level = 0; est.samples_used < samples && level < 16; ++level) {
        long cells = 1L << level;
        std::fill(idx.begin(), idx.end(), 0L);
        for (;;) {
            DyadicVector p(n);
            for (std::size_t i = 0; i < n; ++i) {
                // odd-numerator grid points are new at each level
                Dyadic t = Dyadic(2 * idx[i] + 1).ldexp(-(level + 1));
                p[i] = big2[i].lo + t * big2[i].width();
            }
            bool near_root = false;
            for (const auto& r : roots) {
                Dyadic d2;
                for (std::size_t i = 0; i < n; ++i) d2 += (p[i] - r[i]) * (p[i] - r[i]);
                if (d2 < ell1_sq) {
                    near_root = true;
                    break;
                }
            }
            if (!near_root) {
                Dyadic best_d, best_u;
                for (std::size_t i = 0; i < n; ++i) {
                    Dyadic lo_abs = eval_tracked(sys.components[i], point_box(p), ctx).iv.mignitude();
                    if (!row_lip[i].is_zero())
                        best_d = max(best_d, div_dir(lo_abs, row_lip[i], kErrBits, RoundDir::Down));
                    if (!lhat.is_zero())
                        best_u = max(best_u, div_dir(lo_abs, lhat, kErrBits, RoundDir::Down));
                }
                est.d0 = first ? best_d : min(est.d0, best_d);
                est.u = first ? best_u : min(est.u, best_u);
                first = false;
            }
            ++est.samples_used;
            if (est.samples_used >= samples) break;
            std::size_t axis = 0;
            while (axis < n && ++idx[axis] == cells) idx[axis++] = 0;
            if (axis == n) break;
        }
    }
    Dyadic two_sqrt_n = sqrt_up(Dyadic(static_cast<long>(n)), kErrBits).ldexp(1);
    est.lambda_c0 = first ? Dyadic() : div_dir(est.d0, two_sqrt_n, kErrBits, RoundDir::Down);
    est.lambda_ic0 = est.u.ldexp(-1);
    return est;
}

// --- sure-success trials -----------------------------------------------------

struct TrialRecord {
    std::string test; // "mk" or "jc"
    Dyadic width;
    AlignedBox box;
    bool success = false;
    bool side_condition_met = false; // Thm on interval MK: gradient widths <= 1/(32n)
};

struct SureSuccessReport {
    RootEnclosure root;
    RadiusResult lambda1, lambda_hat1_r, lambda2;
    JacobianRadius lambda3, lambda4;
    std::vector<TrialRecord> trials;
    Dyadic mk_empirical_widest, jc_empirical_widest;
    bool mk_pass = true; // every trial at width <= lambda2 succeeded
    bool jc_pass = true; // every trial at width <= lambda3 succeeded
    std::vector<std::string> violations;
};

namespace detail {

// Aligned boxes at the given depth whose closure meets the enclosure box.
inline std::vector<AlignedBox> trial_boxes(const std::shared_ptr<const RegionOfInterest>& roi,
                                           const IntervalVector& target, int depth) {
    std::size_t n = roi->dimension();
    Dyadic side = roi->side.ldexp(-depth);
    std::vector<std::pair<std::int64_t, std::int64_t>> ranges(n);
    for (std::size_t i = 0; i < n; ++i) {
        Dyadic lo_off = target[i].lo - roi->corner[i];
        Dyadic hi_off = target[i].hi - roi->corner[i];
        std::int64_t klo = dyadic_floor_div(lo_off, side);
        if (Dyadic(static_cast<long>(klo)) * side == lo_off) --klo; // boundary touch
        std::int64_t khi = dyadic_floor_div(hi_off, side);
        std::int64_t limit = (std::int64_t(1) << depth) - 1;
        klo = std::max<std::int64_t>(0, klo);
        khi = std::min(limit, khi);
        if (khi < klo) return {};
        ranges[i] = {klo, khi};
    }
    std::vector<AlignedBox> out;
    std::vector<std::int64_t> cur(n);
    for (std::size_t i = 0; i < n; ++i) cur[i] = ranges[i].first;
    for (;;) {
        AlignedBox b;
        b.roi = roi;
        b.depth = depth;
        b.coords = cur;
        out.push_back(std::move(b));
        std::size_t axis = 0;
        while (axis < n && ++cur[axis] > ranges[axis].second) cur[axis] = ranges[axis].first, ++axis;
        if (axis == n) break;
        if (out.size() > 64) throw Error("trial_boxes: enclosure too wide for depth");
    }
    return out;
}

inline int depth_for_width(const Dyadic& roi_side, const Dyadic& width) {
    int d = 0;
    Dyadic w = roi_side;
    while (width < w && d < kHardDepthLimit) {
        w = w.ldexp(-1);
        ++d;
    }
    return d;
}

// Max gradient-entry width of the preconditioned system on the + faces of
// 2B; the interval MK theorem's side condition compares it to 1/(32n).
inline Dyadic mk_gradient_width(const FunctionSystem& sys, const AlignedBox& b,
                                const RoundingContext& ctx) {
    std::size_t n = sys.dimension();
    Preconditioner pre = build_preconditioner(sys, b.center(), ctx);
    Dyadic worst;
    for (const auto& face : faces_of_dilated(b, Dilation::Two)) {
        if (face.side < 0) continue;
        std::size_t i = face.axis;
        for (std::size_t jj = 0; jj < n; ++jj) {
            TrackedInterval acc = TrackedInterval::exact(Interval::point(Dyadic()));
            for (std::size_t k = 0; k < n; ++k) {
                if (pre.inverse_approx.at(i, k).is_zero()) continue;
                acc = tadd(acc,
                           tscale(pre.inverse_approx.at(i, k),
                                  eval_tracked(sys.first_partials[k][jj], face.box, ctx), ctx),
                           ctx);
            }
            worst = max(worst, acc.iv.width());
        }
    }
    return worst;
}

} // namespace detail

// Runs the MK and JC tests on every aligned box of each requested width that
// contains the root, recording universal success and the empirical widest
// always-success widths.
inline SureSuccessReport sure_success_check(const FunctionSystem& sys, const RootEnclosure& root,
                                            const std::shared_ptr<const RegionOfInterest>& roi,
                                            const RoundingContext& ctx) {
    SureSuccessReport rep;
    rep.root = root;
    Dyadic cap = roi->side;
    rep.lambda1 = certify_lambda1(sys, root, cap, ctx);
    rep.lambda_hat1_r = lambda_hat1(sys, root, rep.lambda1, cap, ctx);
    rep.lambda2 = min_radius(rep.lambda1, rep.lambda_hat1_r);
    rep.lambda3 = certify_lambda3(sys, root, cap, ctx);
    IntervalVector roi_box(roi->dimension());
    for (std::size_t i = 0; i < roi->dimension(); ++i)
        roi_box[i] = Interval(roi->corner[i], roi->corner[i] + roi->side);
    rep.lambda4 = certify_lambda4(sys, root, roi_box, cap, ctx);

    Dyadic inv32n = div_dir(Dyadic(1), Dyadic(32 * static_cast<long>(sys.dimension())),
                            kErrBits, RoundDir::Down);

    auto run_width = [&](const std::string& test, const Dyadic& width, bool must_succeed) {
        int depth = detail::depth_for_width(roi->side, width);
        for (auto& b : detail::trial_boxes(roi, root.box, depth)) {
            TrialRecord tr;
            tr.test = test;
            tr.width = b.width();
            tr.box = b;
            if (test == "mk") {
                tr.success = test_mk(sys, b, ctx).success();
                try {
                    Dyadic gw = detail::mk_gradient_width(sys, b, ctx);
                    tr.side_condition_met = !(inv32n < gw) && !(rep.lambda1.value < tr.width);
                } catch (const Error&) {
                    tr.side_condition_met = false;
                }
                if (tr.side_condition_met && !tr.success) {
                    rep.mk_pass = false;
                    rep.violations.push_back("interval MK side condition met but MK failed at width " +
                                             tr.width.to_decimal_string(8));
                }
            } else {
                tr.success = test_jc(sys, b, ctx).success();
            }
            if (must_succeed && !tr.success) {
                (test == "mk" ? rep.mk_pass : rep.jc_pass) = false;
                rep.violations.push_back(test + " failed at certified width " +
                                         tr.width.to_decimal_string(8));
            }
            rep.trials.push_back(std::move(tr));
        }
    };

    for (int half = 0; half < 3; ++half) {
        run_width("mk", rep.lambda2.value.ldexp(-half), true);
        run_width("jc", rep.lambda3.radius.value.ldexp(-half), true);
    }

    // Empirical widest always-success widths, scanned from the ROI down.
    int max_scan_depth = detail::depth_for_width(
        roi->side, min(rep.lambda2.value, rep.lambda3.radius.value)) + 3;
    max_scan_depth = std::min(max_scan_depth, kHardDepthLimit);
    std::vector<bool> mk_ok(static_cast<std::size_t>(max_scan_depth) + 1, true);
    std::vector<bool> jc_ok(static_cast<std::size_t>(max_scan_depth) + 1, true);
    for (int d = 0; d <= max_scan_depth; ++d) {
        for (auto& b : detail::trial_boxes(roi, root.box, d)) {
            if (!test_mk(sys, b, ctx).success()) mk_ok[static_cast<std::size_t>(d)] = false;
            if (!test_jc(sys, b, ctx).success()) jc_ok[static_cast<std::size_t>(d)] = false;
        }
    }
    auto widest = [&](const std::vector<bool>& ok) {
        int from = max_scan_depth;
        while (from >= 0 && ok[static_cast<std::size_t>(from)]) --from;
        ++from; // smallest depth of the all-success suffix
        return from > max_scan_depth ? Dyadic() : roi->side.ldexp(-from);
    };
    rep.mk_empirical_widest = widest(mk_ok);
    rep.jc_empirical_widest = widest(jc_ok);
    if (!rep.mk_empirical_widest.is_zero() && rep.mk_empirical_widest < rep.lambda2.value) {
        rep.mk_pass = false;
        rep.violations.push_back("certified lambda2 exceeds empirical widest MK success width");
    }
    if (!rep.jc_empirical_widest.is_zero() && rep.jc_empirical_widest < rep.lambda3.radius.value) {
        rep.jc_pass = false;
        rep.violations.push_back("certified lambda3 exceeds empirical widest JC success width");
    }
    return rep;
}

// --- root certification from a hint ------------------------------------------

// Newton refinement followed by an MK + JC certification of a small box
// around the refined point; the enclosure is the 2-dilation whose single
// root the pair of tests certifies.
inline RootEnclosure certify_root_from_hint(const FunctionSystem& sys, const DyadicVector& hint,
                                            const std::shared_ptr<const RegionOfInterest>& roi,
                                            const RoundingContext& ctx) {
    std::size_t n = sys.dimension();
    DyadicVector x = hint;
    long work_bits = std::max<long>(ctx.precision_bits * 2, 128);
    for (int iter = 0; iter < 24; ++iter) {
        IntervalVector pb = point_box(x);
        DyadicMatrix jm(n);
        DyadicVector fx(n);
        RoundingContext hot{work_bits, ctx.max_precision_bits};
        for (std::size_t i = 0; i < n; ++i) {
            fx[i] = eval_tracked(sys.components[i], pb, hot).iv.midpoint();
            for (std::size_t j = 0; j < n; ++j)
                jm.at(i, j) = eval_tracked(sys.first_partials[i][j], pb, hot).iv.midpoint();
        }
        DyadicMatrix inv;
        try {
            inv = approx_inverse_with_certificate(jm, hot).inverse;
        } catch (const SingularToWorkingPrecision&) {
            throw SingularEnclosure("root hint sits at a singular Jacobian");
        }
        for (std::size_t i = 0; i < n; ++i) {
            Dyadic delta;
            for (std::size_t j = 0; j < n; ++j) delta += inv.at(i, j) * fx[j];
            x[i] = round_down(x[i] - delta, work_bits);
        }
    }
    // Certify a hypercube around the refined point, finest first.
    for (int k = 48; k >= 4; k -= 2) {
        Hypercube hc{x, roi->side.ldexp(-k)};
        PredicateOutcome mk = test_mk(sys, hc, ctx);
        if (!mk.success()) continue;
        PredicateOutcome jc = test_jc(sys, hc, ctx);
        if (!jc.success()) continue;
        RootEnclosure root;
        root.witness = x;
        root.box = hc.dilated_box(2, 0); // MK certifies the root inside 2B
        return root;
    }
    throw SingularEnclosure("could not certify a root enclosure near the hint");
}

} // namespace boxroot
