#pragma once

// The three effective box tests: exclusion (C0), Jacobian (entrywise and
// strict), and the Miranda existence test (MK) on the preconditioned system
// over 2B.  All are one-sided: success certifies the abstract claim, failure
// certifies nothing.  Every enclosure is a mean value form whose certified
// distance to the interval-level result is held within the per-test accuracy
// budget (w/16 for exclusion and MK faces, 3w/16 for Jacobian entries).

#include <optional>
#include <vector>

#include "boxroot/aligned_box.hpp"
#include "boxroot/dyadic.hpp"
#include "boxroot/errors.hpp"
#include "boxroot/evaluate.hpp"
#include "boxroot/interval.hpp"
#include "boxroot/linalg.hpp"
#include "boxroot/system.hpp"

namespace boxroot {

// An axis-aligned hypercube given by center and width; the box shape every
// predicate works on.
struct Hypercube {
    DyadicVector center;
    Dyadic width;

    static Hypercube of(const AlignedBox& b) { return {b.center(), b.width()}; }

    Hypercube scaled(long num, int log2_den) const {
        Hypercube h = *this;
        h.width = (h.width * Dyadic(num)).ldexp(-log2_den);
        return h;
    }

    std::size_t dimension() const { return center.size(); }

    IntervalVector to_box() const {
        IntervalVector box(dimension());
        Dyadic half = width.ldexp(-1);
        for (std::size_t i = 0; i < dimension(); ++i)
            box[i] = Interval(center[i] - half, center[i] + half);
        return box;
    }

    IntervalVector dilated_box(long num, int log2_den) const {
        Hypercube h = scaled(num, log2_den);
        return h.to_box();
    }
};

enum class Verdict { Success, Failure };

struct FaceMargin {
    std::size_t axis;
    int side;      // -1 or +1
    Dyadic margin; // certified distance of the face enclosure from 0
};

struct PredicateOutcome {
    Verdict verdict = Verdict::Failure;
    int witness_component = -1; // deciding component (C0) or g index (MK)
    int witness_axis = -1;
    int witness_side = 0;
    long evaluations = 0;
    bool domain_error = false; // failure caused by a domain/precision error
    std::vector<FaceMargin> margins;

    bool success() const { return verdict == Verdict::Success; }
};

struct Preconditioner {
    DyadicVector anchor;
    DyadicMatrix inverse_approx; // M~ with dyadic entries
    Dyadic residual_bound;       // exact ||M~ J(m) - I||_inf
    bool certified_nonsingular = false;
};

// --- exclusion test ---------------------------------------------------------

// Success iff some component enclosure excludes 0 on B, hence B has no root.
inline PredicateOutcome test_c0(const FunctionSystem& sys, const Hypercube& b,
                                const RoundingContext& ctx) {
    PredicateOutcome out;
    IntervalVector box = b.to_box();
    Dyadic budget = b.width.ldexp(-4); // w/16
    for (std::size_t i = 0; i < sys.dimension(); ++i) {
        try {
            Interval e = eval_mean_value_checked(sys.component_forms[i], box, budget, ctx);
            ++out.evaluations;
            if (!e.contains_zero()) {
                out.verdict = Verdict::Success;
                out.witness_component = static_cast<int>(i);
                out.domain_error = false; // another component decided
                return out;
            }
        } catch (const DomainError&) {
            out.domain_error = true;
        } catch (const PrecisionCeilingExceeded&) {
            out.domain_error = true;
        }
    }
    return out;
}

// --- Jacobian tests -----------------------------------------------------------

namespace detail {

// Mean-value entries of the interval Jacobian on 3B, each within 3w/16.
inline IntervalMatrix jacobian_mean_value(const FunctionSystem& sys, const Hypercube& b,
                                          const RoundingContext& ctx, long& evals) {
    IntervalVector big = b.dilated_box(3, 0);
    Dyadic budget = (b.width * Dyadic(3)).ldexp(-4);
    std::size_t n = sys.dimension();
    IntervalMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            m.at(i, j) = eval_mean_value_checked(sys.partial_forms[i][j], big, budget, ctx);
            ++evals;
        }
    return m;
}

} // namespace detail

// Success iff 0 is outside the determinant enclosure of the interval Jacobian
// on 3B; then 3B holds at most one root.
inline PredicateOutcome test_jc(const FunctionSystem& sys, const Hypercube& b,
                                const RoundingContext& ctx) {
    PredicateOutcome out;
    try {
        IntervalMatrix j = detail::jacobian_mean_value(sys, b, ctx, out.evaluations);
        Interval det = interval_matrix_det(j, ctx);
        if (!det.contains_zero()) out.verdict = Verdict::Success;
    } catch (const DomainError&) {
        out.domain_error = true;
    } catch (const PrecisionCeilingExceeded&) {
        out.domain_error = true;
    }
    return out;
}

// Strict variant: the symbolic determinant expression evaluated on 3B,
// intersected with the entrywise enclosure so that every test_jc success is
// also a strict success.  Valid as a uniqueness gate only together with MK
// on the 3/2-dilation.
inline PredicateOutcome test_jc_strict(const FunctionSystem& sys, const Hypercube& b,
                                       const RoundingContext& ctx) {
    PredicateOutcome out;
    try {
        IntervalVector big = b.dilated_box(3, 0);
        Dyadic budget = (b.width * Dyadic(3)).ldexp(-4);
        Interval direct = eval_mean_value_checked(sys.jacobian_det_form, big, budget, ctx);
        ++out.evaluations;
        IntervalMatrix j = detail::jacobian_mean_value(sys, b, ctx, out.evaluations);
        Interval entrywise = interval_matrix_det(j, ctx);
        Interval det = intersect_enclosures(direct, entrywise);
        if (!det.contains_zero()) out.verdict = Verdict::Success;
    } catch (const DomainError&) {
        out.domain_error = true;
    } catch (const PrecisionCeilingExceeded&) {
        out.domain_error = true;
    }
    return out;
}

// --- preconditioning ----------------------------------------------------------

// M~ approximates J(m)^-1; residual_bound < 1 certifies both J(m) and M~
// nonsingular, which is all MK soundness needs (zeros of M~ f equal zeros
// of f).
inline Preconditioner build_preconditioner(const FunctionSystem& sys, const DyadicVector& m,
                                           const RoundingContext& ctx) {
    std::size_t n = sys.dimension();
    IntervalVector pb = point_box(m);
    DyadicMatrix jm(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            jm.at(i, j) = eval_tracked(sys.first_partials[i][j], pb, ctx).iv.midpoint();
    InverseCertificate cert = approx_inverse_with_certificate(jm, ctx);
    Preconditioner pre;
    pre.anchor = m;
    pre.inverse_approx = std::move(cert.inverse);
    pre.residual_bound = std::move(cert.residual_bound);
    pre.certified_nonsingular = pre.residual_bound < Dyadic(1);
    return pre;
}

// --- MK existence test ----------------------------------------------------------

namespace detail {

// Mean value form of g_i = sum_j M_ij f_j on a face of 2B, built from the
// per-face point values and natural partial enclosures of the f_j.
inline TrackedInterval face_component(const FunctionSystem& sys, const DyadicMatrix& pre,
                                      std::size_t i, const Face& face,
                                      const RoundingContext& ctx) {
    std::size_t n = sys.dimension();
    DyadicVector m(n);
    for (std::size_t k = 0; k < n; ++k) m[k] = face.box[k].midpoint();
    IntervalVector pb = point_box(m);

    TrackedInterval acc = TrackedInterval::exact(Interval::point(Dyadic()));
    for (std::size_t j = 0; j < n; ++j) {
        if (pre.at(i, j).is_zero()) continue;
        acc = tadd(acc, tscale(pre.at(i, j), eval_tracked(sys.components[j], pb, ctx), ctx), ctx);
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (k == face.axis) continue; // degenerate component
        Dyadic half = face.box[k].width().ldexp(-1);
        TrackedInterval grad = TrackedInterval::exact(Interval::point(Dyadic()));
        for (std::size_t j = 0; j < n; ++j) {
            if (pre.at(i, j).is_zero()) continue;
            grad = tadd(grad,
                        tscale(pre.at(i, j), eval_tracked(sys.first_partials[j][k], face.box, ctx), ctx),
                        ctx);
        }
        acc = tadd(acc, tmul(grad, TrackedInterval::exact(Interval(-half, half)), ctx), ctx);
    }
    return acc;
}

inline Interval face_component_checked(const FunctionSystem& sys, const DyadicMatrix& pre,
                                       std::size_t i, const Face& face, const Dyadic& budget,
                                       const RoundingContext& ctx) {
    for (long bits = ctx.precision_bits; bits <= ctx.max_precision_bits; bits *= 2) {
        TrackedInterval r = face_component(sys, pre, i, face, ctx.with_precision(bits));
        if (!(budget < r.err)) return r.iv;
    }
    throw PrecisionCeilingExceeded("face_component_checked: accuracy budget unreachable");
}

} // namespace detail

// Simple Miranda test for the preconditioned system g = M~ f on the faces of
// 2B: success iff g_i > 0 on every high face and g_i < 0 on every low face,
// which certifies a root of f in 2B.  Adaptive: stops at the first failing
// face.
inline PredicateOutcome test_mk(const FunctionSystem& sys, const Hypercube& b,
                                const RoundingContext& ctx) {
    PredicateOutcome out;
    std::size_t n = sys.dimension();
    Preconditioner pre;
    try {
        pre = build_preconditioner(sys, b.center, ctx);
    } catch (const Error&) {
        out.domain_error = true;
        return out;
    }
    if (!pre.certified_nonsingular) {
        out.domain_error = true;
        return out;
    }

    Dyadic budget = b.width.ldexp(-4); // w/16 per face
    Hypercube twice = b.scaled(2, 0);
    IntervalVector big = twice.to_box();
    for (std::size_t i = 0; i < n; ++i) {
        for (int side : {+1, -1}) {
            Face face;
            face.box = big;
            face.axis = i;
            face.side = side;
            face.box[i] = side < 0 ? Interval::point(big[i].lo) : Interval::point(big[i].hi);
            Interval e;
            try {
                e = detail::face_component_checked(sys, pre.inverse_approx, i, face, budget, ctx);
            } catch (const DomainError&) {
                out.domain_error = true;
                out.witness_component = static_cast<int>(i);
                out.witness_axis = static_cast<int>(i);
                out.witness_side = side;
                return out;
            } catch (const PrecisionCeilingExceeded&) {
                out.domain_error = true;
                return out;
            }
            ++out.evaluations;
            bool ok = side > 0 ? e.lo.sign() > 0 : e.hi.sign() < 0;
            if (!ok) {
                out.witness_component = static_cast<int>(i);
                out.witness_axis = static_cast<int>(i);
                out.witness_side = side;
                return out; // failure, early exit
            }
            out.margins.push_back({i, side, side > 0 ? e.lo : -e.hi});
        }
    }
    out.verdict = Verdict::Success;
    return out;
}

// Aligned-box conveniences.
inline PredicateOutcome test_c0(const FunctionSystem& sys, const AlignedBox& b,
                                const RoundingContext& ctx) {
    return test_c0(sys, Hypercube::of(b), ctx);
}
inline PredicateOutcome test_jc(const FunctionSystem& sys, const AlignedBox& b,
                                const RoundingContext& ctx) {
    return test_jc(sys, Hypercube::of(b), ctx);
}
inline PredicateOutcome test_jc_strict(const FunctionSystem& sys, const AlignedBox& b,
                                       const RoundingContext& ctx) {
    return test_jc_strict(sys, Hypercube::of(b), ctx);
}
inline PredicateOutcome test_mk(const FunctionSystem& sys, const AlignedBox& b,
                                const RoundingContext& ctx) {
    return test_mk(sys, Hypercube::of(b), ctx);
}

} // namespace boxroot
