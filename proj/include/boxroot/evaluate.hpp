#pragma once

// Interval evaluation of expressions: the natural recursive form, certified
// point evaluation with precision escalation, and the mean value form used by
// all predicates.  Tracked variants carry a certified bound on the Hausdorff
// distance to the unrounded interval-level result, which is how the
// effective-accuracy contracts are enforced.

#include <vector>

#include "boxroot/dyadic.hpp"
#include "boxroot/elementary.hpp"
#include "boxroot/errors.hpp"
#include "boxroot/expression.hpp"
#include "boxroot/interval.hpp"
#include "boxroot/linalg.hpp"

namespace boxroot {

inline TrackedInterval eval_tracked(const Expr& e, const IntervalVector& box,
                                    const RoundingContext& ctx) {
    switch (e->kind) {
    case ExprKind::Constant: return TrackedInterval::exact(Interval::point(e->value));
    case ExprKind::Variable:
        if (e->var >= box.size()) throw DomainError("eval: variable out of range");
        return TrackedInterval::exact(box[e->var]);
    case ExprKind::Add: return tadd(eval_tracked(e->a, box, ctx), eval_tracked(e->b, box, ctx), ctx);
    case ExprKind::Sub: return tsub(eval_tracked(e->a, box, ctx), eval_tracked(e->b, box, ctx), ctx);
    case ExprKind::Mul: return tmul(eval_tracked(e->a, box, ctx), eval_tracked(e->b, box, ctx), ctx);
    case ExprKind::Div: {
        TrackedInterval num = eval_tracked(e->a, box, ctx);
        TrackedInterval den = eval_tracked(e->b, box, ctx);
        if (den.iv.contains_zero()) throw DomainError("eval: zero-containing denominator");
        return tdiv(num, den, ctx);
    }
    case ExprKind::Pow: return tpow(eval_tracked(e->a, box, ctx), e->power, ctx);
    case ExprKind::Neg: return tneg(eval_tracked(e->a, box, ctx));
    case ExprKind::Sin: return tsin(eval_tracked(e->a, box, ctx), ctx);
    case ExprKind::Cos: return tcos(eval_tracked(e->a, box, ctx), ctx);
    case ExprKind::Exp: return texp(eval_tracked(e->a, box, ctx), ctx);
    }
    throw Error("eval_tracked: unreachable");
}

inline Interval eval_natural(const Expr& e, const IntervalVector& box,
                             const RoundingContext& ctx) {
    return eval_tracked(e, box, ctx).iv;
}

inline IntervalVector point_box(const DyadicVector& p) {
    IntervalVector b(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) b[i] = Interval::point(p[i]);
    return b;
}

// Enclosure of e(p) with width <= tol, escalating precision as needed.
inline Interval eval_point_certified(const Expr& e, const DyadicVector& p, const Dyadic& tol,
                                     const RoundingContext& ctx) {
    IntervalVector b = point_box(p);
    for (long bits = ctx.precision_bits; bits <= ctx.max_precision_bits; bits *= 2) {
        Interval r = eval_tracked(e, b, ctx.with_precision(bits)).iv;
        if (!(tol < r.width())) return r;
    }
    throw PrecisionCeilingExceeded("eval_point_certified: tolerance unreachable");
}

// An expression paired with its partial derivatives, ready for mean value
// evaluation.
struct MeanValueForm {
    Expr f;
    std::vector<Expr> partials;

    MeanValueForm() = default;
    MeanValueForm(Expr fn, std::size_t nvars) : f(std::move(fn)) {
        partials.reserve(nvars);
        for (std::size_t i = 0; i < nvars; ++i) partials.push_back(differentiate(f, i));
    }
};

// f(m(B)) + sum_i  [] df/dx_i (B) * (B_i - m_i).  Degenerate components
// contribute nothing, so faces are evaluated by the same path with the
// expansion point at the face center.
inline TrackedInterval eval_mean_value_tracked(const MeanValueForm& mv, const IntervalVector& box,
                                               const RoundingContext& ctx) {
    DyadicVector m(box.size());
    for (std::size_t i = 0; i < box.size(); ++i) m[i] = box[i].midpoint();
    TrackedInterval acc = eval_tracked(mv.f, point_box(m), ctx);
    for (std::size_t i = 0; i < box.size(); ++i) {
        Dyadic half = box[i].width().ldexp(-1);
        if (half.is_zero()) continue;
        TrackedInterval grad = eval_tracked(mv.partials[i], box, ctx);
        TrackedInterval offset = TrackedInterval::exact(Interval(-half, half));
        acc = tadd(acc, tmul(grad, offset, ctx), ctx);
    }
    return acc;
}

inline Interval eval_mean_value(const MeanValueForm& mv, const IntervalVector& box,
                                const RoundingContext& ctx) {
    return eval_mean_value_tracked(mv, box, ctx).iv;
}

// Mean value form whose certified distance to the interval-level result is
// at most `budget`; precision escalates until the bound is met.
inline Interval eval_mean_value_checked(const MeanValueForm& mv, const IntervalVector& box,
                                        const Dyadic& budget, const RoundingContext& ctx) {
    for (long bits = ctx.precision_bits; bits <= ctx.max_precision_bits; bits *= 2) {
        TrackedInterval r = eval_mean_value_tracked(mv, box, ctx.with_precision(bits));
        if (!(budget < r.err)) return r.iv;
    }
    throw PrecisionCeilingExceeded("eval_mean_value_checked: accuracy budget unreachable");
}

// Certified Lipschitz constant for the mean value form of e on `region`:
// the sum of the partials' enclosure magnitudes.
inline Dyadic lipschitz_bound(const Expr& e, const IntervalVector& region,
                              const RoundingContext& ctx) {
    Dyadic sum;
    for (std::size_t i = 0; i < region.size(); ++i) {
        Expr d = differentiate(e, i);
        sum += eval_natural(d, region, ctx).magnitude();
    }
    return sum;
}

} // namespace boxroot
