#pragma once

// Interval linear algebra: determinant enclosures and midpoint inverses with
// a certified residual bound.

#include <cstddef>
#include <vector>

#include "boxroot/dyadic.hpp"
#include "boxroot/errors.hpp"
#include "boxroot/interval.hpp"

namespace boxroot {

using DyadicVector = std::vector<Dyadic>;

struct DyadicMatrix {
    std::size_t n = 0;
    std::vector<Dyadic> entries; // row-major n x n

    DyadicMatrix() = default;
    explicit DyadicMatrix(std::size_t dim) : n(dim), entries(dim * dim) {}

    static DyadicMatrix identity(std::size_t dim) {
        DyadicMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = Dyadic(1);
        return m;
    }

    Dyadic& at(std::size_t i, std::size_t j) { return entries[i * n + j]; }
    const Dyadic& at(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
};

// Infinity norm (max absolute row sum); exact.
inline Dyadic inf_norm(const DyadicMatrix& m) {
    Dyadic best;
    for (std::size_t i = 0; i < m.n; ++i) {
        Dyadic row;
        for (std::size_t j = 0; j < m.n; ++j) row += m.at(i, j).abs();
        best = max(best, row);
    }
    return best;
}

// Upper bound on the infinity norm over all point matrices in M; exact.
inline Dyadic inf_norm_upper(const IntervalMatrix& m) {
    Dyadic best;
    for (std::size_t i = 0; i < m.n; ++i) {
        Dyadic row;
        for (std::size_t j = 0; j < m.n; ++j) row += m.at(i, j).magnitude();
        best = max(best, row);
    }
    return best;
}

namespace detail {

inline Interval det_cofactor(const IntervalMatrix& m, const RoundingContext& ctx) {
    std::size_t n = m.n;
    if (n == 1) return m.at(0, 0);
    if (n == 2)
        return isub(imul(m.at(0, 0), m.at(1, 1), ctx), imul(m.at(0, 1), m.at(1, 0), ctx), ctx);
    Interval det = Interval::point(Dyadic());
    for (std::size_t j = 0; j < n; ++j) {
        IntervalMatrix minor(n - 1);
        for (std::size_t r = 1; r < n; ++r) {
            std::size_t cc = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (c == j) continue;
                minor.at(r - 1, cc++) = m.at(r, c);
            }
        }
        Interval term = imul(m.at(0, j), det_cofactor(minor, ctx), ctx);
        det = (j % 2 == 0) ? iadd(det, term, ctx) : isub(det, term, ctx);
    }
    return det;
}

// Interval Gaussian elimination with partial pivoting by mignitude.
// Returns false when no pivot column avoids 0 (caller falls back to cofactor).
inline bool det_gauss(IntervalMatrix m, const RoundingContext& ctx, Interval& out) {
    std::size_t n = m.n;
    Interval det = Interval::point(Dyadic(1));
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        Dyadic best;
        for (std::size_t r = col; r < n; ++r) {
            Dyadic mig = m.at(r, col).mignitude();
            if (best < mig) {
                best = mig;
                pivot = r;
            }
        }
        if (best.is_zero()) return false; // every candidate contains 0
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(m.at(pivot, c), m.at(col, c));
            det = ineg(det);
        }
        det = imul(det, m.at(col, col), ctx);
        for (std::size_t r = col + 1; r < n; ++r) {
            Interval factor = idiv(m.at(r, col), m.at(col, col), ctx);
            for (std::size_t c = col + 1; c < n; ++c)
                m.at(r, c) = isub(m.at(r, c), imul(factor, m.at(col, c), ctx), ctx);
            m.at(r, col) = Interval::point(Dyadic());
        }
    }
    out = det;
    return true;
}

} // namespace detail

// Enclosure of det(A) for every point matrix A in M.  Cofactor expansion for
// n <= 4 (tightest at small n), interval Gaussian elimination above that with
// a cofactor fallback when every pivot candidate contains 0.
inline Interval interval_matrix_det(const IntervalMatrix& m, const RoundingContext& ctx) {
    if (m.n == 0) return Interval::point(Dyadic(1));
    if (m.n <= 4) return detail::det_cofactor(m, ctx);
    Interval out;
    if (detail::det_gauss(m, ctx, out)) return out;
    return detail::det_cofactor(m, ctx);
}

struct InverseCertificate {
    DyadicMatrix inverse;  // approximate inverse at working precision
    Dyadic residual_bound; // exact ||inverse * A - I||_inf, < 1 certifies nonsingularity
};

namespace detail {

// Gauss-Jordan at the given precision; returns false on a vanished pivot.
inline bool gauss_jordan(const DyadicMatrix& a, long bits, DyadicMatrix& out) {
    std::size_t n = a.n;
    DyadicMatrix work = a;
    DyadicMatrix inv = DyadicMatrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        Dyadic best;
        for (std::size_t r = col; r < n; ++r) {
            Dyadic mag = work.at(r, col).abs();
            if (best < mag) {
                best = mag;
                pivot = r;
            }
        }
        if (best.is_zero()) return false;
        if (pivot != col)
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(work.at(pivot, c), work.at(col, c));
                std::swap(inv.at(pivot, c), inv.at(col, c));
            }
        Dyadic d = work.at(col, col);
        for (std::size_t c = 0; c < n; ++c) {
            work.at(col, c) = div_dir(work.at(col, c), d, bits, RoundDir::Down);
            inv.at(col, c) = div_dir(inv.at(col, c), d, bits, RoundDir::Down);
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            Dyadic f = work.at(r, col);
            if (f.is_zero()) continue;
            for (std::size_t c = 0; c < n; ++c) {
                work.at(r, c) = round_down(work.at(r, c) - f * work.at(col, c), 2 * bits);
                inv.at(r, c) = round_down(inv.at(r, c) - f * inv.at(col, c), 2 * bits);
            }
        }
    }
    out = std::move(inv);
    return true;
}

} // namespace detail

// Approximate inverse with a certified residual.  The residual M~ * A - I is
// computed exactly in dyadic arithmetic; a bound < 1 certifies that both A
// and M~ are nonsingular.  Retries at doubled precision up to the ceiling.
inline InverseCertificate approx_inverse_with_certificate(const DyadicMatrix& a,
                                                          const RoundingContext& ctx) {
    if (a.n == 0) throw Error("approx_inverse: empty matrix");
    for (long bits = ctx.precision_bits; bits <= ctx.max_precision_bits; bits *= 2) {
        DyadicMatrix inv;
        if (!detail::gauss_jordan(a, bits, inv)) continue;
        DyadicMatrix residual(a.n);
        for (std::size_t i = 0; i < a.n; ++i)
            for (std::size_t j = 0; j < a.n; ++j) {
                Dyadic s;
                for (std::size_t k = 0; k < a.n; ++k) s += inv.at(i, k) * a.at(k, j);
                if (i == j) s -= Dyadic(1);
                residual.at(i, j) = s;
            }
        Dyadic bound = inf_norm(residual);
        if (bound < Dyadic(1)) return {std::move(inv), std::move(bound)};
    }
    throw SingularToWorkingPrecision("approx_inverse: residual not certifiable below 1");
}

} // namespace boxroot
