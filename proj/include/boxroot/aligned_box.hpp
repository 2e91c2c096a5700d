#pragma once

// Exact aligned-box geometry.  A box is encoded by its subdivision depth and
// integer cell coordinates relative to the ROI hypercube, so subdivision,
// dilation by 3/2, 2 or 3, face extraction, and the containment tests the
// solver needs are all exact integer or dyadic arithmetic.

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "boxroot/dyadic.hpp"
#include "boxroot/errors.hpp"
#include "boxroot/interval.hpp"
#include "boxroot/linalg.hpp"

namespace boxroot {

// Depths beyond this would overflow the int64 cell arithmetic.
inline constexpr int kHardDepthLimit = 60;

struct RegionOfInterest {
    DyadicVector corner; // low corner, dyadic
    Dyadic side;         // hypercube side, dyadic, > 0

    std::size_t dimension() const { return corner.size(); }

    static std::shared_ptr<const RegionOfInterest> from_box(const IntervalVector& box) {
        if (box.size() == 0) throw DimensionMismatch("roi: empty box");
        RegionOfInterest roi;
        roi.side = box[0].width();
        for (std::size_t i = 0; i < box.size(); ++i) {
            if (!(box[i].width() == roi.side))
                throw DimensionMismatch("roi must be a hypercube");
            roi.corner.push_back(box[i].lo);
        }
        if (roi.side.sign() <= 0) throw DimensionMismatch("roi must have positive width");
        return std::make_shared<const RegionOfInterest>(std::move(roi));
    }
};

struct AlignedBox {
    std::shared_ptr<const RegionOfInterest> roi;
    int depth = 0;
    std::vector<std::int64_t> coords; // 0 <= k < 2^depth per axis

    static AlignedBox whole(std::shared_ptr<const RegionOfInterest> r) {
        AlignedBox b;
        b.coords.assign(r->dimension(), 0);
        b.roi = std::move(r);
        return b;
    }

    std::size_t dimension() const { return coords.size(); }

    Dyadic width() const { return roi->side.ldexp(-depth); }

    IntervalVector realize() const {
        IntervalVector box(dimension());
        Dyadic side = width();
        for (std::size_t i = 0; i < dimension(); ++i) {
            Dyadic lo = roi->corner[i] + Dyadic(static_cast<long>(coords[i])) * side;
            box[i] = Interval(lo, lo + side);
        }
        return box;
    }

    DyadicVector center() const {
        DyadicVector c(dimension());
        Dyadic half = width().ldexp(-1);
        for (std::size_t i = 0; i < dimension(); ++i) {
            c[i] = roi->corner[i] + Dyadic(static_cast<long>(coords[i])) * width() + half;
        }
        return c;
    }

    bool operator==(const AlignedBox& o) const {
        return depth == o.depth && coords == o.coords;
    }
};

inline std::vector<AlignedBox> subdivide(const AlignedBox& b) {
    if (b.depth >= kHardDepthLimit)
        throw MaxDepthExceeded("subdivide: depth limit " + std::to_string(kHardDepthLimit));
    std::size_t n = b.dimension();
    std::vector<AlignedBox> children;
    children.reserve(std::size_t(1) << n);
    for (std::uint64_t bits = 0; bits < (std::uint64_t(1) << n); ++bits) {
        AlignedBox c;
        c.roi = b.roi;
        c.depth = b.depth + 1;
        c.coords.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            c.coords[i] = 2 * b.coords[i] + static_cast<std::int64_t>((bits >> i) & 1);
        children.push_back(std::move(c));
    }
    return children;
}

// Dilation factors with exact dyadic realizations.
enum class Dilation { ThreeHalves, Two, Three };

namespace detail {
// kB per axis in integer cell units: [num_lo, num_hi] / 2^(depth + extra).
struct DilationSpan {
    std::int64_t lo_num, hi_num;
    int extra_depth;
};

inline DilationSpan dilation_span(std::int64_t c, Dilation k) {
    switch (k) {
    case Dilation::Three: return {c - 1, c + 2, 0};       // center c+1/2, width 3
    case Dilation::Two: return {2 * c - 1, 2 * c + 3, 1}; // width 4 at depth+1
    case Dilation::ThreeHalves: return {4 * c - 1, 4 * c + 5, 2};
    }
    throw Error("dilation_span: unreachable");
}
} // namespace detail

inline IntervalVector dilate(const AlignedBox& b, Dilation k) {
    IntervalVector box(b.dimension());
    for (std::size_t i = 0; i < b.dimension(); ++i) {
        auto span = detail::dilation_span(b.coords[i], k);
        Dyadic unit = b.roi->side.ldexp(-(b.depth + span.extra_depth));
        Dyadic lo = b.roi->corner[i] + Dyadic(static_cast<long>(span.lo_num)) * unit;
        Dyadic hi = b.roi->corner[i] + Dyadic(static_cast<long>(span.hi_num)) * unit;
        box[i] = Interval(lo, hi);
    }
    return box;
}

struct Face {
    IntervalVector box; // one component degenerate
    std::size_t axis;
    int side; // -1 or +1
};

// The 2n faces of the k-dilation of b, each realized with its degenerate
// component at the low/high coordinate.
inline std::vector<Face> faces_of_dilated(const AlignedBox& b, Dilation k) {
    IntervalVector big = dilate(b, k);
    std::vector<Face> faces;
    faces.reserve(2 * b.dimension());
    for (std::size_t i = 0; i < b.dimension(); ++i) {
        for (int side : {-1, +1}) {
            Face f;
            f.box = big;
            f.axis = i;
            f.side = side;
            f.box[i] = side < 0 ? Interval::point(big[i].lo) : Interval::point(big[i].hi);
            faces.push_back(std::move(f));
        }
    }
    return faces;
}

namespace detail {
// a / 2^da  <=  b / 2^db  on a common scale, exactly.
inline bool scaled_leq(std::int64_t a, int da, std::int64_t b, int db) {
    int d = std::max(da, db);
    __int128 av = static_cast<__int128>(a) << (d - da);
    __int128 bv = static_cast<__int128>(b) << (d - db);
    return av <= bv;
}

inline bool scaled_lt(std::int64_t a, int da, std::int64_t b, int db) {
    int d = std::max(da, db);
    __int128 av = static_cast<__int128>(a) << (d - da);
    __int128 bv = static_cast<__int128>(b) << (d - db);
    return av < bv;
}
} // namespace detail

// Exact integer test: is `inner` contained in the k-dilation of `outer`?
inline bool contained_in_dilated(const AlignedBox& inner, const AlignedBox& outer,
                                 Dilation k = Dilation::Three) {
    if (inner.roi != outer.roi) throw Error("contained_in_dilated: different ROI");
    for (std::size_t i = 0; i < inner.dimension(); ++i) {
        auto span = detail::dilation_span(outer.coords[i], k);
        int dd = outer.depth + span.extra_depth;
        if (!detail::scaled_leq(span.lo_num, dd, inner.coords[i], inner.depth)) return false;
        if (!detail::scaled_leq(inner.coords[i] + 1, inner.depth, span.hi_num, dd)) return false;
    }
    return true;
}

// Any two aligned boxes either have disjoint interiors or one contains the
// other; these two tests decide which.
inline bool contains_aligned(const AlignedBox& outer, const AlignedBox& inner) {
    if (inner.depth < outer.depth) return false;
    int shift = inner.depth - outer.depth;
    for (std::size_t i = 0; i < outer.dimension(); ++i)
        if ((inner.coords[i] >> shift) != outer.coords[i]) return false;
    return true;
}

inline bool interiors_disjoint(const AlignedBox& a, const AlignedBox& b) {
    return !contains_aligned(a, b) && !contains_aligned(b, a);
}

// Interior overlap of the 2-dilations, exactly (both at depth+1 units).
inline bool dilated2_interiors_overlap(const AlignedBox& a, const AlignedBox& b) {
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        auto sa = detail::dilation_span(a.coords[i], Dilation::Two);
        auto sb = detail::dilation_span(b.coords[i], Dilation::Two);
        // open-interval overlap on this axis: sa.lo < sb.hi and sb.lo < sa.hi
        if (!detail::scaled_lt(sa.lo_num, a.depth + 1, sb.hi_num, b.depth + 1)) return false;
        if (!detail::scaled_lt(sb.lo_num, b.depth + 1, sa.hi_num, a.depth + 1)) return false;
    }
    return true;
}

} // namespace boxroot
