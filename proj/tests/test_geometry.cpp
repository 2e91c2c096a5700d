#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "boxroot/aligned_box.hpp"

using namespace boxroot;

namespace {
std::shared_ptr<const RegionOfInterest> unit_roi(std::size_t n) {
    IntervalVector box(n);
    for (auto& c : box.comps) c = Interval(Dyadic(0), Dyadic(1));
    return RegionOfInterest::from_box(box);
}

AlignedBox rand_box(std::mt19937& rng, const std::shared_ptr<const RegionOfInterest>& roi,
                    int max_depth) {
    std::uniform_int_distribution<int> dd(0, max_depth);
    AlignedBox b;
    b.roi = roi;
    b.depth = dd(rng);
    for (std::size_t i = 0; i < roi->dimension(); ++i) {
        std::uniform_int_distribution<std::int64_t> cc(0, (std::int64_t(1) << b.depth) - 1);
        b.coords.push_back(cc(rng));
    }
    return b;
}
} // namespace

TEST_CASE("subdivision partitions the parent") {
    auto roi = unit_roi(2);
    AlignedBox b0 = AlignedBox::whole(roi);
    auto kids = subdivide(b0);
    REQUIRE(kids.size() == 4);
    for (const auto& k : kids) {
        CHECK(k.depth == 1);
        CHECK(contains_aligned(b0, k));
    }
    // children tile: realized corners match the four quadrants
    CHECK(kids[0].realize()[0] == Interval(Dyadic(0), Dyadic(mpz_class(1), -1)));
    CHECK(kids[3].realize()[0] == Interval(Dyadic(mpz_class(1), -1), Dyadic(1)));
    for (std::size_t i = 0; i < kids.size(); ++i)
        for (std::size_t j = i + 1; j < kids.size(); ++j)
            CHECK(interiors_disjoint(kids[i], kids[j]));

    auto roi1 = unit_roi(1);
    auto halves = subdivide(AlignedBox::whole(roi1));
    REQUIRE(halves.size() == 2);
    CHECK(halves[0].realize()[0].hi == Dyadic(mpz_class(1), -1));
}

TEST_CASE("dilation examples") {
    auto roi = unit_roi(2);
    AlignedBox b0 = AlignedBox::whole(roi);
    IntervalVector two = dilate(b0, Dilation::Two);
    CHECK(two[0] == Interval(Dyadic(mpz_class(-1), -1), Dyadic(mpz_class(3), -1)));

    auto roi1 = unit_roi(1);
    IntervalVector three = dilate(AlignedBox::whole(roi1), Dilation::Three);
    CHECK(three[0] == Interval(Dyadic(-1), Dyadic(2)));

    IntervalVector th = dilate(AlignedBox::whole(roi1), Dilation::ThreeHalves);
    CHECK(th[0] == Interval(Dyadic(mpz_class(-1), -2), Dyadic(mpz_class(5), -2)));
}

TEST_CASE("faces of the dilated box") {
    auto roi = unit_roi(2);
    AlignedBox b0 = AlignedBox::whole(roi);
    auto faces = faces_of_dilated(b0, Dilation::Two);
    REQUIRE(faces.size() == 4); // 2n
    // the (axis 0, +) face of 2B sits at x = 3/2 with full y extent
    bool found = false;
    for (const auto& f : faces) {
        if (f.axis == 0 && f.side > 0) {
            found = true;
            CHECK(f.box[0] == Interval::point(Dyadic(mpz_class(3), -1)));
            CHECK(f.box[1] == Interval(Dyadic(mpz_class(-1), -1), Dyadic(mpz_class(3), -1)));
        }
    }
    CHECK(found);

    auto roi1 = unit_roi(1);
    auto f1 = faces_of_dilated(AlignedBox::whole(roi1), Dilation::Two);
    REQUIRE(f1.size() == 2);
    CHECK(f1[0].box[0] == Interval::point(Dyadic(mpz_class(-1), -1)));
    CHECK(f1[1].box[0] == Interval::point(Dyadic(mpz_class(3), -1)));
}

TEST_CASE("containment in the 3-dilation") {
    IntervalVector roi_box(2);
    roi_box[0] = roi_box[1] = Interval(Dyadic(0), Dyadic(4));
    auto roi = RegionOfInterest::from_box(roi_box);

    AlignedBox b; // cell (0,0) at depth 2 = [0,1]^2
    b.roi = roi;
    b.depth = 2;
    b.coords = {0, 0};
    CHECK(contained_in_dilated(b, b, Dilation::Three));

    AlignedBox neighbor; // cell (1,0) = [1,2] x [0,1], inside 3B = [-1,2]^2
    neighbor.roi = roi;
    neighbor.depth = 2;
    neighbor.coords = {1, 0};
    CHECK(contained_in_dilated(neighbor, b, Dilation::Three));

    AlignedBox far; // cell (3,3) = [3,4]^2
    far.roi = roi;
    far.depth = 2;
    far.coords = {3, 3};
    CHECK_FALSE(contained_in_dilated(far, b, Dilation::Three));
}

TEST_CASE("realize with exact corners") {
    auto roi = unit_roi(1);
    AlignedBox b;
    b.roi = roi;
    b.depth = 3;
    b.coords = {5};
    CHECK(b.realize()[0] == Interval(Dyadic(mpz_class(5), -3), Dyadic(mpz_class(3), -2)));
    CHECK(b.width() == Dyadic(mpz_class(1), -3));
    CHECK(AlignedBox::whole(roi).realize()[0] == Interval(Dyadic(0), Dyadic(1)));
}

TEST_CASE("alignment dichotomy") {
    auto roi = unit_roi(2);
    std::mt19937 rng(101);
    for (int i = 0; i < 500; ++i) {
        AlignedBox a = rand_box(rng, roi, 6), b = rand_box(rng, roi, 6);
        bool disj = interiors_disjoint(a, b);
        bool nested = contains_aligned(a, b) || contains_aligned(b, a);
        CHECK(disj != nested); // exactly one holds
        // cross-check with realized interiors
        auto ra = a.realize(), rb = b.realize();
        bool open_overlap = true;
        for (std::size_t k = 0; k < 2; ++k)
            if (!(ra[k].lo < rb[k].hi && rb[k].lo < ra[k].hi)) open_overlap = false;
        CHECK(open_overlap == nested);
    }
}

TEST_CASE("annulus 3B minus B is tiled by same-size aligned cells") {
    auto roi = unit_roi(2);
    std::mt19937 rng(103);
    for (int trial = 0; trial < 100; ++trial) {
        // pick an interior box so all 8 neighbors exist
        std::uniform_int_distribution<int> dd(2, 6);
        AlignedBox b;
        b.roi = roi;
        b.depth = dd(rng);
        std::uniform_int_distribution<std::int64_t> cc(1, (std::int64_t(1) << b.depth) - 2);
        b.coords = {cc(rng), cc(rng)};
        int neighbors = 0;
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy) {
                if (dx == 0 && dy == 0) continue;
                AlignedBox nb = b;
                nb.coords = {b.coords[0] + dx, b.coords[1] + dy};
                ++neighbors;
                CHECK(contained_in_dilated(nb, b, Dilation::Three));
                CHECK(interiors_disjoint(nb, b));
            }
        CHECK(neighbors == 8); // 3^2 - 1 cells tile the annulus
    }
}

TEST_CASE("dilation exactness for dyadic roi") {
    // realize(dilate(.)) endpoints are reproduced by exact dyadic arithmetic
    auto roi = unit_roi(1);
    AlignedBox b;
    b.roi = roi;
    b.depth = 4;
    b.coords = {9};
    Dyadic w = b.width();
    Dyadic center = b.realize()[0].midpoint();
    CHECK(dilate(b, Dilation::Two)[0] ==
          Interval(center - w, center + w));
    CHECK(dilate(b, Dilation::Three)[0] ==
          Interval(center - w - w.ldexp(-1), center + w + w.ldexp(-1)));
    CHECK(dilate(b, Dilation::ThreeHalves)[0] ==
          Interval(center - w.ldexp(-1) - w.ldexp(-2), center + w.ldexp(-1) + w.ldexp(-2)));
}

TEST_CASE("depth cap") {
    auto roi = unit_roi(1);
    AlignedBox b = AlignedBox::whole(roi);
    b.depth = kHardDepthLimit;
    b.coords = {0};
    CHECK_THROWS_AS(subdivide(b), MaxDepthExceeded);
}
