#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "boxroot/solver.hpp"
#include "boxroot/system.hpp"

using namespace boxroot;

namespace {
ParsedInput load(const std::string& src) { return parse_input_text(src); }

bool box_contains(const IntervalVector& box, std::initializer_list<double> pt) {
    std::size_t i = 0;
    for (double v : pt)
        if (!box[i++].contains(Dyadic::from_double(v))) return false;
    return true;
}
} // namespace

TEST_CASE("no roots: quick exclusion") {
    auto in = load("vars x, y\nf1 = x - 5\nf2 = y - 5\nroi = [0,1] x [0,1]\n");
    SolverConfig cfg;
    IsolationOutput out = isolate(in.system, *in.roi, cfg);
    CHECK(out.status == SolveStatus::Complete);
    CHECK(out.boxes.empty());
    CHECK(out.stats.c0_calls <= 2);
}

TEST_CASE("single root of x^2 - 2") {
    auto in = load("vars x\nf1 = x^2 - 2\nroi = [0, 2]\n");
    SolverConfig cfg;
    IsolationOutput out = isolate(in.system, *in.roi, cfg);
    CHECK(out.status == SolveStatus::Complete);
    REQUIRE(out.boxes.size() == 1);
    CHECK(box_contains(out.boxes[0].box, {1.4142135623730951}));
    auto rep = verify_isolation(out, in.system,
                                std::vector<DyadicVector>{{Dyadic::from_double(1.4142135623730951)}});
    CHECK(rep.ok());
}

TEST_CASE("circle and line: two roots") {
    auto in = load("vars x, y\nf1 = x^2 + y^2 - 1\nf2 = x - y\nroi = [-2,2] x [-2,2]\n");
    SolverConfig cfg;
    IsolationOutput out = isolate(in.system, *in.roi, cfg);
    CHECK(out.status == SolveStatus::Complete);
    REQUIRE(out.boxes.size() == 2);
    const double r = 0.7071067811865476;
    int hits = 0;
    for (const auto& b : out.boxes) {
        if (box_contains(b.box, {r, r})) ++hits;
        if (box_contains(b.box, {-r, -r})) ++hits;
    }
    CHECK(hits == 2);
    // certificates travel with the output
    for (const auto& b : out.boxes) {
        CHECK(b.certificate_mode == JacobianMode::EntrywiseDet);
        CHECK(b.mk_margins.size() == 4);
        for (const auto& m : b.mk_margins) CHECK(m.margin.sign() > 0);
    }
}

TEST_CASE("forced depth truncation reports undecided boxes") {
    auto in = load("vars x\nf1 = x^2 - 2\nroi = [0, 2]\n");
    SolverConfig cfg;
    cfg.max_depth = 0; // B0 cannot be subdivided
    IsolationOutput out = isolate(in.system, *in.roi, cfg);
    CHECK(out.status == SolveStatus::DepthExceeded);
    CHECK(out.boxes.empty());
    CHECK_FALSE(out.undecided.empty());
}

TEST_CASE("queue discipline is width-ordered breadth-first") {
    for (const char* src :
         {"vars x, y\nf1 = x^2 + y^2 - 1\nf2 = x - y\nroi = [-2,2] x [-2,2]\n",
          "vars x, y\nf1 = x^2 - y\nf2 = y^2 - x\nroi = [-2,2] x [-2,2]\n"}) {
        auto in = load(src);
        SolverConfig cfg;
        cfg.stats_enabled = true;
        IsolationOutput out = isolate(in.system, *in.roi, cfg);
        // Outer pops come in non-increasing width order (depth never drops);
        // discards are queue removals, not pops.
        int last_outer_depth = 0;
        for (const auto& t : out.stats.trace) {
            if (t.inner || t.fate == BoxFate::DiscardedContained) continue;
            CHECK(t.depth >= last_outer_depth);
            last_outer_depth = t.depth;
        }
    }
}

TEST_CASE("determinism: identical runs, identical outputs") {
    auto in = load("vars x, y\nf1 = x^2 - y\nf2 = y^2 - x\nroi = [-2,2] x [-2,2]\n");
    SolverConfig cfg;
    IsolationOutput a = isolate(in.system, *in.roi, cfg);
    IsolationOutput b = isolate(in.system, *in.roi, cfg);
    REQUIRE(a.boxes.size() == b.boxes.size());
    for (std::size_t i = 0; i < a.boxes.size(); ++i) {
        CHECK(a.boxes[i].generator == b.boxes[i].generator);
        CHECK(a.boxes[i].box.comps == b.boxes[i].box.comps);
    }
    CHECK(a.stats.c0_calls == b.stats.c0_calls);
    CHECK(a.stats.mk_calls == b.stats.mk_calls);
}

TEST_CASE("jcs mode pairs the strict test with MK on the 3/2 dilation") {
    auto in = load("vars x, y\nf1 = x^2 + y^2 - 1\nf2 = x - y\nroi = [-2,2] x [-2,2]\n");
    SolverConfig jc_cfg, jcs_cfg;
    jcs_cfg.jacobian_mode = JacobianMode::SymbolicDet;
    IsolationOutput a = isolate(in.system, *in.roi, jc_cfg);
    IsolationOutput b = isolate(in.system, *in.roi, jcs_cfg);
    CHECK(a.boxes.size() == b.boxes.size());
    const double r = 0.7071067811865476;
    for (const double sx : {1.0, -1.0}) {
        bool in_a = false, in_b = false;
        for (const auto& box : a.boxes) in_a = in_a || box_contains(box.box, {sx * r, sx * r});
        for (const auto& box : b.boxes) in_b = in_b || box_contains(box.box, {sx * r, sx * r});
        CHECK(in_a);
        CHECK(in_b);
    }
}

TEST_CASE("verify_isolation flags violations") {
    auto in = load("vars x, y\nf1 = x^2 + y^2 - 1\nf2 = x - y\nroi = [-2,2] x [-2,2]\n");
    SolverConfig cfg;
    IsolationOutput out = isolate(in.system, *in.roi, cfg);
    REQUIRE(out.boxes.size() == 2);

    // verbatim pass
    CHECK(verify_isolation(out, in.system).ok());

    // negative control: duplicate one output box
    IsolationOutput broken = out;
    broken.boxes.push_back(broken.boxes[0]);
    VerificationReport rep = verify_isolation(broken, in.system);
    CHECK_FALSE(rep.disjoint_ok);
    CHECK_FALSE(rep.violations.empty());

    // empty output, empty roots: trivially fine
    IsolationOutput empty;
    empty.roi = out.roi;
    CHECK(verify_isolation(empty, in.system, std::vector<DyadicVector>{}).ok());
}

TEST_CASE("root on a subdivision grid line") {
    // x^2 - 1 has its root exactly at the depth-1 cell boundary x = 1
    auto in = load("vars x\nf1 = x^2 - 1\nroi = [0, 2]\n");
    SolverConfig cfg;
    IsolationOutput out = isolate(in.system, *in.roi, cfg);
    CHECK(out.status == SolveStatus::Complete);
    REQUIRE(out.boxes.size() == 1);
    CHECK(box_contains(out.boxes[0].box, {1.0}));
}

TEST_CASE("root on the roi boundary") {
    auto in = load("vars x\nf1 = x - 2\nroi = [0, 2]\n");
    SolverConfig cfg;
    IsolationOutput out = isolate(in.system, *in.roi, cfg);
    CHECK(out.status == SolveStatus::Complete);
    REQUIRE(out.boxes.size() == 1);
    CHECK(box_contains(out.boxes[0].box, {2.0}));
    CHECK(verify_isolation(out, in.system, std::vector<DyadicVector>{{Dyadic(2)}}).ok());
}

TEST_CASE("several transcendental roots") {
    // sin x on [-8, 8]: zeros at 0, +-pi, +-2pi
    auto in = load("vars x\nf1 = sin(x)\nroi = [-8, 8]\n");
    SolverConfig cfg;
    IsolationOutput out = isolate(in.system, *in.roi, cfg);
    CHECK(out.status == SolveStatus::Complete);
    REQUIRE(out.boxes.size() == 5);
    const double pi = 3.141592653589793;
    for (double root : {-2 * pi, -pi, 0.0, pi, 2 * pi}) {
        int hits = 0;
        for (const auto& b : out.boxes)
            if (box_contains(b.box, {root})) ++hits;
        CHECK(hits == 1);
    }
}

TEST_CASE("exp system isolates its root") {
    auto in = load("vars x, y\nf1 = exp(x) - 1\nf2 = x + y\nroi = [-1,1] x [-1,1]\n");
    SolverConfig cfg;
    IsolationOutput out = isolate(in.system, *in.roi, cfg);
    CHECK(out.status == SolveStatus::Complete);
    REQUIRE(out.boxes.size() == 1);
    CHECK(box_contains(out.boxes[0].box, {0.0, 0.0}));
}

TEST_CASE("three dimensions: sphere, two planes") {
    auto in = load("vars x, y, z\nf1 = x^2 + y^2 + z^2 - 1\nf2 = x - y\nf3 = x - z\n"
                   "roi = [-2,2] x [-2,2] x [-2,2]\n");
    SolverConfig cfg;
    IsolationOutput out = isolate(in.system, *in.roi, cfg);
    CHECK(out.status == SolveStatus::Complete);
    REQUIRE(out.boxes.size() == 2);
    const double r = 0.5773502691896258; // 1/sqrt(3)
    int hits = 0;
    for (const auto& b : out.boxes) {
        if (box_contains(b.box, {r, r, r})) ++hits;
        if (box_contains(b.box, {-r, -r, -r})) ++hits;
    }
    CHECK(hits == 2);
    CHECK(verify_isolation(out, in.system).ok());
}

TEST_CASE("non-simple zero surfaces as depth_exceeded, not nontermination") {
    // x^2 has a double zero; the solver must stop at the cap and say so
    auto in = load("vars x\nf1 = x^2\nroi = [-1, 1]\n");
    SolverConfig cfg;
    cfg.max_depth = 10;
    IsolationOutput out = isolate(in.system, *in.roi, cfg);
    CHECK(out.status == SolveStatus::DepthExceeded);
    CHECK(out.boxes.empty());
    CHECK_FALSE(out.undecided.empty());

    // singular-at-root system in two variables: J(0,0) is rank one
    auto in2 = load("vars x, y\nf1 = x^2 - y\nf2 = x^2 - 2*y\nroi = [-1,1] x [-1,1]\n");
    SolverConfig cfg2;
    cfg2.max_depth = 8;
    IsolationOutput out2 = isolate(in2.system, *in2.roi, cfg2);
    CHECK(out2.status == SolveStatus::DepthExceeded);
}

TEST_CASE("close root pair forces deep subdivision but isolates") {
    // roots at +-2^-5: well separated only below depth ~5
    auto in = load("vars x\nf1 = x^2 - 0.0009765625\nroi = [-1, 1]\n");
    SolverConfig cfg;
    IsolationOutput out = isolate(in.system, *in.roi, cfg);
    CHECK(out.status == SolveStatus::Complete);
    REQUIRE(out.boxes.size() == 2);
    const double r = 0.03125;
    auto rep = verify_isolation(out, in.system,
                                std::vector<DyadicVector>{{Dyadic::from_double(r)},
                                                          {Dyadic::from_double(-r)}});
    CHECK(rep.ok());
    CHECK(out.stats.max_depth_reached >= 4);
}

TEST_CASE("discards are justified by containment in 3B") {
    auto in = load("vars x, y\nf1 = x^2 + y^2 - 1\nf2 = x - y\nroi = [-2,2] x [-2,2]\n");
    SolverConfig cfg;
    cfg.stats_enabled = true;
    IsolationOutput out = isolate(in.system, *in.roi, cfg);
    long discards = 0;
    for (const auto& t : out.stats.trace)
        if (t.fate == BoxFate::DiscardedContained) ++discards;
    CHECK(discards == out.stats.discarded_by_containment);
    // each discarded box is inside 3B of some output ancestor
    for (const auto& t : out.stats.trace) {
        if (t.fate != BoxFate::DiscardedContained) continue;
        AlignedBox d;
        d.roi = out.roi;
        d.depth = t.depth;
        d.coords = t.coords;
        bool justified = false;
        for (const auto& b : out.boxes)
            justified = justified || contained_in_dilated(d, b.jacobian_ancestor, Dilation::Three);
        CHECK(justified);
    }
}
