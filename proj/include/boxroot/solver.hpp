#pragma once

// Root isolation by subdivision: a width-ordered breadth-first queue with an
// exclusion gate, a Jacobian uniqueness gate on 3B, and an inner refinement
// loop that outputs 2B' once the Miranda existence test confirms a root.
// Every box discarded by the 3B rule is removed with the exact integer
// containment test, which is what makes the output-disjointness argument go
// through.

#include <chrono>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "boxroot/aligned_box.hpp"
#include "boxroot/predicates.hpp"
#include "boxroot/system.hpp"

namespace boxroot {

enum class JacobianMode { EntrywiseDet, SymbolicDet }; // jc | jcs

inline const char* to_string(JacobianMode m) {
    return m == JacobianMode::EntrywiseDet ? "jc" : "jcs";
}

struct SolverConfig {
    int max_depth = 40;
    RoundingContext ctx;
    JacobianMode jacobian_mode = JacobianMode::EntrywiseDet;
    bool stats_enabled = false;
};

enum class BoxFate { Excluded, Subdivided, Output, DiscardedContained, Undecided };

struct TraceEntry {
    int depth;
    std::vector<std::int64_t> coords;
    BoxFate fate;
    bool inner = false; // processed by the MK-confirmation loop
};

struct OutputBox {
    AlignedBox generator;         // B'
    AlignedBox jacobian_ancestor; // the JC-certified outer box B
    IntervalVector box;           // realized 2B'
    JacobianMode certificate_mode;
    std::vector<FaceMargin> mk_margins;
};

struct SolverStats {
    long outer_processed = 0;
    long inner_processed = 0;
    long c0_calls = 0, c0_successes = 0;
    long jc_calls = 0, jc_successes = 0;
    long mk_calls = 0, mk_successes = 0;
    long discarded_by_containment = 0;
    int max_depth_reached = 0;
    double wall_seconds = 0.0; // not serialized; runs must be reproducible
    std::vector<TraceEntry> trace;
};

enum class SolveStatus { Complete, DepthExceeded };

struct IsolationOutput {
    std::shared_ptr<const RegionOfInterest> roi;
    std::vector<OutputBox> boxes;
    std::vector<AlignedBox> undecided;
    SolverStats stats;
    SolveStatus status = SolveStatus::Complete;
};

namespace detail {

// Max width first, FIFO among equal widths: breadth-first order.
struct WidthQueue {
    std::map<int, std::deque<AlignedBox>> by_depth;
    std::size_t count = 0;

    bool empty() const { return count == 0; }

    void push(AlignedBox b) {
        by_depth[b.depth].push_back(std::move(b));
        ++count;
    }

    AlignedBox pop() {
        auto it = by_depth.begin();
        AlignedBox b = std::move(it->second.front());
        it->second.pop_front();
        if (it->second.empty()) by_depth.erase(it);
        --count;
        return b;
    }

    // Remove every box contained in the 3-dilation of `outer`.
    template <typename OnDiscard>
    void discard_contained(const AlignedBox& outer, OnDiscard&& on_discard) {
        for (auto it = by_depth.begin(); it != by_depth.end();) {
            auto& dq = it->second;
            std::deque<AlignedBox> kept;
            for (auto& b : dq) {
                if (contained_in_dilated(b, outer, Dilation::Three)) {
                    on_discard(b);
                    --count;
                } else {
                    kept.push_back(std::move(b));
                }
            }
            dq = std::move(kept);
            it = dq.empty() ? by_depth.erase(it) : std::next(it);
        }
    }
};

} // namespace detail

inline IsolationOutput isolate(const FunctionSystem& sys, const IntervalVector& roi_box,
                               const SolverConfig& cfg) {
    if (roi_box.size() != sys.dimension())
        throw DimensionMismatch("isolate: roi dimension does not match system");
    auto t0 = std::chrono::steady_clock::now();

    IsolationOutput out;
    out.roi = RegionOfInterest::from_box(roi_box);
    SolverStats& st = out.stats;
    const RoundingContext& ctx = cfg.ctx;

    auto trace = [&](const AlignedBox& b, BoxFate fate, bool inner = false) {
        if (cfg.stats_enabled) st.trace.push_back({b.depth, b.coords, fate, inner});
        if (b.depth > st.max_depth_reached) st.max_depth_reached = b.depth;
    };

    auto run_c0 = [&](const AlignedBox& b) {
        ++st.c0_calls;
        PredicateOutcome r = test_c0(sys, b, ctx);
        if (r.success()) ++st.c0_successes;
        return r;
    };

    detail::WidthQueue queue;
    queue.push(AlignedBox::whole(out.roi));

    while (!queue.empty()) {
        AlignedBox box = queue.pop();
        ++st.outer_processed;

        if (run_c0(box).success()) {
            trace(box, BoxFate::Excluded);
            continue;
        }

        ++st.jc_calls;
        PredicateOutcome jac = cfg.jacobian_mode == JacobianMode::EntrywiseDet
                                   ? test_jc(sys, box, ctx)
                                   : test_jc_strict(sys, box, ctx);
        if (jac.success()) {
            ++st.jc_successes;
            // Inner refinement: find the subbox whose MK test confirms the root.
            std::deque<AlignedBox> inner{box};
            std::vector<AlignedBox> pending_undecided;
            bool output_made = false;
            while (!inner.empty()) {
                AlignedBox b2 = std::move(inner.front());
                inner.pop_front();
                ++st.inner_processed;

                if (run_c0(b2).success()) {
                    trace(b2, BoxFate::Excluded, true);
                    continue;
                }
                ++st.mk_calls;
                Hypercube mk_arg = cfg.jacobian_mode == JacobianMode::EntrywiseDet
                                       ? Hypercube::of(b2)
                                       : Hypercube::of(b2).scaled(3, 1);
                PredicateOutcome mk = test_mk(sys, mk_arg, ctx);
                if (mk.success()) {
                    ++st.mk_successes;
                    OutputBox ob;
                    ob.generator = b2;
                    ob.jacobian_ancestor = box;
                    ob.box = dilate(b2, Dilation::Two);
                    ob.certificate_mode = cfg.jacobian_mode;
                    ob.mk_margins = std::move(mk.margins);
                    out.boxes.push_back(std::move(ob));
                    trace(b2, BoxFate::Output, true);
                    queue.discard_contained(box, [&](const AlignedBox& d) {
                        ++st.discarded_by_containment;
                        trace(d, BoxFate::DiscardedContained);
                    });
                    output_made = true;
                    break;
                }
                if (b2.depth >= cfg.max_depth) {
                    pending_undecided.push_back(std::move(b2));
                    continue;
                }
                trace(b2, BoxFate::Subdivided, true);
                for (auto& child : subdivide(b2)) inner.push_back(std::move(child));
            }
            if (!output_made) {
                // Nothing confirmed under this Jacobian-certified box; report
                // the boxes the depth cap left undecided.
                for (auto& u : pending_undecided) {
                    trace(u, BoxFate::Undecided, true);
                    out.undecided.push_back(std::move(u));
                }
                if (!out.undecided.empty()) out.status = SolveStatus::DepthExceeded;
            }
            continue;
        }

        if (box.depth >= cfg.max_depth) {
            trace(box, BoxFate::Undecided);
            out.undecided.push_back(std::move(box));
            out.status = SolveStatus::DepthExceeded;
            continue;
        }
        trace(box, BoxFate::Subdivided);
        for (auto& child : subdivide(box)) queue.push(std::move(child));
    }

    st.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

// --- output verification ------------------------------------------------------

struct VerificationReport {
    bool disjoint_ok = true;
    bool containment_ok = true;
    bool bijection_ok = true;
    std::vector<std::string> violations;

    bool ok() const { return disjoint_ok && containment_ok && bijection_ok; }
};

namespace detail {

// 2B' inside 2B0, exactly: spans at depth+1 units against [-2^d, 3*2^d].
inline bool dilated2_within_dilated2_roi(const AlignedBox& b) {
    for (std::size_t i = 0; i < b.dimension(); ++i) {
        auto s = dilation_span(b.coords[i], Dilation::Two);
        std::int64_t lo = -(std::int64_t(1) << b.depth);
        std::int64_t hi = std::int64_t(3) << b.depth;
        if (s.lo_num < lo || s.hi_num > hi) return false;
    }
    return true;
}

inline bool box_contains_point(const IntervalVector& box, const DyadicVector& p) {
    for (std::size_t i = 0; i < box.size(); ++i)
        if (!box[i].contains(p[i])) return false;
    return true;
}

} // namespace detail

// Checks the output contract: pairwise interior-disjoint boxes inside 2B0,
// and, when ground-truth roots are supplied, a bijection between the roots
// in B0 and the output boxes.
inline VerificationReport verify_isolation(const IsolationOutput& out, const FunctionSystem& sys,
                                           const std::optional<std::vector<DyadicVector>>& known_roots
                                           = std::nullopt) {
    (void)sys;
    VerificationReport rep;
    const auto& boxes = out.boxes;
    for (std::size_t i = 0; i < boxes.size(); ++i)
        for (std::size_t j = i + 1; j < boxes.size(); ++j)
            if (dilated2_interiors_overlap(boxes[i].generator, boxes[j].generator)) {
                rep.disjoint_ok = false;
                rep.violations.push_back("output boxes " + std::to_string(i) + " and " +
                                         std::to_string(j) + " have overlapping interiors");
            }
    for (std::size_t i = 0; i < boxes.size(); ++i)
        if (!detail::dilated2_within_dilated2_roi(boxes[i].generator)) {
            rep.containment_ok = false;
            rep.violations.push_back("output box " + std::to_string(i) + " leaves 2B0");
        }
    if (known_roots) {
        IntervalVector roi_box(out.roi->dimension());
        for (std::size_t i = 0; i < out.roi->dimension(); ++i)
            roi_box[i] = Interval(out.roi->corner[i], out.roi->corner[i] + out.roi->side);
        std::vector<long> per_box(boxes.size(), 0);
        for (std::size_t r = 0; r < known_roots->size(); ++r) {
            const auto& root = (*known_roots)[r];
            long hits = 0;
            for (std::size_t i = 0; i < boxes.size(); ++i)
                if (detail::box_contains_point(boxes[i].box, root)) {
                    ++hits;
                    ++per_box[i];
                }
            bool in_roi = detail::box_contains_point(roi_box, root);
            if (in_roi && hits != 1) {
                rep.bijection_ok = false;
                rep.violations.push_back("root " + std::to_string(r) + " in B0 covered by " +
                                         std::to_string(hits) + " boxes");
            }
            if (!in_roi && hits > 1) {
                rep.bijection_ok = false;
                rep.violations.push_back("root " + std::to_string(r) + " outside B0 covered twice");
            }
        }
        for (std::size_t i = 0; i < boxes.size(); ++i)
            if (per_box[i] != 1) {
                rep.bijection_ok = false;
                rep.violations.push_back("output box " + std::to_string(i) + " contains " +
                                         std::to_string(per_box[i]) + " known roots");
            }
    }
    return rep;
}

} // namespace boxroot
