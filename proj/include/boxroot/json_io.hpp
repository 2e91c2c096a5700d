#pragma once

// JSON serialization.  Dyadic endpoints carry both the normative hex form
// (sign, hex mantissa, decimal exponent; bit-exact round trip) and a decimal
// rendering for humans.  Insertion-ordered objects keep repeated runs
// byte-identical; wall-clock time never enters the JSON.

#include <string>

#include <json.hpp>

#include "boxroot/diagnostics.hpp"
#include "boxroot/solver.hpp"

namespace boxroot {

using Json = nlohmann::ordered_json;

inline Json to_json(const Dyadic& d) {
    return Json{{"hex", d.to_hex_string()}, {"dec", d.to_decimal_string()}};
}

inline Json to_json(const Interval& iv) {
    return Json{{"lo", to_json(iv.lo)}, {"hi", to_json(iv.hi)}};
}

inline Json to_json(const IntervalVector& box) {
    Json arr = Json::array();
    for (const auto& c : box.comps) arr.push_back(to_json(c));
    return arr;
}

inline Json to_json(const AlignedBox& b) {
    Json coords = Json::array();
    for (auto c : b.coords) coords.push_back(c);
    return Json{{"depth", b.depth}, {"coords", coords}};
}

inline Dyadic dyadic_from_json(const Json& j) {
    auto d = Dyadic::from_hex_string(j.at("hex").get<std::string>());
    if (!d) throw SyntaxError("bad dyadic hex string in JSON");
    return *d;
}

inline Interval interval_from_json(const Json& j) {
    return Interval(dyadic_from_json(j.at("lo")), dyadic_from_json(j.at("hi")));
}

inline Json to_json(const RadiusResult& r) {
    return Json{{"value", to_json(r.value)}, {"capped", r.capped}};
}

inline Json to_json(const JacobianRadius& r) {
    return Json{{"value", to_json(r.radius.value)},
                {"capped", r.radius.capped},
                {"det_lower", to_json(r.det_lower)},
                {"u_bound", to_json(r.u_bound)},
                {"v_bound", to_json(r.v_bound)}};
}

inline Json isolation_to_json(const IsolationOutput& out) {
    Json j;
    j["status"] = out.status == SolveStatus::Complete ? "complete" : "depth_exceeded";
    Json boxes = Json::array();
    for (const auto& b : out.boxes) {
        Json rec;
        rec["box"] = to_json(b.box);
        rec["generator"] = to_json(b.generator);
        rec["ancestor"] = to_json(b.jacobian_ancestor);
        Json margins = Json::array();
        for (const auto& m : b.mk_margins)
            margins.push_back(Json{{"axis", m.axis}, {"side", m.side}, {"margin", to_json(m.margin)}});
        rec["certificate"] = Json{{"jacobian_test", to_string(b.certificate_mode)},
                                  {"mk_margins", margins}};
        boxes.push_back(std::move(rec));
    }
    j["boxes"] = std::move(boxes);
    Json undecided = Json::array();
    for (const auto& u : out.undecided) undecided.push_back(to_json(u));
    j["undecided"] = std::move(undecided);
    const SolverStats& st = out.stats;
    j["summary"] = Json{
        {"boxes", out.boxes.size()},
        {"undecided", out.undecided.size()},
        {"outer_processed", st.outer_processed},
        {"inner_processed", st.inner_processed},
        {"c0", Json{{"calls", st.c0_calls}, {"successes", st.c0_successes}}},
        {"jc", Json{{"calls", st.jc_calls}, {"successes", st.jc_successes}}},
        {"mk", Json{{"calls", st.mk_calls}, {"successes", st.mk_successes}}},
        {"discarded_by_containment", st.discarded_by_containment},
        {"max_depth_reached", st.max_depth_reached},
    };
    return j;
}

inline Json report_to_json(const SureSuccessReport& rep) {
    Json j;
    Json witness = Json::array();
    for (const auto& w : rep.root.witness) witness.push_back(to_json(w));
    j["witness"] = std::move(witness);
    j["enclosure"] = to_json(rep.root.box);
    j["radii"] = Json{{"lambda1", to_json(rep.lambda1)},
                      {"lambda_hat1", to_json(rep.lambda_hat1_r)},
                      {"lambda2", to_json(rep.lambda2)},
                      {"lambda3", to_json(rep.lambda3)},
                      {"lambda4", to_json(rep.lambda4)}};
    Json trials = Json::array();
    for (const auto& t : rep.trials) {
        Json tr{{"test", t.test},
                {"width", to_json(t.width)},
                {"box", to_json(t.box)},
                {"success", t.success}};
        if (t.test == "mk") tr["side_condition_met"] = t.side_condition_met;
        trials.push_back(std::move(tr));
    }
    j["trials"] = std::move(trials);
    j["empirical"] = Json{{"mk_widest", to_json(rep.mk_empirical_widest)},
                          {"jc_widest", to_json(rep.jc_empirical_widest)}};
    j["pass"] = Json{{"mk", rep.mk_pass}, {"jc", rep.jc_pass}};
    j["violations"] = rep.violations;
    return j;
}

inline Json to_json(const ExclusionEstimate& est) {
    return Json{{"certified", false},
                {"d0", to_json(est.d0)},
                {"lambda_c0", to_json(est.lambda_c0)},
                {"u", to_json(est.u)},
                {"lambda_ic0", to_json(est.lambda_ic0)},
                {"samples", est.samples_used}};
}

inline Json to_json(const VerificationReport& rep) {
    return Json{{"disjoint", rep.disjoint_ok},
                {"within_2roi", rep.containment_ok},
                {"bijection", rep.bijection_ok},
                {"violations", rep.violations},
                {"pass", rep.ok()}};
}

} // namespace boxroot
