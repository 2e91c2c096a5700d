#pragma once

// Command implementations behind the CLI: isolate, diagnose, verify.
// Kept out of main() so tests can drive them directly.  Exit codes:
// 0 success/complete, 2 depth exceeded (isolate), 1 any error or failed
// check.  JSON output is deterministic; timing goes to the text format only.

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "boxroot/diagnostics.hpp"
#include "boxroot/json_io.hpp"
#include "boxroot/solver.hpp"
#include "boxroot/svg.hpp"
#include "boxroot/system.hpp"
#include "boxroot/version.hpp"

namespace boxroot {

struct CommonArgs {
    std::string input_path;
    std::vector<std::string> roi_override; // one "lo,hi" token per axis
    int max_depth = -1;                    // -1: from file/default
    long precision = -1;                   // -1: from file/env/default
    std::string jacobian_test;             // "", "jc", "jcs"
    bool stats = false;
    std::string svg_path;
    std::string format = "json";
    std::string out_path; // empty: stdout
};

struct DiagnoseArgs : CommonArgs {
    bool auto_root = false;
    long samples = 4096;
};

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open input file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline IntervalVector roi_from_tokens(const std::vector<std::string>& tokens, bool& rounded) {
    std::string text;
    for (const auto& t : tokens) text += "[" + t + "] ";
    return parse_roi_text(text, rounded);
}

struct ResolvedConfig {
    SolverConfig solver;
    IntervalVector roi;
    bool roi_rounded = false;
};

inline long env_precision() {
    if (const char* v = std::getenv("BOXROOT_PRECISION")) {
        long p = std::atol(v);
        if (p >= 8) return p;
    }
    return 64;
}

// Flag > file option > environment/default.
inline ResolvedConfig resolve_config(const CommonArgs& args, const ParsedInput& in) {
    ResolvedConfig rc;
    rc.solver.ctx.precision_bits = env_precision();
    auto file_opt = [&](const char* key) -> std::optional<std::string> {
        auto it = in.options.find(key);
        if (it == in.options.end()) return std::nullopt;
        return it->second;
    };
    if (auto v = file_opt("precision")) rc.solver.ctx.precision_bits = std::stol(*v);
    if (args.precision > 0) rc.solver.ctx.precision_bits = args.precision;
    rc.solver.ctx.max_precision_bits =
        std::max(rc.solver.ctx.max_precision_bits, 64 * rc.solver.ctx.precision_bits);

    rc.solver.max_depth = 40;
    if (auto v = file_opt("max_depth")) rc.solver.max_depth = std::stoi(*v);
    if (args.max_depth >= 0) rc.solver.max_depth = args.max_depth;
    rc.solver.max_depth = std::min(rc.solver.max_depth, kHardDepthLimit - 1);

    std::string jac = "jc";
    if (auto v = file_opt("jacobian_test")) jac = *v;
    if (!args.jacobian_test.empty()) jac = args.jacobian_test;
    if (jac == "jc") rc.solver.jacobian_mode = JacobianMode::EntrywiseDet;
    else if (jac == "jcs") rc.solver.jacobian_mode = JacobianMode::SymbolicDet;
    else throw SyntaxError("jacobian_test must be jc or jcs");

    rc.solver.stats_enabled = args.stats || !args.svg_path.empty();

    if (!args.roi_override.empty()) {
        rc.roi = roi_from_tokens(args.roi_override, rc.roi_rounded);
    } else if (in.roi) {
        rc.roi = *in.roi;
        rc.roi_rounded = in.roi_rounded;
    } else {
        throw SyntaxError("no roi: give a 'roi = [..] x [..]' line or --roi");
    }
    return rc;
}

inline Json manifest_json(const char* command, const CommonArgs& args, const ResolvedConfig& rc) {
    Json cfg;
    cfg["roi"] = to_json(rc.roi);
    cfg["roi_rounded"] = rc.roi_rounded;
    cfg["max_depth"] = rc.solver.max_depth;
    cfg["precision_bits"] = rc.solver.ctx.precision_bits;
    cfg["jacobian_test"] = to_string(rc.solver.jacobian_mode);
    cfg["stats"] = rc.solver.stats_enabled;
    return Json{{"command", command},
                {"input", args.input_path},
                {"version", kVersion},
                {"config", cfg}};
}

inline void write_output(const CommonArgs& args, const std::string& text, std::ostream& out) {
    if (args.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(args.out_path);
    if (!f) throw Error("cannot open output file: " + args.out_path);
    f << text;
}

inline std::string box_text(const IntervalVector& box) {
    std::string s;
    for (std::size_t i = 0; i < box.size(); ++i) {
        if (i) s += " x ";
        s += "[" + box[i].lo.to_decimal_string(12) + ", " + box[i].hi.to_decimal_string(12) + "]";
    }
    return s;
}

} // namespace detail

inline int run_isolate(const CommonArgs& args, std::ostream& out, std::ostream& err) {
    try {
        ParsedInput in = parse_input_text(detail::read_file(args.input_path));
        detail::ResolvedConfig rc = detail::resolve_config(args, in);
        IsolationOutput result = isolate(in.system, rc.roi, rc.solver);
        if (!args.svg_path.empty()) {
            if (in.system.dimension() != 2)
                throw UnsupportedDimension("--svg needs a 2-dimensional system");
            emit_svg(result, args.svg_path);
        }
        if (args.format == "json") {
            Json j;
            j["manifest"] = detail::manifest_json("isolate", args, rc);
            Json body = isolation_to_json(result);
            for (auto& [k, v] : body.items()) j[k] = v;
            detail::write_output(args, j.dump(2) + "\n", out);
        } else {
            std::ostringstream ss;
            ss << "system: " << args.input_path << " (n=" << in.system.dimension() << ")\n";
            for (std::size_t i = 0; i < result.boxes.size(); ++i) {
                const auto& b = result.boxes[i];
                ss << "box " << i + 1 << ": " << detail::box_text(b.box) << "  [depth "
                   << b.generator.depth << ", " << to_string(b.certificate_mode) << "+mk]\n";
            }
            for (const auto& u : result.undecided)
                ss << "undecided: depth " << u.depth << "\n";
            const auto& st = result.stats;
            ss << "status: " << (result.status == SolveStatus::Complete ? "complete" : "depth_exceeded")
               << ", " << result.boxes.size() << " isolating box(es), c0 " << st.c0_successes << "/"
               << st.c0_calls << ", jc " << st.jc_successes << "/" << st.jc_calls << ", mk "
               << st.mk_successes << "/" << st.mk_calls << ", max depth " << st.max_depth_reached
               << ", " << st.wall_seconds << " s\n";
            detail::write_output(args, ss.str(), out);
        }
        return result.status == SolveStatus::Complete ? 0 : 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

inline int run_diagnose(const DiagnoseArgs& args, std::ostream& out, std::ostream& err) {
    try {
        ParsedInput in = parse_input_text(detail::read_file(args.input_path));
        detail::ResolvedConfig rc = detail::resolve_config(args, in);
        const RoundingContext& ctx = rc.solver.ctx;
        auto roi = RegionOfInterest::from_box(rc.roi);

        std::vector<DyadicVector> hints = in.root_hints;
        if (args.auto_root) {
            IsolationOutput iso = isolate(in.system, rc.roi, rc.solver);
            for (const auto& b : iso.boxes) hints.push_back(b.generator.center());
        }
        if (hints.empty())
            throw SyntaxError("diagnose needs 'root = (...)' hints or --auto-root");

        Json j;
        j["manifest"] = detail::manifest_json("diagnose", args, rc);
        Json roots = Json::array();
        bool all_pass = true;
        std::vector<SureSuccessReport> reports;
        std::vector<DyadicVector> witnesses;
        Dyadic ell1;
        bool first = true;
        for (const auto& hint : hints) {
            RootEnclosure root = certify_root_from_hint(in.system, hint, roi, ctx);
            SureSuccessReport rep = sure_success_check(in.system, root, roi, ctx);
            all_pass = all_pass && rep.mk_pass && rep.jc_pass;
            Dyadic local = min(rep.lambda2.value, rep.lambda3.radius.value);
            ell1 = first ? local : min(ell1, local);
            first = false;
            witnesses.push_back(root.witness);
            reports.push_back(std::move(rep));
        }
        for (const auto& rep : reports) roots.push_back(report_to_json(rep));
        j["roots"] = std::move(roots);
        ExclusionEstimate est =
            estimate_exclusion_margin(in.system, rc.roi, witnesses, ell1, args.samples, ctx);
        j["exclusion_estimate"] = to_json(est);
        j["ell1"] = to_json(ell1);
        j["pass"] = all_pass;

        if (args.format == "json") {
            detail::write_output(args, j.dump(2) + "\n", out);
        } else {
            std::ostringstream ss;
            for (std::size_t i = 0; i < reports.size(); ++i) {
                const auto& rep = reports[i];
                ss << "root " << i + 1 << ": witness (";
                for (std::size_t k = 0; k < rep.root.witness.size(); ++k)
                    ss << (k ? ", " : "") << rep.root.witness[k].to_decimal_string(12);
                ss << ")\n  lambda1 " << rep.lambda1.value.to_decimal_string(8)
                   << (rep.lambda1.capped ? " (capped)" : "") << ", lambda_hat1 "
                   << rep.lambda_hat1_r.value.to_decimal_string(8) << ", lambda2 "
                   << rep.lambda2.value.to_decimal_string(8) << ", lambda3 "
                   << rep.lambda3.radius.value.to_decimal_string(8) << ", lambda4 "
                   << rep.lambda4.radius.value.to_decimal_string(8) << "\n  mk "
                   << (rep.mk_pass ? "pass" : "FAIL") << ", jc " << (rep.jc_pass ? "pass" : "FAIL")
                   << ", empirical widest mk " << rep.mk_empirical_widest.to_decimal_string(8)
                   << ", jc " << rep.jc_empirical_widest.to_decimal_string(8) << "\n";
                for (const auto& v : rep.violations) ss << "  violation: " << v << "\n";
            }
            ss << "exclusion estimate (not certified): d0 " << est.d0.to_decimal_string(8)
               << ", lambda_c0 " << est.lambda_c0.to_decimal_string(8) << ", u "
               << est.u.to_decimal_string(8) << "\n";
            ss << (all_pass ? "all theory checks pass\n" : "THEORY CHECK FAILURES\n");
            detail::write_output(args, ss.str(), out);
        }
        return all_pass ? 0 : 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

inline int run_verify(const CommonArgs& args, std::ostream& out, std::ostream& err) {
    try {
        ParsedInput in = parse_input_text(detail::read_file(args.input_path));
        detail::ResolvedConfig rc = detail::resolve_config(args, in);
        IsolationOutput result = isolate(in.system, rc.roi, rc.solver);
        std::optional<std::vector<DyadicVector>> roots;
        if (!in.root_hints.empty()) roots = in.root_hints;
        VerificationReport rep = verify_isolation(result, in.system, roots);
        bool ok = rep.ok() && result.status == SolveStatus::Complete;
        if (args.format == "json") {
            Json j;
            j["manifest"] = detail::manifest_json("verify", args, rc);
            j["isolation"] = isolation_to_json(result)["summary"];
            j["checks"] = to_json(rep);
            j["pass"] = ok;
            detail::write_output(args, j.dump(2) + "\n", out);
        } else {
            std::ostringstream ss;
            ss << "boxes: " << result.boxes.size() << ", disjoint " << rep.disjoint_ok
               << ", within 2B0 " << rep.containment_ok << ", bijection " << rep.bijection_ok << "\n";
            for (const auto& v : rep.violations) ss << "violation: " << v << "\n";
            ss << (ok ? "verification pass\n" : "verification FAIL\n");
            detail::write_output(args, ss.str(), out);
        }
        return ok ? 0 : 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace boxroot
