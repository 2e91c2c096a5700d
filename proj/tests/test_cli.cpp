#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "boxroot/cli.hpp"

using namespace boxroot;

namespace {
std::string data_path(const char* name) {
    return std::string(BOXROOT_TEST_DATA_DIR) + "/" + name;
}

struct Run {
    int code;
    std::string out, err;
};

Run isolate_run(CommonArgs args) {
    std::ostringstream o, e;
    int code = run_isolate(args, o, e);
    return {code, o.str(), e.str()};
}
} // namespace

TEST_CASE("isolate: circle and line") {
    CommonArgs args;
    args.input_path = data_path("circle_line.sys");
    Run r = isolate_run(args);
    CHECK(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(j["status"] == "complete");
    REQUIRE(j["boxes"].size() == 2);
    CHECK(j["manifest"]["command"] == "isolate");
    CHECK(j["manifest"]["config"]["jacobian_test"] == "jc");
    CHECK(j["summary"]["boxes"] == 2);
}

TEST_CASE("json round trip reproduces exact dyadic endpoints") {
    CommonArgs args;
    args.input_path = data_path("sqrt2.sys");
    Run r = isolate_run(args);
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    REQUIRE(j["boxes"].size() == 1);

    ParsedInput in = parse_input_text(detail::read_file(args.input_path));
    SolverConfig cfg;
    IsolationOutput out = isolate(in.system, *in.roi, cfg);
    const Interval& expect = out.boxes[0].box[0];
    Interval got = interval_from_json(j["boxes"][0]["box"][0]);
    CHECK(got == expect); // bit-exact via the hex mantissa encoding
}

TEST_CASE("exit code contract") {
    CommonArgs args;
    args.input_path = data_path("sqrt2.sys");
    CHECK(isolate_run(args).code == 0);

    CommonArgs truncated = args;
    truncated.max_depth = 0;
    CHECK(isolate_run(truncated).code == 2);

    CommonArgs missing;
    missing.input_path = data_path("does_not_exist.sys");
    CHECK(isolate_run(missing).code == 1);
}

TEST_CASE("malformed input exits 1 with a message") {
    std::string path = "/tmp/boxroot_bad_input.sys";
    {
        std::ofstream f(path);
        f << "vars x\nf1 = x +* 2\nroi = [0, 1]\n";
    }
    CommonArgs args;
    args.input_path = path;
    Run r = isolate_run(args);
    CHECK(r.code == 1);
    CHECK(r.err.find("error") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("roi override and text format") {
    CommonArgs args;
    args.input_path = data_path("sqrt2.sys");
    args.roi_override = {"1, 2"};
    args.format = "text";
    Run r = isolate_run(args);
    CHECK(r.code == 0);
    CHECK(r.out.find("1 isolating box") != std::string::npos);
}

TEST_CASE("json output is byte-identical across runs") {
    CommonArgs args;
    args.input_path = data_path("parabolas.sys");
    Run a = isolate_run(args);
    Run b = isolate_run(args);
    Run c = isolate_run(args);
    CHECK(a.out == b.out);
    CHECK(b.out == c.out);
}

TEST_CASE("diagnose: sqrt2 passes theory checks") {
    DiagnoseArgs args;
    args.input_path = data_path("sqrt2.sys");
    args.samples = 512;
    std::ostringstream o, e;
    int code = run_diagnose(args, o, e);
    CHECK(code == 0);
    Json j = Json::parse(o.str());
    CHECK(j["pass"] == true);
    REQUIRE(j["roots"].size() == 1);
    CHECK(j["roots"][0]["pass"]["mk"] == true);
    CHECK(j["roots"][0]["pass"]["jc"] == true);
    double l3 = std::stod(j["roots"][0]["radii"]["lambda3"]["value"]["dec"]
                              .get<std::string>().substr(0, 10));
    CHECK(l3 > 0.4);
    CHECK(l3 < 0.48);
}

TEST_CASE("diagnose: identity system reports caps and passes") {
    std::string path = "/tmp/boxroot_identity.sys";
    {
        std::ofstream f(path);
        f << "vars x, y\nf1 = x\nf2 = y\nroi = [-1,1] x [-1,1]\nroot = (0, 0)\n";
    }
    DiagnoseArgs args;
    args.input_path = path;
    args.samples = 256;
    std::ostringstream o, e;
    int code = run_diagnose(args, o, e);
    CHECK(code == 0);
    Json j = Json::parse(o.str());
    CHECK(j["roots"][0]["radii"]["lambda1"]["capped"] == true);
    std::remove(path.c_str());
}

TEST_CASE("diagnose: hint at a critical point exits 1") {
    std::string path = "/tmp/boxroot_singular.sys";
    {
        std::ofstream f(path);
        f << "vars x, y\nf1 = x^2 - y^2\nf2 = x - y\nroi = [-1,1] x [-1,1]\nroot = (0.5, 0.5)\n";
    }
    DiagnoseArgs args;
    args.input_path = path;
    std::ostringstream o, e;
    CHECK(run_diagnose(args, o, e) == 1);
    CHECK(e.str().find("error") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("diagnose --auto-root takes roots from an isolate run") {
    std::string path = "/tmp/boxroot_autoroot.sys";
    {
        std::ofstream f(path);
        f << "vars x\nf1 = x^2 - 2\nroi = [0, 2]\n"; // no root hints
    }
    DiagnoseArgs args;
    args.input_path = path;
    args.auto_root = true;
    args.samples = 256;
    std::ostringstream o, e;
    CHECK(run_diagnose(args, o, e) == 0);
    Json j = Json::parse(o.str());
    CHECK(j["roots"].size() == 1);
    std::remove(path.c_str());
}

TEST_CASE("verify command") {
    CommonArgs args;
    args.input_path = data_path("circle_line.sys"); // has root hints
    std::ostringstream o, e;
    CHECK(run_verify(args, o, e) == 0);
    Json j = Json::parse(o.str());
    CHECK(j["checks"]["disjoint"] == true);
    CHECK(j["checks"]["bijection"] == true);
    CHECK(j["pass"] == true);
}

TEST_CASE("svg rendering") {
    CommonArgs args;
    args.input_path = data_path("circle_line.sys");
    args.svg_path = "/tmp/boxroot_test.svg";
    args.stats = true;
    Run r = isolate_run(args);
    CHECK(r.code == 0);
    std::ifstream f(args.svg_path);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    std::string svg = ss.str();
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("#1b5e20") != std::string::npos); // output boxes drawn
    std::remove(args.svg_path.c_str());

    // n = 1 cannot be drawn
    CommonArgs bad;
    bad.input_path = data_path("sqrt2.sys");
    bad.svg_path = "/tmp/boxroot_bad.svg";
    CHECK(isolate_run(bad).code == 1);
}

TEST_CASE("non-dyadic roi corners are outward-rounded once and flagged") {
    CommonArgs args;
    args.input_path = data_path("sqrt2.sys");
    args.roi_override = {"0.1, 2.1"};
    Run r = isolate_run(args);
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(j["manifest"]["config"]["roi_rounded"] == true);
    Interval side = interval_from_json(j["manifest"]["config"]["roi"][0]);
    // encloses the written decimals: lo <= 1/10 and 21/10 <= hi, exactly
    CHECK(side.lo * Dyadic(10) <= Dyadic(1));
    CHECK(Dyadic(21) <= side.hi * Dyadic(10));
}

TEST_CASE("roi must be a hypercube") {
    CommonArgs args;
    args.input_path = data_path("circle_line.sys");
    args.roi_override = {"0, 1", "0, 2"};
    CHECK(isolate_run(args).code == 1);
}

TEST_CASE("svg of an empty result shows the roi frame only") {
    CommonArgs args;
    args.input_path = data_path("no_roots.sys");
    args.svg_path = "/tmp/boxroot_empty.svg";
    Run r = isolate_run(args);
    CHECK(r.code == 0);
    std::ifstream f(args.svg_path);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str().find("#263238") != std::string::npos); // frame
    CHECK(ss.str().find("#1b5e20") == std::string::npos); // no output boxes
    std::remove(args.svg_path.c_str());
}

TEST_CASE("env var sets the default precision") {
    setenv("BOXROOT_PRECISION", "96", 1);
    CommonArgs args;
    args.input_path = data_path("sqrt2.sys");
    Run r = isolate_run(args);
    unsetenv("BOXROOT_PRECISION");
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(j["manifest"]["config"]["precision_bits"] == 96);
}
