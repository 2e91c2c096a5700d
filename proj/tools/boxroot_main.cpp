// boxroot: certified isolation of simple real roots of square systems by
// interval subdivision with Miranda existence certificates.

#include <iostream>

#include <CLI11.hpp>

#include "boxroot/cli.hpp"
#include "boxroot/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"certified root isolation by subdivision with Miranda certificates"};
    app.set_version_flag("--version", boxroot::kVersion);
    app.require_subcommand(1);

    boxroot::CommonArgs iso_args;
    boxroot::DiagnoseArgs diag_args;
    boxroot::CommonArgs ver_args;

    auto add_common = [](CLI::App* cmd, boxroot::CommonArgs& a) {
        cmd->add_option("input", a.input_path, "system file")->required();
        cmd->add_option("--roi", a.roi_override,
                        "region of interest, one lo,hi per axis (overrides the file)");
        cmd->add_option("--max-depth", a.max_depth, "subdivision depth cap");
        cmd->add_option("--precision", a.precision,
                        "working precision in bits (env BOXROOT_PRECISION)");
        cmd->add_option("--jacobian-test", a.jacobian_test, "jc|jcs")
            ->check(CLI::IsMember({"jc", "jcs"}));
        cmd->add_flag("--stats", a.stats, "record the box trace");
        cmd->add_option("--format", a.format, "json|text")->check(CLI::IsMember({"json", "text"}));
        cmd->add_option("--out", a.out_path, "write the report to a file instead of stdout");
    };

    CLI::App* iso = app.add_subcommand("isolate", "isolate all simple roots in the ROI");
    add_common(iso, iso_args);
    iso->add_option("--svg", iso_args.svg_path, "write a subdivision plot (n = 2 only)");

    CLI::App* diag = app.add_subcommand("diagnose", "certified sure-success radii for known roots");
    add_common(diag, diag_args);
    diag->add_flag("--auto-root", diag_args.auto_root, "take roots from an isolate run");
    diag->add_option("--samples", diag_args.samples, "sample count for the exclusion estimate");

    CLI::App* ver = app.add_subcommand("verify", "isolate, then check the output contract");
    add_common(ver, ver_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (iso->parsed()) return boxroot::run_isolate(iso_args, std::cout, std::cerr);
    if (diag->parsed()) return boxroot::run_diagnose(diag_args, std::cout, std::cerr);
    if (ver->parsed()) return boxroot::run_verify(ver_args, std::cout, std::cerr);
    return 1;
}
