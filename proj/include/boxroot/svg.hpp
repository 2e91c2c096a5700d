#pragma once

// Static SVG rendering of a 2-D subdivision run: processed boxes color-coded
// by fate, output boxes outlined on top, ROI frame for reference.

#include <fstream>
#include <sstream>
#include <string>

#include "boxroot/errors.hpp"
#include "boxroot/solver.hpp"

namespace boxroot {

namespace detail {

inline const char* fate_fill(BoxFate f) {
    switch (f) {
    case BoxFate::Excluded: return "#b0bec5";
    case BoxFate::Subdivided: return "none";
    case BoxFate::Output: return "#a5d6a7";
    case BoxFate::DiscardedContained: return "#ffcc80";
    case BoxFate::Undecided: return "#ef9a9a";
    }
    return "none";
}

} // namespace detail

inline std::string render_svg(const IsolationOutput& out) {
    if (out.roi->dimension() != 2)
        throw UnsupportedDimension("svg rendering needs a 2-dimensional system");
    const double w0 = out.roi->side.to_double();
    const double x0 = out.roi->corner[0].to_double();
    const double y0 = out.roi->corner[1].to_double();
    const double view = 2.0 * w0; // frame 2B0
    const double px = 800.0;
    const double scale = px / view;

    auto cell = [&](int depth, std::int64_t cx, std::int64_t cy, double grow = 1.0) {
        double side = w0 / static_cast<double>(std::int64_t(1) << depth);
        double lx = x0 + static_cast<double>(cx) * side;
        double ly = y0 + static_cast<double>(cy) * side;
        double g = side * (grow - 1.0) / 2.0;
        lx -= g;
        ly -= g;
        side *= grow;
        // SVG y grows downward; flip.
        double sx = (lx - (x0 - w0 / 2.0)) * scale;
        double sy = px - (ly + side - (y0 - w0 / 2.0)) * scale;
        std::ostringstream os;
        os << "x=\"" << sx << "\" y=\"" << sy << "\" width=\"" << side * scale
           << "\" height=\"" << side * scale << "\"";
        return os.str();
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
           "viewBox=\"0 0 800 800\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"800\" fill=\"#fafafa\"/>\n";
    for (const auto& t : out.stats.trace) {
        svg << "<rect " << cell(t.depth, t.coords[0], t.coords[1]) << " fill=\""
            << detail::fate_fill(t.fate) << "\" stroke=\"#607d8b\" stroke-width=\"0.4\"/>\n";
    }
    // ROI frame.
    svg << "<rect " << cell(0, 0, 0) << " fill=\"none\" stroke=\"#263238\" stroke-width=\"1.5\"/>\n";
    // Output boxes are the 2-dilations of their generators.
    for (const auto& b : out.boxes) {
        svg << "<rect " << cell(b.generator.depth, b.generator.coords[0], b.generator.coords[1], 2.0)
            << " fill=\"none\" stroke=\"#1b5e20\" stroke-width=\"2\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

inline void emit_svg(const IsolationOutput& out, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error("emit_svg: cannot open " + path);
    f << render_svg(out);
}

} // namespace boxroot
