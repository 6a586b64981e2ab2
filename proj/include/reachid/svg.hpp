#pragma once

// Static SVG 1.1 plots of planar reachable sets.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "reachid/error.hpp"
#include "reachid/setgeom.hpp"

namespace reachid {

struct SvgLayer {
    std::string label;
    ConvexVertexSet set;
};

struct SvgOptions {
    double width = 640.0;
    double height = 640.0;
    double margin = 40.0;
};

/// Draws each layer as a closed polygon (segments as lines, points as a 1px
/// marker), later layers on top, with a label next to the topmost vertex.
/// World y points up.
inline std::string emit_svg_2d(const std::vector<SvgLayer>& layers, const SvgOptions& opt = {}) {
    if (layers.empty()) fail(ErrorKind::InvalidArgument, "nothing to draw");
    for (const auto& l : layers)
        if (l.set.dim() != 2) fail(ErrorKind::DimensionMismatch, "SVG output needs planar sets");

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& l : layers)
        for (const auto& v : l.set.vertices()) {
            xmin = std::min(xmin, v[0]);
            xmax = std::max(xmax, v[0]);
            ymin = std::min(ymin, v[1]);
            ymax = std::max(ymax, v[1]);
        }
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
    const double inner = std::min(opt.width, opt.height) - 2.0 * opt.margin;
    const double k = inner / span;
    auto sx = [&](double x) { return opt.margin + (x - xmin) * k; };
    auto sy = [&](double y) { return opt.height - opt.margin - (y - ymin) * k; };

    static constexpr std::array<const char*, 6> palette{"#1f77b4", "#d62728", "#2ca02c",
                                                        "#9467bd", "#ff7f0e", "#17becf"};
    std::ostringstream out;
    out.precision(6);
    out << std::fixed;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << opt.width << "\" height=\""
        << opt.height << "\" viewBox=\"0 0 " << opt.width << ' ' << opt.height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (std::size_t i = 0; i < layers.size(); ++i) {
        const char* colour = palette[i % palette.size()];
        const auto hull = convex_hull_2d(layers[i].set.vertices());
        out << "<g id=\"layer" << i << "\">\n";
        if (hull.size() == 1) {
            out << "<rect x=\"" << sx(hull[0][0]) << "\" y=\"" << sy(hull[0][1])
                << "\" width=\"1\" height=\"1\" fill=\"" << colour << "\"/>\n";
        } else if (hull.size() == 2) {
            out << "<line x1=\"" << sx(hull[0][0]) << "\" y1=\"" << sy(hull[0][1]) << "\" x2=\"" << sx(hull[1][0])
                << "\" y2=\"" << sy(hull[1][1]) << "\" stroke=\"" << colour << "\" stroke-width=\"1.5\"/>\n";
        } else {
            out << "<polygon points=\"";
            for (std::size_t j = 0; j < hull.size(); ++j)
                out << (j ? " " : "") << sx(hull[j][0]) << ',' << sy(hull[j][1]);
            out << "\" fill=\"" << colour << "\" fill-opacity=\"0.15\" stroke=\"" << colour
                << "\" stroke-width=\"1.5\"/>\n";
        }
        const auto top = *std::max_element(hull.begin(), hull.end(),
                                           [](const Vector& a, const Vector& b) { return a[1] < b[1]; });
        out << "<text x=\"" << sx(top[0]) + 4.0 << "\" y=\"" << sy(top[1]) - 4.0
            << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << colour << "\">" << layers[i].label
            << "</text>\n</g>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace reachid
