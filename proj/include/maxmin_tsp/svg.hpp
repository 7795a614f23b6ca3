#pragma once

// Standalone SVG 1.1 tour drawings. Element order is fixed: background,
// tour path, highlighted crossing edges, points. Output bytes depend only on
// the inputs.

#include "analysis.hpp"
#include "instance.hpp"
#include "instance_io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <set>
#include <span>
#include <string>

namespace maxmin_tsp {

namespace detail {

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::string xml_escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

}  // namespace detail

inline std::string render_svg(const Instance& inst, std::span<const PointId> order, const CrossingReport& crossings,
                              const std::string& title = {}) {
    const auto& pts = inst.points();
    double minx = 0, maxx = 0, miny = 0, maxy = 0;
    if (pts.size() > 0) {
        minx = maxx = pts[0].x;
        miny = maxy = pts[0].y;
    }
    for (const auto& p : pts.points()) {
        minx = std::min(minx, p.x);
        maxx = std::max(maxx, p.x);
        miny = std::min(miny, p.y);
        maxy = std::max(maxy, p.y);
    }
    const double span = std::max({maxx - minx, maxy - miny, 1e-9});
    const double w = std::max(maxx - minx, span * 1e-3);
    const double h = std::max(maxy - miny, span * 1e-3);
    const double margin = 0.05 * span;
    const double vw = w + 2 * margin;
    const double vh = h + 2 * margin;
    const double stroke = span / 600.0;
    const double radius = span / 300.0;

    // y grows upward in the data, downward in SVG.
    auto X = [&](const Point& p) { return detail::svg_num(p.x - minx + margin); };
    auto Y = [&](const Point& p) { return detail::svg_num(maxy - p.y + margin); };

    const double width_px = 800.0;
    const double height_px = width_px * vh / vw;

    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + detail::svg_num(width_px) +
         "\" height=\"" + detail::svg_num(height_px) + "\" viewBox=\"0 0 " + detail::svg_num(vw) + " " +
         detail::svg_num(vh) + "\">\n";
    if (!title.empty()) s += "<title>" + detail::xml_escape(title) + "</title>\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + detail::svg_num(vw) + "\" height=\"" + detail::svg_num(vh) +
         "\" fill=\"white\"/>\n";

    if (order.size() >= 2) {
        s += "<path fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"" + detail::svg_num(stroke) + "\" d=\"";
        for (std::size_t k = 0; k < order.size(); ++k) {
            const auto& p = pts.at(order[k]);
            s += (k == 0 ? "M" : " L") + X(p) + " " + Y(p);
        }
        s += " Z\"/>\n";
    }

    std::set<std::size_t> hot;
    for (auto [a, b] : crossings.crossing_pairs) {
        hot.insert(a);
        hot.insert(b);
    }
    for (auto k : hot) {
        const auto& a = pts.at(order[k]);
        const auto& b = pts.at(order[(k + 1) % order.size()]);
        s += "<line class=\"crossing\" x1=\"" + X(a) + "\" y1=\"" + Y(a) + "\" x2=\"" + X(b) + "\" y2=\"" + Y(b) +
             "\" stroke=\"#d62728\" stroke-width=\"" + detail::svg_num(3 * stroke) + "\"/>\n";
    }

    for (const auto& p : pts.points())
        s += "<circle cx=\"" + X(p) + "\" cy=\"" + Y(p) + "\" r=\"" + detail::svg_num(radius) + "\" fill=\"black\"/>\n";
    s += "</svg>\n";
    return s;
}

inline void emit_svg(const Instance& inst, std::span<const PointId> order, const CrossingReport& crossings,
                     const std::filesystem::path& path, const std::string& title = {}) {
    write_text_file(path, render_svg(inst, order, crossings, title));
}

}  // namespace maxmin_tsp
