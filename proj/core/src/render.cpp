#include "tracetopo/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "tracetopo/errors.hpp"

namespace tracetopo {

namespace {

constexpr const char* kModule = "render";
const char* kDimColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

const char* dim_color(int dim) { return kDimColors[std::clamp(dim, 0, 3)]; }

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

struct Extent {
    double max_finite = 0.0;  // largest finite birth/death
    bool has_infinite = false;
    std::vector<int> dims;  // dimensions present, ascending
};

// Bars above max_dim have unobservable deaths in this complex and are
// never drawn.
bool drawable(const PersistenceDiagram& diag, const PersistenceBar& b) { return b.dim <= diag.max_dim; }

Extent diagram_extent(const PersistenceDiagram& diag) {
    Extent e;
    for (const auto& b : diag.bars) {
        if (!drawable(diag, b)) continue;
        e.max_finite = std::max(e.max_finite, b.birth);
        if (b.infinite) e.has_infinite = true;
        else e.max_finite = std::max(e.max_finite, b.death);
        if (std::find(e.dims.begin(), e.dims.end(), b.dim) == e.dims.end()) e.dims.push_back(b.dim);
    }
    if (e.dims.empty())
        throw DataError(kModule, "diagram has no bars to draw; use the metric report instead");
    std::sort(e.dims.begin(), e.dims.end());
    if (e.max_finite <= 0.0) e.max_finite = 1.0;
    return e;
}

std::string svg_open(int width, int height) {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"%d\" height=\"%d\" "
                  "viewBox=\"0 0 %d %d\">\n",
                  width, height, width, height);
    return buf;
}

std::string text_at(double x, double y, const std::string& s, const char* anchor = "middle",
                    int size = 11) {
    std::string out = "  <text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" font-family=\"sans-serif\" font-size=\"" +
                      std::to_string(size) + "\" text-anchor=\"" + anchor + "\" fill=\"#333333\">";
    out += s;
    out += "</text>\n";
    return out;
}

std::string line_at(double x1, double y1, double x2, double y2, const std::string& color, double w,
                    const char* dash = nullptr) {
    std::string out = "  <line x1=\"" + fmt(x1) + "\" y1=\"" + fmt(y1) + "\" x2=\"" + fmt(x2) + "\" y2=\"" +
                      fmt(y2) + "\" stroke=\"" + color + "\" stroke-width=\"" + fmt(w) + "\"";
    if (dash) out += std::string(" stroke-dasharray=\"") + dash + "\"";
    out += "/>\n";
    return out;
}

}  // namespace

std::string render_barcode_svg(const PersistenceDiagram& diag, const RenderConfig& config) {
    const Extent ext = diagram_extent(diag);
    const double scale_max = ext.max_finite * 1.05;

    const int bar_height = 8;
    const int bar_gap = 4;
    const int layer_gap = 18;
    const int margin_left = 50;
    const int margin_right = 40;
    const int margin_top = 24;
    const int margin_bottom = 42;

    int total_bars = 0;
    for (const auto& b : diag.bars)
        if (drawable(diag, b)) ++total_bars;
    const int width = config.width;
    int height = config.height;
    if (height <= 0)
        height = margin_top + margin_bottom + total_bars * (bar_height + bar_gap) +
                 static_cast<int>(ext.dims.size()) * layer_gap;

    const double x0 = margin_left;
    const double x1 = width - margin_right;
    auto sx = [&](double v) { return x0 + (x1 - x0) * (v / scale_max); };

    std::string svg = svg_open(width, height);
    svg += "  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

    double y = margin_top;
    for (int dim : ext.dims) {
        svg += text_at(x0 - 36, y + 10, "H" + std::to_string(dim), "start");
        for (const auto& b : diag.bars) {
            if (b.dim != dim) continue;
            const double bx = sx(b.birth);
            const double ex = b.infinite ? x1 : sx(b.death);
            svg += line_at(bx, y + bar_height / 2.0, ex, y + bar_height / 2.0, dim_color(dim), bar_height - 2);
            if (b.infinite) {
                // arrow head at the right margin
                const double cy = y + bar_height / 2.0;
                svg += "  <path d=\"M" + fmt(ex) + " " + fmt(cy - 6) + " L" + fmt(ex + 9) + " " + fmt(cy) +
                       " L" + fmt(ex) + " " + fmt(cy + 6) + " Z\" fill=\"" + dim_color(dim) + "\"/>\n";
            }
            y += bar_height + bar_gap;
        }
        y += layer_gap;
    }

    // axis
    const double axis_y = height - margin_bottom + 8;
    svg += line_at(x0, axis_y, x1, axis_y, "#333333", 1.0);
    for (int t = 0; t <= 5; ++t) {
        const double v = scale_max * t / 5.0;
        svg += line_at(sx(v), axis_y, sx(v), axis_y + 4, "#333333", 1.0);
        svg += text_at(sx(v), axis_y + 16, fmt_tick(v));
    }
    svg += text_at((x0 + x1) / 2.0, axis_y + 30, "scale \xCE\xB5");
    svg += "</svg>\n";
    return svg;
}

std::string render_diagram_svg(const PersistenceDiagram& diag, const RenderConfig& config) {
    const Extent ext = diagram_extent(diag);
    const double scale_max = ext.max_finite * 1.05;

    const int margin = 52;
    const int width = config.width;
    const int height = config.height > 0 ? config.height : config.width;
    const double x0 = margin, x1 = width - margin;
    const double y0 = height - margin, y1 = margin;  // y grows downward in SVG
    const double inf_rule_y = y1 + 14;

    auto sx = [&](double v) { return x0 + (x1 - x0) * (v / scale_max); };
    auto sy = [&](double v) { return y0 + (y1 + 28 - y0) * (v / scale_max); };

    std::string svg = svg_open(width, height);
    svg += "  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

    // frame + diagonal d = b
    svg += line_at(x0, y0, x1, y0, "#333333", 1.0);
    svg += line_at(x0, y0, x0, y1, "#333333", 1.0);
    svg += line_at(sx(0.0), sy(0.0), sx(scale_max), sy(scale_max), "#999999", 1.0, "4,3");

    if (ext.has_infinite) {
        svg += line_at(x0, inf_rule_y, x1, inf_rule_y, "#666666", 1.0, "2,3");
        svg += text_at(x1 + 10, inf_rule_y + 4, "\xE2\x88\x9E", "start", 13);
    }

    for (const auto& b : diag.bars) {
        if (!drawable(diag, b)) continue;
        const double cx = sx(b.birth);
        const double cy = b.infinite ? inf_rule_y : sy(b.death);
        svg += "  <circle cx=\"" + fmt(cx) + "\" cy=\"" + fmt(cy) + "\" r=\"3.5\" fill=\"" +
               dim_color(b.dim) + "\" fill-opacity=\"0.85\"/>\n";
    }

    for (int t = 0; t <= 5; ++t) {
        const double v = scale_max * t / 5.0;
        svg += line_at(sx(v), y0, sx(v), y0 + 4, "#333333", 1.0);
        svg += text_at(sx(v), y0 + 16, fmt_tick(v));
        svg += line_at(x0 - 4, sy(v), x0, sy(v), "#333333", 1.0);
        svg += text_at(x0 - 8, sy(v) + 4, fmt_tick(v), "end");
    }
    svg += text_at((x0 + x1) / 2.0, height - 10.0, "birth");
    svg += "  <text x=\"14\" y=\"" + fmt((y0 + y1) / 2.0) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\" fill=\"#333333\" "
           "transform=\"rotate(-90 14 " +
           fmt((y0 + y1) / 2.0) + ")\">death</text>\n";

    // legend
    double ly = y1;
    for (int dim : ext.dims) {
        svg += "  <circle cx=\"" + fmt(x1 - 46) + "\" cy=\"" + fmt(ly) + "\" r=\"3.5\" fill=\"" +
               dim_color(dim) + "\"/>\n";
        svg += text_at(x1 - 36, ly + 4, "H" + std::to_string(dim), "start");
        ly += 16;
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace tracetopo
