#include "serinarr/render.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace serinarr {

namespace {

std::uint8_t channel(double v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

std::string escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) { return fmt::format("{:.2f}", v); }

// Plot-area mapping from the unit square to pixels.
struct Frame {
    double left, top, width, height;

    double px(double x) const { return left + x * width; }
    double py(double y) const { return top + (1.0 - y) * height; }
};

std::string polyline(const Frame& f, const std::vector<std::pair<double, double>>& pts,
                     std::string_view color, double stroke) {
    std::string out = fmt::format(R"(<polyline fill="none" stroke="{}" stroke-width="{}" points=")",
                                  color, num(stroke));
    for (std::size_t k = 0; k < pts.size(); ++k) {
        if (k > 0) out += ' ';
        out += num(f.px(pts[k].first)) + "," + num(f.py(pts[k].second));
    }
    out += "\"/>\n";
    return out;
}

std::vector<std::pair<double, double>> sample_curve(const Curve& curve) {
    std::vector<std::pair<double, double>> pts;
    const auto& r = curve.range;
    for (int k = 0; k <= kOverlaySamples; ++k) {
        const double x = r.lo + r.width() * static_cast<double>(k) / kOverlaySamples;
        pts.emplace_back(x, evaluate_unchecked(curve, x));
    }
    return pts;
}

}  // namespace

std::string to_hex(Rgb color) {
    return fmt::format("#{:02x}{:02x}{:02x}", color.r, color.g, color.b);
}

Rgb error_bar_color(double error, double max_thr) {
    const double t = max_thr > 0.0 ? std::clamp(error / max_thr, 0.0, 1.0) : 1.0;
    return {channel(t), channel(1.0 - t), 0};
}

Rgb heatmap_color(double value, double max) {
    const double t = max > 0.0 ? std::clamp(value / max, 0.0, 1.0) : 0.0;
    if (t <= 0.5) return {channel(2.0 * t), 0, 0};
    return {255, channel(2.0 * t - 1.0), 0};
}

std::string render_enriched(const PlotSpec& spec) {
    const double margin = 40.0;
    const double bar_height = 18.0;
    const double bar_gap = 12.0;
    const Frame frame{margin, margin, spec.width - 2.0 * margin,
                      spec.height - 2.0 * margin - bar_height - bar_gap};

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
        "viewBox=\"0 0 {0} {1}\">\n",
        spec.width, spec.height);
    svg += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n",
                       spec.width, spec.height);
    if (!spec.title.empty()) {
        svg += fmt::format(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"14\">{}</text>\n",
            num(margin), num(margin - 14.0), escape(spec.title));
    }
    svg += fmt::format(
        "<rect class=\"frame\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" "
        "stroke=\"#444444\"/>\n",
        num(frame.left), num(frame.top), num(frame.width), num(frame.height));
    for (int tick = 0; tick <= 4; ++tick) {
        const double v = tick / 4.0;
        svg += fmt::format(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\" "
            "text-anchor=\"middle\">{}</text>\n",
            num(frame.px(v)), num(frame.top + frame.height + bar_height + bar_gap + 14.0),
            fmt::format("{:.2f}", v));
    }

    std::vector<std::pair<double, double>> series;
    for (std::size_t k = 0; k < spec.xs.size() && k < spec.ys.size(); ++k) {
        series.emplace_back(spec.xs[k], spec.ys[k]);
    }
    svg += "<g class=\"series\">\n" + polyline(frame, series, "#7f7f7f", 1.0) + "</g>\n";

    svg += "<g class=\"overlays\">\n";
    for (const auto& o : spec.overlays) {
        svg += fmt::format("<g class=\"overlay\" data-kind=\"{}\" data-label=\"{}\">\n",
                           kind_name(o.curve.kind()), escape(o.label));
        svg += polyline(frame, sample_curve(o.curve), o.color, 2.0);
        svg += "</g>\n";
    }
    svg += "</g>\n";

    svg += "<g class=\"error-bar\">\n";
    const auto cells = spec.zone_errors.size();
    const double bar_top = frame.top + frame.height + bar_gap;
    for (std::size_t z = 0; z < cells; ++z) {
        const double x0 = frame.left + frame.width * static_cast<double>(z) / static_cast<double>(cells);
        const double w = frame.width / static_cast<double>(cells);
        const double e = spec.zone_errors[z];
        const auto color = std::isfinite(e) ? error_bar_color(e, spec.max_thr) : kMissingCell;
        svg += fmt::format(
            "<rect class=\"zone\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n",
            num(x0), num(bar_top), num(w), num(bar_height), to_hex(color));
    }
    svg += "</g>\n</svg>\n";
    return svg;
}

std::string render_heatmap(const HeatmapSpec& spec) {
    double max = 0.0;
    std::size_t cols = 0;
    for (const auto& row : spec.errors) {
        cols = std::max(cols, row.size());
        for (double v : row) {
            if (std::isfinite(v)) max = std::max(max, v);
        }
    }
    const int label_w = 40;
    const int top = 30;
    const int width = label_w + static_cast<int>(cols) * spec.cell + 10;
    const int height = top + static_cast<int>(spec.errors.size()) * spec.cell + 10;

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
        "viewBox=\"0 0 {0} {1}\">\n",
        width, height);
    svg += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n",
                       width, height);
    if (!spec.title.empty()) {
        svg += fmt::format(
            "<text x=\"4\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\">{}</text>\n",
            escape(spec.title));
    }
    for (std::size_t r = 0; r < spec.errors.size(); ++r) {
        const int y = top + static_cast<int>(r) * spec.cell;
        svg += fmt::format(
            "<text x=\"4\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">v={}</text>\n",
            y + spec.cell / 2 + 4, r + 1);
        for (std::size_t z = 0; z < spec.errors[r].size(); ++z) {
            const double e = spec.errors[r][z];
            const bool selected =
                spec.selected.contains({static_cast<int>(r), static_cast<int>(z)});
            Rgb color = kMissingCell;
            if (selected) {
                color = kSelectedCell;
            } else if (std::isfinite(e)) {
                color = heatmap_color(e, max);
            }
            svg += fmt::format(
                "<rect class=\"{}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" "
                "stroke=\"#ffffff\" stroke-width=\"0.5\"/>\n",
                selected ? "cell selected" : "cell", label_w + static_cast<int>(z) * spec.cell, y,
                spec.cell, spec.cell, to_hex(color));
        }
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace serinarr
