#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "serinarr/prototypes.hpp"

namespace serinarr {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

std::string to_hex(Rgb color);

/// Green (no error) to red (error >= max_thr), linear in between.
Rgb error_bar_color(double error, double max_thr);

/// Black at 0, red at max/2, yellow at max.
Rgb heatmap_color(double value, double max);

inline constexpr Rgb kSelectedCell{0, 255, 0};
inline constexpr Rgb kMissingCell{200, 200, 200};

struct Overlay {
    Curve curve;
    std::string color = "#d62728";
    std::string label;
};

struct PlotSpec {
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<Overlay> overlays;
    std::vector<double> zone_errors;  // one cell per zone in the error bar
    double max_thr = 0.15;
    int width = 800;
    int height = 420;
    std::string title;
};

/// Minimum number of points each overlay curve is sampled at.
inline constexpr int kOverlaySamples = 128;

/// Series polyline, overlay curves and the per-zone error bar as SVG.
std::string render_enriched(const PlotSpec& spec);

struct HeatmapSpec {
    std::vector<std::vector<double>> errors;  // rows = verbosity 1..V, NaN = no value
    std::set<std::pair<int, int>> selected;   // (row, zone) cells painted green
    int cell = 24;
    std::string title;
};

/// Verbosity x zone error matrix on the black-red-yellow palette.
std::string render_heatmap(const HeatmapSpec& spec);

}  // namespace serinarr
