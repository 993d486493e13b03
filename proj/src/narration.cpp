#include "serinarr/narration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include <fmt/format.h>

#include "serinarr/error.hpp"

namespace serinarr {

namespace {

double degrees(double radians) { return radians * 180.0 / std::numbers::pi; }

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

ShapeClass with_strength(ShapeCategory category, Extent extent, std::string noun, double value,
                         double max, std::span<const std::string_view> scale) {
    ShapeClass shape;
    shape.category = category;
    shape.extent = extent;
    shape.noun = std::move(noun);
    shape.strength_index = quantize_index(value, max, scale.size());
    shape.strength = std::string(scale[shape.strength_index]);
    return shape;
}

// Straight segment from (x0, y0) to (x1, y1), read as a trend line.
ShapeClass classify_segment(double y0, double x1, double y1, const ShapeRules& rules) {
    const double dy = y1 - y0;
    if (std::abs(dy) < rules.flat_delta) {
        auto shape = with_strength(ShapeCategory::Constant, Extent::Ranged, "constant trend",
                                   std::abs(dy), rules.flat_delta, kConstantScale);
        shape.anchors.value = clamp01(0.5 * (y0 + y1));
        return shape;
    }
    auto shape = with_strength(dy > 0.0 ? ShapeCategory::Rise : ShapeCategory::Drop,
                               Extent::PointLike, dy > 0.0 ? "increase" : "decrease",
                               std::abs(dy), rules.steep_max, kSteepScale);
    shape.anchors.value = clamp01(y1);
    shape.anchors.x = clamp01(x1);
    return shape;
}

// The general average is the series mean over the descriptor range, except
// for teeth, whose baseline (mean of the outside levels) is already set.
void set_context(ShapeClass& shape, const Descriptor& d, const TimeSeries& series) {
    auto& a = shape.anchors;
    if (d.kind() != CurveKind::Tooth) a.context_avg = clamp01(series.mean(d.zone_start, d.zone_end));
    a.context_lo = d.curve.range.lo;
    a.context_hi = d.curve.range.hi;
    a.context_whole = d.zone_start == 0 && d.zone_end == series.n_zones() - 1;
    if (shape.extent == Extent::Ranged && a.x1 == a.x2) {
        a.x1 = a.context_lo;
        a.x2 = a.context_hi;
    }
}

ShapeClass classify_line(const Descriptor& d, const ShapeRules& rules) {
    const auto& p = std::get<LineParams>(d.curve.params);
    const auto& r = d.curve.range;
    auto shape = classify_segment(p.intercept + p.slope * r.lo, r.hi, p.intercept + p.slope * r.hi,
                                  rules);
    return shape;
}

ShapeClass classify_bilinear_descriptor(const Descriptor& d, const ShapeRules& rules) {
    const auto& p = std::get<BilinearParams>(d.curve.params);
    const auto& r = d.curve.range;
    const double left = p.x_break - r.lo;
    const double right = r.hi - p.x_break;
    if (std::min(left, right) < rules.main_line_share * r.width()) {
        auto shape = left >= right ? classify_segment(p.y_left, p.x_break, p.y_break, rules)
                                   : classify_segment(p.y_break, r.hi, p.y_right, rules);
        if (shape.extent == Extent::Ranged) {
            shape.anchors.x1 = left >= right ? r.lo : p.x_break;
            shape.anchors.x2 = left >= right ? p.x_break : r.hi;
        }
        return shape;
    }
    const auto angles = angles_of_bilinear(p, r);
    auto shape = classify_bilinear(angles.normal, angles.aperture, p.y_right - p.y_left, rules);
    auto& a = shape.anchors;
    switch (shape.category) {
        case ShapeCategory::Valley:
        case ShapeCategory::Peak:
            a.value = clamp01(p.y_break);
            a.x = p.x_break;
            break;
        case ShapeCategory::Constant:
            a.value = clamp01(((p.y_left + p.y_break) * left + (p.y_break + p.y_right) * right) /
                              (2.0 * r.width()));
            a.x1 = r.lo;
            a.x2 = r.hi;
            break;
        default:
            a.value = clamp01(p.y_right);
            a.x = r.hi;
            break;
    }
    return shape;
}

ShapeClass classify_tooth(const Descriptor& d, const ShapeRules& rules) {
    const auto& p = std::get<ToothParams>(d.curve.params);
    const auto& r = d.curve.range;
    const double base = 0.5 * (p.y_out_left + p.y_out_right);
    const double depth = std::abs(p.y_in - base);
    ShapeClass shape;
    if (depth < rules.flat_delta) {
        shape = with_strength(ShapeCategory::Constant, Extent::Ranged, "constant trend", depth,
                              rules.flat_delta, kConstantScale);
    } else {
        const bool lower = p.y_in < base;
        const bool plateau = (p.x_end - p.x_start) >= rules.plateau_share * r.width();
        const auto category = plateau ? (lower ? ShapeCategory::PlateauLow : ShapeCategory::PlateauHigh)
                                      : (lower ? ShapeCategory::Valley : ShapeCategory::Peak);
        std::string noun = plateau ? (lower ? "lower peak plateau" : "upper peak plateau")
                                   : (lower ? "valley" : "peak");
        shape = with_strength(category, Extent::Ranged, std::move(noun), depth, rules.depth_max,
                              lower ? std::span<const std::string_view>(kDeepScale)
                                    : std::span<const std::string_view>(kHighScale));
    }
    shape.anchors.value = clamp01(p.y_in);
    shape.anchors.context_avg = clamp01(base);
    shape.anchors.x1 = p.x_start;
    shape.anchors.x2 = p.x_end;
    return shape;
}

ShapeClass classify_sinusoid(const Descriptor& d, const ShapeRules& rules) {
    const auto& p = std::get<SinusoidParams>(d.curve.params);
    const auto& r = d.curve.range;
    const auto cycles = std::max<long>(1, std::lround(p.frequency * r.width()));
    auto shape = with_strength(ShapeCategory::Oscillation, Extent::Ranged,
                               fmt::format("oscillation over {} cycle{}", cycles,
                                           cycles == 1 ? "" : "s"),
                               p.amplitude, rules.amplitude_max, kAmplitudeScale);
    shape.anchors.value = clamp01(p.offset);
    shape.anchors.x1 = r.lo;
    shape.anchors.x2 = r.hi;
    return shape;
}

}  // namespace

std::string_view category_name(ShapeCategory category) noexcept {
    switch (category) {
        case ShapeCategory::Valley: return "valley";
        case ShapeCategory::Peak: return "peak";
        case ShapeCategory::Constant: return "constant";
        case ShapeCategory::Rise: return "rise";
        case ShapeCategory::Drop: return "drop";
        case ShapeCategory::PlateauLow: return "plateau_low";
        case ShapeCategory::PlateauHigh: return "plateau_high";
        case ShapeCategory::Oscillation: return "oscillation";
    }
    return "?";
}

std::size_t quantize_index(double value, double max, std::size_t k) {
    if (k == 0) throw Error(Stage::Narrate, "empty adjective scale");
    if (!(max > 0.0)) throw Error(Stage::Narrate, "quantizer maximum must be positive");
    std::size_t index = 0;
    const double scaled = value * static_cast<double>(k);
    for (std::size_t b = 1; b < k; ++b) {
        if (scaled >= static_cast<double>(b) * max) index = b;
    }
    return index;
}

std::string_view quantize(double value, double max, std::span<const std::string_view> adjectives) {
    return adjectives[quantize_index(value, max, adjectives.size())];
}

BilinearAngles angles_of_bilinear(const BilinearParams& params, const XRange& range) {
    const double left = params.x_break - range.lo;
    const double right = range.hi - params.x_break;
    if (!(left > 0.0) || !(right > 0.0)) {
        throw Error(Stage::Narrate, "bilinear with a zero-length segment has no angles");
    }
    BilinearAngles a;
    a.alpha_left = degrees(std::atan((params.y_break - params.y_left) / left));
    a.alpha_right = degrees(std::atan((params.y_right - params.y_break) / right));
    a.aperture = 180.0 - (a.alpha_right - a.alpha_left);
    a.normal = 90.0 + 0.5 * (a.alpha_left + a.alpha_right);
    return a;
}

ShapeClass classify_bilinear(double normal, double aperture, double rise, const ShapeRules& rules) {
    const double bend = std::abs(aperture - 180.0);
    const double lean = normal + aperture / 2.0;
    if (bend >= rules.constant_aperture && aperture < 180.0 && 10.0 < lean && lean < 170.0) {
        return with_strength(ShapeCategory::Valley, Extent::PointLike, "valley", 180.0 - aperture,
                             180.0, kSharpScale);
    }
    // Mirror image of the valley region under y -> -y (A -> 360 - A, N -> 180 - N).
    if (bend >= rules.constant_aperture && aperture > 180.0 && 190.0 < lean && lean < 350.0) {
        return with_strength(ShapeCategory::Peak, Extent::PointLike, "peak", aperture - 180.0,
                             180.0, kSharpScale);
    }
    if (bend < rules.constant_aperture) {
        return with_strength(ShapeCategory::Constant, Extent::Ranged, "constant trend", bend,
                             rules.constant_aperture, kConstantScale);
    }
    return with_strength(rise >= 0.0 ? ShapeCategory::Rise : ShapeCategory::Drop,
                         Extent::PointLike, rise >= 0.0 ? "rise" : "drop", std::abs(rise),
                         rules.steep_max, kSteepScale);
}

ShapeClass classify(const Descriptor& descriptor, const TimeSeries& series,
                    const ShapeRules& rules) {
    ShapeClass shape;
    switch (descriptor.kind()) {
        case CurveKind::Line: shape = classify_line(descriptor, rules); break;
        case CurveKind::Bilinear: shape = classify_bilinear_descriptor(descriptor, rules); break;
        case CurveKind::Tooth: shape = classify_tooth(descriptor, rules); break;
        case CurveKind::Sinusoid: shape = classify_sinusoid(descriptor, rules); break;
    }
    set_context(shape, descriptor, series);
    return shape;
}

std::vector<NarrationUnit> order_units(const SelectionResult& selection,
                                       const DescriptorPool& pool) {
    std::vector<NarrationUnit> summary;
    std::vector<NarrationUnit> details;
    auto make = [&](int id, int level, Role role) {
        const auto& d = pool.at(id);
        NarrationUnit u;
        u.role = role;
        u.descriptor_id = id;
        u.level = level;
        u.zone_start = d.zone_start;
        u.zone_end = d.zone_end;
        return u;
    };
    for (int id : selection.summary) summary.push_back(make(id, selection.summary_level, Role::Summary));
    for (const auto& det : selection.details) details.push_back(make(det.id, det.level, Role::Detail));
    std::sort(summary.begin(), summary.end(), [](const auto& a, const auto& b) {
        return std::tie(a.zone_start, a.zone_end) < std::tie(b.zone_start, b.zone_end);
    });
    std::sort(details.begin(), details.end(), [](const auto& a, const auto& b) {
        return std::tie(a.zone_start, a.zone_end, a.level, a.descriptor_id) <
               std::tie(b.zone_start, b.zone_end, b.level, b.descriptor_id);
    });

    std::vector<NarrationUnit> units = std::move(summary);
    units.insert(units.end(), details.begin(), details.end());
    for (std::size_t k = 0; k < units.size(); ++k) {
        auto& u = units[k];
        u.position = static_cast<int>(k) + 1;
        u.connective = k + 1 < units.size() && units[k + 1].zone_start == u.zone_end + 1
                           ? Connective::Immediate
                           : Connective::Separated;
    }
    for (auto& u : units) {
        if (u.role == Role::Summary) continue;
        const NarrationUnit* container = nullptr;
        for (const auto& c : units) {
            if (c.position == u.position || c.level >= u.level) continue;
            if (c.zone_start > u.zone_start || c.zone_end < u.zone_end) continue;
            if (!container ||
                std::tuple(-c.level, c.zone_end - c.zone_start, c.position) <
                    std::tuple(-container->level, container->zone_end - container->zone_start,
                               container->position)) {
                container = &c;
            }
        }
        if (container) u.included_in = container->position;
    }
    return units;
}

std::vector<NarrationUnit> build_narration(const SelectionResult& selection,
                                           const DescriptorPool& pool, const TimeSeries& series,
                                           const ShapeRules& rules) {
    auto units = order_units(selection, pool);
    for (auto& u : units) u.shape = classify(pool.at(u.descriptor_id), series, rules);
    return units;
}

}  // namespace serinarr
