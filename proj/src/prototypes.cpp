#include "serinarr/prototypes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "serinarr/error.hpp"

namespace serinarr {

namespace {

constexpr double kRangeSlack = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

int parameter_count(CurveKind kind) noexcept {
    switch (kind) {
        case CurveKind::Line: return 2;
        case CurveKind::Bilinear: return 4;
        case CurveKind::Tooth: return 5;
        case CurveKind::Sinusoid: return 3;
    }
    return 0;
}

std::string_view kind_name(CurveKind kind) noexcept {
    switch (kind) {
        case CurveKind::Line: return "line";
        case CurveKind::Bilinear: return "bilinear";
        case CurveKind::Tooth: return "tooth";
        case CurveKind::Sinusoid: return "sinusoid";
    }
    return "?";
}

CurveKind parse_kind(std::string_view name) {
    for (auto kind : kAllKinds) {
        if (kind_name(kind) == name) return kind;
    }
    throw Error(Stage::Config, fmt::format("unknown curve kind '{}'", name),
                "use line, bilinear, tooth or sinusoid");
}

std::vector<CurveKind> parse_kinds(std::string_view list) {
    std::vector<CurveKind> kinds;
    std::size_t start = 0;
    while (start <= list.size()) {
        auto end = list.find(',', start);
        if (end == std::string_view::npos) end = list.size();
        auto token = list.substr(start, end - start);
        while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
        while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
        if (!token.empty()) kinds.push_back(parse_kind(token));
        start = end + 1;
    }
    std::sort(kinds.begin(), kinds.end());
    kinds.erase(std::unique(kinds.begin(), kinds.end()), kinds.end());
    if (kinds.empty()) throw Error(Stage::Config, "empty curve kind list");
    return kinds;
}

bool XRange::contains(double x) const noexcept {
    return x >= lo - kRangeSlack && x <= hi + kRangeSlack;
}

void validate(const Curve& curve) {
    const auto& r = curve.range;
    if (!(std::isfinite(r.lo) && std::isfinite(r.hi) && r.lo < r.hi)) {
        throw Error(Stage::Fit, fmt::format("invalid curve range [{}, {}]", r.lo, r.hi));
    }
    auto finite = [](std::initializer_list<double> values) {
        return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
    };
    std::visit(
        overloaded{
            [&](const LineParams& p) {
                if (!finite({p.intercept, p.slope})) throw Error(Stage::Fit, "non-finite line");
            },
            [&](const BilinearParams& p) {
                if (!finite({p.x_break, p.y_left, p.y_break, p.y_right})) {
                    throw Error(Stage::Fit, "non-finite bilinear");
                }
                if (!(r.lo < p.x_break && p.x_break < r.hi)) {
                    throw Error(Stage::Fit,
                                fmt::format("bilinear breakpoint {} outside ({}, {})", p.x_break,
                                            r.lo, r.hi));
                }
            },
            [&](const ToothParams& p) {
                if (!finite({p.y_out_left, p.y_out_right, p.x_start, p.x_end, p.y_in})) {
                    throw Error(Stage::Fit, "non-finite tooth");
                }
                if (!(r.lo <= p.x_start && p.x_start < p.x_end && p.x_end <= r.hi)) {
                    throw Error(Stage::Fit, fmt::format("tooth plateau [{}, {}] not inside [{}, {}]",
                                                        p.x_start, p.x_end, r.lo, r.hi));
                }
            },
            [&](const SinusoidParams& p) {
                if (!finite({p.amplitude, p.frequency, p.phase, p.offset}) || p.amplitude < 0.0 ||
                    p.frequency <= 0.0 || p.phase < 0.0 || p.phase >= 2.0 * std::numbers::pi) {
                    throw Error(Stage::Fit, "invalid sinusoid parameters");
                }
            },
        },
        curve.params);
}

double evaluate_unchecked(const Curve& curve, double x) noexcept {
    const auto& r = curve.range;
    return std::visit(
        overloaded{
            [&](const LineParams& p) { return p.intercept + p.slope * x; },
            [&](const BilinearParams& p) {
                if (x <= p.x_break) {
                    return p.y_left + (p.y_break - p.y_left) * (x - r.lo) / (p.x_break - r.lo);
                }
                return p.y_break + (p.y_right - p.y_break) * (x - p.x_break) / (r.hi - p.x_break);
            },
            [&](const ToothParams& p) {
                if (x < p.x_start) return p.y_out_left;
                if (x > p.x_end) return p.y_out_right;
                return p.y_in;
            },
            [&](const SinusoidParams& p) {
                return p.offset +
                       p.amplitude * std::sin(2.0 * std::numbers::pi * p.frequency * x + p.phase);
            },
        },
        curve.params);
}

double evaluate(const Curve& curve, double x) {
    validate(curve);
    if (!curve.range.contains(x)) {
        throw Error(Stage::Fit, fmt::format("x = {} outside curve range [{}, {}]", x,
                                            curve.range.lo, curve.range.hi));
    }
    return evaluate_unchecked(curve, x);
}

}  // namespace serinarr
