#pragma once

#include <array>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace serinarr {

/// Function prototypes, in tie-break order.
enum class CurveKind { Line = 0, Bilinear = 1, Tooth = 2, Sinusoid = 3 };

inline constexpr std::array<CurveKind, 4> kAllKinds = {CurveKind::Line, CurveKind::Bilinear,
                                                       CurveKind::Tooth, CurveKind::Sinusoid};
inline constexpr std::array<CurveKind, 3> kDefaultKinds = {CurveKind::Line, CurveKind::Bilinear,
                                                           CurveKind::Tooth};

/// Free parameters: Line 2, Bilinear 4, Tooth 5, Sinusoid 3.
int parameter_count(CurveKind kind) noexcept;
std::string_view kind_name(CurveKind kind) noexcept;
CurveKind parse_kind(std::string_view name);
/// Comma separated list, e.g. "line,bilinear,tooth". Result is sorted and unique.
std::vector<CurveKind> parse_kinds(std::string_view list);

/// y = intercept + slope * x
struct LineParams {
    double intercept = 0.0;
    double slope = 0.0;
};

/// Continuous polyline (lo, y_left) - (x_break, y_break) - (hi, y_right).
struct BilinearParams {
    double x_break = 0.0;
    double y_left = 0.0;
    double y_break = 0.0;
    double y_right = 0.0;
};

/// Rectangular plateau: y_in on [x_start, x_end], y_out_left before it and
/// y_out_right after it.
struct ToothParams {
    double y_out_left = 0.0;
    double y_out_right = 0.0;
    double x_start = 0.0;
    double x_end = 0.0;
    double y_in = 0.0;
};

/// y = offset + amplitude * sin(2 pi frequency x + phase). The offset is the
/// sample mean over the fitted range and is not a free parameter.
struct SinusoidParams {
    double amplitude = 0.0;
    double frequency = 1.0;  // cycles per unit x
    double phase = 0.0;      // radians, [0, 2 pi)
    double offset = 0.0;
};

using CurveParams = std::variant<LineParams, BilinearParams, ToothParams, SinusoidParams>;

/// Closed interval of the normalized x axis a curve is defined on.
struct XRange {
    double lo = 0.0;
    double hi = 1.0;

    double width() const noexcept { return hi - lo; }
    bool contains(double x) const noexcept;
};

struct Curve {
    CurveParams params;
    XRange range;

    CurveKind kind() const noexcept { return static_cast<CurveKind>(params.index()); }
};

/// Throws Error(Stage::Fit) when the parameters break the kind's invariants.
void validate(const Curve& curve);

/// Model value at x. Throws when x is outside the curve's range or the
/// parameters are invalid.
double evaluate(const Curve& curve, double x);

/// Same as evaluate() without range or validity checks; for hot loops over
/// curves already known to be valid.
double evaluate_unchecked(const Curve& curve, double x) noexcept;

}  // namespace serinarr
