#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "serinarr/details.hpp"
#include "serinarr/fitting.hpp"
#include "serinarr/series.hpp"

namespace serinarr {

enum class ShapeCategory {
    Valley,
    Peak,
    Constant,
    Rise,
    Drop,
    PlateauLow,
    PlateauHigh,
    Oscillation,
};

std::string_view category_name(ShapeCategory category) noexcept;

enum class Extent { PointLike, Ranged };

// Ordered adjective scales, weakest first.
inline constexpr std::array<std::string_view, 6> kSharpScale = {
    "very_smooth", "smooth", "rather_smooth", "rather_sharp", "sharp", "very_sharp"};
inline constexpr std::array<std::string_view, 4> kSteepScale = {"very_mild", "mild", "steep",
                                                                "very_steep"};
inline constexpr std::array<std::string_view, 3> kDeepScale = {"slightly_deep", "deep",
                                                               "very_deep"};
inline constexpr std::array<std::string_view, 3> kHighScale = {"slightly_high", "high",
                                                               "very_high"};
// Closest to flat first.
inline constexpr std::array<std::string_view, 3> kConstantScale = {"almost_perfectly", "rather",
                                                                   "moderately"};
inline constexpr std::array<std::string_view, 4> kAmplitudeScale = {"slight", "moderate", "wide",
                                                                    "very_wide"};

/// Classification thresholds.
struct ShapeRules {
    double constant_aperture = 30.0;    // |A - 180| below this reads as constant
    double main_line_share = 0.25;      // shorter bilinear segment below this share -> one line
    double plateau_share = 0.40;        // tooth plateau at least this share -> "peak plateau"
    double flat_delta = 0.05;           // |dy| below this reads as constant
    double steep_max = 0.6;             // |dy| scale for the steepness adjectives
    double depth_max = 0.45;            // tooth depth scale
    double amplitude_max = 0.5;         // sinusoid amplitude scale
};

/// Index into an ordered scale of k adjectives: the number of boundaries
/// 1..k-1 with value * k >= boundary * max. Equals min(floor(value * k / max), k - 1).
std::size_t quantize_index(double value, double max, std::size_t k);
std::string_view quantize(double value, double max, std::span<const std::string_view> adjectives);

struct BilinearAngles {
    double normal = 90.0;     // N in [0, 180]
    double aperture = 180.0;  // A in [0, 360]
    double alpha_left = 0.0;  // segment inclinations, degrees
    double alpha_right = 0.0;
};

/// A = 180 - (alpha_r - alpha_l), N = 90 + (alpha_l + alpha_r) / 2 with
/// alpha the inclination of each segment in degrees. Throws for a
/// zero-length segment.
BilinearAngles angles_of_bilinear(const BilinearParams& params, const XRange& range);

struct Anchors {
    double value = 0.0;  // point value, or the average over [x1, x2]
    double x = 0.0;      // point position
    double x1 = 0.0;
    double x2 = 0.0;
    double context_avg = 0.0;  // series mean over the range; baseline level for teeth
    double context_lo = 0.0;
    double context_hi = 1.0;
    bool context_whole = true;  // descriptor spans every zone
};

struct ShapeClass {
    ShapeCategory category = ShapeCategory::Constant;
    std::string strength;  // token from the category's scale
    std::size_t strength_index = 0;
    Extent extent = Extent::PointLike;
    std::string noun;  // surface noun, e.g. "valley", "decrease", "lower peak plateau"
    Anchors anchors;
};

/// Category and strength from the bilinear angle map. `rise` is
/// y_right - y_left and decides rise vs drop outside the valley, peak and
/// constant regions.
ShapeClass classify_bilinear(double normal, double aperture, double rise,
                             const ShapeRules& rules = {});

/// Shape of a fitted descriptor with anchors taken from the curve and the
/// series.
ShapeClass classify(const Descriptor& descriptor, const TimeSeries& series,
                    const ShapeRules& rules = {});

enum class Role { Summary, Detail };
enum class Connective { Immediate, Separated };

struct NarrationUnit {
    int position = 0;  // 1-based
    Role role = Role::Summary;
    int descriptor_id = -1;
    int level = 0;  // verbosity level the descriptor comes from
    int zone_start = 0;
    int zone_end = 0;
    Connective connective = Connective::Separated;
    std::optional<int> included_in;  // position of a coarser unit whose range contains this one
    ShapeClass shape;
};

/// Summary units by (start, end), then details by (start, end, level), with
/// connective and inclusion relations filled in. Shapes are left default.
std::vector<NarrationUnit> order_units(const SelectionResult& selection,
                                       const DescriptorPool& pool);

/// order_units() followed by classify() on every unit.
std::vector<NarrationUnit> build_narration(const SelectionResult& selection,
                                           const DescriptorPool& pool, const TimeSeries& series,
                                           const ShapeRules& rules = {});

}  // namespace serinarr
