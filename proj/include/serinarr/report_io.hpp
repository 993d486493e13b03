#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "serinarr/details.hpp"
#include "serinarr/fitting.hpp"
#include "serinarr/narration.hpp"
#include "serinarr/render.hpp"

namespace serinarr {

using Json = nlohmann::ordered_json;

Json curve_to_json(const Curve& curve);
Curve curve_from_json(const Json& j);

/// {"id", "kind", "zone_start", "zone_end", "range", "params", "zone_err"}
Json descriptor_to_json(const Descriptor& d);
Descriptor descriptor_from_json(const Json& j);

/// One compact JSON record per line, in id order.
std::string pool_dump(const DescriptorPool& pool);

Json levels_to_json(const std::vector<VerbosityLevel>& levels);

/// s, summary ids, details with levels, objective, per-zone gains, global error.
Json selection_to_json(const SelectionResult& selection);

/// Units with position, role, descriptor id, category, strength, connective,
/// included_in and anchors.
Json narration_to_json(const std::vector<NarrationUnit>& units);

/// {"errors": rows of per-zone values (null when absent), "selected": [[row, zone], ...]}
Json heatmap_to_json(const HeatmapSpec& spec);

struct ChartSet {
    std::string summary_svg;
    std::string details_svg;
    std::string heatmap_svg;
};

/// Rebuilds the three charts from a run document written by the narrate
/// command (keys "series", "selection", "descriptors", "heatmap", "config").
ChartSet render_from_document(const Json& doc);

}  // namespace serinarr
