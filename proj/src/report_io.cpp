#include "serinarr/report_io.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "serinarr/error.hpp"

namespace serinarr {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string_view connective_name(Connective c) {
    return c == Connective::Immediate ? "immediate" : "separated";
}

double number_or_nan(const Json& j) { return j.is_null() ? kNaN : j.get<double>(); }

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json curve_to_json(const Curve& curve) {
    Json params = Json::object();
    std::visit(
        [&](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, LineParams>) {
                params["intercept"] = p.intercept;
                params["slope"] = p.slope;
            } else if constexpr (std::is_same_v<P, BilinearParams>) {
                params["x_break"] = p.x_break;
                params["y_left"] = p.y_left;
                params["y_break"] = p.y_break;
                params["y_right"] = p.y_right;
            } else if constexpr (std::is_same_v<P, ToothParams>) {
                params["y_out_left"] = p.y_out_left;
                params["y_out_right"] = p.y_out_right;
                params["x_start"] = p.x_start;
                params["x_end"] = p.x_end;
                params["y_in"] = p.y_in;
            } else {
                params["amplitude"] = p.amplitude;
                params["frequency"] = p.frequency;
                params["phase"] = p.phase;
                params["offset"] = p.offset;
            }
        },
        curve.params);
    return Json{{"kind", kind_name(curve.kind())},
                {"range", Json::array({curve.range.lo, curve.range.hi})},
                {"params", std::move(params)}};
}

Curve curve_from_json(const Json& j) {
    try {
        Curve c;
        c.range = {j.at("range").at(0).get<double>(), j.at("range").at(1).get<double>()};
        const auto& p = j.at("params");
        switch (parse_kind(j.at("kind").get<std::string>())) {
            case CurveKind::Line:
                c.params = LineParams{p.at("intercept").get<double>(), p.at("slope").get<double>()};
                break;
            case CurveKind::Bilinear:
                c.params = BilinearParams{p.at("x_break").get<double>(), p.at("y_left").get<double>(),
                                          p.at("y_break").get<double>(), p.at("y_right").get<double>()};
                break;
            case CurveKind::Tooth:
                c.params = ToothParams{p.at("y_out_left").get<double>(), p.at("y_out_right").get<double>(),
                                       p.at("x_start").get<double>(), p.at("x_end").get<double>(),
                                       p.at("y_in").get<double>()};
                break;
            case CurveKind::Sinusoid:
                c.params = SinusoidParams{p.at("amplitude").get<double>(), p.at("frequency").get<double>(),
                                          p.at("phase").get<double>(), p.at("offset").get<double>()};
                break;
        }
        validate(c);
        return c;
    } catch (const Json::exception& e) {
        throw Error(Stage::Output, fmt::format("malformed curve record: {}", e.what()));
    }
}

Json descriptor_to_json(const Descriptor& d) {
    auto curve = curve_to_json(d.curve);
    Json j{{"id", d.id},
           {"kind", curve["kind"]},
           {"zone_start", d.zone_start},
           {"zone_end", d.zone_end},
           {"range", curve["range"]},
           {"params", curve["params"]},
           {"zone_err", d.zone_err}};
    return j;
}

Descriptor descriptor_from_json(const Json& j) {
    try {
        Descriptor d;
        d.id = j.at("id").get<int>();
        d.zone_start = j.at("zone_start").get<int>();
        d.zone_end = j.at("zone_end").get<int>();
        d.curve = curve_from_json(j);
        d.zone_err = j.at("zone_err").get<std::vector<double>>();
        if (d.zone_err.size() != static_cast<std::size_t>(d.span())) {
            throw Error(Stage::Output, fmt::format("descriptor {}: zone_err has {} entries for {} zones",
                                                   d.id, d.zone_err.size(), d.span()));
        }
        return d;
    } catch (const Json::exception& e) {
        throw Error(Stage::Output, fmt::format("malformed descriptor record: {}", e.what()));
    }
}

std::string pool_dump(const DescriptorPool& pool) {
    std::string out;
    for (const auto& d : pool.descriptors()) {
        out += descriptor_to_json(d).dump();
        out += '\n';
    }
    return out;
}

Json levels_to_json(const std::vector<VerbosityLevel>& levels) {
    Json arr = Json::array();
    for (const auto& l : levels) {
        arr.push_back(Json{{"v", l.v},
                           {"feasible", l.feasible},
                           {"min_span", l.min_span},
                           {"chosen", l.chosen},
                           {"cost", l.feasible ? Json(l.cost) : Json(nullptr)}});
    }
    return arr;
}

Json selection_to_json(const SelectionResult& s) {
    Json details = Json::array();
    for (const auto& d : s.details) details.push_back(Json{{"id", d.id}, {"level", d.level}});
    Json gains = Json::array();
    for (double g : s.zone_gain) gains.push_back(g);
    return Json{{"summary_level", s.summary_level},
                {"threshold_met", s.threshold_met},
                {"summary", s.summary},
                {"details", std::move(details)},
                {"objective", s.objective},
                {"zone_gain", std::move(gains)},
                {"global_error_sum", s.global_error_sum},
                {"global_rmse", s.global_rmse},
                {"candidates", s.candidates}};
}

Json narration_to_json(const std::vector<NarrationUnit>& units) {
    Json arr = Json::array();
    for (const auto& u : units) {
        const auto& a = u.shape.anchors;
        Json anchors = u.shape.extent == Extent::PointLike
                           ? Json{{"value", a.value}, {"x", a.x}}
                           : Json{{"average", a.value}, {"x1", a.x1}, {"x2", a.x2}};
        anchors["context_average"] = a.context_avg;
        anchors["context_range"] = Json::array({a.context_lo, a.context_hi});
        anchors["context_whole"] = a.context_whole;
        arr.push_back(Json{{"position", u.position},
                           {"role", u.role == Role::Summary ? "summary" : "detail"},
                           {"descriptor_id", u.descriptor_id},
                           {"level", u.level},
                           {"zones", Json::array({u.zone_start, u.zone_end})},
                           {"category", category_name(u.shape.category)},
                           {"strength", u.shape.strength},
                           {"strength_index", u.shape.strength_index},
                           {"extent", u.shape.extent == Extent::PointLike ? "point" : "ranged"},
                           {"noun", u.shape.noun},
                           {"connective", connective_name(u.connective)},
                           {"included_in", u.included_in ? Json(*u.included_in) : Json(nullptr)},
                           {"anchors", std::move(anchors)}});
    }
    return arr;
}

Json heatmap_to_json(const HeatmapSpec& spec) {
    Json rows = Json::array();
    for (const auto& row : spec.errors) {
        Json r = Json::array();
        for (double v : row) r.push_back(number_or_null(v));
        rows.push_back(std::move(r));
    }
    Json selected = Json::array();
    for (const auto& [row, zone] : spec.selected) selected.push_back(Json::array({row, zone}));
    return Json{{"errors", std::move(rows)}, {"selected", std::move(selected)}};
}

ChartSet render_from_document(const Json& doc) {
    try {
        const auto& series = doc.at("series");
        const auto& selection = doc.at("selection");
        const double max_thr = doc.at("config").at("max_thr").get<double>();
        const int n = series.at("n_zones").get<int>();

        std::vector<Descriptor> descriptors;
        for (const auto& d : doc.at("descriptors")) descriptors.push_back(descriptor_from_json(d));
        auto find = [&](int id) -> const Descriptor& {
            for (const auto& d : descriptors) {
                if (d.id == id) return d;
            }
            throw Error(Stage::Output, fmt::format("run document lacks descriptor {}", id));
        };

        std::vector<int> summary_ids = selection.at("summary").get<std::vector<int>>();
        std::vector<int> detail_ids;
        for (const auto& d : selection.at("details")) detail_ids.push_back(d.at("id").get<int>());

        auto best_errors = [&](const std::vector<int>& ids) {
            std::vector<double> out(static_cast<std::size_t>(n), kNaN);
            for (int z = 0; z < n; ++z) {
                for (int id : ids) {
                    const double e = find(id).err(z);
                    auto& cell = out[static_cast<std::size_t>(z)];
                    if (std::isfinite(e) && (!std::isfinite(cell) || e < cell)) cell = e;
                }
            }
            return out;
        };

        PlotSpec base;
        base.xs = series.at("xs").get<std::vector<double>>();
        base.ys = series.at("ys").get<std::vector<double>>();
        base.max_thr = max_thr;

        PlotSpec summary = base;
        summary.title = "Summary";
        for (int id : summary_ids) {
            summary.overlays.push_back({find(id).curve, "#d62728", fmt::format("d{}", id)});
        }
        summary.zone_errors = best_errors(summary_ids);

        PlotSpec details = base;
        details.title = "Details";
        for (int id : detail_ids) {
            details.overlays.push_back({find(id).curve, "#1f77b4", fmt::format("d{}", id)});
        }
        auto all_ids = summary_ids;
        all_ids.insert(all_ids.end(), detail_ids.begin(), detail_ids.end());
        details.zone_errors = best_errors(all_ids);

        HeatmapSpec heat;
        heat.title = "Zone RMSE per verbosity";
        for (const auto& row : doc.at("heatmap").at("errors")) {
            std::vector<double> r;
            for (const auto& v : row) r.push_back(number_or_nan(v));
            heat.errors.push_back(std::move(r));
        }
        for (const auto& cell : doc.at("heatmap").at("selected")) {
            heat.selected.insert({cell.at(0).get<int>(), cell.at(1).get<int>()});
        }
        return {render_enriched(summary), render_enriched(details), render_heatmap(heat)};
    } catch (const Json::exception& e) {
        throw Error(Stage::Output, fmt::format("malformed run document: {}", e.what()),
                    "pass the .json written by the narrate command");
    }
}

}  // namespace serinarr
