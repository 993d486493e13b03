#include "serinarr/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>

#include "serinarr/error.hpp"

namespace serinarr {

namespace {

constexpr double kDefaultPenalty = 1e-4;

class Stopwatch {
public:
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        return s;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

HeatmapSpec heatmap_of(const Analysis& a) {
    HeatmapSpec spec;
    spec.errors = cover_error_matrix(a.pool, a.levels);
    spec.title = "Zone RMSE per verbosity";
    auto mark = [&](int id, int level) {
        const auto& d = a.pool.at(id);
        for (int z = d.zone_start; z <= d.zone_end; ++z) spec.selected.insert({level - 1, z});
    };
    for (int id : a.selection.summary) mark(id, a.selection.summary_level);
    for (const auto& d : a.selection.details) mark(d.id, d.level);
    return spec;
}

}  // namespace

EmitFlags parse_emit(std::string_view list) {
    EmitFlags f{false, false, false, false, false};
    std::size_t start = 0;
    while (start <= list.size()) {
        auto end = list.find(',', start);
        if (end == std::string_view::npos) end = list.size();
        const auto token = list.substr(start, end - start);
        if (token == "text") f.text = true;
        else if (token == "json") f.json = true;
        else if (token == "svg") f.svg = true;
        else if (token == "heatmap") f.heatmap = true;
        else if (token == "pool") f.pool = true;
        else if (!token.empty()) {
            throw Error(Stage::Config, fmt::format("unknown output '{}'", token),
                        "use a subset of text,json,svg,heatmap,pool");
        }
        start = end + 1;
    }
    return f;
}

void RunConfig::validate() const {
    if (levels < 1 || levels > 6) {
        throw Error(Stage::Config, fmt::format("--levels must be in [1, 6], got {}", levels));
    }
    if (verbosity < 1 || verbosity > 8) {
        throw Error(Stage::Config, fmt::format("--verbosity must be in [1, 8], got {}", verbosity));
    }
    if (kinds.empty()) throw Error(Stage::Config, "--kinds is empty");
    selection().validate(1 << levels);
}

double RunConfig::effective_penalty() const {
    if (penalty_eps) return *penalty_eps;
    const double cap = 0.5 * min_thr / (static_cast<double>(verbosity) * (1 << levels));
    return std::min(kDefaultPenalty, cap);
}

SelectionConfig RunConfig::selection() const {
    return {max_thr, min_thr, verbosity, effective_penalty()};
}

std::string RunConfig::stem() const {
    if (!name.empty()) return name;
    const auto s = input.stem().string();
    return s.empty() ? "series" : s;
}

Analysis analyze(const RawSeries& raw, const RunConfig& config) {
    config.validate();
    RunReport report;
    Stopwatch clock;

    auto series = normalize(raw, config.levels);
    report.seconds.ingest = clock.lap();

    auto pool = build_pool(series, config.kinds, config.threads);
    report.seconds.fit = clock.lap();
    report.pool_size = pool.size();
    report.infeasible = pool.infeasible();

    auto levels = solve_cover(pool, config.verbosity);
    for (const auto& l : levels) {
        report.level_costs.push_back(l.feasible ? l.cost
                                                : std::numeric_limits<double>::quiet_NaN());
    }
    report.seconds.cover = clock.lap();

    const auto summary = pick_summary(pool, levels, config.max_thr);
    auto selection = solve_details(pool, levels, summary, config.selection());
    report.seconds.details = clock.lap();
    report.summary_level = selection.summary_level;
    report.threshold_met = selection.threshold_met;
    report.details = selection.details;
    report.objective = selection.objective;
    report.global_rmse = selection.global_rmse;
    report.global_error_sum = selection.global_error_sum;

    auto units = build_narration(selection, pool, series);
    auto text = realize(units);
    report.seconds.narrate = clock.lap();

    return Analysis{std::move(series), std::move(pool), std::move(levels), summary,
                    std::move(selection), std::move(units), std::move(text), std::move(report)};
}

Json run_document(const Analysis& a, const RunConfig& config) {
    Json kinds = Json::array();
    for (auto k : a.pool.kinds()) kinds.push_back(kind_name(k));
    Json descriptors = Json::array();
    for (int id : a.selection.summary) descriptors.push_back(descriptor_to_json(a.pool.at(id)));
    for (const auto& d : a.selection.details) descriptors.push_back(descriptor_to_json(a.pool.at(d.id)));

    return Json{
        {"format", "serinarr-run"},
        {"version", 1},
        {"config",
         {{"levels", config.levels},
          {"n_zones", a.series.n_zones()},
          {"verbosity", config.verbosity},
          {"max_thr", config.max_thr},
          {"min_thr", config.min_thr},
          {"penalty_eps", config.effective_penalty()},
          {"kinds", std::move(kinds)}}},
        {"series",
         {{"n_zones", a.series.n_zones()},
          {"y_min", a.series.y_min()},
          {"y_max", a.series.y_max()},
          {"xs", a.series.xs()},
          {"ys", a.series.ys()}}},
        {"pool", {{"size", a.pool.size()}, {"infeasible", a.pool.infeasible()}}},
        {"levels", levels_to_json(a.levels)},
        {"selection", selection_to_json(a.selection)},
        {"descriptors", std::move(descriptors)},
        {"narration", narration_to_json(a.units)},
        {"text", a.text.full_text},
        {"heatmap", heatmap_to_json(heatmap_of(a))},
    };
}

RenderedOutputs render_outputs(const Analysis& analysis, const RunConfig& config) {
    RenderedOutputs out;
    out.text = analysis.text.full_text + "\n";
    const auto doc = run_document(analysis, config);
    out.json = doc.dump(2) + "\n";
    out.charts = render_from_document(doc);
    if (config.emit.pool) out.pool_jsonl = pool_dump(analysis.pool);
    return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(Stage::Output, fmt::format("cannot write '{}'", tmp.string()),
                        "check that --out-dir exists and is writable");
        }
        out << content;
        if (!out.flush()) throw Error(Stage::Output, fmt::format("write to '{}' failed", tmp.string()));
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw Error(Stage::Output, fmt::format("cannot move '{}' into place: {}", path.string(),
                                               ec.message()));
    }
}

RunResult run(const RunConfig& config) {
    config.validate();
    Stopwatch clock;
    const auto raw = load_series(config.input, config.format);
    const double load_time = clock.lap();

    RunResult result{analyze(raw, config), {}};
    result.analysis.report.seconds.ingest += load_time;

    clock.lap();
    const auto out = render_outputs(result.analysis, config);
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec) {
        throw Error(Stage::Output, fmt::format("cannot create '{}': {}", config.out_dir.string(),
                                               ec.message()));
    }
    const auto base = config.out_dir / config.stem();
    auto emit = [&](const std::string& suffix, const std::string& content) {
        auto path = base;
        path += suffix;
        write_atomic(path, content);
        result.written.push_back(path);
    };
    if (config.emit.text) emit(".txt", out.text);
    if (config.emit.json) emit(".json", out.json);
    if (config.emit.svg) {
        emit(".summary.svg", out.charts.summary_svg);
        emit(".details.svg", out.charts.details_svg);
    }
    if (config.emit.heatmap) emit(".heatmap.svg", out.charts.heatmap_svg);
    if (config.emit.pool) emit(".pool.jsonl", out.pool_jsonl);
    result.analysis.report.seconds.output = clock.lap();
    return result;
}

std::string format_report(const RunReport& r) {
    std::string out;
    out += fmt::format("pool: {} descriptors", r.pool_size);
    if (r.infeasible > 0) out += fmt::format(" ({} infeasible ranges skipped)", r.infeasible);
    out += "\ncover cost per verbosity:";
    for (std::size_t k = 0; k < r.level_costs.size(); ++k) {
        out += std::isfinite(r.level_costs[k]) ? fmt::format(" v{}={:.4f}", k + 1, r.level_costs[k])
                                               : fmt::format(" v{}=infeasible", k + 1);
    }
    out += fmt::format("\nsummary level: {}{}\n", r.summary_level,
                       r.threshold_met ? "" : " (max_thr not met, best available level)");
    out += "details:";
    if (r.details.empty()) out += " none";
    for (const auto& d : r.details) out += fmt::format(" d{}@v{}", d.id, d.level);
    out += fmt::format("\nobjective: {:.6f}\nglobal rmse: {:.6f} (sum over zones {:.6f})\n",
                       r.objective, r.global_rmse, r.global_error_sum);
    const auto& t = r.seconds;
    out += fmt::format(
        "time: ingest {:.3f}s, fit {:.3f}s, cover {:.3f}s, details {:.3f}s, narrate {:.3f}s, "
        "output {:.3f}s, total {:.3f}s\n",
        t.ingest, t.fit, t.cover, t.details, t.narrate, t.output, t.total());
    return out;
}

std::vector<SweepRow> sweep(const RawSeries& raw, const RunConfig& config,
                            const std::vector<int>& levels_list) {
    std::vector<SweepRow> rows;
    for (int levels : levels_list) {
        SweepRow row;
        row.levels = levels;
        const auto start = std::chrono::steady_clock::now();
        try {
            auto cfg = config;
            cfg.levels = levels;
            const auto a = analyze(raw, cfg);
            row.ok = true;
            row.pool_size = a.pool.size();
            row.summary_level = a.selection.summary_level;
            row.global_rmse = a.selection.global_rmse;
        } catch (const Error& e) {
            row.error = fmt::format("{}: {}", stage_name(e.stage()), e.what());
        }
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<SweepRow> sweep(const RunConfig& config, const std::vector<int>& levels_list) {
    if (levels_list.empty()) return {};
    return sweep(load_series(config.input, config.format), config, levels_list);
}

std::string format_sweep(const std::vector<SweepRow>& rows) {
    std::string out = "levels  zones  pool   s  global_rmse  seconds\n";
    for (const auto& r : rows) {
        if (!r.ok) {
            out += fmt::format("{:>6}  {:>5}  failed: {}\n", r.levels, 1 << r.levels, r.error);
            continue;
        }
        out += fmt::format("{:>6}  {:>5}  {:>4}  {:>2}  {:>11.6f}  {:>7.3f}\n", r.levels,
                           1 << r.levels, r.pool_size, r.summary_level, r.global_rmse, r.seconds);
    }
    return out;
}

}  // namespace serinarr
