#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "serinarr/cover.hpp"
#include "serinarr/details.hpp"
#include "serinarr/fitting.hpp"
#include "serinarr/narration.hpp"
#include "serinarr/report_io.hpp"
#include "serinarr/series.hpp"
#include "serinarr/textgen.hpp"

namespace serinarr {

struct EmitFlags {
    bool text = true;
    bool json = true;
    bool svg = true;
    bool heatmap = true;
    bool pool = false;
};

/// Parses "text,json,svg,heatmap,pool" (any subset).
EmitFlags parse_emit(std::string_view list);

struct RunConfig {
    std::filesystem::path input;
    InputFormat format = InputFormat::Csv;
    int levels = 4;     // 2^levels zones
    int verbosity = 5;  // cover levels and detail bound
    double max_thr = 0.15;
    double min_thr = 0.02;
    std::optional<double> penalty_eps;  // derived from the other settings when unset
    std::vector<CurveKind> kinds{kDefaultKinds.begin(), kDefaultKinds.end()};
    std::filesystem::path out_dir = ".";
    std::string name;  // output file stem; defaults to the input stem
    EmitFlags emit;
    unsigned threads = 0;  // 0: SERINARR_THREADS or hardware concurrency

    /// levels in [1, 6], verbosity in [1, 8], max_thr > min_thr > 0.
    void validate() const;
    /// 1e-4 unless that would let the penalty reach min_thr for this grid.
    double effective_penalty() const;
    SelectionConfig selection() const;
    std::string stem() const;
};

struct StageTimes {
    double ingest = 0.0;
    double fit = 0.0;
    double cover = 0.0;
    double details = 0.0;
    double narrate = 0.0;
    double output = 0.0;

    double total() const noexcept { return ingest + fit + cover + details + narrate + output; }
};

struct RunReport {
    std::size_t pool_size = 0;
    std::size_t infeasible = 0;
    std::vector<double> level_costs;  // NaN for infeasible levels
    int summary_level = 0;
    bool threshold_met = true;
    std::vector<LevelledId> details;
    double objective = 0.0;
    double global_rmse = 0.0;
    double global_error_sum = 0.0;
    StageTimes seconds;
};

/// Everything one run computes, kept in memory.
struct Analysis {
    TimeSeries series;
    DescriptorPool pool;
    std::vector<VerbosityLevel> levels;
    SummaryPick summary;
    SelectionResult selection;
    std::vector<NarrationUnit> units;
    NarrationText text;
    RunReport report;
};

/// Normalize, fit, cover, select and narrate. Output-free.
Analysis analyze(const RawSeries& raw, const RunConfig& config);

/// Machine-readable run document: config, series, levels, selection,
/// selected descriptors, narration structure, text and heatmap data. Contains
/// no timings, so identical inputs give identical documents.
Json run_document(const Analysis& analysis, const RunConfig& config);

struct RenderedOutputs {
    std::string text;
    std::string json;
    ChartSet charts;
    std::string pool_jsonl;
};

RenderedOutputs render_outputs(const Analysis& analysis, const RunConfig& config);

/// Writes content to a temporary sibling then renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

struct RunResult {
    Analysis analysis;
    std::vector<std::filesystem::path> written;
};

/// Full pipeline: load the input, analyze, write the requested outputs.
RunResult run(const RunConfig& config);

/// Human-readable run report.
std::string format_report(const RunReport& report);

struct SweepRow {
    int levels = 0;
    bool ok = false;
    std::string error;
    std::size_t pool_size = 0;
    int summary_level = 0;
    double global_rmse = 0.0;
    double seconds = 0.0;
};

/// One analysis per entry of levels_list on the same raw series. A failing
/// entry is reported in its row and does not stop the others.
std::vector<SweepRow> sweep(const RawSeries& raw, const RunConfig& config,
                            const std::vector<int>& levels_list);
std::vector<SweepRow> sweep(const RunConfig& config, const std::vector<int>& levels_list);

std::string format_sweep(const std::vector<SweepRow>& rows);

}  // namespace serinarr
