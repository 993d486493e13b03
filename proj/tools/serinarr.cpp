// serinarr: narrate a time series as summary + detail sentences.
//
//   serinarr narrate --input series.csv --out-dir out
//   serinarr fit     --input series.csv --levels 5 > pool.jsonl
//   serinarr sweep   --input series.csv --sweep-levels 3,4,5
//   serinarr render  --from out/series.json --out-dir out

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "serinarr/error.hpp"
#include "serinarr/pipeline.hpp"

namespace {

using serinarr::Error;
using serinarr::Stage;

int exit_code(Stage stage) {
    switch (stage) {
        case Stage::Config: return 2;
        case Stage::Ingest: return 3;
        case Stage::Fit: return 4;
        case Stage::Solve: return 5;
        case Stage::Narrate: return 6;
        case Stage::Output: return 7;
    }
    return 1;
}

struct CliOptions {
    std::string input;
    std::string format = "csv";
    int levels = 4;
    int verbosity = 5;
    double max_thr = 0.15;
    double min_thr = 0.02;
    double penalty = -1.0;
    std::string kinds = "line,bilinear,tooth";
    std::string out_dir = ".";
    std::string name;
    std::string emit = "text,json,svg,heatmap";
    unsigned threads = 0;
    std::vector<int> sweep_levels;
    std::string from;
    bool quiet = false;
};

serinarr::RunConfig to_config(const CliOptions& o) {
    serinarr::RunConfig c;
    c.input = o.input;
    c.format = serinarr::parse_input_format(o.format);
    c.levels = o.levels;
    c.verbosity = o.verbosity;
    c.max_thr = o.max_thr;
    c.min_thr = o.min_thr;
    if (o.penalty >= 0.0) c.penalty_eps = o.penalty;
    c.kinds = serinarr::parse_kinds(o.kinds);
    c.out_dir = o.out_dir;
    c.name = o.name;
    c.emit = serinarr::parse_emit(o.emit);
    c.threads = o.threads;
    return c;
}

void require_input(const CliOptions& o) {
    if (o.input.empty()) throw Error(Stage::Config, "--input is required", "pass a series file");
}

int cmd_narrate(const CliOptions& o) {
    require_input(o);
    const auto config = to_config(o);
    const auto result = serinarr::run(config);
    std::cout << result.analysis.text.full_text << "\n\n";
    if (!o.quiet) {
        std::cout << serinarr::format_report(result.analysis.report);
        for (const auto& path : result.written) std::cout << "wrote " << path.string() << "\n";
    }
    return 0;
}

int cmd_fit(const CliOptions& o) {
    require_input(o);
    const auto config = to_config(o);
    config.validate();
    const auto raw = serinarr::load_series(config.input, config.format);
    const auto series = serinarr::normalize(raw, config.levels);
    const auto pool = serinarr::build_pool(series, config.kinds, config.threads);
    std::cout << serinarr::pool_dump(pool);
    std::cerr << fmt::format("{} descriptors over {} zones ({} infeasible ranges)\n", pool.size(),
                             pool.n_zones(), pool.infeasible());
    return 0;
}

int cmd_sweep(const CliOptions& o) {
    if (o.sweep_levels.empty()) {
        std::cout << serinarr::format_sweep({});
        return 0;
    }
    require_input(o);
    const auto config = to_config(o);
    const auto rows = serinarr::sweep(config, o.sweep_levels);
    std::cout << serinarr::format_sweep(rows);
    return 0;
}

int cmd_render(const CliOptions& o) {
    if (o.from.empty()) throw Error(Stage::Config, "--from is required", "pass a run .json file");
    std::ifstream in(o.from, std::ios::binary);
    if (!in) throw Error(Stage::Output, fmt::format("cannot open '{}'", o.from));
    std::ostringstream buffer;
    buffer << in.rdbuf();
    serinarr::Json doc;
    try {
        doc = serinarr::Json::parse(buffer.str());
    } catch (const serinarr::Json::exception& e) {
        throw Error(Stage::Output, fmt::format("'{}' is not valid JSON: {}", o.from, e.what()));
    }
    const auto charts = serinarr::render_from_document(doc);
    std::filesystem::path stem = o.name.empty() ? std::filesystem::path(o.from).stem().string() : o.name;
    std::filesystem::create_directories(o.out_dir);
    const auto base = std::filesystem::path(o.out_dir) / stem;
    for (const auto& [suffix, content] :
         {std::pair{".summary.svg", &charts.summary_svg}, std::pair{".details.svg", &charts.details_svg},
          std::pair{".heatmap.svg", &charts.heatmap_svg}}) {
        auto path = base;
        path += suffix;
        serinarr::write_atomic(path, *content);
        if (!o.quiet) std::cout << "wrote " << path.string() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Narrate a scalar time series as hierarchical summary and detail sentences"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Flat key = value file; command-line flags take precedence");

    CliOptions o;
    app.add_option("--input", o.input, "Series file");
    app.add_option("--format", o.format, "csv, trends_csv or json")->capture_default_str();
    app.add_option("--levels", o.levels, "Zone levels; 2^levels zones")->capture_default_str();
    app.add_option("--verbosity", o.verbosity, "Maximum verbosity / number of details")
        ->capture_default_str();
    app.add_option("--max-thr", o.max_thr, "Largest zone RMSE allowed in the summary")
        ->capture_default_str();
    app.add_option("--min-thr", o.min_thr, "Smallest zone improvement worth a detail")
        ->capture_default_str();
    app.add_option("--penalty", o.penalty, "Overlap penalty per detail and zone (default derived)");
    app.add_option("--kinds", o.kinds, "Curve prototypes: line,bilinear,tooth,sinusoid")
        ->capture_default_str();
    app.add_option("--out-dir", o.out_dir, "Output directory")->capture_default_str();
    app.add_option("--name", o.name, "Output file stem (default: input stem)");
    app.add_option("--emit", o.emit, "Outputs: text,json,svg,heatmap,pool")->capture_default_str();
    app.add_option("--threads", o.threads, "Fitting threads (0: SERINARR_THREADS or all cores)");
    app.add_flag("--quiet", o.quiet, "Print only the narration");

    auto* narrate = app.add_subcommand("narrate", "Run the full pipeline and write outputs");
    auto* fit = app.add_subcommand("fit", "Dump the descriptor pool as JSON lines");
    auto* sweep = app.add_subcommand("sweep", "Compare global RMSE across zone levels");
    sweep->add_option("--sweep-levels", o.sweep_levels, "Levels to compare, e.g. 3,4,5")
        ->delimiter(',');
    auto* render = app.add_subcommand("render", "Re-render charts from a saved run document");
    render->add_option("--from", o.from, "Run .json written by narrate");
    for (auto* sub : {narrate, fit, sweep, render}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*narrate) return cmd_narrate(o);
        if (*fit) return cmd_fit(o);
        if (*sweep) return cmd_sweep(o);
        if (*render) return cmd_render(o);
    } catch (const Error& e) {
        std::cerr << "error [" << serinarr::stage_name(e.stage()) << "]: " << e.what() << "\n";
        if (!e.hint().empty()) std::cerr << "hint: " << e.hint() << "\n";
        return exit_code(e.stage());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
