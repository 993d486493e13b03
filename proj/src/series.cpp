#include "serinarr/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "serinarr/error.hpp"

namespace serinarr {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\"");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\"");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos
                                                                         : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
    auto lines = split(text, '\n');
    for (auto& line : lines) {
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    }
    return lines;
}

void check_series(const RawSeries& raw) {
    if (raw.size() < 2) {
        throw Error(Stage::Ingest, fmt::format("series has {} point(s), at least 2 required",
                                               raw.size()));
    }
    for (std::size_t k = 1; k < raw.size(); ++k) {
        if (!(raw.t[k] > raw.t[k - 1])) {
            throw Error(Stage::Ingest,
                        fmt::format("timestamps not strictly increasing at row {} ({} after {})",
                                    k, raw.t[k], raw.t[k - 1]),
                        "sort the input by time and drop duplicate timestamps");
        }
    }
}

RawSeries parse_csv(std::string_view text) {
    RawSeries raw;
    std::optional<std::size_t> columns;
    bool seen_row = false;
    int line_no = 0;
    for (auto line : lines_of(text)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() > 2) {
            throw Error(Stage::Ingest, fmt::format("line {}: expected 1 or 2 columns, got {}",
                                                   line_no, fields.size()));
        }
        std::optional<double> t;
        std::optional<double> y;
        if (fields.size() == 1) {
            y = parse_number(fields[0]);
            t = static_cast<double>(raw.size());
        } else {
            t = parse_number(fields[0]);
            y = parse_number(fields[1]);
        }
        if (!t || !y) {
            if (!seen_row) {
                seen_row = true;  // header
                continue;
            }
            throw Error(Stage::Ingest, fmt::format("line {}: cannot parse '{}'", line_no, line));
        }
        if (columns && *columns != fields.size()) {
            throw Error(Stage::Ingest, fmt::format("line {}: column count changed", line_no));
        }
        columns = fields.size();
        seen_row = true;
        raw.t.push_back(*t);
        raw.y.push_back(*y);
    }
    return raw;
}

// Export layout: two metadata lines, a "Week,<term>" header, then date,value
// rows. Values below the reporting floor appear as "<1".
RawSeries parse_trends_csv(std::string_view text) {
    RawSeries raw;
    std::string previous_date;
    const auto lines = lines_of(text);
    for (std::size_t k = 2; k < lines.size(); ++k) {
        const auto line = lines[k];
        if (trim(line).empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() < 2) {
            if (raw.size() == 0) continue;
            throw Error(Stage::Ingest, fmt::format("line {}: expected date,value", k + 1));
        }
        const auto date = trim(fields[0]);
        const auto token = trim(fields[1]);
        std::optional<double> value = token == "<1" ? std::optional<double>(0.5)
                                                    : parse_number(token);
        if (!value) {
            if (raw.size() == 0) continue;  // header row(s)
            throw Error(Stage::Ingest, fmt::format("line {}: bad value '{}'", k + 1, token));
        }
        if (!previous_date.empty() && !(std::string(date) > previous_date)) {
            throw Error(Stage::Ingest,
                        fmt::format("line {}: date '{}' does not follow '{}'", k + 1, date,
                                    previous_date));
        }
        previous_date = std::string(date);
        raw.t.push_back(static_cast<double>(raw.size()));
        raw.y.push_back(*value);
    }
    return raw;
}

RawSeries parse_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Stage::Ingest, fmt::format("invalid JSON: {}", e.what()));
    }
    RawSeries raw;
    try {
        if (doc.contains("points")) {
            for (const auto& p : doc.at("points")) {
                raw.t.push_back(p.at("t").get<double>());
                raw.y.push_back(p.at("v").get<double>());
            }
        } else if (doc.contains("values")) {
            for (const auto& v : doc.at("values")) {
                raw.t.push_back(static_cast<double>(raw.t.size()));
                raw.y.push_back(v.get<double>());
            }
        } else {
            throw Error(Stage::Ingest, "JSON input needs a \"points\" or \"values\" array");
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(Stage::Ingest, fmt::format("malformed JSON series: {}", e.what()));
    }
    return raw;
}

}  // namespace

InputFormat parse_input_format(std::string_view name) {
    if (name == "csv") return InputFormat::Csv;
    if (name == "trends_csv" || name == "trends") return InputFormat::TrendsCsv;
    if (name == "json") return InputFormat::Json;
    throw Error(Stage::Config, fmt::format("unknown input format '{}'", name),
                "use one of csv, trends_csv, json");
}

std::string_view format_name(InputFormat format) noexcept {
    switch (format) {
        case InputFormat::Csv: return "csv";
        case InputFormat::TrendsCsv: return "trends_csv";
        case InputFormat::Json: return "json";
    }
    return "?";
}

RawSeries parse_series(std::string_view text, InputFormat format) {
    RawSeries raw;
    switch (format) {
        case InputFormat::Csv: raw = parse_csv(text); break;
        case InputFormat::TrendsCsv: raw = parse_trends_csv(text); break;
        case InputFormat::Json: raw = parse_json(text); break;
    }
    check_series(raw);
    return raw;
}

RawSeries load_series(const std::filesystem::path& path, InputFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Stage::Ingest, fmt::format("cannot open '{}'", path.string()),
                    "check --input");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_series(buffer.str(), format);
}

int zone_for(double x, int n_zones) noexcept {
    const auto z = static_cast<int>(std::floor(x * n_zones));
    return std::clamp(z, 0, n_zones - 1);
}

TimeSeries::TimeSeries(std::vector<double> xs, std::vector<double> ys, double y_min,
                       double y_max, int levels)
    : xs_(std::move(xs)),
      ys_(std::move(ys)),
      y_min_(y_min),
      y_max_(y_max),
      levels_(levels),
      n_zones_(1 << levels) {
    zone_of_.resize(xs_.size());
    zone_begin_.assign(static_cast<std::size_t>(n_zones_) + 1, 0);
    std::vector<std::size_t> counts(static_cast<std::size_t>(n_zones_), 0);
    for (std::size_t k = 0; k < xs_.size(); ++k) {
        zone_of_[k] = zone_for(xs_[k], n_zones_);
        ++counts[static_cast<std::size_t>(zone_of_[k])];
    }
    for (int z = 0; z < n_zones_; ++z) {
        if (counts[static_cast<std::size_t>(z)] == 0) {
            throw Error(Stage::Ingest,
                        fmt::format("zone {} of {} contains no samples", z, n_zones_),
                        "lower --levels or provide a denser series");
        }
        zone_begin_[static_cast<std::size_t>(z) + 1] =
            zone_begin_[static_cast<std::size_t>(z)] + counts[static_cast<std::size_t>(z)];
    }
}

SampleRange TimeSeries::zone_samples(int z) const {
    return range_samples(z, z);
}

SampleRange TimeSeries::range_samples(int first, int last) const {
    if (first < 0 || last >= n_zones_ || first > last) {
        throw Error(Stage::Fit, fmt::format("invalid zone range [{}, {}]", first, last));
    }
    return {zone_begin_[static_cast<std::size_t>(first)],
            zone_begin_[static_cast<std::size_t>(last) + 1]};
}

double TimeSeries::mean(int first, int last) const {
    const auto r = range_samples(first, last);
    double sum = 0.0;
    for (auto k = r.begin; k < r.end; ++k) sum += ys_[k];
    return sum / static_cast<double>(r.size());
}

TimeSeries normalize(const RawSeries& raw, int levels) {
    check_series(raw);
    if (levels < 1 || levels > 20) {
        throw Error(Stage::Config, fmt::format("levels must be >= 1, got {}", levels));
    }
    const std::size_t n_zones = std::size_t{1} << levels;
    if (n_zones > raw.size()) {
        throw Error(Stage::Ingest,
                    fmt::format("{} zones need at least {} samples, series has {}", n_zones,
                                n_zones, raw.size()),
                    "lower --levels");
    }
    const double t0 = raw.t.front();
    const double t_span = raw.t.back() - t0;
    const auto [lo_it, hi_it] = std::minmax_element(raw.y.begin(), raw.y.end());
    const double y_min = *lo_it;
    const double y_max = *hi_it;
    const double y_span = y_max - y_min;

    std::vector<double> xs(raw.size());
    std::vector<double> ys(raw.size());
    for (std::size_t k = 0; k < raw.size(); ++k) {
        xs[k] = (raw.t[k] - t0) / t_span;
        ys[k] = y_span > 0.0 ? (raw.y[k] - y_min) / y_span : 0.5;
    }
    xs.front() = 0.0;
    xs.back() = 1.0;
    return TimeSeries(std::move(xs), std::move(ys), y_min, y_max, levels);
}

}  // namespace serinarr
