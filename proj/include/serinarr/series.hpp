#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace serinarr {

enum class InputFormat { Csv, TrendsCsv, Json };

InputFormat parse_input_format(std::string_view name);
std::string_view format_name(InputFormat format) noexcept;

/// Series as read from disk: strictly increasing timestamps (or indices).
struct RawSeries {
    std::vector<double> t;
    std::vector<double> y;

    std::size_t size() const noexcept { return t.size(); }
};

/// Half-open sample index range [begin, end).
struct SampleRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end - begin; }
    bool empty() const noexcept { return begin == end; }
};

/// Series normalized to the unit square, split into 2^levels equal-width
/// zones on the x axis. Every zone holds at least one sample.
class TimeSeries {
public:
    TimeSeries(std::vector<double> xs, std::vector<double> ys, double y_min, double y_max,
               int levels);

    const std::vector<double>& xs() const noexcept { return xs_; }
    const std::vector<double>& ys() const noexcept { return ys_; }
    std::size_t size() const noexcept { return xs_.size(); }

    double y_min() const noexcept { return y_min_; }
    double y_max() const noexcept { return y_max_; }
    int levels() const noexcept { return levels_; }
    int n_zones() const noexcept { return n_zones_; }

    int zone_of(std::size_t sample) const { return zone_of_.at(sample); }
    const std::vector<int>& zone_index() const noexcept { return zone_of_; }

    /// Samples falling in zone z.
    SampleRange zone_samples(int z) const;
    /// Samples falling in zones first..last (inclusive).
    SampleRange range_samples(int first, int last) const;

    /// Zone boundaries on the normalized axis.
    double zone_lo(int z) const noexcept { return static_cast<double>(z) / n_zones_; }
    double zone_hi(int z) const noexcept { return static_cast<double>(z + 1) / n_zones_; }

    /// Maps a normalized value back to the original scale.
    double denormalize(double y) const noexcept { return y_min_ + y * (y_max_ - y_min_); }

    /// Arithmetic mean of the samples in zones first..last.
    double mean(int first, int last) const;

private:
    std::vector<double> xs_;
    std::vector<double> ys_;
    double y_min_;
    double y_max_;
    int levels_;
    int n_zones_;
    std::vector<int> zone_of_;
    std::vector<std::size_t> zone_begin_;  // n_zones + 1 offsets
};

RawSeries parse_series(std::string_view text, InputFormat format);
RawSeries load_series(const std::filesystem::path& path, InputFormat format);

/// Min-max scales both axes to [0,1] and assigns zones. A constant series
/// maps to 0.5. Throws Error(Stage::Ingest) naming the first empty zone.
TimeSeries normalize(const RawSeries& raw, int levels);

/// zone index of a normalized position: min(floor(x * n), n - 1).
int zone_for(double x, int n_zones) noexcept;

}  // namespace serinarr
