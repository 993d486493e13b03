#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "serinarr/prototypes.hpp"
#include "serinarr/series.hpp"

namespace serinarr {

/// A fitted prototype over the contiguous zone range [zone_start, zone_end]
/// with the RMSE of the fit inside each of those zones.
struct Descriptor {
    int id = -1;
    Curve curve;
    int zone_start = 0;
    int zone_end = 0;
    std::vector<double> zone_err;  // one entry per zone of the range

    CurveKind kind() const noexcept { return curve.kind(); }
    int span() const noexcept { return zone_end - zone_start + 1; }
    bool covers(int z) const noexcept { return z >= zone_start && z <= zone_end; }
    /// RMSE in zone z; +infinity outside the range.
    double err(int z) const noexcept;
    /// Sum of per-zone errors, accumulated in zone order.
    double cost() const noexcept;
};

class DescriptorPool {
public:
    DescriptorPool() = default;
    DescriptorPool(std::vector<Descriptor> descriptors, int n_zones, std::vector<CurveKind> kinds,
                   std::size_t infeasible = 0);

    const std::vector<Descriptor>& descriptors() const noexcept { return descriptors_; }
    std::size_t size() const noexcept { return descriptors_.size(); }
    int n_zones() const noexcept { return n_zones_; }
    const std::vector<CurveKind>& kinds() const noexcept { return kinds_; }
    /// Number of (kind, range) pairs dropped for having fewer samples than parameters.
    std::size_t infeasible() const noexcept { return infeasible_; }

    const Descriptor& at(int id) const;

private:
    std::vector<Descriptor> descriptors_;
    int n_zones_ = 0;
    std::vector<CurveKind> kinds_;
    std::size_t infeasible_ = 0;
    std::unordered_map<int, std::size_t> index_;
};

/// Least-squares fit of one prototype on zones i..j. Returns nullopt when the
/// range holds fewer samples than the kind has parameters. The returned
/// descriptor has id -1.
std::optional<Descriptor> fit_one(const TimeSeries& series, CurveKind kind, int i, int j);

/// kinds * n(n+1)/2
std::size_t expected_pool_size(int n_zones, std::size_t kind_count) noexcept;

/// Fits every kind on every contiguous zone range. Ids follow (kind, i, j)
/// order. threads == 0 picks SERINARR_THREADS or the hardware concurrency;
/// the result does not depend on the thread count.
DescriptorPool build_pool(const TimeSeries& series, std::span<const CurveKind> kinds,
                          unsigned threads = 0);

/// Thread count used when build_pool() is called with threads == 0.
unsigned default_fit_threads();

/// Per-zone RMSE of a curve against the samples of zones i..j.
std::vector<double> zone_rmse(const TimeSeries& series, const Curve& curve, int i, int j);

/// Total squared residual of a curve over zones i..j.
double total_sse(const TimeSeries& series, const Curve& curve, int i, int j);

}  // namespace serinarr
