#pragma once

#include <optional>
#include <vector>

#include "serinarr/fitting.hpp"

namespace serinarr {

struct SegmentChoice {
    int id = -1;
    double cost = 0.0;
};

/// Optimal cover of the zone axis with exactly v descriptors.
struct VerbosityLevel {
    int v = 0;
    bool feasible = false;
    int min_span = 0;         // ceil(n / 2^v)
    std::vector<int> chosen;  // descriptor ids sorted by zone_start
    double cost = 0.0;        // sum of per-zone errors of the chosen descriptors
};

/// Best descriptor for every exact zone range [i, j]: lowest summed zone
/// error, then kind order, then id.
class SegmentTable {
public:
    explicit SegmentTable(const DescriptorPool& pool);

    int n_zones() const noexcept { return n_; }
    const std::optional<SegmentChoice>& best(int i, int j) const;

private:
    int n_ = 0;
    std::vector<std::optional<SegmentChoice>> cells_;  // row-major n x n, i <= j
};

/// Throws Error(Stage::Solve) when no descriptor spans exactly [i, j].
SegmentChoice best_segment_cost(const DescriptorPool& pool, int i, int j);

/// Minimum descriptor span at verbosity v: ceil(n / 2^v), at least 1.
int min_span_for(int n_zones, int v) noexcept;

/// Exact optimum for v = 1..v_max by dynamic programming over cut positions.
/// Levels that cannot place v segments of the minimum span come back with
/// feasible == false.
std::vector<VerbosityLevel> solve_cover(const DescriptorPool& pool, int v_max);

/// levels.size() x n matrix of the covering descriptor's error per zone. Rows
/// of infeasible levels are NaN.
std::vector<std::vector<double>> cover_error_matrix(const DescriptorPool& pool,
                                                    const std::vector<VerbosityLevel>& levels);

}  // namespace serinarr
