#pragma once

#include <vector>

#include "serinarr/cover.hpp"
#include "serinarr/fitting.hpp"

namespace serinarr {

struct SelectionConfig {
    double max_thr = 0.15;  // largest zone RMSE the summary may show
    double min_thr = 0.02;  // smallest zone improvement that justifies a finer description
    int verbosity = 5;      // cover levels 1..v feed the selection; at most v details
    double penalty_eps = 1e-4;

    /// Throws Error(Stage::Config) unless max_thr > min_thr > 0 and the
    /// overlap penalty stays below min_thr (penalty_eps * v * n < min_thr).
    void validate(int n_zones) const;
};

struct SummaryPick {
    int level = 0;               // verbosity s of the summary
    bool threshold_met = false;  // false: no level stays under max_thr, s minimizes the max
    double max_error = 0.0;      // largest zone error of D_s
};

/// Largest per-zone error of a feasible cover level.
double level_max_error(const DescriptorPool& pool, const VerbosityLevel& level);

/// Smallest feasible s whose every zone error is < max_thr, otherwise the
/// level with the smallest maximum (lowest s on ties).
SummaryPick pick_summary(const DescriptorPool& pool, const std::vector<VerbosityLevel>& levels,
                         double max_thr);

/// Cross-level admissibility of a coarse descriptor and a finer one: true
/// when the ranges are disjoint or some shared zone improves by more than
/// min_thr (strict).
bool check_improvement(const Descriptor& coarse, const Descriptor& fine, double min_thr);

struct LevelledId {
    int id = -1;
    int level = 0;

    friend bool operator==(const LevelledId&, const LevelledId&) = default;
};

/// Union of D_1..D_v minus the summary descriptors, sorted by id. A descriptor
/// present in several levels keeps the lowest one.
std::vector<LevelledId> detail_candidates(const std::vector<VerbosityLevel>& levels,
                                          const SummaryPick& summary, int verbosity);

struct SelectionResult {
    int summary_level = 0;
    bool threshold_met = true;
    std::vector<int> summary;  // ids of D_s, sorted by zone
    std::vector<LevelledId> details;  // sorted by id
    double objective = 0.0;
    std::vector<double> zone_gain;  // best-worst spread per zone, 0 where no detail
    double global_error_sum = 0.0;  // sum over zones of the best selected error
    double global_rmse = 0.0;       // global_error_sum / n_zones
    std::size_t candidates = 0;
    std::size_t nodes_explored = 0;
};

/// Exact maximizer of the detail objective over subsets of the candidates
/// with at most v members, subject to pairwise cross-level improvement and
/// non-redundancy against finer details. Branch and bound over candidates
/// in id order.
SelectionResult solve_details(const DescriptorPool& pool, const std::vector<VerbosityLevel>& levels,
                              const SummaryPick& summary, const SelectionConfig& cfg);

/// Sum over zones of the smallest error among the given descriptors covering
/// each zone. Zones no descriptor covers count as +infinity.
double global_error_sum(const DescriptorPool& pool, const std::vector<int>& ids);

}  // namespace serinarr
