#include "serinarr/cover.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

#include <fmt/format.h>

#include "serinarr/error.hpp"

namespace serinarr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool better(const Descriptor& cand, double cand_cost, const Descriptor& incumbent,
            double incumbent_cost) {
    return std::tuple(cand_cost, static_cast<int>(cand.kind()), cand.id) <
           std::tuple(incumbent_cost, static_cast<int>(incumbent.kind()), incumbent.id);
}

}  // namespace

SegmentTable::SegmentTable(const DescriptorPool& pool)
    : n_(pool.n_zones()), cells_(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_)) {
    for (const auto& d : pool.descriptors()) {
        auto& cell = cells_[static_cast<std::size_t>(d.zone_start) * static_cast<std::size_t>(n_) +
                            static_cast<std::size_t>(d.zone_end)];
        const double cost = d.cost();
        if (!cell || better(d, cost, pool.at(cell->id), cell->cost)) {
            cell = SegmentChoice{d.id, cost};
        }
    }
}

const std::optional<SegmentChoice>& SegmentTable::best(int i, int j) const {
    if (i < 0 || j >= n_ || i > j) {
        throw Error(Stage::Solve, fmt::format("invalid zone range [{}, {}]", i, j));
    }
    return cells_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
                  static_cast<std::size_t>(j)];
}

SegmentChoice best_segment_cost(const DescriptorPool& pool, int i, int j) {
    const SegmentTable table(pool);
    const auto& cell = table.best(i, j);
    if (!cell) {
        throw Error(Stage::Solve, fmt::format("no feasible descriptor spans zones [{}, {}]", i, j));
    }
    return *cell;
}

int min_span_for(int n_zones, int v) noexcept {
    if (v >= 31) return 1;
    const long long denom = 1LL << v;
    const auto span = static_cast<int>((n_zones + denom - 1) / denom);
    return std::max(1, span);
}

std::vector<VerbosityLevel> solve_cover(const DescriptorPool& pool, int v_max) {
    if (v_max < 1) throw Error(Stage::Config, "verbosity must be at least 1");
    const SegmentTable table(pool);
    const int n = pool.n_zones();
    const auto width = static_cast<std::size_t>(n) + 1;

    std::vector<VerbosityLevel> levels;
    for (int v = 1; v <= v_max; ++v) {
        VerbosityLevel level;
        level.v = v;
        level.min_span = min_span_for(n, v);
        const int span = level.min_span;
        if (static_cast<long long>(v) * span > n) {
            levels.push_back(level);
            continue;
        }
        // cost[k][p]: best cover of zones [0, p) with k segments.
        std::vector<double> cost(static_cast<std::size_t>(v + 1) * width, kInf);
        std::vector<int> cut(static_cast<std::size_t>(v + 1) * width, -1);
        auto at = [&](std::vector<double>& t, int k, int p) -> double& {
            return t[static_cast<std::size_t>(k) * width + static_cast<std::size_t>(p)];
        };
        at(cost, 0, 0) = 0.0;
        for (int k = 1; k <= v; ++k) {
            for (int p = k * span; p <= n; ++p) {
                double best = kInf;
                int best_q = -1;
                for (int q = (k - 1) * span; q + span <= p; ++q) {
                    const double prev = at(cost, k - 1, q);
                    if (prev == kInf) continue;
                    const auto& seg = table.best(q, p - 1);
                    if (!seg) continue;
                    const double total = prev + seg->cost;
                    if (total < best) {
                        best = total;
                        best_q = q;
                    }
                }
                at(cost, k, p) = best;
                cut[static_cast<std::size_t>(k) * width + static_cast<std::size_t>(p)] = best_q;
            }
        }
        if (at(cost, v, n) == kInf) {
            levels.push_back(level);
            continue;
        }
        level.feasible = true;
        level.cost = at(cost, v, n);
        int p = n;
        for (int k = v; k >= 1; --k) {
            const int q = cut[static_cast<std::size_t>(k) * width + static_cast<std::size_t>(p)];
            level.chosen.push_back(table.best(q, p - 1)->id);
            p = q;
        }
        std::reverse(level.chosen.begin(), level.chosen.end());
        levels.push_back(std::move(level));
    }
    return levels;
}

std::vector<std::vector<double>> cover_error_matrix(const DescriptorPool& pool,
                                                    const std::vector<VerbosityLevel>& levels) {
    const auto n = static_cast<std::size_t>(pool.n_zones());
    std::vector<std::vector<double>> matrix;
    for (const auto& level : levels) {
        std::vector<double> row(n, std::numeric_limits<double>::quiet_NaN());
        for (int id : level.chosen) {
            const auto& d = pool.at(id);
            for (int z = d.zone_start; z <= d.zone_end; ++z) {
                row[static_cast<std::size_t>(z)] = d.err(z);
            }
        }
        matrix.push_back(std::move(row));
    }
    return matrix;
}

}  // namespace serinarr
