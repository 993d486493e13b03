#include "serinarr/details.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <fmt/format.h>

#include "serinarr/error.hpp"

namespace serinarr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Member {
    const Descriptor* d;
    int level;
};

// Branch-and-bound state for one solve.
class DetailSearch {
public:
    DetailSearch(const DescriptorPool& pool, const std::vector<int>& summary, int summary_level,
                 std::vector<LevelledId> candidates, const SelectionConfig& cfg)
        : cfg_(cfg), n_(pool.n_zones()), candidates_(std::move(candidates)) {
        for (int id : summary) summary_.push_back({&pool.at(id), summary_level});
        for (const auto& c : candidates_) members_.push_back({&pool.at(c.id), c.level});

        const auto m = members_.size();
        compatible_.assign(m * m, true);
        with_summary_.assign(m, true);
        for (std::size_t a = 0; a < m; ++a) {
            for (const auto& s : summary_) with_summary_[a] = with_summary_[a] && admissible(members_[a], s);
            for (std::size_t b = 0; b < m; ++b) {
                compatible_[a * m + b] = admissible(members_[a], members_[b]);
            }
        }
        summary_err_.assign(static_cast<std::size_t>(n_), kInf);
        for (const auto& s : summary_) {
            for (int z = s.d->zone_start; z <= s.d->zone_end; ++z) {
                summary_err_[static_cast<std::size_t>(z)] =
                    std::min(summary_err_[static_cast<std::size_t>(z)], s.d->err(z));
            }
        }
    }

    SelectionResult run() {
        std::vector<std::size_t> chosen;
        search(0, chosen);
        SelectionResult result;
        result.objective = best_objective_;
        for (auto k : best_) result.details.push_back(candidates_[k]);
        result.candidates = candidates_.size();
        result.nodes_explored = nodes_;
        return result;
    }

private:
    bool admissible(const Member& a, const Member& b) const {
        if (a.level == b.level) return true;
        const auto& coarse = a.level < b.level ? a : b;
        const auto& fine = a.level < b.level ? b : a;
        return check_improvement(*coarse.d, *fine.d, cfg_.min_thr);
    }

    // A detail may not be fully re-worded by finer selected details.
    bool redundant(const std::vector<std::size_t>& chosen) const {
        for (auto a : chosen) {
            const auto& da = members_[a];
            bool all_covered = true;
            for (int z = da.d->zone_start; z <= da.d->zone_end && all_covered; ++z) {
                bool covered = false;
                for (auto b : chosen) {
                    const auto& db = members_[b];
                    if (db.level > da.level && db.d->covers(z)) {
                        covered = true;
                        break;
                    }
                }
                all_covered = covered;
            }
            if (all_covered) return true;
        }
        return false;
    }

    // Sum of max-min spreads over zones touched by a detail, minus the
    // overlap penalty for `counted` detail-zone incidences.
    double objective_of(const std::vector<std::size_t>& members, std::size_t counted) const {
        double gain = 0.0;
        for (int z = 0; z < n_; ++z) {
            double hi = summary_err_[static_cast<std::size_t>(z)];
            double lo = hi;
            bool touched = false;
            for (auto k : members) {
                const auto& d = *members_[k].d;
                if (!d.covers(z)) continue;
                touched = true;
                hi = std::max(hi, d.err(z));
                lo = std::min(lo, d.err(z));
            }
            if (touched) gain += hi - lo;
        }
        return gain - cfg_.penalty_eps * static_cast<double>(counted);
    }

    static std::size_t incidences(const std::vector<Member>& members,
                                  const std::vector<std::size_t>& chosen) {
        std::size_t count = 0;
        for (auto k : chosen) count += static_cast<std::size_t>(members[k].d->span());
        return count;
    }

    bool fits(const std::vector<std::size_t>& chosen, std::size_t k) const {
        if (!with_summary_[k]) return false;
        const auto m = members_.size();
        return std::all_of(chosen.begin(), chosen.end(),
                           [&](std::size_t c) { return compatible_[c * m + k]; });
    }

    bool improves(double objective, const std::vector<std::size_t>& chosen) const {
        if (objective != best_objective_) return objective > best_objective_;
        if (chosen.size() != best_.size()) return chosen.size() < best_.size();
        std::vector<int> a, b;
        for (auto k : chosen) a.push_back(candidates_[k].id);
        for (auto k : best_) b.push_back(candidates_[k].id);
        return a < b;
    }

    void search(std::size_t next, std::vector<std::size_t>& chosen) {
        ++nodes_;
        const double objective = objective_of(chosen, incidences(members_, chosen));
        if (improves(objective, chosen)) {
            best_objective_ = objective;
            best_ = chosen;
        }
        if (chosen.size() >= static_cast<std::size_t>(cfg_.verbosity)) return;

        std::vector<std::size_t> reachable = chosen;
        for (auto k = next; k < members_.size(); ++k) {
            if (fits(chosen, k)) reachable.push_back(k);
        }
        if (reachable.size() == chosen.size()) return;
        const double bound = objective_of(reachable, incidences(members_, chosen));
        if (bound < best_objective_) return;

        for (auto k = next; k < members_.size(); ++k) {
            if (!fits(chosen, k)) continue;
            chosen.push_back(k);
            if (!redundant(chosen)) search(k + 1, chosen);
            chosen.pop_back();
        }
    }

    const SelectionConfig& cfg_;
    int n_;
    std::vector<LevelledId> candidates_;
    std::vector<Member> summary_;
    std::vector<Member> members_;
    std::vector<bool> compatible_;
    std::vector<bool> with_summary_;
    std::vector<double> summary_err_;
    double best_objective_ = -kInf;
    std::vector<std::size_t> best_;
    std::size_t nodes_ = 0;
};

}  // namespace

void SelectionConfig::validate(int n_zones) const {
    if (!(min_thr > 0.0)) throw Error(Stage::Config, "min_thr must be positive");
    if (!(max_thr > min_thr)) {
        throw Error(Stage::Config, fmt::format("max_thr ({}) must exceed min_thr ({})", max_thr,
                                               min_thr));
    }
    if (verbosity < 1) throw Error(Stage::Config, "verbosity must be at least 1");
    if (!(penalty_eps >= 0.0)) throw Error(Stage::Config, "penalty must be non-negative");
    if (!(penalty_eps * verbosity * n_zones < min_thr)) {
        throw Error(Stage::Config,
                    fmt::format("penalty {} * v {} * zones {} must stay below min_thr {}",
                                penalty_eps, verbosity, n_zones, min_thr),
                    "lower the penalty or the number of levels");
    }
}

double level_max_error(const DescriptorPool& pool, const VerbosityLevel& level) {
    double worst = 0.0;
    for (int id : level.chosen) {
        for (double e : pool.at(id).zone_err) worst = std::max(worst, e);
    }
    return worst;
}

SummaryPick pick_summary(const DescriptorPool& pool, const std::vector<VerbosityLevel>& levels,
                         double max_thr) {
    std::optional<SummaryPick> fallback;
    for (const auto& level : levels) {
        if (!level.feasible) continue;
        const double worst = level_max_error(pool, level);
        if (worst < max_thr) return {level.v, true, worst};
        if (!fallback || worst < fallback->max_error) fallback = SummaryPick{level.v, false, worst};
    }
    if (!fallback) throw Error(Stage::Solve, "no feasible cover level to summarize from");
    return *fallback;
}

bool check_improvement(const Descriptor& coarse, const Descriptor& fine, double min_thr) {
    const int lo = std::max(coarse.zone_start, fine.zone_start);
    const int hi = std::min(coarse.zone_end, fine.zone_end);
    if (lo > hi) return true;
    for (int z = lo; z <= hi; ++z) {
        if (coarse.err(z) - fine.err(z) > min_thr) return true;
    }
    return false;
}

std::vector<LevelledId> detail_candidates(const std::vector<VerbosityLevel>& levels,
                                          const SummaryPick& summary, int verbosity) {
    std::vector<int> summary_ids;
    for (const auto& level : levels) {
        if (level.v == summary.level) summary_ids = level.chosen;
    }
    std::map<int, int> lowest;
    for (const auto& level : levels) {
        if (!level.feasible || level.v > verbosity) continue;
        for (int id : level.chosen) {
            if (std::find(summary_ids.begin(), summary_ids.end(), id) != summary_ids.end()) continue;
            auto [it, inserted] = lowest.emplace(id, level.v);
            if (!inserted) it->second = std::min(it->second, level.v);
        }
    }
    std::vector<LevelledId> out;
    for (const auto& [id, level] : lowest) out.push_back({id, level});
    return out;
}

double global_error_sum(const DescriptorPool& pool, const std::vector<int>& ids) {
    double sum = 0.0;
    for (int z = 0; z < pool.n_zones(); ++z) {
        double best = kInf;
        for (int id : ids) best = std::min(best, pool.at(id).err(z));
        sum += best;
    }
    return sum;
}

SelectionResult solve_details(const DescriptorPool& pool, const std::vector<VerbosityLevel>& levels,
                              const SummaryPick& summary, const SelectionConfig& cfg) {
    cfg.validate(pool.n_zones());
    if (summary.level < 1 || summary.level > cfg.verbosity) {
        throw Error(Stage::Solve, fmt::format("summary level {} outside 1..{}", summary.level,
                                              cfg.verbosity));
    }
    const auto level_it = std::find_if(levels.begin(), levels.end(),
                                       [&](const auto& l) { return l.v == summary.level; });
    if (level_it == levels.end() || !level_it->feasible) {
        throw Error(Stage::Solve, fmt::format("summary level {} is not a feasible cover",
                                              summary.level));
    }

    DetailSearch search(pool, level_it->chosen, summary.level,
                        detail_candidates(levels, summary, cfg.verbosity), cfg);
    auto result = search.run();
    result.summary_level = summary.level;
    result.threshold_met = summary.threshold_met;
    result.summary = level_it->chosen;

    const auto n = static_cast<std::size_t>(pool.n_zones());
    result.zone_gain.assign(n, 0.0);
    for (std::size_t z = 0; z < n; ++z) {
        const int zi = static_cast<int>(z);
        bool touched = false;
        double hi = 0.0, lo = kInf;
        for (int id : result.summary) {
            const auto& d = pool.at(id);
            if (!d.covers(zi)) continue;
            hi = std::max(hi, d.err(zi));
            lo = std::min(lo, d.err(zi));
        }
        for (const auto& det : result.details) {
            const auto& d = pool.at(det.id);
            if (!d.covers(zi)) continue;
            touched = true;
            hi = std::max(hi, d.err(zi));
            lo = std::min(lo, d.err(zi));
        }
        if (touched) result.zone_gain[z] = hi - lo;
    }

    std::vector<int> selected = result.summary;
    for (const auto& det : result.details) selected.push_back(det.id);
    result.global_error_sum = global_error_sum(pool, selected);
    result.global_rmse = result.global_error_sum / static_cast<double>(n);
    return result;
}

}  // namespace serinarr
