#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "serinarr/cover.hpp"
#include "serinarr/details.hpp"
#include "serinarr/error.hpp"
#include "support.hpp"

using namespace serinarr;
using testing::fake;
using testing::level_of;

namespace {

// One full-range descriptor per level whose largest zone error is maxima[v-1].
struct LadderCase {
    DescriptorPool pool;
    std::vector<VerbosityLevel> levels;
};

LadderCase ladder(const std::vector<double>& maxima) {
    std::vector<Descriptor> ds;
    for (std::size_t k = 0; k < maxima.size(); ++k) {
        ds.push_back(fake(static_cast<int>(k), CurveKind::Line, 0, 3,
                          {0.01, maxima[k], 0.02, 0.01}, 4));
    }
    LadderCase c{DescriptorPool(ds, 4, {CurveKind::Line}), {}};
    for (std::size_t k = 0; k < maxima.size(); ++k) {
        c.levels.push_back(level_of(static_cast<int>(k + 1), {static_cast<int>(k)}, c.pool));
    }
    return c;
}

std::vector<oracle::Member> members(const DescriptorPool& pool, const std::vector<LevelledId>& ids) {
    std::vector<oracle::Member> out;
    for (const auto& d : ids) out.push_back({&pool.at(d.id), d.level});
    return out;
}

void check_against_oracle(const DescriptorPool& pool, const SelectionConfig& cfg, double max_thr) {
    const auto levels = solve_cover(pool, cfg.verbosity);
    const auto pick = pick_summary(pool, levels, max_thr);
    const auto result = solve_details(pool, levels, pick, cfg);
    const auto expected = oracle::enumerate_details(pool, levels, pick.level, cfg);

    CHECK(result.candidates <= 15);
    CHECK(result.objective == expected.objective);
    std::vector<int> ids;
    for (const auto& d : result.details) ids.push_back(d.id);
    CHECK(ids == expected.ids);

    std::vector<oracle::Member> all;
    for (int id : result.summary) all.push_back({&pool.at(id), pick.level});
    const auto dets = members(pool, result.details);
    all.insert(all.end(), dets.begin(), dets.end());
    CHECK(oracle::c1_holds(all, cfg.min_thr));
    CHECK(oracle::c2_holds(dets));
    CHECK(result.details.size() <= static_cast<std::size_t>(cfg.verbosity));
}

}  // namespace

TEST_CASE("summary level: first level under max_thr") {
    auto c = ladder({0.12, 0.1, 0.05});
    const auto pick = pick_summary(c.pool, c.levels, 0.15);
    CHECK(pick.level == 1);
    CHECK(pick.threshold_met);
    CHECK(pick.max_error == 0.12);
}

TEST_CASE("summary level: minimality") {
    const auto a = ladder({0.3, 0.2, 0.14, 0.1});
    CHECK(pick_summary(a.pool, a.levels, 0.15).level == 3);
    const auto c = ladder({0.2, 0.16, 0.14});
    CHECK(pick_summary(c.pool, c.levels, 0.15).level == 3);
}

TEST_CASE("summary level: strict threshold") {
    const auto c = ladder({0.15, 0.149});
    CHECK(pick_summary(c.pool, c.levels, 0.15).level == 2);
}

TEST_CASE("summary level: fallback to the smallest maximum") {
    const auto c = ladder({0.4, 0.3, 0.25, 0.18, 0.2});
    const auto pick = pick_summary(c.pool, c.levels, 0.15);
    CHECK(pick.level == 4);
    CHECK_FALSE(pick.threshold_met);
    const auto tie = ladder({0.4, 0.2, 0.2});
    CHECK(pick_summary(tie.pool, tie.levels, 0.15).level == 2);
}

TEST_CASE("summary level: noisy series misses the threshold") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto ts = testing::sampled([&](double) { return u(rng); }, 260, 4);
    const auto pool = build_pool(ts, kDefaultKinds);
    const auto levels = solve_cover(pool, 5);
    const auto pick = pick_summary(pool, levels, 0.15);
    CHECK_FALSE(pick.threshold_met);
    double lowest = 1e9;
    int at = 0;
    for (const auto& l : levels) {
        const double m = level_max_error(pool, l);
        if (m < lowest) {
            lowest = m;
            at = l.v;
        }
    }
    CHECK(pick.level == at);
}

TEST_CASE("check_improvement examples") {
    const auto coarse = fake(0, CurveKind::Line, 0, 3, {0.1, 0.1, 0.1, 0.1}, 8);
    CHECK(check_improvement(coarse, fake(1, CurveKind::Line, 4, 5, {0.0, 0.0}, 8), 0.02));
    CHECK_FALSE(check_improvement(coarse, fake(2, CurveKind::Line, 2, 3, {0.09, 0.085}, 8), 0.02));
    CHECK(check_improvement(coarse, fake(3, CurveKind::Line, 2, 3, {0.09, 0.079}, 8), 0.02));
}

TEST_CASE("no detail: objective 0") {
    DescriptorPool pool({fake(0, CurveKind::Line, 0, 3, {0.1, 0.1, 0.1, 0.1}, 4)}, 4,
                        {CurveKind::Line});
    const std::vector levels{level_of(1, {0}, pool)};
    const auto r = solve_details(pool, levels, {1, true, 0.1}, {0.15, 0.02, 1, 1e-4});
    CHECK(r.details.empty());
    CHECK(r.objective == 0.0);
    CHECK(r.global_error_sum == doctest::Approx(0.4));
    CHECK(r.global_rmse == doctest::Approx(0.1));
}

TEST_CASE("one detail better by 0.1 on four zones") {
    DescriptorPool pool({fake(0, CurveKind::Line, 0, 7, std::vector<double>(8, 0.2), 8),
                         fake(1, CurveKind::Line, 0, 3, std::vector<double>(4, 0.1), 8),
                         fake(2, CurveKind::Line, 4, 7, std::vector<double>(4, 0.2), 8)},
                        8, {CurveKind::Line});
    const std::vector levels{level_of(1, {0}, pool), level_of(2, {1, 2}, pool)};
    const SelectionConfig cfg{0.25, 0.02, 2, 1e-4};
    const auto r = solve_details(pool, levels, {1, true, 0.2}, cfg);
    REQUIRE(r.details.size() == 1);
    CHECK(r.details[0] == LevelledId{1, 2});
    CHECK(r.objective == doctest::Approx(0.4 - 4e-4).epsilon(1e-12));
    CHECK(r.objective == oracle::enumerate_details(pool, levels, 1, cfg).objective);
    for (int z = 0; z < 4; ++z) CHECK(r.zone_gain[static_cast<std::size_t>(z)] == doctest::Approx(0.1));
    for (int z = 4; z < 8; ++z) CHECK(r.zone_gain[static_cast<std::size_t>(z)] == 0.0);
    CHECK(r.global_error_sum == doctest::Approx(0.4 + 0.8));
}

TEST_CASE("improvement of exactly min_thr is not enough") {
    const double min_thr = 0.02;
    for (auto [fine, accepted] : {std::pair{0.02, false}, std::pair{0.02 - 1e-6, true}}) {
        DescriptorPool pool({fake(0, CurveKind::Line, 0, 3, {0.04, 0.04, 0.04, 0.04}, 4),
                             fake(1, CurveKind::Line, 0, 1, {fine, 0.04}, 4),
                             fake(2, CurveKind::Line, 2, 3, {0.04, 0.04}, 4)},
                            4, {CurveKind::Line});
        REQUIRE((0.04 - fine > min_thr) == accepted);
        const std::vector levels{level_of(1, {0}, pool), level_of(2, {1, 2}, pool)};
        const auto r = solve_details(pool, levels, {1, true, 0.04}, {0.15, min_thr, 2, 1e-4});
        CHECK(r.details.size() == (accepted ? 1U : 0U));
    }
}

TEST_CASE("details fully covered by finer details are dropped") {
    // level 2 detail on [0,3] would be fully re-covered by the two level 3 details
    DescriptorPool pool({fake(0, CurveKind::Line, 0, 7, std::vector<double>(8, 0.3), 8),
                         fake(1, CurveKind::Line, 0, 3, std::vector<double>(4, 0.2), 8),
                         fake(2, CurveKind::Line, 4, 7, std::vector<double>(4, 0.3), 8),
                         fake(3, CurveKind::Line, 0, 1, std::vector<double>(2, 0.05), 8),
                         fake(4, CurveKind::Line, 2, 3, std::vector<double>(2, 0.05), 8),
                         fake(5, CurveKind::Line, 4, 7, std::vector<double>(4, 0.3), 8)},
                        8, {CurveKind::Line});
    const std::vector levels{level_of(1, {0}, pool), level_of(2, {1, 2}, pool),
                             level_of(3, {3, 4, 5}, pool)};
    const SelectionConfig cfg{0.35, 0.02, 3, 1e-4};
    const auto r = solve_details(pool, levels, {1, true, 0.3}, cfg);
    std::vector<int> ids;
    for (const auto& d : r.details) ids.push_back(d.id);
    CHECK(ids == std::vector<int>{3, 4});
    CHECK(ids == oracle::enumerate_details(pool, levels, 1, cfg).ids);
}

TEST_CASE("candidates: union minus summary, lowest level kept") {
    DescriptorPool pool({fake(0, CurveKind::Line, 0, 3, {0.1, 0.1, 0.1, 0.1}, 4),
                         fake(1, CurveKind::Line, 0, 1, {0.1, 0.1}, 4),
                         fake(2, CurveKind::Line, 2, 3, {0.1, 0.1}, 4),
                         fake(3, CurveKind::Line, 0, 0, {0.1}, 4)},
                        4, {CurveKind::Line});
    const std::vector levels{level_of(1, {0}, pool), level_of(2, {1, 2}, pool),
                             level_of(3, {3, 1, 2}, pool)};
    const auto c = detail_candidates(levels, {1, true, 0.1}, 3);
    CHECK(c == std::vector<LevelledId>{{1, 2}, {2, 2}, {3, 3}});
    CHECK(detail_candidates(levels, {2, true, 0.1}, 3) == std::vector<LevelledId>{{0, 1}, {3, 3}});
    CHECK(detail_candidates(levels, {1, true, 0.1}, 2) == std::vector<LevelledId>{{1, 2}, {2, 2}});
}

TEST_CASE("detail solver equals subset enumeration") {
    std::mt19937_64 rng(314);
    int with_details = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const int n = trial % 2 ? 8 : 16;
        const auto pool = testing::random_pool(rng, n, 1 + trial % 3, 0.3);
        const SelectionConfig cfg{0.15, trial % 4 == 0 ? 0.1 : 0.02, 5, 1e-4};
        check_against_oracle(pool, cfg, cfg.max_thr);
        const auto levels = solve_cover(pool, 5);
        const auto r = solve_details(pool, levels, pick_summary(pool, levels, 0.15), cfg);
        if (!r.details.empty()) ++with_details;
    }
    CHECK(with_details > 20);
}

TEST_CASE("detail solver equals subset enumeration with frequent ties") {
    std::mt19937_64 rng(2718);
    std::uniform_int_distribution<int> q(0, 4);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Descriptor> ds;
        int id = 0;
        for (int i = 0; i < 8; ++i) {
            for (int j = i; j < 8; ++j) {
                std::vector<double> e;
                for (int z = i; z <= j; ++z) e.push_back(0.0625 * q(rng));
                ds.push_back(fake(id++, CurveKind::Line, i, j, e, 8));
            }
        }
        check_against_oracle(DescriptorPool(ds, 8, {CurveKind::Line}), {0.3, 0.0625, 4, 1e-3}, 0.3);
    }
}

TEST_CASE("raising min_thr never admits more pairs") {
    std::mt19937_64 rng(77);
    const auto pool = testing::random_pool(rng, 16, 3);
    const auto levels = solve_cover(pool, 5);
    std::vector<std::pair<const Descriptor*, int>> all;
    for (const auto& l : levels) {
        for (int id : l.chosen) all.push_back({&pool.at(id), l.v});
    }
    std::size_t previous = all.size() * all.size();
    for (double thr : {0.0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3}) {
        std::size_t admissible = 0;
        for (const auto& [a, la] : all) {
            for (const auto& [b, lb] : all) {
                if (la < lb && check_improvement(*a, *b, thr)) ++admissible;
            }
        }
        CHECK(admissible <= previous);
        previous = admissible;
    }
}

TEST_CASE("details never worsen the global error") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto pool = testing::random_pool(rng, 16, 3);
        const auto levels = solve_cover(pool, 5);
        const auto pick = pick_summary(pool, levels, 0.15);
        const auto r = solve_details(pool, levels, pick, {0.15, 0.02, 5, 1e-4});
        CHECK(r.global_error_sum <= global_error_sum(pool, r.summary));
        CHECK(r.global_rmse == r.global_error_sum / 16.0);
    }
}

TEST_CASE("selection config validation") {
    CHECK_NOTHROW(SelectionConfig{}.validate(16));
    CHECK_THROWS_AS((SelectionConfig{0.02, 0.02, 5, 1e-4}.validate(16)), Error);
    CHECK_THROWS_AS((SelectionConfig{0.15, 0.0, 5, 1e-4}.validate(16)), Error);
    CHECK_THROWS_AS((SelectionConfig{0.15, 0.02, 5, 1e-4}.validate(64)), Error);
    CHECK_THROWS_AS((SelectionConfig{0.15, 0.02, 0, 1e-4}.validate(16)), Error);
}

TEST_CASE("summary level above the verbosity is rejected") {
    DescriptorPool pool({fake(0, CurveKind::Line, 0, 1, {0.1, 0.1}, 2)}, 2, {CurveKind::Line});
    const std::vector levels{level_of(1, {0}, pool)};
    CHECK_THROWS_AS(solve_details(pool, levels, {2, true, 0.1}, {0.15, 0.02, 1, 1e-4}), Error);
}
