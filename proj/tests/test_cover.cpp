#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "serinarr/cover.hpp"
#include "serinarr/error.hpp"
#include "support.hpp"

using namespace serinarr;
using testing::fake;

TEST_CASE("best segment: single kind") {
    DescriptorPool pool({fake(0, CurveKind::Line, 0, 1, {0.1, 0.2}, 2),
                         fake(1, CurveKind::Line, 0, 0, {0.3}, 2)},
                        2, {CurveKind::Line});
    const auto c = best_segment_cost(pool, 0, 1);
    CHECK(c.id == 0);
    CHECK(c.cost == doctest::Approx(0.3));
    CHECK_THROWS_AS(best_segment_cost(pool, 1, 1), Error);
}

TEST_CASE("best segment: lower summed error wins") {
    DescriptorPool pool({fake(0, CurveKind::Line, 0, 1, {0.1, 0.1}, 2),
                         fake(1, CurveKind::Bilinear, 0, 1, {0.05, 0.2}, 2)},
                        2, {CurveKind::Line, CurveKind::Bilinear});
    CHECK(best_segment_cost(pool, 0, 1).id == 0);
}

TEST_CASE("best segment: ties go to kind order, then id") {
    DescriptorPool pool({fake(4, CurveKind::Tooth, 0, 1, {0.25, 0.5}, 2),
                         fake(9, CurveKind::Line, 0, 1, {0.5, 0.25}, 2),
                         fake(2, CurveKind::Line, 1, 1, {0.5}, 2),
                         fake(1, CurveKind::Line, 1, 1, {0.5}, 2)},
                        2, {CurveKind::Line, CurveKind::Tooth});
    CHECK(best_segment_cost(pool, 0, 1).id == 9);
    CHECK(best_segment_cost(pool, 1, 1).id == 1);
}

TEST_CASE("min span per verbosity") {
    CHECK(min_span_for(16, 1) == 8);
    CHECK(min_span_for(16, 4) == 1);
    CHECK(min_span_for(16, 5) == 1);
    CHECK(min_span_for(8, 2) == 2);
    CHECK(min_span_for(2, 1) == 1);
}

TEST_CASE("n=4, v=1 picks the best full-range descriptor") {
    std::mt19937_64 rng(1);
    const auto pool = testing::random_pool(rng, 4, 3);
    const auto levels = solve_cover(pool, 1);
    REQUIRE(levels.size() == 1);
    REQUIRE(levels[0].feasible);
    REQUIRE(levels[0].chosen.size() == 1);
    const auto best = best_segment_cost(pool, 0, 3);
    CHECK(levels[0].chosen[0] == best.id);
    CHECK(levels[0].cost == best.cost);
}

TEST_CASE("cover matches exhaustive search on random pools") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = trial % 3 == 0 ? 4 : 8;
        const auto pool = testing::random_pool(rng, n, 1 + trial % 4);
        const auto levels = solve_cover(pool, 5);
        for (const auto& level : levels) {
            const auto expected = oracle::brute_force_cover(pool, level.v, level.min_span);
            REQUIRE(level.feasible == expected.has_value());
            if (!expected) continue;
            CHECK(level.cost == *expected);
            double recomputed = 0.0;
            for (int id : level.chosen) recomputed += pool.at(id).cost();
            CHECK(recomputed == level.cost);
        }
    }
}

TEST_CASE("cover tiles the axis and respects the minimum span") {
    std::mt19937_64 rng(8);
    const auto pool = testing::random_pool(rng, 16, 3);
    for (const auto& level : solve_cover(pool, 8)) {
        REQUIRE(level.feasible);
        CHECK(level.chosen.size() == static_cast<std::size_t>(level.v));
        int next = 0;
        for (int id : level.chosen) {
            const auto& d = pool.at(id);
            CHECK(d.zone_start == next);
            CHECK(d.span() >= level.min_span);
            CHECK(d.span() >= static_cast<int>(std::ceil(16.0 / std::pow(2.0, level.v))));
            next = d.zone_end + 1;
        }
        CHECK(next == 16);
    }
}

TEST_CASE("levels that cannot fit report infeasible") {
    std::mt19937_64 rng(4);
    const auto pool = testing::random_pool(rng, 2, 1);
    const auto levels = solve_cover(pool, 3);
    CHECK(levels[0].feasible);
    CHECK(levels[1].feasible);
    CHECK_FALSE(levels[2].feasible);
    const auto matrix = cover_error_matrix(pool, levels);
    CHECK(std::isnan(matrix[2][0]));
    CHECK_FALSE(std::isnan(matrix[1][1]));
}

TEST_CASE("permuted pool gives the same choice") {
    std::mt19937_64 rng(99);
    // coarse error values so that ties are common
    std::uniform_int_distribution<int> q(0, 3);
    std::vector<Descriptor> ds;
    int id = 0;
    for (int k = 0; k < 3; ++k) {
        for (int i = 0; i < 8; ++i) {
            for (int j = i; j < 8; ++j) {
                std::vector<double> e;
                for (int z = i; z <= j; ++z) e.push_back(0.05 * q(rng));
                ds.push_back(fake(id++, static_cast<CurveKind>(k), i, j, e, 8));
            }
        }
    }
    const std::vector kinds{CurveKind::Line, CurveKind::Bilinear, CurveKind::Tooth};
    const auto reference = solve_cover(DescriptorPool(ds, 8, kinds), 5);
    for (int trial = 0; trial < 10; ++trial) {
        std::shuffle(ds.begin(), ds.end(), rng);
        const auto levels = solve_cover(DescriptorPool(ds, 8, kinds), 5);
        for (std::size_t v = 0; v < levels.size(); ++v) {
            CHECK(levels[v].chosen == reference[v].chosen);
            CHECK(levels[v].cost == reference[v].cost);
        }
    }
}

TEST_CASE("a deep V is never summarized by a line") {
    const auto ts = testing::sampled([](double x) { return std::abs(2.0 * x - 1.0); }, 260, 4);
    const auto pool = build_pool(ts, kDefaultKinds);
    const auto levels = solve_cover(pool, 1);
    REQUIRE(levels[0].chosen.size() == 1);
    CHECK(pool.at(levels[0].chosen[0]).kind() != CurveKind::Line);
}
