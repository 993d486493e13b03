#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "serinarr/cover.hpp"
#include "serinarr/fitting.hpp"
#include "serinarr/series.hpp"

namespace testing {

using namespace serinarr;

inline constexpr double kPi = 3.14159265358979323846;

// m evenly spaced samples of f on [0, 1], taken as already normalized.
inline TimeSeries sampled(const std::function<double(double)>& f, int m, int levels) {
    std::vector<double> xs, ys;
    for (int k = 0; k < m; ++k) {
        const double x = static_cast<double>(k) / (m - 1);
        xs.push_back(x);
        ys.push_back(f(x));
    }
    return TimeSeries(std::move(xs), std::move(ys), 0.0, 1.0, levels);
}

inline RawSeries raw_from(const std::function<double(double)>& f, int m) {
    RawSeries raw;
    for (int k = 0; k < m; ++k) {
        raw.t.push_back(k);
        raw.y.push_back(f(static_cast<double>(k) / (m - 1)));
    }
    return raw;
}

// Descriptor with made-up zone errors; the curve is a flat line over the range.
inline Descriptor fake(int id, CurveKind kind, int i, int j, std::vector<double> errs, int n) {
    Descriptor d;
    d.id = id;
    const XRange range{static_cast<double>(i) / n, static_cast<double>(j + 1) / n};
    switch (kind) {
        case CurveKind::Line: d.curve = {LineParams{0.5, 0.0}, range}; break;
        case CurveKind::Bilinear:
            d.curve = {BilinearParams{0.5 * (range.lo + range.hi), 0.5, 0.5, 0.5}, range};
            break;
        case CurveKind::Tooth:
            d.curve = {ToothParams{0.5, 0.5, range.lo, range.hi, 0.5}, range};
            break;
        case CurveKind::Sinusoid: d.curve = {SinusoidParams{0.0, 1.0, 0.0, 0.5}, range}; break;
    }
    d.zone_start = i;
    d.zone_end = j;
    d.zone_err = std::move(errs);
    return d;
}

// Every kind on every range with independent uniform zone errors in [0, hi).
inline DescriptorPool random_pool(std::mt19937_64& rng, int n, int kinds, double hi = 0.3) {
    std::uniform_real_distribution<double> err(0.0, hi);
    std::vector<Descriptor> ds;
    std::vector<CurveKind> used;
    int id = 0;
    for (int k = 0; k < kinds; ++k) {
        used.push_back(static_cast<CurveKind>(k));
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) {
                std::vector<double> e;
                for (int z = i; z <= j; ++z) e.push_back(err(rng));
                ds.push_back(fake(id++, static_cast<CurveKind>(k), i, j, std::move(e), n));
            }
        }
    }
    return DescriptorPool(std::move(ds), n, used);
}

// Manually assembled cover level.
inline VerbosityLevel level_of(int v, std::vector<int> chosen, const DescriptorPool& pool) {
    VerbosityLevel l;
    l.v = v;
    l.feasible = true;
    l.min_span = min_span_for(pool.n_zones(), v);
    l.chosen = std::move(chosen);
    for (int id : l.chosen) l.cost += pool.at(id).cost();
    return l;
}

}  // namespace testing
