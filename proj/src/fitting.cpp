#include "serinarr/fitting.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "serinarr/error.hpp"

namespace serinarr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Samples of one fitting window.
struct Window {
    std::span<const double> x;
    std::span<const double> y;
    XRange range;
};

Window window_of(const TimeSeries& series, int i, int j) {
    const auto r = series.range_samples(i, j);
    return {std::span(series.xs()).subspan(r.begin, r.size()),
            std::span(series.ys()).subspan(r.begin, r.size()),
            {series.zone_lo(i), series.zone_hi(j)}};
}

Curve fit_line(const Window& w) {
    const auto n = static_cast<double>(w.x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < w.x.size(); ++k) {
        mx += w.x[k];
        my += w.y[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < w.x.size(); ++k) {
        sxx += (w.x[k] - mx) * (w.x[k] - mx);
        sxy += (w.x[k] - mx) * (w.y[k] - my);
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    return {LineParams{my - slope * mx, slope}, w.range};
}

// Breakpoint scan over interior sample positions. For a fixed breakpoint the
// continuous polyline is linear in (y_left, y_break, y_right).
Curve fit_bilinear(const Window& w) {
    const double lo = w.range.lo;
    const double hi = w.range.hi;
    double best_sse = kInf;
    Curve best{BilinearParams{}, w.range};
    const std::size_t m = w.x.size();
    for (std::size_t c = 1; c + 1 < m; ++c) {
        const double xb = w.x[c];
        if (!(xb > lo && xb < hi)) continue;
        Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
        Eigen::Vector3d aty = Eigen::Vector3d::Zero();
        auto basis = [&](double x) {
            Eigen::Vector3d b = Eigen::Vector3d::Zero();
            if (x <= xb) {
                const double t = (x - lo) / (xb - lo);
                b[0] = 1.0 - t;
                b[1] = t;
            } else {
                const double t = (x - xb) / (hi - xb);
                b[1] = 1.0 - t;
                b[2] = t;
            }
            return b;
        };
        for (std::size_t k = 0; k < m; ++k) {
            const auto b = basis(w.x[k]);
            ata.noalias() += b * b.transpose();
            aty.noalias() += b * w.y[k];
        }
        const Eigen::FullPivLU<Eigen::Matrix3d> lu(ata);
        if (lu.rank() < 3) continue;
        const Eigen::Vector3d sol = lu.solve(aty);
        double sse = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double r = w.y[k] - basis(w.x[k]).dot(sol);
            sse += r * r;
        }
        if (sse < best_sse) {
            best_sse = sse;
            best.params = BilinearParams{xb, sol[0], sol[1], sol[2]};
        }
    }
    if (!std::isfinite(best_sse)) {
        // Every interior candidate was rank deficient; fall back to a straight
        // polyline through the range midpoint.
        const auto line = std::get<LineParams>(fit_line(w).params);
        const double xb = 0.5 * (lo + hi);
        best.params = BilinearParams{xb, line.intercept + line.slope * lo,
                                     line.intercept + line.slope * xb,
                                     line.intercept + line.slope * hi};
    }
    return best;
}

// Plateau search over zone boundaries (and sample positions on short
// ranges). Levels are segment means; prefix sums make each pair O(log m).
Curve fit_tooth(const Window& w, int n_zones, int i, int j) {
    const std::size_t m = w.x.size();
    std::vector<double> s1(m + 1, 0.0), s2(m + 1, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        s1[k + 1] = s1[k] + w.y[k];
        s2[k + 1] = s2[k] + w.y[k] * w.y[k];
    }
    auto seg_sse = [&](std::size_t a, std::size_t b) {
        if (b <= a) return 0.0;
        const double cnt = static_cast<double>(b - a);
        const double sum = s1[b] - s1[a];
        return std::max(0.0, (s2[b] - s2[a]) - sum * sum / cnt);
    };
    auto seg_mean = [&](std::size_t a, std::size_t b) {
        return (s1[b] - s1[a]) / static_cast<double>(b - a);
    };

    std::vector<double> cuts;
    for (int k = i; k <= j + 1; ++k) cuts.push_back(static_cast<double>(k) / n_zones);
    if (j - i + 1 <= 4) cuts.insert(cuts.end(), w.x.begin(), w.x.end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const auto first = w.x.begin();
    double best_sse = kInf;
    double best_width = -1.0;
    ToothParams best{};
    for (std::size_t a = 0; a < cuts.size(); ++a) {
        const double xs = cuts[a];
        const auto left_end =
            static_cast<std::size_t>(std::lower_bound(first, w.x.end(), xs) - first);
        for (std::size_t b = a + 1; b < cuts.size(); ++b) {
            const double xe = cuts[b];
            const auto plateau_end =
                static_cast<std::size_t>(std::upper_bound(first, w.x.end(), xe) - first);
            if (plateau_end <= left_end) continue;
            const double sse =
                seg_sse(0, left_end) + seg_sse(left_end, plateau_end) + seg_sse(plateau_end, m);
            const double width = xe - xs;
            const double tol = 1e-12 * std::max(1.0, best_sse);
            if (sse < best_sse - tol || (sse <= best_sse + tol && width > best_width)) {
                best_sse = std::min(sse, best_sse);
                best_width = width;
                const double y_in = seg_mean(left_end, plateau_end);
                const bool has_left = left_end > 0;
                const bool has_right = plateau_end < m;
                const double left = has_left ? seg_mean(0, left_end) : 0.0;
                const double right = has_right ? seg_mean(plateau_end, m) : 0.0;
                best = ToothParams{has_left ? left : (has_right ? right : y_in),
                                   has_right ? right : (has_left ? left : y_in), xs, xe, y_in};
            }
        }
    }
    return {best, w.range};
}

struct SineFit {
    double sse = kInf;
    double s = 0.0;  // coefficient of sin
    double c = 0.0;  // coefficient of cos
};

SineFit fit_sine_at(const Window& w, double offset, double freq) {
    Eigen::Matrix2d ata = Eigen::Matrix2d::Zero();
    Eigen::Vector2d aty = Eigen::Vector2d::Zero();
    for (std::size_t k = 0; k < w.x.size(); ++k) {
        const double arg = kTwoPi * freq * w.x[k];
        const Eigen::Vector2d b(std::sin(arg), std::cos(arg));
        ata.noalias() += b * b.transpose();
        aty.noalias() += b * (w.y[k] - offset);
    }
    const Eigen::FullPivLU<Eigen::Matrix2d> lu(ata);
    if (lu.rank() < 2) return {};
    const Eigen::Vector2d sol = lu.solve(aty);
    SineFit fit{0.0, sol[0], sol[1]};
    for (std::size_t k = 0; k < w.x.size(); ++k) {
        const double arg = kTwoPi * freq * w.x[k];
        const double r = w.y[k] - offset - sol[0] * std::sin(arg) - sol[1] * std::cos(arg);
        fit.sse += r * r;
    }
    return fit;
}

// Geometric frequency scan (0.5 to 8 cycles per window width, 32 steps) and
// golden-section refinement around the best grid point.
Curve fit_sinusoid(const Window& w) {
    constexpr int kSteps = 32;
    constexpr double kMinCycles = 0.5;
    constexpr double kMaxCycles = 8.0;
    constexpr double kRelTol = 1e-3;

    double offset = 0.0;
    for (double y : w.y) offset += y;
    offset /= static_cast<double>(w.y.size());

    const double width = w.range.width();
    std::vector<double> grid(kSteps);
    for (int k = 0; k < kSteps; ++k) {
        const double cycles =
            kMinCycles * std::pow(kMaxCycles / kMinCycles, static_cast<double>(k) / (kSteps - 1));
        grid[static_cast<std::size_t>(k)] = cycles / width;
    }
    std::size_t best_k = 0;
    SineFit best;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto fit = fit_sine_at(w, offset, grid[k]);
        if (fit.sse < best.sse) {
            best = fit;
            best_k = k;
        }
    }
    double best_freq = grid[best_k];
    if (std::isfinite(best.sse)) {
        double a = grid[best_k == 0 ? 0 : best_k - 1];
        double b = grid[std::min(best_k + 1, grid.size() - 1)];
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double c = b - inv_phi * (b - a);
        double d = a + inv_phi * (b - a);
        auto fc = fit_sine_at(w, offset, c);
        auto fd = fit_sine_at(w, offset, d);
        while (b - a > kRelTol * 0.5 * (a + b)) {
            if (fc.sse < fd.sse) {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = fit_sine_at(w, offset, c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = fit_sine_at(w, offset, d);
            }
        }
        const double mid = 0.5 * (a + b);
        for (const auto& [freq, fit] :
             {std::pair{c, fc}, std::pair{d, fd}, std::pair{mid, fit_sine_at(w, offset, mid)}}) {
            if (fit.sse < best.sse) {
                best = fit;
                best_freq = freq;
            }
        }
    } else {
        best = SineFit{0.0, 0.0, 0.0};
    }

    SinusoidParams p;
    p.offset = offset;
    p.frequency = best_freq;
    p.amplitude = std::hypot(best.s, best.c);
    double phase = p.amplitude > 0.0 ? std::atan2(best.c, best.s) : 0.0;
    if (phase < 0.0) phase += kTwoPi;
    if (phase >= kTwoPi) phase -= kTwoPi;
    p.phase = phase;
    return {p, w.range};
}

}  // namespace

double Descriptor::err(int z) const noexcept {
    if (!covers(z)) return kInf;
    return zone_err[static_cast<std::size_t>(z - zone_start)];
}

double Descriptor::cost() const noexcept {
    double sum = 0.0;
    for (double e : zone_err) sum += e;
    return sum;
}

DescriptorPool::DescriptorPool(std::vector<Descriptor> descriptors, int n_zones,
                               std::vector<CurveKind> kinds, std::size_t infeasible)
    : descriptors_(std::move(descriptors)),
      n_zones_(n_zones),
      kinds_(std::move(kinds)),
      infeasible_(infeasible) {
    for (std::size_t k = 0; k < descriptors_.size(); ++k) {
        const auto& d = descriptors_[k];
        if (d.zone_start < 0 || d.zone_end >= n_zones_ || d.zone_start > d.zone_end ||
            d.zone_err.size() != static_cast<std::size_t>(d.span())) {
            throw Error(Stage::Fit, fmt::format("descriptor {} has an invalid zone range", d.id));
        }
        if (!index_.emplace(d.id, k).second) {
            throw Error(Stage::Fit, fmt::format("duplicate descriptor id {}", d.id));
        }
    }
}

const Descriptor& DescriptorPool::at(int id) const {
    const auto it = index_.find(id);
    if (it == index_.end()) throw Error(Stage::Solve, fmt::format("unknown descriptor id {}", id));
    return descriptors_[it->second];
}

std::vector<double> zone_rmse(const TimeSeries& series, const Curve& curve, int i, int j) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(j - i + 1));
    for (int z = i; z <= j; ++z) {
        const auto r = series.zone_samples(z);
        double sse = 0.0;
        for (auto k = r.begin; k < r.end; ++k) {
            const double res = series.ys()[k] - evaluate_unchecked(curve, series.xs()[k]);
            sse += res * res;
        }
        out.push_back(std::sqrt(sse / static_cast<double>(r.size())));
    }
    return out;
}

double total_sse(const TimeSeries& series, const Curve& curve, int i, int j) {
    const auto r = series.range_samples(i, j);
    double sse = 0.0;
    for (auto k = r.begin; k < r.end; ++k) {
        const double res = series.ys()[k] - evaluate_unchecked(curve, series.xs()[k]);
        sse += res * res;
    }
    return sse;
}

std::optional<Descriptor> fit_one(const TimeSeries& series, CurveKind kind, int i, int j) {
    if (i < 0 || j >= series.n_zones() || i > j) {
        throw Error(Stage::Fit, fmt::format("invalid zone range [{}, {}] for {} zones", i, j,
                                            series.n_zones()));
    }
    const auto w = window_of(series, i, j);
    if (w.x.size() < static_cast<std::size_t>(parameter_count(kind))) return std::nullopt;

    Descriptor d;
    d.zone_start = i;
    d.zone_end = j;
    switch (kind) {
        case CurveKind::Line: d.curve = fit_line(w); break;
        case CurveKind::Bilinear: d.curve = fit_bilinear(w); break;
        case CurveKind::Tooth: d.curve = fit_tooth(w, series.n_zones(), i, j); break;
        case CurveKind::Sinusoid: d.curve = fit_sinusoid(w); break;
    }
    validate(d.curve);
    d.zone_err = zone_rmse(series, d.curve, i, j);
    return d;
}

std::size_t expected_pool_size(int n_zones, std::size_t kind_count) noexcept {
    const auto n = static_cast<std::size_t>(n_zones);
    return kind_count * n * (n + 1) / 2;
}

unsigned default_fit_threads() {
    if (const char* env = std::getenv("SERINARR_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

DescriptorPool build_pool(const TimeSeries& series, std::span<const CurveKind> kinds,
                          unsigned threads) {
    std::vector<CurveKind> sorted(kinds.begin(), kinds.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (sorted.empty()) throw Error(Stage::Config, "no curve kinds selected");

    struct Task {
        CurveKind kind;
        int i;
        int j;
    };
    std::vector<Task> tasks;
    const int n = series.n_zones();
    for (auto kind : sorted) {
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) tasks.push_back({kind, i, j});
        }
    }

    std::vector<std::optional<Descriptor>> results(tasks.size());
    if (threads == 0) threads = default_fit_threads();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(tasks.size())));
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> failures(threads);
    auto worker = [&](unsigned slot) {
        try {
            for (auto k = next.fetch_add(1); k < tasks.size(); k = next.fetch_add(1)) {
                results[k] = fit_one(series, tasks[k].kind, tasks[k].i, tasks[k].j);
            }
        } catch (...) {
            failures[slot] = std::current_exception();
            next = tasks.size();
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    }
    for (const auto& failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }

    std::vector<Descriptor> descriptors;
    descriptors.reserve(tasks.size());
    std::size_t infeasible = 0;
    for (auto& r : results) {
        if (!r) {
            ++infeasible;
            continue;
        }
        r->id = static_cast<int>(descriptors.size());
        descriptors.push_back(std::move(*r));
    }
    return DescriptorPool(std::move(descriptors), n, std::move(sorted), infeasible);
}

}  // namespace serinarr
