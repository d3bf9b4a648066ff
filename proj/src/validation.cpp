#include "ctrwfp/validation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "ctrwfp/chain.hpp"
#include "ctrwfp/limit_path.hpp"
#include "ctrwfp/rng.hpp"
#include "ctrwfp/util.hpp"

namespace ctrwfp {

namespace {

// Runs fn(path_index) over [0, n) on the requested workers. Each path owns
// its RNG stream, so the partition never affects results.
void parallel_paths(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn) {
    workers = std::max<std::size_t>(workers, 1);
    workers = std::min(workers, n == 0 ? 1 : n);
    if (workers <= 1) {
        for (std::size_t p = 0; p < n; ++p) fn(p);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t p = next.fetch_add(64);
                if (p >= n) return;
                const std::size_t hi = std::min(n, p + 64);
                try {
                    for (std::size_t i = p; i < hi; ++i) fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

constexpr double kDropMarker = std::numeric_limits<double>::quiet_NaN();

}  // namespace

McCurves mc_law_curves(const ModelSpec& spec, double x0, double s0,
                       const std::vector<double>& ts, std::size_t n_paths, std::uint64_t seed,
                       const McOptions& opts) {
    if (n_paths == 0) throw std::invalid_argument("mc_law_curves: need at least one path");
    if (ts.empty()) throw std::invalid_argument("mc_law_curves: no probe times");
    if (!std::is_sorted(ts.begin(), ts.end()))
        throw std::invalid_argument("mc_law_curves: probe times must ascend");
    McCurves out;
    out.ts = ts;
    out.x.assign(ts.size(), std::vector<double>(n_paths, 0.0));
    const bool want_y = opts.engine == Engine::limit;
    if (want_y) out.y.assign(ts.size(), std::vector<double>(n_paths, 0.0));
    std::atomic<std::size_t> dropped{0};

    parallel_paths(n_paths, opts.workers, [&](std::size_t p) {
        for (std::size_t attempt = 0;; ++attempt) {
            const std::uint64_t stream = p + attempt * n_paths;
            RngStream rng(seed, stream);
            try {
                if (opts.engine == Engine::chain) {
                    const std::vector<double> xs = chain_values_at(spec, opts.c, x0, s0, ts, rng);
                    for (std::size_t q = 0; q < ts.size(); ++q) out.x[q][p] = xs[q];
                } else {
                    const LimitSample ls = limit_values_at(spec, x0, s0, ts, opts.dr, rng);
                    for (std::size_t q = 0; q < ts.size(); ++q) {
                        out.x[q][p] = ls.ctrw[q];
                        out.y[q][p] = ls.octrw[q];
                    }
                }
                return;
            } catch (const std::runtime_error&) {
                if (attempt >= opts.retry_budget) {
                    dropped.fetch_add(1);
                    for (std::size_t q = 0; q < ts.size(); ++q) {
                        out.x[q][p] = kDropMarker;
                        if (want_y) out.y[q][p] = kDropMarker;
                    }
                    return;
                }
            }
        }
    });

    out.dropped = dropped.load();
    if (static_cast<double>(out.dropped) >
        opts.max_drop_fraction * static_cast<double>(n_paths))
        throw std::runtime_error("mc_law_curves: dropped path fraction exceeds budget");
    if (out.dropped > 0) {
        // Compact away the dropped paths, preserving order.
        for (std::size_t q = 0; q < ts.size(); ++q) {
            auto keep = [&](std::vector<double>& col) {
                std::vector<double> tight;
                tight.reserve(col.size() - out.dropped);
                for (double v : col)
                    if (!std::isnan(v)) tight.push_back(v);
                col.swap(tight);
            };
            keep(out.x[q]);
            if (want_y) keep(out.y[q]);
        }
    }
    return out;
}

EmpiricalSample mc_law_estimate(const ModelSpec& spec, double x0, double s0, double t,
                                std::size_t n_paths, std::uint64_t seed, const McOptions& opts) {
    McCurves curves = mc_law_curves(spec, x0, s0, {t}, n_paths, seed, opts);
    EmpiricalSample sample;
    sample.values = std::move(curves.x[0]);
    sample.provenance = {spec.name, t, n_paths, seed};
    return sample;
}

double ks_distance(const EmpiricalSample& a, const EmpiricalSample& b) {
    if (a.values.empty() || b.values.empty())
        throw std::invalid_argument("ks_distance: empty sample");
    std::vector<double> u = a.values, v = b.values;
    std::sort(u.begin(), u.end());
    std::sort(v.begin(), v.end());
    const double nu = static_cast<double>(u.size()), nv = static_cast<double>(v.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    // Ties advance both sides before the sup is probed.
    while (i < u.size() && j < v.size()) {
        const double x = std::min(u[i], v[j]);
        while (i < u.size() && u[i] == x) ++i;
        while (j < v.size() && v[j] == x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / nu - static_cast<double>(j) / nv));
    }
    return d;
}

double ks_distance_to_grid(const EmpiricalSample& sample, const GridMeasure& field, double t) {
    if (sample.values.empty()) throw std::invalid_argument("ks_distance_to_grid: empty sample");
    const std::size_t j = field.grid.time_index(t);
    const std::size_t n = field.grid.ny;
    // Cell-mass CDF at cell right edges, normalized by the interior mass.
    std::vector<double> cdf(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += field.at(j, i) * field.grid.dy;
        cdf[i] = acc;
    }
    if (!(acc > 0.0)) throw std::invalid_argument("ks_distance_to_grid: empty slice");
    for (double& c : cdf) c /= acc;
    std::vector<double> xs = sample.values;
    std::sort(xs.begin(), xs.end());
    const double ns = static_cast<double>(xs.size());
    const double left = field.grid.y0 - 0.5 * field.grid.dy;
    double d = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double pos = (xs[k] - left) / field.grid.dy;  // cells fully below xs[k]
        double fg;
        if (pos <= 0.0)
            fg = 0.0;
        else if (pos >= static_cast<double>(n))
            fg = 1.0;
        else {
            const auto cell = static_cast<std::size_t>(pos);
            const double frac = pos - static_cast<double>(cell);
            const double lo = cell == 0 ? 0.0 : cdf[cell - 1];
            fg = lo + frac * (cdf[cell] - lo);
        }
        const double fe_hi = static_cast<double>(k + 1) / ns;
        const double fe_lo = static_cast<double>(k) / ns;
        d = std::max(d, std::max(std::abs(fe_hi - fg), std::abs(fe_lo - fg)));
    }
    return d;
}

double ks_two_sample_threshold_99(std::size_t n, std::size_t m) {
    if (n == 0 || m == 0) throw std::invalid_argument("ks threshold: empty sample");
    const double nn = static_cast<double>(n), mm = static_cast<double>(m);
    return 1.6276 * std::sqrt((nn + mm) / (nn * mm));
}

double ks_one_sample_threshold_99(std::size_t n) {
    if (n == 0) throw std::invalid_argument("ks threshold: empty sample");
    return 1.6276 / std::sqrt(static_cast<double>(n));
}

PowerFit fit_power_exponent(const std::vector<double>& ts, const std::vector<double>& values) {
    if (ts.size() != values.size() || ts.size() < 3)
        throw std::invalid_argument("fit_power_exponent: need at least 3 points");
    const std::size_t n = ts.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(ts[i] > 0.0) || !(values[i] > 0.0))
            throw std::invalid_argument("fit_power_exponent: inputs must be positive");
        lx[i] = std::log(ts[i]);
        ly[i] = std::log(values[i]);
    }
    const double mx = mean_of(lx), my = mean_of(ly);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("fit_power_exponent: degenerate abscissae");
    PowerFit fit;
    fit.slope = sxy / sxx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - my - fit.slope * (lx[i] - mx);
        ss += r * r;
    }
    if (n > 2) fit.std_error = std::sqrt(ss / (static_cast<double>(n - 2) * sxx));
    return fit;
}

PotentialEstimate potential_estimate(const ModelSpec& spec, const SpaceTimeField& f, double x,
                                     double s, std::size_t n_paths, double r_max,
                                     std::uint64_t seed, double dr, std::size_t workers,
                                     double support_top) {
    if (n_paths == 0) throw std::invalid_argument("potential_estimate: need paths");
    if (!(r_max > 0.0)) throw std::invalid_argument("potential_estimate: r_max must be positive");
    if (!f) throw std::invalid_argument("potential_estimate: missing integrand");
    std::vector<double> acc(n_paths, 0.0);
    std::vector<char> unclear(n_paths, 0);
    const bool has_top = !std::isnan(support_top);
    parallel_paths(n_paths, workers, [&](std::size_t p) {
        RngStream rng(seed, p);
        PathCursor cursor(spec, x, s, dr, rng);
        double total = 0.0;
        double r_done = 0.0, a_done = x, d_done = s;
        while (r_done < r_max) {
            const PathCursor::Segment seg = cursor.next();
            r_done = seg.r1;
            a_done = seg.a1;
            d_done = seg.d1;
            const double width = seg.r1 - seg.r0;
            if (width > 0.0) {
                const double am = 0.5 * (seg.a0 + seg.a1);
                const double dm = 0.5 * (seg.d0 + seg.d1);
                total += f(&am, dm) * width;
            }
            if (has_top && d_done > support_top) break;
        }
        acc[p] = total;
        if (has_top)
            unclear[p] = d_done <= support_top ? 1 : 0;
        else
            unclear[p] = f(&a_done, d_done) != 0.0 ? 1 : 0;
    });
    PotentialEstimate est;
    const auto [mean, var] = mean_and_variance(acc);
    est.value = mean;
    est.std_error = std::sqrt(var / static_cast<double>(n_paths));
    std::size_t bad = 0;
    for (char c : unclear) bad += c;
    est.unclear_fraction = static_cast<double>(bad) / static_cast<double>(n_paths);
    est.horizon_warning = est.unclear_fraction > 0.01;
    return est;
}

DualEstimate mc_time_integral(const ModelSpec& spec, double x0, double s0,
                              const std::function<double(double)>& f, double t1, double t2,
                              std::size_t n_paths, double dr, std::uint64_t seed,
                              std::size_t workers) {
    if (n_paths == 0) throw std::invalid_argument("mc_time_integral: need paths");
    std::vector<double> acc(n_paths, 0.0);
    std::atomic<std::size_t> dropped{0};
    parallel_paths(n_paths, workers, [&](std::size_t p) {
        for (std::size_t attempt = 0;; ++attempt) {
            RngStream rng(seed, p + attempt * n_paths);
            try {
                acc[p] = limit_time_integral(spec, x0, s0, f, t1, t2, dr, rng);
                return;
            } catch (const std::runtime_error&) {
                if (attempt >= 3) {
                    acc[p] = kDropMarker;
                    dropped.fetch_add(1);
                    return;
                }
            }
        }
    });
    DualEstimate est;
    est.dropped = dropped.load();
    if (est.dropped * 1000 > n_paths)
        throw std::runtime_error("mc_time_integral: dropped path fraction exceeds budget");
    std::vector<double> tight;
    tight.reserve(n_paths - est.dropped);
    for (double v : acc)
        if (!std::isnan(v)) tight.push_back(v);
    const auto [mean, var] = mean_and_variance(tight);
    est.value = mean;
    est.std_error = std::sqrt(var / static_cast<double>(tight.size()));
    return est;
}

}  // namespace ctrwfp
