#include <algorithm>
#include <cmath>
#include <vector>

#include "ctrwfp/limit_path.hpp"
#include "ctrwfp/util.hpp"
#include "doctest.h"

using namespace ctrwfp;

TEST_CASE("stable increment degenerate span and Laplace transform") {
    RngStream rng(2, 0);
    CHECK(sample_stable_increment(0.5, 0.0, rng) == 0.0);
    const std::size_t n = 100000;
    std::vector<double> lap(n), d1(n), d2(n);
    for (std::size_t i = 0; i < n; ++i) {
        d1[i] = sample_stable_increment(0.5, 1.0, rng);
        d2[i] = sample_stable_increment(0.5, 2.0, rng);
        lap[i] = std::exp(-d1[i]);
    }
    CHECK(std::abs(mean_of(lap) - std::exp(-1.0)) < 0.01);
    // Self-similarity: doubling dr scales the law by 2^(1/beta) = 4.
    std::nth_element(d1.begin(), d1.begin() + n / 2, d1.end());
    std::nth_element(d2.begin(), d2.begin() + n / 2, d2.end());
    CHECK(d2[n / 2] / d1[n / 2] == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("spatial component alone is a standard diffusion") {
    ModelSpec spec = subdiffusion_preset(0.5);
    RngStream rng(5, 0);
    const std::size_t n = 10000;
    std::vector<double> final_a(n), lap_d(n);
    for (std::size_t i = 0; i < n; ++i) {
        SpaceTimePath path = sample_pair_path(spec, 0.0, 0.0, 1.0, 1e-3, rng);
        final_a[i] = path.nodes.back().a;
        lap_d[i] = std::exp(-path.nodes.back().d);
    }
    auto [mean, var] = mean_and_variance(final_a);
    const double se = std::sqrt(2.0 / static_cast<double>(n));
    CHECK(std::abs(var - 1.0) <= 3.0 * se);
    CHECK(std::abs(mean) <= 3.0 / std::sqrt(static_cast<double>(n)));
    // D_1 is the standard stable subordinator at r = 1.
    CHECK(std::abs(mean_of(lap_d) - std::exp(-1.0)) < 0.01);
}

TEST_CASE("levy walk total variation matches the clock up to the cutoff bound") {
    for (double p_plus : {0.5, 0.7}) {
        ModelSpec spec = levy_walk_preset(0.6, nullptr, p_plus);
        RngStream rng(9, 0);
        for (int rep = 0; rep < 20; ++rep) {
            SpaceTimePath path = sample_pair_path(spec, 0.0, 0.0, 2.0, 5e-3, rng);
            double tv = 0.0;
            for (std::size_t k = 1; k < path.nodes.size(); ++k)
                tv += std::abs(path.nodes[k].a - path.nodes[k - 1].a);
            const double elapsed = path.nodes.back().d - path.s0;
            CHECK(std::abs(tv - elapsed) <= path.truncation_bias_bound + 1e-9);
        }
    }
}

TEST_CASE("clock jump at the origin pins the inverse to zero") {
    SpaceTimePath path;
    path.dr = 0.1;
    path.nodes = {{0.0, 0.0, 0.0}, {0.0, 0.0, 5.0}, {1.0, 0.7, 5.0}};
    path.kinds = {SegmentKind::jump, SegmentKind::continuous};
    TimeChange tc = inverse_time_change(path, 1.0);
    CHECK(tc.u == 0.0);
    CHECK(tc.straddled_by_jump);
    CHECK(ctrw_limit_value(path, 1.0) == 0.0);
    CHECK(octrw_limit_value(path, 1.0) == 0.0);
}

TEST_CASE("unit clock inverts to the identity") {
    ModelSpec spec = unit_clock_spec();
    RngStream rng(13, 0);
    SpaceTimePath path = sample_pair_path(spec, 0.0, 2.0, 3.0, 1e-2, rng);
    TimeChange tc = inverse_time_change(path, 3.5);
    CHECK(tc.u == doctest::Approx(1.5).epsilon(1e-9));
}

TEST_CASE("mean inverse time matches the closed form") {
    ModelSpec spec = subdiffusion_preset(0.5);
    const std::size_t n = 20000;
    std::vector<double> es(n);
    for (std::size_t i = 0; i < n; ++i) {
        RngStream rng(77, i);
        PathCursor cursor(spec, 0.0, 0.0, 2e-3, rng);
        double u = 0.0;
        for (;;) {
            PathCursor::Segment seg = cursor.next();
            if (seg.d1 > 1.0) {
                u = seg.kind == SegmentKind::jump
                        ? seg.r0
                        : seg.r0 + (seg.r1 - seg.r0) * (1.0 - seg.d0) / (seg.d1 - seg.d0);
                break;
            }
        }
        es[i] = u;
    }
    CHECK(mean_of(es) == doctest::Approx(1.1283792).epsilon(0.03));
}

TEST_CASE("uncoupled CTRW and OCTRW values coincide exactly") {
    ModelSpec spec = subdiffusion_preset(0.5);
    const std::vector<double> ts{0.3, 1.0, 2.5};
    for (std::size_t i = 0; i < 200; ++i) {
        RngStream rng(19, i);
        LimitSample ls = limit_values_at(spec, 0.0, 0.0, ts, 2e-3, rng);
        for (std::size_t q = 0; q < ts.size(); ++q) CHECK(ls.ctrw[q] == ls.octrw[q]);
    }
}

TEST_CASE("levy walk speed bound and straddling jump gap") {
    ModelSpec spec = levy_walk_preset(0.75);
    std::size_t straddles = 0;
    for (std::size_t i = 0; i < 300; ++i) {
        RngStream rng(29, i);
        SpaceTimePath path = sample_pair_path(spec, 0.0, 0.0, 3.0, 3e-3, rng);
        const double top = path.nodes.back().d;
        for (double frac : {0.2, 0.6, 0.95}) {
            const double t = frac * top;
            if (!(t > 0.0)) continue;
            const double x = ctrw_limit_value(path, t);
            CHECK(std::abs(x) <= t + 1e-12);
            TimeChange tc = inverse_time_change(path, t);
            if (tc.straddled_by_jump) {
                ++straddles;
                const double y = octrw_limit_value(path, t);
                const double jump =
                    path.nodes[tc.node].a - path.nodes[tc.node - 1].a;
                CHECK(y - x == doctest::Approx(jump).epsilon(1e-12));
                CHECK(std::abs(jump) ==
                      doctest::Approx(path.nodes[tc.node].d - path.nodes[tc.node - 1].d)
                          .epsilon(1e-12));
            }
        }
    }
    CHECK(straddles > 0);
}

TEST_CASE("time integral of the constant function is the window length") {
    ModelSpec spec = subdiffusion_preset(0.5);
    RngStream rng(41, 0);
    const double got = limit_time_integral(
        spec, 0.0, 0.0, [](double) { return 1.0; }, 0.5, 1.5, 2e-3, rng);
    CHECK(got == doctest::Approx(1.0).epsilon(1e-9));
}
