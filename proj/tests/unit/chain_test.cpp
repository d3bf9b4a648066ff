#include <cmath>
#include <cstdlib>

#include "ctrwfp/chain.hpp"
#include "doctest.h"

using namespace ctrwfp;

TEST_CASE("waiting time inversion") {
    CHECK(sample_waiting_time(1.0, 0.5, 0.5) == doctest::Approx(1.2732395).epsilon(1e-6));
    // u = 1 lands on the support cutoff (Gamma(1-beta) c)^(-1/beta)
    for (double c : {1.0, 2.0, 50.0})
        CHECK(sample_waiting_time(c, 0.5, 1.0) ==
              doctest::Approx(std::pow(std::tgamma(0.5) * c, -2.0)).epsilon(1e-12));
    CHECK(sample_waiting_time(1.0, 0.5, 1e-10) > 1e9);
    CHECK_THROWS_AS(sample_waiting_time(1.0, 0.5, 0.0), std::domain_error);
    CHECK_THROWS_AS(sample_waiting_time(1.0, 0.5, 1.5), std::domain_error);
    CHECK_THROWS_AS(sample_waiting_time(0.0, 0.5, 0.5), std::domain_error);
    CHECK_THROWS_AS(sample_waiting_time(1.0, 1.2, 0.5), std::domain_error);
}

TEST_CASE("waiting law matches the truncated Pareto tail") {
    // P(W > w) = 1 ^ [H_beta(w) / c] exactly under inversion: check the quantile map.
    const double c = 10.0, beta = 0.5;
    for (double u : {0.1, 0.4, 0.9}) {
        const double w = sample_waiting_time(c, beta, u);
        CHECK(std::min(1.0, stable_tail(beta, w) / c) == doctest::Approx(u).epsilon(1e-10));
    }
}

TEST_CASE("trajectory is right-continuous and waits before jumping") {
    ModelSpec spec = subdiffusion_preset(0.5);
    RngStream rng(17, 0);
    DiscreteChain chain = sample_chain(spec, 10.0, 1.5, 2.0, 4.0, rng);
    REQUIRE(chain.times.size() >= 2);
    CHECK(chain.positions[0] == 1.5);
    CHECK(chain.times[0] == 2.0);
    CHECK(evaluate_ctrw(chain, 2.0) == 1.5);
    CHECK(evaluate_ctrw(chain, chain.times[1] - 1e-9) == 1.5);
    CHECK(evaluate_ctrw(chain, chain.times[1]) == chain.positions[1]);
    for (std::size_t n = 1; n < chain.times.size(); ++n) CHECK(chain.times[n] > chain.times[n - 1]);
}

TEST_CASE("levy walk couples jump length to waiting time") {
    ModelSpec spec = levy_walk_preset(0.5);
    RngStream rng(23, 0);
    DiscreteChain chain = sample_chain(spec, 50.0, 0.0, 0.0, 5.0, rng);
    for (std::size_t n = 1; n < chain.times.size(); ++n) {
        const double da = std::abs(chain.positions[n] - chain.positions[n - 1]);
        const double dd = chain.times[n] - chain.times[n - 1];
        CHECK(da == doctest::Approx(dd).epsilon(1e-12));
    }
}

TEST_CASE("unbiased steps balance empirically") {
    ModelSpec spec = subdiffusion_preset(0.5);
    RngStream rng(31, 0);
    double x = 0.0, s = 0.0;
    std::size_t right = 0;
    const std::size_t n = 4000;
    for (std::size_t i = 0; i < n; ++i) {
        const double before = x;
        step_chain(spec, 25.0, x, s, rng);
        if (x > before) ++right;
    }
    CHECK(std::abs(static_cast<double>(right) / n - 0.5) < 0.05);
}

TEST_CASE("query guards") {
    ModelSpec spec = subdiffusion_preset(0.5);
    RngStream rng(7, 0);
    DiscreteChain chain = sample_chain(spec, 10.0, 0.0, 0.0, 1.0, rng);
    CHECK_THROWS_AS(evaluate_ctrw(chain, -0.5), std::domain_error);
    CHECK_THROWS_AS(evaluate_ctrw(chain, chain.times.back() + 1.0), std::domain_error);
}
