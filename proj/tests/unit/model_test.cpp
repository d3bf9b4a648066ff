#include <cmath>
#include <stdexcept>

#include "ctrwfp/model.hpp"
#include "doctest.h"

using namespace ctrwfp;

TEST_CASE("unbiased lattice step") {
    ModelSpec spec = subdiffusion_preset(0.5);
    for (double x : {-2.0, 0.0, 3.7})
        for (double s : {0.0, 1.5}) {
            LatticeStep st = lattice_probabilities(spec, 7.0, x, s);
            CHECK(st.left == 0.5);
            CHECK(st.right == 0.5);
            CHECK(st.dx == doctest::Approx(1.0 / std::sqrt(7.0)));
        }
}

TEST_CASE("lattice probabilities sum to one with drift bias") {
    ModelSpec spec = subdiffusion_preset(
        0.5, [](const double*, double) { return 0.3; }, 0.3);
    for (int i = 0; i < 100; ++i) {
        const double x = -5.0 + 0.1 * i;
        LatticeStep st = lattice_probabilities(spec, 100.0, x, 0.2);
        CHECK(st.left + st.right == 1.0);
        CHECK(st.right - st.left == doctest::Approx(0.3 * st.dx).epsilon(1e-12));
    }
}

TEST_CASE("variable order evaluates pointwise") {
    ModelSpec spec = variable_order_preset(
        [](const double* x) { return 0.5 + 0.3 * std::tanh(x[0]); });
    CHECK(spec.tail.order_at1(0.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(eval_tail1(spec, 0.0, 0.0, 4.0) == doctest::Approx(0.2820948).epsilon(1e-6));
    CHECK(eval_tail1(spec, 0.0, 0.0, 1.0) == doctest::Approx(0.5641896).epsilon(1e-6));
}

TEST_CASE("constant field degenerates to the fixed-order preset") {
    ModelSpec vo = variable_order_preset([](const double*) { return 0.5; });
    ModelSpec sub = subdiffusion_preset(0.5);
    for (double x : {-3.0, 0.0, 2.0})
        for (double v : {0.1, 1.0, 10.0}) {
            CHECK(eval_tail1(vo, x, 0.0, v) == doctest::Approx(eval_tail1(sub, x, 0.0, v)));
            CHECK(vo.tail.order_at1(x) == sub.tail.order_at1(x));
            CHECK(vo.diffusion_at1(x, 0.0) == sub.diffusion_at1(x, 0.0));
            CHECK(vo.drift_at1(x, 0.0) == sub.drift_at1(x, 0.0));
        }
}

TEST_CASE("levy walk directional tail mass") {
    ModelSpec spec = levy_walk_preset(0.5, nullptr, 0.7);
    CHECK(spec.p_plus * eval_tail1(spec, 0.0, 0.0, 1.0) ==
          doctest::Approx(0.394925).epsilon(1e-5));
    ModelSpec sym = levy_walk_preset(0.5);
    CHECK(sym.p_plus == 0.5);
}

TEST_CASE("stable tail values and decay") {
    CHECK(stable_tail(0.5, 1.0) == doctest::Approx(0.5641896).epsilon(1e-6));
    CHECK(stable_tail(0.5, 1e8) <= 1e-4 * 0.5642);
    ModelSpec spec = subdiffusion_preset(0.5);
    double prev = eval_tail1(spec, 0.0, 0.0, 0.05);
    for (double v = 0.1; v < 10.0; v += 0.1) {
        const double cur = eval_tail1(spec, 0.0, 0.0, v);
        CHECK(cur <= prev);
        prev = cur;
    }
}

TEST_CASE("pre-limit tail clipping converges from below") {
    for (double w : {0.1, 1.0, 10.0}) {
        const double h = stable_tail(0.5, w);
        double prev_gap = -1.0;
        for (double c : {1.0, 10.0, 1000.0}) {
            const double clipped = c * std::min(1.0, h / c);
            const double gap = h - clipped;
            CHECK(gap >= 0.0);
            if (prev_gap >= 0.0) CHECK(gap <= prev_gap);
            prev_gap = gap;
        }
        CHECK(1000.0 * std::min(1.0, h / 1000.0) == doctest::Approx(h));
    }
}

TEST_CASE("preset guards") {
    CHECK_THROWS_AS(subdiffusion_preset(1.5), std::domain_error);
    CHECK_THROWS_AS(subdiffusion_preset(0.0), std::domain_error);
    CHECK_THROWS_AS(variable_order_preset([](const double* x) { return 0.5 + 0.5 * x[0]; }),
                    std::domain_error);
    CHECK_THROWS_AS(stable_tail(0.5, 0.0), std::domain_error);
}

TEST_CASE("coefficient probes stay admissible") {
    for (ModelSpec spec : {subdiffusion_preset(0.3), levy_walk_preset(0.7), unit_clock_spec()})
        for (double x : {-4.0, 0.0, 4.0})
            for (double s : {0.0, 2.0}) {
                CHECK(spec.gamma_at1(x, s) >= 0.0);
                CHECK(spec.diffusion_at1(x, s) >= 0.0);
            }
}
