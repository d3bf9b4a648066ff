#include <cmath>
#include <stdexcept>
#include <vector>

#include "ctrwfp/backward.hpp"
#include "ctrwfp/oracles.hpp"
#include "doctest.h"

using namespace ctrwfp;

namespace {

const SpatialField kZero = [](const double*) { return 0.0; };
const SpatialField kOne = [](const double*) { return 1.0; };
const SpatialField kGauss = [](const double* x) { return std::exp(-x[0] * x[0]); };

}  // namespace

TEST_CASE("temporal weights normalize and clip") {
    TemporalWeight b = TemporalWeight::bump(0.5, 0.2);
    CHECK(b.integral() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.eval(0.5) == 0.0);
    CHECK(b.eval(0.7) == 0.0);
    CHECK(b.eval(0.6) > 0.0);
    TemporalWeight ind = TemporalWeight::indicator(0.25, 0.75, 2.0);
    CHECK(ind.integral() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ind.eval(0.5) == 2.0);
    CHECK(ind.eval(0.8) == 0.0);
    CHECK_THROWS_AS(TemporalWeight::indicator(1.0, 0.5), std::invalid_argument);
}

TEST_CASE("zero sources give zero value") {
    SpaceTimeGrid grid = make_centered_grid(6.0, 60, 0.0, 0.01, 81);
    TemporalWeight g = TemporalWeight::bump(0.5, 0.2);
    BackwardField v0 = solve_backward(subdiffusion_preset(0.5), kZero, g, grid);
    for (double v : v0.v) CHECK(v == 0.0);
    BackwardField v1 =
        solve_backward(subdiffusion_preset(0.5), kOne, TemporalWeight::indicator(0.3, 0.6, 0.0), grid);
    for (double v : v1.v) CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("flat profile accrues the remaining weight mass") {
    SpaceTimeGrid grid = make_centered_grid(8.0, 320, 0.0, 2.5e-3, 321);
    TemporalWeight g = TemporalWeight::bump(0.5, 0.2);
    BackwardField field = solve_backward(subdiffusion_preset(0.5), kOne, g, grid);
    CHECK(field.value(0.0, 0.0) == doctest::Approx(1.0).epsilon(0.03));
    CHECK(field.value(0.0, 0.6) == doctest::Approx(0.5).epsilon(0.03));
    CHECK(field.value(0.0, 0.75) < 0.02);
}

TEST_CASE("terminal expectation of the constant is one") {
    SpaceTimeGrid grid = make_centered_grid(8.0, 320, 0.0, 2.5e-3, 521);
    TerminalExpectation te = terminal_expectation(subdiffusion_preset(0.5), kOne, 1.0, grid);
    CHECK(te.extrapolated.value(0.0, 0.0) == doctest::Approx(1.0).epsilon(0.03));
    // Close to the terminal time the walker has barely moved.
    CHECK(te.extrapolated.value(0.0, 0.99) == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("terminal gaussian matches the subordination oracle") {
    SpaceTimeGrid grid = make_centered_grid(8.0, 320, 0.0, 2.5e-3, 521);
    TerminalExpectation te = terminal_expectation(subdiffusion_preset(0.5), kGauss, 1.0, grid);
    const double dy = 0.01;
    std::vector<double> ys;
    for (double y = -10.0; y <= 10.0 + 1e-12; y += dy) ys.push_back(y);
    std::vector<double> p = subordination_oracle(0.5, 1.0, 1.0, ys);
    double target = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) target += std::exp(-ys[i] * ys[i]) * p[i] * dy;
    CHECK(te.extrapolated.value(0.0, 0.0) == doctest::Approx(target).epsilon(0.03));
}

TEST_CASE("coupled backward needs the diagonal lattice") {
    SpaceTimeGrid bad = make_centered_grid(2.0, 40, 0.0, 0.01, 11);
    CHECK_THROWS_WITH_AS(
        (void)solve_backward(levy_walk_preset(0.75), kOne, TemporalWeight::indicator(0.02, 0.08), bad),
        doctest::Contains("dx = ds"), std::invalid_argument);

    SpaceTimeGrid good = make_centered_grid(1.0, 100, 0.0, 0.02, 26);
    BackwardField field =
        solve_backward(levy_walk_preset(0.75), kOne, TemporalWeight::indicator(0.1, 0.3), good);
    CHECK(field.value(0.0, 0.0) == doctest::Approx(0.2).epsilon(0.05));
}
