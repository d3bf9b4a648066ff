#include <cmath>
#include <stdexcept>
#include <vector>

#include "ctrwfp/forward.hpp"
#include "ctrwfp/oracles.hpp"
#include "ctrwfp/rng.hpp"
#include "doctest.h"

using namespace ctrwfp;

TEST_CASE("zero initial measure stays zero") {
    SpaceTimeGrid grid = make_centered_grid(5.0, 50, 0.0, 0.01, 51);
    std::vector<double> mu(grid.ny, 0.0);
    GridMeasure field = solve_fpe(subdiffusion_preset(0.5), mu, 0.0, grid);
    for (double v : field.mass) CHECK(v == 0.0);
    CHECK(field.leakage.back() == 0.0);
}

TEST_CASE("hat-split point mass keeps the first moment") {
    SpaceTimeGrid grid = make_centered_grid(4.0, 57, 0.0, 0.01, 3);
    RngStream rng(11, 2);
    for (int rep = 0; rep < 20; ++rep) {
        const double y = 7.0 * (rng.uniform01() - 0.5);
        std::vector<double> mu = point_mass_density(grid, y, 2.5);
        double mass = 0.0, first = 0.0;
        for (std::size_t i = 0; i < grid.ny; ++i) {
            mass += mu[i] * grid.dy;
            first += mu[i] * grid.dy * grid.y_at(i);
        }
        CHECK(mass == doctest::Approx(2.5).epsilon(1e-12));
        CHECK(first == doctest::Approx(2.5 * y).epsilon(1e-9));
    }
}

TEST_CASE("order near one recovers the heat kernel") {
    SpaceTimeGrid grid = make_centered_grid(10.0, 400, 0.0, 1.0 / 2000.0, 2001);
    std::vector<double> mu = point_mass_density(grid, 0.0);
    GridMeasure field = solve_fpe(subdiffusion_preset(0.99), mu, 0.0, grid);
    std::vector<double> last = field.slice(grid.t.n - 1);
    double l1 = 0.0;
    for (std::size_t i = 0; i < grid.ny; ++i)
        l1 += std::abs(last[i] - heat_kernel(grid.y_at(i), 1.0)) * grid.dy;
    CHECK(l1 < 1e-2);
}

TEST_CASE("subdiffusive variance and mass accounting") {
    SpaceTimeGrid grid = make_centered_grid(10.0, 200, 0.0, 1e-3, 1001);
    std::vector<double> mu = point_mass_density(grid, 0.0);
    GridMeasure field = solve_fpe(subdiffusion_preset(0.5), mu, 0.0, grid);
    Moments m = solution_moments(field, 1.0);
    CHECK(m.variance == doctest::Approx(1.1283791670955126).epsilon(0.02));
    CHECK(std::abs(m.mean) < 1e-9);

    for (std::size_t jt = 1; jt < grid.t.n; ++jt) {
        double interior = 0.0;
        for (std::size_t i = 0; i < grid.ny; ++i) interior += field.at(jt, i) * grid.dy;
        CHECK(interior + field.leakage[jt] == doctest::Approx(1.0).epsilon(1e-6));
    }
    CHECK(field.leakage.back() < 1e-6);
}

TEST_CASE("variance growth follows the anomalous exponent") {
    SpaceTimeGrid grid = make_centered_grid(40.0, 200, 0.0, 0.01, 1601);
    std::vector<double> mu = point_mass_density(grid, 0.0);
    GridMeasure field = solve_fpe(subdiffusion_preset(0.5), mu, 0.0, grid);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const std::vector<double> ts{1.0, 2.0, 4.0, 8.0, 16.0};
    for (double t : ts) {
        const double lx = std::log(t), ly = std::log(solution_moments(field, t).variance);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(ts.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("coupled models have no forward decomposition") {
    SpaceTimeGrid grid = make_centered_grid(2.0, 40, 0.0, 0.01, 11);
    std::vector<double> mu = point_mass_density(grid, 0.0);
    CHECK_THROWS_WITH_AS((void)solve_fpe(levy_walk_preset(0.75), mu, 0.0, grid),
                         doctest::Contains("Monte Carlo"), std::invalid_argument);
}
