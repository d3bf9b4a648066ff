#pragma once

#include <cstddef>
#include <vector>

#include "ctrwfp/grid.hpp"
#include "ctrwfp/model.hpp"

namespace ctrwfp {

struct GridMeasure {
    SpaceTimeGrid grid;
    std::size_t injection_level = 0;
    double total_initial = 0.0;
    std::vector<double> initial;  // density over y at the injection level
    std::vector<double> mass;     // density values, level-major [jt][iy]
    std::vector<double> leakage;  // per level: injected mass minus interior mass

    double& at(std::size_t jt, std::size_t iy) { return mass[jt * grid.ny + iy]; }
    double at(std::size_t jt, std::size_t iy) const { return mass[jt * grid.ny + iy]; }
    std::vector<double> slice(std::size_t jt) const {
        return {mass.begin() + static_cast<std::ptrdiff_t>(jt * grid.ny),
                mass.begin() + static_cast<std::ptrdiff_t>((jt + 1) * grid.ny)};
    }
};

// Marches the forward law of an uncoupled model: at each level the memory
// convolution of past levels feeds the flux-form Fokker-Planck operator,
// with the newest contribution and the drift treated implicitly.
GridMeasure solve_fpe(const ModelSpec& spec, const std::vector<double>& mu, double s,
                      const SpaceTimeGrid& grid);

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
    double mass = 0.0;
};

Moments solution_moments(const GridMeasure& field, double t);

}  // namespace ctrwfp
