#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ctrwfp/frac_ops.hpp"

namespace ctrwfp {

// Uniform space-time lattice; spatial nodes are cell centers y0 + i*dy.
struct SpaceTimeGrid {
    double y0 = 0.0;
    double dy = 0.0;
    std::size_t ny = 0;
    TimeGrid t;

    double y_at(std::size_t i) const { return y0 + dy * static_cast<double>(i); }

    std::vector<double> y_nodes() const {
        std::vector<double> ys(ny);
        for (std::size_t i = 0; i < ny; ++i) ys[i] = y_at(i);
        return ys;
    }

    std::size_t time_index(double tq, double tol = 1e-9) const {
        const double pos = (tq - t.t0) / t.dt;
        const auto j = static_cast<std::ptrdiff_t>(pos + 0.5);
        if (j < 0 || static_cast<std::size_t>(j) >= t.n ||
            std::abs(pos - static_cast<double>(j)) > tol * (1.0 + std::abs(pos)))
            throw std::invalid_argument("time query off the grid");
        return static_cast<std::size_t>(j);
    }
};

// Symmetric grid centered on the origin: extent half-width, ny cells.
inline SpaceTimeGrid make_centered_grid(double half_width, std::size_t ny, double t0, double dt,
                                        std::size_t nt) {
    if (ny < 3 || nt < 2) throw std::invalid_argument("make_centered_grid: grid too small");
    SpaceTimeGrid g;
    g.dy = 2.0 * half_width / static_cast<double>(ny);
    g.y0 = -half_width + 0.5 * g.dy;
    g.ny = ny;
    g.t = {t0, dt, nt};
    return g;
}

// Hat-distributed point mass at y: density on the two straddling cell centers
// with the exact first moment.
std::vector<double> point_mass_density(const SpaceTimeGrid& grid, double y, double total = 1.0);

}  // namespace ctrwfp
