#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "ctrwfp/grid.hpp"
#include "ctrwfp/model.hpp"

namespace ctrwfp {

// Compactly supported time weight g for the source h(x,s) = f(x) g(s).
struct TemporalWeight {
    enum class Kind { indicator, bump, custom };
    Kind kind = Kind::indicator;
    double lo = 0.0, hi = 0.0;  // support
    double height = 1.0;
    std::function<double(double)> fn;

    static TemporalWeight indicator(double t1, double t2, double height = 1.0);
    // Normalized quartic bump on (t, t+w): 30 (tau-t)^2 (t+w-tau)^2 / w^5.
    static TemporalWeight bump(double t, double w);
    static TemporalWeight custom(std::function<double(double)> fn, double lo, double hi);

    double eval(double tau) const;
    double integral() const;
};

struct BackwardField {
    SpaceTimeGrid grid;               // x lattice + s window
    std::vector<double> v;            // level-major [js][ix]
    double& at(std::size_t js, std::size_t ix) { return v[js * grid.ny + ix]; }
    double at(std::size_t js, std::size_t ix) const { return v[js * grid.ny + ix]; }
    double value(double x, double s) const;  // bilinear probe
};

// Marches -A v = Psi h downward in s: the one-sided fractional memory only
// references larger s, so each level is a spatial tridiagonal solve (drift
// upwinded, diffusion implicit); the Levy walk couples x and s along lattice
// diagonals and needs dx = ds.
BackwardField solve_backward(const ModelSpec& spec, const SpatialField& f,
                             const TemporalWeight& g, const SpaceTimeGrid& grid);

struct TerminalExpectation {
    std::array<double, 3> widths{};
    std::vector<BackwardField> sweep;  // one field per width
    BackwardField extrapolated;        // Richardson in the width
    bool converged = true;             // false: non-monotone sweep somewhere significant
};

// E^{x,s}[f(X_t)] via bumps concentrating at t from the right.
TerminalExpectation terminal_expectation(const ModelSpec& spec, const SpatialField& f, double t,
                                         const SpaceTimeGrid& grid,
                                         std::array<double, 3> widths = {0.2, 0.1, 0.05});

}  // namespace ctrwfp
