#include "ctrwfp/oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ctrwfp/util.hpp"

namespace ctrwfp {

double heat_kernel(double y, double variance) {
    if (!(variance > 0.0)) return 0.0;
    return std::exp(-0.5 * y * y / variance) / std::sqrt(2.0 * std::numbers::pi * variance);
}

double inverse_half_stable_density(double u, double t) {
    if (!(t > 0.0)) throw std::domain_error("inverse_half_stable_density: t must be positive");
    if (u < 0.0) return 0.0;
    return std::exp(-u * u / (4.0 * t)) / std::sqrt(std::numbers::pi * t);
}

std::vector<double> subordination_oracle(double beta, double a, double t,
                                         const std::vector<double>& y_grid) {
    if (std::abs(beta - 0.5) > 1e-12)
        throw std::invalid_argument("subordination_oracle: only beta = 1/2 has a closed-form clock density");
    if (!(a > 0.0) || !(t > 0.0))
        throw std::domain_error("subordination_oracle: need a > 0, t > 0");
    // Substitute u = v^2: integrand 2 v HeatKernel(y, a v^2) q(v^2, t), which is
    // smooth at v = 0; the Gaussian tail dies by u = 24 sqrt(t).
    constexpr std::size_t kNodes = 400;
    static thread_local std::vector<double> nodes, weights;
    static thread_local double cached_vmax = -1.0;
    const double vmax = std::sqrt(24.0 * std::sqrt(t));
    if (nodes.size() != kNodes || cached_vmax != vmax) {
        gauss_legendre(kNodes, 0.0, vmax, nodes, weights);
        cached_vmax = vmax;
    }
    std::vector<double> out(y_grid.size(), 0.0);
    for (std::size_t i = 0; i < y_grid.size(); ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < kNodes; ++k) {
            const double v = nodes[k];
            const double u = v * v;
            acc += weights[k] * 2.0 * v * heat_kernel(y_grid[i], a * u) *
                   inverse_half_stable_density(u, t);
        }
        out[i] = acc;
    }
    return out;
}

double expected_inverse_time(double beta, double t) {
    if (!(beta > 0.0 && beta <= 1.0))
        throw std::domain_error("expected_inverse_time: beta must lie in (0,1]");
    if (!(t >= 0.0)) throw std::domain_error("expected_inverse_time: t must be nonnegative");
    return std::pow(t, beta) / std::tgamma(1.0 + beta);
}

double expected_inverse_time_quadrature(double t) {
    std::vector<double> nodes, weights;
    const double umax = 24.0 * std::sqrt(t);
    gauss_legendre(400, 0.0, umax, nodes, weights);
    double acc = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k)
        acc += weights[k] * nodes[k] * inverse_half_stable_density(nodes[k], t);
    return acc;
}

}  // namespace ctrwfp
