#pragma once

#include <cstddef>
#include <vector>

namespace ctrwfp {

double heat_kernel(double y, double variance);

// Density q(u, t) of the inverse 1/2-stable subordinator: (pi t)^{-1/2} e^{-u^2/4t}.
double inverse_half_stable_density(double u, double t);

// p(y, t) = integral_0^inf HeatKernel(y, a u) q_beta(u, t) du; beta = 1/2 only.
std::vector<double> subordination_oracle(double beta, double a, double t,
                                         const std::vector<double>& y_grid);

// E[E(t)] = t^beta / Gamma(1+beta).
double expected_inverse_time(double beta, double t);

// Quadrature cross-check of the above from the beta = 1/2 density.
double expected_inverse_time_quadrature(double t);

}  // namespace ctrwfp
