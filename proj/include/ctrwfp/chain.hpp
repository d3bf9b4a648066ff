#pragma once

#include <cstddef>
#include <vector>

#include "ctrwfp/model.hpp"
#include "ctrwfp/rng.hpp"

namespace ctrwfp {

// Pre-limit space-time chain {(A_n, D_n)} at scale c; d = 1.
struct DiscreteChain {
    double scale = 1.0;
    double x0 = 0.0, s0 = 0.0;
    std::vector<double> positions;  // A_0..A_N
    std::vector<double> times;      // D_0..D_N, strictly increasing
};

// Inverse sampling of the truncated Pareto tail 1 ^ [H_beta(w)/c].
// u in (0,1]; u = 1 hits the support cutoff (Gamma(1-beta) c)^(-1/beta).
double sample_waiting_time(double c, double beta, double u);

// One transition of the chain kernel. Waiting time first (beta at the
// pre-jump position), then the spatial move with probabilities evaluated at
// the post-wait time s + W; Levy walk couples the move to W.
void step_chain(const ModelSpec& spec, double c, double& x, double& s, RngStream& rng);

// Lazy block growth until D_N > horizon.
DiscreteChain sample_chain(const ModelSpec& spec, double c, double x0, double s0,
                           double horizon, RngStream& rng, std::size_t block = 4096,
                           std::size_t max_steps = 50'000'000);

// X^c(t) = A_n for D_n <= t < D_{n+1}; right-continuous, waiting precedes jumping.
double evaluate_ctrw(const DiscreteChain& chain, double t);

// Streaming version for ensembles: X^c at each query time (ts ascending).
std::vector<double> chain_values_at(const ModelSpec& spec, double c, double x0, double s0,
                                    const std::vector<double>& ts, RngStream& rng,
                                    std::size_t max_steps = 50'000'000);

}  // namespace ctrwfp
