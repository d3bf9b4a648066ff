#include "ctrwfp/chain.hpp"

#include <cmath>
#include <stdexcept>

namespace ctrwfp {

double sample_waiting_time(double c, double beta, double u) {
    if (!(c > 0.0)) throw std::domain_error("sample_waiting_time: scale c must be positive");
    if (!(beta > 0.0 && beta < 1.0))
        throw std::domain_error("sample_waiting_time: beta must lie in (0,1)");
    if (!(u > 0.0 && u <= 1.0))
        throw std::domain_error("sample_waiting_time: u must lie in (0,1]");
    // P(W > w) = min(1, H_beta(w)/c), H_beta(w) = w^-beta / Gamma(1-beta).
    return std::pow(std::tgamma(1.0 - beta) * c * u, -1.0 / beta);
}

namespace {

double clock_wait(const ModelSpec& spec, double c, double x, double s, RngStream& rng) {
    if (spec.tail.kind == TailKind::none) {
        const double g = spec.gamma_at1(x, s);
        if (!(g > 0.0)) throw std::domain_error("step_chain: drift clock needs gamma > 0");
        return 1.0 / (c * g);
    }
    const double beta = spec.tail.order_at1(x);
    return sample_waiting_time(c, beta, rng.uniform01_pos());
}

}  // namespace

void step_chain(const ModelSpec& spec, double c, double& x, double& s, RngStream& rng) {
    const double w = clock_wait(spec, c, x, s, rng);
    const double sw = s + w;
    if (spec.coupling == Coupling::levy_walk) {
        const double theta = (rng.uniform01() < spec.p_plus) ? 1.0 : -1.0;
        double b = 0.0;
        if (spec.drift) b = spec.drift_at1(x, s);
        x += w * theta + b / c;
        s = sw;
        return;
    }
    switch (spec.jumps) {
        case JumpKind::none:
            break;
        case JumpKind::lattice: {
            const LatticeStep step = lattice_probabilities(spec, c, x, sw);
            x += (rng.uniform01() < step.left) ? -step.dx : step.dx;
            break;
        }
        case JumpKind::gaussian: {
            const double a = spec.diffusion_at1(x, sw);
            double b = 0.0;
            if (spec.drift) b = spec.drift_at1(x, sw);
            x += b / c + std::sqrt(a / c) * rng.normal();
            break;
        }
    }
    s = sw;
}

DiscreteChain sample_chain(const ModelSpec& spec, double c, double x0, double s0,
                           double horizon, RngStream& rng, std::size_t block,
                           std::size_t max_steps) {
    DiscreteChain chain;
    chain.scale = c;
    chain.x0 = x0;
    chain.s0 = s0;
    chain.positions.reserve(block);
    chain.times.reserve(block);
    chain.positions.push_back(x0);
    chain.times.push_back(s0);
    double x = x0, s = s0;
    std::size_t n = 0;
    while (s <= horizon) {
        if (++n > max_steps)
            throw std::runtime_error("sample_chain: step budget exhausted before horizon");
        step_chain(spec, c, x, s, rng);
        chain.positions.push_back(x);
        chain.times.push_back(s);
    }
    return chain;
}

double evaluate_ctrw(const DiscreteChain& chain, double t) {
    if (chain.times.empty() || t < chain.times.front())
        throw std::domain_error("evaluate_ctrw: t precedes the chain start");
    if (t >= chain.times.back())
        throw std::domain_error("evaluate_ctrw: t beyond the sampled horizon");
    // First index with D_n > t; value is A at the previous node.
    std::size_t lo = 0, hi = chain.times.size() - 1;
    while (lo + 1 < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (chain.times[mid] > t)
            hi = mid;
        else
            lo = mid;
    }
    return chain.positions[lo];
}

std::vector<double> chain_values_at(const ModelSpec& spec, double c, double x0, double s0,
                                    const std::vector<double>& ts, RngStream& rng,
                                    std::size_t max_steps) {
    std::vector<double> out;
    out.reserve(ts.size());
    if (ts.empty()) return out;
    double x = x0, s = s0;
    if (ts.front() < s0) throw std::domain_error("chain_values_at: query time precedes s0");
    std::size_t q = 0;
    std::size_t n = 0;
    while (q < ts.size()) {
        if (++n > max_steps)
            throw std::runtime_error("chain_values_at: step budget exhausted");
        const double x_prev = x;
        step_chain(spec, c, x, s, rng);
        while (q < ts.size() && s > ts[q]) {
            out.push_back(x_prev);
            ++q;
        }
    }
    return out;
}

}  // namespace ctrwfp
