#include "ctrwfp/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ctrwfp {

double stable_tail(double beta, double v) {
    if (v <= 0.0) throw std::domain_error("tail argument must be positive");
    return std::pow(v, -beta) / std::tgamma(1.0 - beta);
}

double stable_tail_density(double beta, double w) {
    if (w <= 0.0) throw std::domain_error("density argument must be positive");
    return beta * std::pow(w, -beta - 1.0) / std::tgamma(1.0 - beta);
}

double TemporalTail::order_at(const double* x) const {
    switch (kind) {
        case TailKind::stable:
            return beta;
        case TailKind::variable_stable:
            return beta_field(x);
        default:
            throw std::logic_error("tail has no stable order");
    }
}

double TemporalTail::eval(const double* x, double v) const {
    if (v <= 0.0) throw std::domain_error("tail argument must be positive");
    switch (kind) {
        case TailKind::none:
            return 0.0;
        case TailKind::stable:
            return stable_tail(beta, v);
        case TailKind::variable_stable:
            return stable_tail(beta_field(x), v);
        case TailKind::custom: {
            if (table.empty()) return 0.0;
            if (v <= table.front().first) return table.front().second;
            if (v >= table.back().first) return 0.0;
            auto it = std::upper_bound(table.begin(), table.end(), v,
                                       [](double a, const auto& p) { return a < p.first; });
            auto lo = std::prev(it);
            double t = (v - lo->first) / (it->first - lo->first);
            return lo->second + t * (it->second - lo->second);
        }
    }
    return 0.0;
}

static void check_beta_range(double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw std::domain_error("beta must lie in (0,1)");
}

ModelSpec subdiffusion_preset(double beta, SpaceTimeField drift, double drift_bound) {
    check_beta_range(beta);
    ModelSpec spec;
    spec.dim = 1;
    spec.drift = std::move(drift);
    spec.diffusion = [](const double*, double) { return 1.0; };
    spec.tail.kind = TailKind::stable;
    spec.tail.beta = beta;
    spec.jumps = JumpKind::lattice;
    spec.lattice_rule = LatticeRule::dx_sqrt_inv_c;
    spec.coupling = Coupling::uncoupled;
    spec.bound_drift = drift_bound;
    spec.bound_diffusion = 1.0;
    spec.name = "subdiffusion";
    return spec;
}

ModelSpec variable_order_preset(SpatialField beta_field) {
    if (!beta_field) throw std::domain_error("variable order requires a beta field");
    // probe the declared range; the paper confines beta(x) to (eps, 1-eps)
    for (int i = 0; i <= 200; ++i) {
        double x = -10.0 + 0.1 * i;
        double b = beta_field(&x);
        if (!(b > kVariableOrderEps && b < 1.0 - kVariableOrderEps))
            throw std::domain_error("beta(x) leaves (eps, 1-eps) on the probe grid");
    }
    ModelSpec spec;
    spec.dim = 1;
    spec.diffusion = [](const double*, double) { return 1.0; };
    spec.tail.kind = TailKind::variable_stable;
    spec.tail.beta_field = std::move(beta_field);
    spec.jumps = JumpKind::lattice;
    spec.lattice_rule = LatticeRule::dx_inv_c;
    spec.coupling = Coupling::uncoupled;
    spec.bound_diffusion = 1.0;
    spec.name = "variable_order";
    return spec;
}

ModelSpec levy_walk_preset(double beta, SpaceTimeField drift, double p_plus, double drift_bound) {
    check_beta_range(beta);
    if (!(p_plus >= 0.0 && p_plus <= 1.0))
        throw std::domain_error("direction weights must form a probability distribution");
    ModelSpec spec;
    spec.dim = 1;
    spec.drift = std::move(drift);
    spec.diffusion = nullptr;  // a = 0 and gamma = 0 for the coupled walk
    spec.tail.kind = TailKind::stable;
    spec.tail.beta = beta;
    spec.jumps = JumpKind::none;
    spec.coupling = Coupling::levy_walk;
    spec.p_plus = p_plus;
    spec.bound_drift = drift_bound;
    spec.bound_diffusion = 0.0;
    spec.name = "levy_walk";
    return spec;
}

ModelSpec unit_clock_spec(SpaceTimeField drift, double diffusion_const) {
    ModelSpec spec;
    spec.dim = 1;
    spec.drift = std::move(drift);
    spec.diffusion = [diffusion_const](const double*, double) { return diffusion_const; };
    spec.gamma_t = [](const double*, double) { return 1.0; };
    spec.tail.kind = TailKind::none;
    spec.jumps = JumpKind::gaussian;
    spec.coupling = Coupling::uncoupled;
    spec.bound_diffusion = diffusion_const;
    spec.bound_gamma = 1.0;
    spec.name = "unit_clock";
    return spec;
}

double eval_tail(const ModelSpec& spec, const double* x, double /*s*/, double v) {
    return spec.tail.eval(x, v);
}

double lattice_dx(const ModelSpec& spec, double c) {
    if (c <= 0.0) throw std::domain_error("scale must be positive");
    return spec.lattice_rule == LatticeRule::dx_inv_c ? 1.0 / c : 1.0 / std::sqrt(c);
}

LatticeStep lattice_probabilities(const ModelSpec& spec, double c, double x, double s) {
    double dx = lattice_dx(spec, c);
    double bias = spec.drift_at1(x, s) * dx;
    if (std::abs(bias) > 1.0)
        throw std::domain_error("drift too large for lattice bias at this scale");
    return LatticeStep{dx, 0.5 * (1.0 - bias), 0.5 * (1.0 + bias)};
}

}  // namespace ctrwfp
