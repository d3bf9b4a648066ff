#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace ctrwfp {

// Scalar field over (position, time). Position is passed as a pointer of
// length dim; every preset is one-dimensional but Monte Carlo accepts d <= 4.
using SpaceTimeField = std::function<double(const double* x, double s)>;
using SpatialField = std::function<double(const double* x)>;

inline constexpr int kMaxDim = 4;

enum class TailKind { none, stable, variable_stable, custom };

// H(x,s;v) = K(x,s; R^d, (v, inf)): tail of the waiting-time Levy measure.
struct TemporalTail {
    TailKind kind = TailKind::stable;
    double beta = 0.5;
    SpatialField beta_field;  // variable_stable only
    std::vector<std::pair<double, double>> table;  // custom: (v, H(v)), v increasing

    double order_at(const double* x) const;
    double order_at1(double x) const { return order_at(&x); }
    // H(x; v); nonincreasing in v, v > 0 required
    double eval(const double* x, double v) const;
    double eval1(double x, double v) const { return eval(&x, v); }
};

enum class JumpKind { none, lattice, gaussian };
enum class Coupling { uncoupled, levy_walk };
enum class LatticeRule { dx_sqrt_inv_c, dx_inv_c };

struct ModelSpec {
    int dim = 1;
    SpaceTimeField drift;       // b(x,s); null means identically 0
    SpaceTimeField diffusion;   // a(x,s) >= 0, coefficient of the isotropic a*I
    SpaceTimeField gamma_t;     // temporal drift of the clock; null means 0
    TemporalTail tail;
    JumpKind jumps = JumpKind::lattice;
    LatticeRule lattice_rule = LatticeRule::dx_sqrt_inv_c;
    Coupling coupling = Coupling::uncoupled;
    double p_plus = 0.5;        // d=1 Levy walk direction weight on +1
    double bound_drift = 0.0;
    double bound_diffusion = 1.0;
    double bound_gamma = 0.0;
    std::string name;

    bool drift_is_zero() const { return !drift; }
    double drift_at(const double* x, double s) const { return drift ? drift(x, s) : 0.0; }
    double diffusion_at(const double* x, double s) const { return diffusion ? diffusion(x, s) : 0.0; }
    double gamma_at(const double* x, double s) const { return gamma_t ? gamma_t(x, s) : 0.0; }
    double drift_at1(double x, double s) const { return drift_at(&x, s); }
    double diffusion_at1(double x, double s) const { return diffusion_at(&x, s); }
    double gamma_at1(double x, double s) const { return gamma_at(&x, s); }
};

// H_beta(v) = v^-beta / Gamma(1-beta), the Pareto-law tail used by every
// stable preset; h_beta(w) = -H_beta'(w).
double stable_tail(double beta, double v);
double stable_tail_density(double beta, double w);

ModelSpec subdiffusion_preset(double beta, SpaceTimeField drift = nullptr,
                              double drift_bound = 0.0);
ModelSpec variable_order_preset(SpatialField beta_field);
ModelSpec levy_walk_preset(double beta, SpaceTimeField drift = nullptr, double p_plus = 0.5,
                           double drift_bound = 0.0);
// Degenerate clock D_r = s0 + r: gamma = 1, no temporal jumps. The walker
// moves as a plain diffusion; useful as the beta -> 1 reference.
ModelSpec unit_clock_spec(SpaceTimeField drift = nullptr, double diffusion_const = 1.0);

double eval_tail(const ModelSpec& spec, const double* x, double s, double v);
inline double eval_tail1(const ModelSpec& spec, double x, double s, double v) {
    return eval_tail(spec, &x, s, v);
}

// Pre-limit lattice data at scale c (d=1): dx and the left/right probabilities
// at (x, s); l + r = 1, r - l = b(x,s) * dx.
struct LatticeStep {
    double dx;
    double left;
    double right;
};
double lattice_dx(const ModelSpec& spec, double c);
LatticeStep lattice_probabilities(const ModelSpec& spec, double c, double x, double s);

// Range guard for variable order; the paper wants beta(x) in (eps, 1-eps).
inline constexpr double kVariableOrderEps = 0.05;

}  // namespace ctrwfp
