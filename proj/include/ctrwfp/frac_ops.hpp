#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ctrwfp/model.hpp"

namespace ctrwfp {

struct TimeGrid {
    double t0 = 0.0;
    double dt = 0.0;
    std::size_t n = 0;  // node count; nodes t0 + k*dt, k = 0..n-1
    double at(std::size_t k) const { return t0 + dt * static_cast<double>(k); }
    double top() const { return at(n == 0 ? 0 : n - 1); }
};

// g_0 = 1, g_k = g_{k-1} (k-1-beta)/k; signs of (-1)^k binom(beta,k).
std::vector<double> gl_weights(double beta, std::size_t n);

struct GLStencil {
    double order = 0.0;
    double step = 0.0;
    std::vector<double> weights;
};

GLStencil make_gl_stencil(double order, double step, std::size_t count);

// Values over (x, t): row-major, row ix spans the time grid.
struct GridField {
    std::vector<double> x;
    TimeGrid t;
    std::vector<double> v;
    double& at(std::size_t ix, std::size_t jt) { return v[ix * t.n + jt]; }
    double at(std::size_t ix, std::size_t jt) const { return v[ix * t.n + jt]; }
};

// (d_{-s}^beta f)(s_j) ~ ds^-beta sum_k g_k f(s_j + k ds), truncated at the
// window top; requires f to vanish there.
std::vector<double> apply_neg_frac_derivative(std::span<const double> f, double beta, double ds);
GridField apply_neg_frac_derivative(const GridField& f, const ModelSpec& spec);

// (I^q f)(t_j) = (1/Gamma(q)) integral_{r>0} f(t_j + r) r^{q-1} dr, product
// trapezoid with exact r^{q-1} cell moments.
std::vector<double> neg_frac_integral(std::span<const double> f, double order, double ds);

// Closed form of the above for f = indicator of [t1, t2].
double indicator_frac_integral(double order, double t1, double t2, double s);

// Psi h = gamma h + integral_{v>0} h(x, s+v) H(x, s; v) dv.
GridField psi_apply(const GridField& h, const ModelSpec& spec);
// Upsilon adds the paired spatial shift for coupled models; equals Psi when uncoupled.
GridField upsilon_apply(const GridField& h, const ModelSpec& spec);

enum class KernelProvenance { closed_form, laplace_inverted };

struct MemoryKernel {
    TimeGrid grid;
    std::vector<double> values;  // density at nodes, all t > 0
    KernelProvenance provenance = KernelProvenance::closed_form;
    bool atom_at_zero = false;
    bool stable = false;   // V(t) = t^{beta-1}/Gamma(beta) exactly
    double beta = 1.0;
    double gamma0 = 0.0;
};

// Renewal density of the clock subordinator; stable tails take the closed
// form unless force_laplace routes them through the Talbot contour.
MemoryKernel memory_kernel(const ModelSpec& spec, const TimeGrid& t_grid,
                           bool force_laplace = false);

// Fixed-Talbot inversion (32 nodes) of V_hat(lambda) = 1/(lambda (gamma + H_hat)).
double laplace_invert_renewal(double gamma0, double beta, bool has_stable_tail, double t);

// Psi* m: gamma m + cell convolution with the tail H (adjoint window looks back).
std::vector<double> psi_star_apply(std::span<const double> m, const ModelSpec& spec, double dt);

// (Psi*)^-1 m = d/dt (V * m): kernel-cell convolution then backward difference.
std::vector<double> psi_star_inverse(std::span<const double> m, const MemoryKernel& kernel);

// GL form of d_t^order on the same causal window; agrees with psi_star_inverse
// for stable kernels within grid tolerance.
std::vector<double> apply_gl_time_derivative(std::span<const double> m, double order, double dt);

}  // namespace ctrwfp
