#include "ctrwfp/frac_ops.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace ctrwfp {

std::vector<double> gl_weights(double beta, std::size_t n) {
    if (!(beta > 0.0 && beta < 1.0)) throw std::domain_error("gl_weights: order must lie in (0,1)");
    std::vector<double> g(n + 1);
    g[0] = 1.0;
    for (std::size_t k = 1; k <= n; ++k)
        g[k] = g[k - 1] * (static_cast<double>(k) - 1.0 - beta) / static_cast<double>(k);
    return g;
}

GLStencil make_gl_stencil(double order, double step, std::size_t count) {
    if (!(step > 0.0)) throw std::domain_error("make_gl_stencil: step must be positive");
    return {order, step, gl_weights(order, count)};
}

namespace {

void require_vanishing_top(std::span<const double> f, const char* who) {
    if (f.empty()) return;
    double scale = 0.0;
    for (double v : f) scale = std::max(scale, std::abs(v));
    if (std::abs(f.back()) > 1e-12 * std::max(scale, 1.0))
        throw std::invalid_argument(std::string(who) + ": field must vanish at the window top");
}

// Exact cell moments of r^{q-1} on [k ds, (k+1) ds]:
//   m0_k = ds^q ((k+1)^q - k^q)/q,  m1_k = ds^{q+1} ((k+1)^{q+1} - k^{q+1})/(q+1).
struct PowerCells {
    std::vector<double> m0, m1;
    PowerCells(double q, double ds, std::size_t n) : m0(n), m1(n) {
        double pk = 0.0, pk1 = 0.0;  // k^q, k^{q+1}
        for (std::size_t k = 0; k < n; ++k) {
            const double kp = static_cast<double>(k + 1);
            const double nk = std::pow(kp, q);
            const double nk1 = std::pow(kp, q + 1.0);
            m0[k] = std::pow(ds, q) * (nk - pk) / q;
            m1[k] = std::pow(ds, q + 1.0) * (nk1 - pk1) / (q + 1.0);
            pk = nk;
            pk1 = nk1;
        }
    }
};

// Correlation kernel for the product-trapezoid: out_j = sum_m c_m f_{j+m}.
std::vector<double> frac_integral_kernel(double q, double ds, std::size_t cells) {
    const PowerCells pc(q, ds, cells);
    std::vector<double> c(cells + 1, 0.0);
    for (std::size_t k = 0; k < cells; ++k) {
        const double lever = (pc.m1[k] - static_cast<double>(k) * ds * pc.m0[k]) / ds;
        c[k] += pc.m0[k] - lever;
        c[k + 1] += lever;
    }
    const double inv_gamma = 1.0 / std::tgamma(q);
    for (double& v : c) v *= inv_gamma;
    return c;
}

}  // namespace

std::vector<double> apply_neg_frac_derivative(std::span<const double> f, double beta, double ds) {
    if (!(ds > 0.0)) throw std::domain_error("apply_neg_frac_derivative: ds must be positive");
    require_vanishing_top(f, "apply_neg_frac_derivative");
    const std::size_t n = f.size();
    std::vector<double> out(n, 0.0);
    if (n == 0) return out;
    const std::vector<double> g = gl_weights(beta, n - 1);
    const double scale = std::pow(ds, -beta);
    for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k + j < n; ++k) acc += g[k] * f[j + k];
        out[j] = scale * acc;
    }
    return out;
}

GridField apply_neg_frac_derivative(const GridField& f, const ModelSpec& spec) {
    if (spec.tail.kind == TailKind::none)
        throw std::invalid_argument("apply_neg_frac_derivative: spec has no fractional tail");
    GridField out;
    out.x = f.x;
    out.t = f.t;
    out.v.resize(f.v.size());
    for (std::size_t ix = 0; ix < f.x.size(); ++ix) {
        const double beta = spec.tail.order_at1(f.x[ix]);
        std::span<const double> row(f.v.data() + ix * f.t.n, f.t.n);
        const std::vector<double> r = apply_neg_frac_derivative(row, beta, f.t.dt);
        std::copy(r.begin(), r.end(), out.v.begin() + static_cast<std::ptrdiff_t>(ix * f.t.n));
    }
    return out;
}

std::vector<double> neg_frac_integral(std::span<const double> f, double order, double ds) {
    if (!(ds > 0.0)) throw std::domain_error("neg_frac_integral: ds must be positive");
    if (!(order > 0.0 && order <= 1.0))
        throw std::domain_error("neg_frac_integral: order must lie in (0,1]");
    const std::size_t n = f.size();
    std::vector<double> out(n, 0.0);
    if (n < 2) return out;
    const std::vector<double> c = frac_integral_kernel(order, ds, n - 1);
    for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t m = 0; j + m < n; ++m) acc += c[m] * f[j + m];
        out[j] = acc;
    }
    return out;
}

double indicator_frac_integral(double order, double t1, double t2, double s) {
    if (!(order > 0.0 && order <= 1.0))
        throw std::domain_error("indicator_frac_integral: order must lie in (0,1]");
    if (!(t2 >= t1)) throw std::domain_error("indicator_frac_integral: need t2 >= t1");
    const double hi = std::max(t2 - s, 0.0);
    const double lo = std::max(t1 - s, 0.0);
    return (std::pow(hi, order) - std::pow(lo, order)) / std::tgamma(order + 1.0);
}

namespace {

GridField tail_weighted(const GridField& h, const ModelSpec& spec, bool shift_space) {
    GridField out;
    out.x = h.x;
    out.t = h.t;
    out.v.assign(h.v.size(), 0.0);
    const std::size_t nx = h.x.size(), nt = h.t.n;
    if (nt == 0) return out;
    for (std::size_t ix = 0; ix < nx; ++ix)
        require_vanishing_top(std::span<const double>(h.v.data() + ix * nt, nt), "psi_apply");

    if (spec.coupling == Coupling::levy_walk && shift_space) {
        // Upsilon h(x,s) = gamma h + sum_theta p_theta
        //   int_{v>0} int_{w>v} h(x+theta w, s+v) beta w^{-beta-1}/Gamma(1-beta) dw dv.
        const double beta = spec.tail.beta;
        const double ds = h.t.dt;
        if (nx < 2) throw std::invalid_argument("upsilon_apply: spatial grid too small");
        const double dx = h.x[1] - h.x[0];
        if (std::abs(dx - ds) > 1e-9 * ds)
            throw std::invalid_argument("upsilon_apply: Levy walk needs dx = ds");
        // Cell masses of beta w^{-beta-1}/Gamma(1-beta) on [k ds, (k+1) ds], k >= 1;
        // with dx = ds the spatial shift of cell k is k lattice cells.
        const PowerCells pc(-beta, ds, nt);  // m0 with q = -beta: integral of w^{-beta-1}
        for (std::size_t ix = 0; ix < nx; ++ix) {
            for (std::size_t j = 0; j < nt; ++j) {
                double acc = 0.0;
                // v-cell l >= 0 pairs with w-cells k >= max(l,1).
                for (std::size_t l = 0; j + l + 1 < nt; ++l) {
                    double inner = 0.0;
                    for (std::size_t k = std::max<std::size_t>(l, 1); k < nt; ++k) {
                        const double wmass = beta / std::tgamma(1.0 - beta) * pc.m0[k];
                        double hv = 0.0;
                        const std::size_t jl = j + l + 1;
                        if (jl < nt) {
                            if (ix + k < nx) hv += spec.p_plus * h.at(ix + k, jl);
                            if (ix >= k) hv += (1.0 - spec.p_plus) * h.at(ix - k, jl);
                        }
                        inner += wmass * hv;
                    }
                    acc += inner * ds;
                }
                double g = 0.0;
                if (spec.gamma_t) g = spec.gamma_at1(h.x[ix], h.t.at(j));
                out.at(ix, j) = g * h.at(ix, j) + acc;
            }
        }
        return out;
    }

    for (std::size_t ix = 0; ix < nx; ++ix) {
        std::span<const double> row(h.v.data() + ix * nt, nt);
        std::vector<double> tail(nt, 0.0);
        if (spec.tail.kind == TailKind::stable || spec.tail.kind == TailKind::variable_stable) {
            const double beta = spec.tail.order_at1(h.x[ix]);
            tail = neg_frac_integral(row, 1.0 - beta, h.t.dt);
        } else if (spec.tail.kind == TailKind::custom) {
            // Plain trapezoid on the tabulated tail H(v).
            for (std::size_t j = 0; j < nt; ++j) {
                double acc = 0.0;
                for (std::size_t k = 1; j + k < nt; ++k) {
                    const double v0 = h.t.dt * static_cast<double>(k - 1);
                    const double v1 = h.t.dt * static_cast<double>(k);
                    const double f0 = (k == 1 ? 0.0 : row[j + k - 1] * spec.tail.eval1(h.x[ix], v0));
                    const double f1 = row[j + k] * spec.tail.eval1(h.x[ix], v1);
                    acc += 0.5 * (f0 + f1) * h.t.dt;
                }
                tail[j] = acc;
            }
        }
        for (std::size_t j = 0; j < nt; ++j) {
            double g = 0.0;
            if (spec.gamma_t) g = spec.gamma_at1(h.x[ix], h.t.at(j));
            out.at(ix, j) = g * row[j] + tail[j];
        }
    }
    return out;
}

}  // namespace

GridField psi_apply(const GridField& h, const ModelSpec& spec) {
    return tail_weighted(h, spec, false);
}

GridField upsilon_apply(const GridField& h, const ModelSpec& spec) {
    return tail_weighted(h, spec, true);
}

namespace {

std::complex<double> renewal_symbol(double gamma0, double beta, bool stable_tail,
                                    std::complex<double> lambda) {
    std::complex<double> denom(gamma0, 0.0);
    if (stable_tail) denom += std::pow(lambda, beta - 1.0);
    return 1.0 / (lambda * denom);
}

}  // namespace

double laplace_invert_renewal(double gamma0, double beta, bool has_stable_tail, double t) {
    if (!(t > 0.0)) throw std::domain_error("laplace_invert_renewal: t must be positive");
    constexpr int kNodes = 32;
    const double r = 2.0 * kNodes / (5.0 * t);
    double acc = 0.5 * std::exp(r * t) * renewal_symbol(gamma0, beta, has_stable_tail, {r, 0.0}).real();
    for (int k = 1; k < kNodes; ++k) {
        const double theta = k * std::numbers::pi / kNodes;
        const double cot = std::cos(theta) / std::sin(theta);
        const std::complex<double> s(r * theta * cot, r * theta);
        const double sigma = theta + (theta * cot - 1.0) * cot;
        const std::complex<double> term =
            std::exp(t * s) * renewal_symbol(gamma0, beta, has_stable_tail, s) *
            std::complex<double>(1.0, sigma);
        acc += term.real();
    }
    return acc * r / kNodes;
}

namespace {

double constant_gamma(const ModelSpec& spec) {
    if (!spec.gamma_t) return 0.0;
    const double g = spec.gamma_at1(0.0, 0.0);
    for (double x : {-3.0, 0.7, 2.0})
        for (double s : {0.0, 1.0, 7.0})
            if (std::abs(spec.gamma_at1(x, s) - g) > 1e-12 * (1.0 + std::abs(g)))
                throw std::invalid_argument("memory kernel needs time-homogeneous constant gamma");
    return g;
}

}  // namespace

MemoryKernel memory_kernel(const ModelSpec& spec, const TimeGrid& t_grid, bool force_laplace) {
    if (spec.tail.kind == TailKind::variable_stable || spec.tail.kind == TailKind::custom)
        throw std::invalid_argument(
            "memory_kernel: only constant-order stable or pure-drift clocks supported");
    MemoryKernel kernel;
    kernel.grid = t_grid;
    kernel.gamma0 = constant_gamma(spec);
    kernel.values.resize(t_grid.n);
    const bool stable_tail = spec.tail.kind == TailKind::stable;
    if (stable_tail) kernel.beta = spec.tail.beta;
    if (!stable_tail && !(kernel.gamma0 > 0.0))
        throw std::invalid_argument("memory_kernel: degenerate clock (gamma = 0, no tail)");
    if (stable_tail && kernel.gamma0 == 0.0 && !force_laplace) {
        kernel.provenance = KernelProvenance::closed_form;
        kernel.stable = true;
        const double inv_gamma_beta = 1.0 / std::tgamma(kernel.beta);
        for (std::size_t k = 0; k < t_grid.n; ++k) {
            const double t = t_grid.at(k);
            if (!(t > 0.0)) throw std::domain_error("memory_kernel: grid nodes must be positive");
            kernel.values[k] = std::pow(t, kernel.beta - 1.0) * inv_gamma_beta;
        }
        return kernel;
    }
    if (!stable_tail && !force_laplace) {
        kernel.provenance = KernelProvenance::closed_form;
        for (std::size_t k = 0; k < t_grid.n; ++k) {
            if (!(t_grid.at(k) > 0.0))
                throw std::domain_error("memory_kernel: grid nodes must be positive");
            kernel.values[k] = 1.0 / kernel.gamma0;
        }
        return kernel;
    }
    kernel.provenance = KernelProvenance::laplace_inverted;
    for (std::size_t k = 0; k < t_grid.n; ++k) {
        const double t = t_grid.at(k);
        if (!(t > 0.0)) throw std::domain_error("memory_kernel: grid nodes must be positive");
        kernel.values[k] = laplace_invert_renewal(kernel.gamma0, kernel.beta, stable_tail, t);
    }
    return kernel;
}

std::vector<double> psi_star_apply(std::span<const double> m, const ModelSpec& spec, double dt) {
    if (!(dt > 0.0)) throw std::domain_error("psi_star_apply: dt must be positive");
    const double gamma0 = constant_gamma(spec);
    const std::size_t n = m.size();
    std::vector<double> out(n, 0.0);
    if (spec.tail.kind == TailKind::none) {
        for (std::size_t j = 0; j < n; ++j) out[j] = gamma0 * m[j];
        return out;
    }
    if (spec.tail.kind != TailKind::stable)
        throw std::invalid_argument("psi_star_apply: constant-order stable tails only");
    const double beta = spec.tail.beta;
    // Tail cells: integral of v^-beta/Gamma(1-beta) over [k dt, (k+1) dt].
    std::vector<double> eta(n);
    const double scale = std::pow(dt, 1.0 - beta) / std::tgamma(2.0 - beta);
    double prev = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double cur = std::pow(static_cast<double>(k + 1), 1.0 - beta);
        eta[k] = scale * (cur - prev);
        prev = cur;
    }
    for (std::size_t j = 0; j < n; ++j) {
        double acc = gamma0 * m[j];
        for (std::size_t k = 0; k <= j; ++k) acc += eta[k] * m[j - k];
        out[j] = acc;
    }
    return out;
}

std::vector<double> psi_star_inverse(std::span<const double> m, const MemoryKernel& kernel) {
    const std::size_t n = m.size();
    if (n != kernel.grid.n)
        throw std::invalid_argument("psi_star_inverse: measure/kernel grid mismatch");
    const double dt = kernel.grid.dt;
    if (!(dt > 0.0)) throw std::invalid_argument("psi_star_inverse: kernel grid has no step");
    // Cell masses of V over [k dt, (k+1) dt].
    std::vector<double> cells(n);
    if (kernel.stable) {
        const double scale = std::pow(dt, kernel.beta) / std::tgamma(kernel.beta + 1.0);
        double prev = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double cur = std::pow(static_cast<double>(k + 1), kernel.beta);
            cells[k] = scale * (cur - prev);
            prev = cur;
        }
    } else if (kernel.provenance == KernelProvenance::closed_form) {
        for (std::size_t k = 0; k < n; ++k) cells[k] = dt / kernel.gamma0;
    } else {
        // Trapezoid on tabulated density; first cell extrapolates flat.
        for (std::size_t k = 0; k < n; ++k) {
            const double lo = (k == 0) ? kernel.values[0] : kernel.values[k - 1];
            cells[k] = 0.5 * (lo + kernel.values[k]) * dt;
        }
    }
    // Differenced-kernel form of d/dt (V * m): the backward difference of the
    // convolution telescopes into cells_0 m_j + sum_k (cells_k - cells_{k-1}) m_{j-k},
    // so a constant-cell kernel inverts exactly.
    std::vector<double> dcells(n);
    dcells[0] = cells[0];
    for (std::size_t k = 1; k < n; ++k) dcells[k] = cells[k] - cells[k - 1];
    std::vector<double> out(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k <= j; ++k) acc += dcells[k] * m[j - k];
        out[j] = acc / dt;
    }
    return out;
}

std::vector<double> apply_gl_time_derivative(std::span<const double> m, double order, double dt) {
    if (!(dt > 0.0)) throw std::domain_error("apply_gl_time_derivative: dt must be positive");
    const std::size_t n = m.size();
    std::vector<double> out(n, 0.0);
    if (n == 0) return out;
    const std::vector<double> g = gl_weights(order, n - 1);
    const double scale = std::pow(dt, -order);
    for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k <= j; ++k) acc += g[k] * m[j - k];
        out[j] = scale * acc;
    }
    return out;
}

}  // namespace ctrwfp
