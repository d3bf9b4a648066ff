#include "ctrwfp/backward.hpp"

#include <cmath>
#include <stdexcept>

#include "ctrwfp/frac_ops.hpp"
#include "ctrwfp/util.hpp"

namespace ctrwfp {

TemporalWeight TemporalWeight::indicator(double t1, double t2, double height) {
    if (!(t2 > t1)) throw std::invalid_argument("TemporalWeight: need t2 > t1");
    TemporalWeight g;
    g.kind = Kind::indicator;
    g.lo = t1;
    g.hi = t2;
    g.height = height;
    return g;
}

TemporalWeight TemporalWeight::bump(double t, double w) {
    if (!(w > 0.0)) throw std::invalid_argument("TemporalWeight: bump width must be positive");
    TemporalWeight g;
    g.kind = Kind::bump;
    g.lo = t;
    g.hi = t + w;
    return g;
}

TemporalWeight TemporalWeight::custom(std::function<double(double)> fn, double lo, double hi) {
    if (!(hi > lo)) throw std::invalid_argument("TemporalWeight: empty support");
    TemporalWeight g;
    g.kind = Kind::custom;
    g.fn = std::move(fn);
    g.lo = lo;
    g.hi = hi;
    return g;
}

double TemporalWeight::eval(double tau) const {
    if (tau < lo || tau > hi) return 0.0;
    switch (kind) {
        case Kind::indicator:
            return height;
        case Kind::bump: {
            const double w = hi - lo;
            const double u = tau - lo;
            return 30.0 * u * u * (w - u) * (w - u) / std::pow(w, 5);
        }
        case Kind::custom:
            return fn(tau);
    }
    return 0.0;
}

double TemporalWeight::integral() const {
    switch (kind) {
        case Kind::indicator:
            return height * (hi - lo);
        case Kind::bump:
            return 1.0;
        case Kind::custom: {
            // Simpson on a fine fixed lattice of the support.
            const int n = 2000;
            const double h = (hi - lo) / n;
            double acc = fn(lo) + fn(hi);
            for (int k = 1; k < n; ++k) acc += fn(lo + k * h) * (k % 2 ? 4.0 : 2.0);
            return acc * h / 3.0;
        }
    }
    return 0.0;
}

double BackwardField::value(double x, double s) const {
    const double px = (x - grid.y0) / grid.dy;
    const double pt = (s - grid.t.t0) / grid.t.dt;
    if (px < 0.0 || px > static_cast<double>(grid.ny - 1) || pt < 0.0 ||
        pt > static_cast<double>(grid.t.n - 1))
        throw std::invalid_argument("BackwardField::value: probe outside the grid");
    const auto i0 = std::min(static_cast<std::size_t>(px), grid.ny - 2);
    const auto j0 = std::min(static_cast<std::size_t>(pt), grid.t.n - 2);
    const double fx = px - static_cast<double>(i0);
    const double ft = pt - static_cast<double>(j0);
    return (1.0 - fx) * (1.0 - ft) * at(j0, i0) + fx * (1.0 - ft) * at(j0, i0 + 1) +
           (1.0 - fx) * ft * at(j0 + 1, i0) + fx * ft * at(j0 + 1, i0 + 1);
}

namespace {

// Psi h rows for h = f(x) g(s): f(x) [gamma g + I^{1-beta(x)} g], level-major.
std::vector<double> source_field(const ModelSpec& spec, const SpatialField& f,
                                 const TemporalWeight& g, const SpaceTimeGrid& grid,
                                 const std::vector<double>& beta) {
    const std::size_t nx = grid.ny, ns = grid.t.n;
    std::vector<double> src(nx * ns, 0.0);
    std::vector<double> fx(nx);
    for (std::size_t i = 0; i < nx; ++i) {
        const double x = grid.y_at(i);
        fx[i] = f(&x);
    }
    const bool fractional = spec.tail.kind != TailKind::none;
    std::vector<double> g_nodes;
    if (g.kind != TemporalWeight::Kind::indicator) {
        g_nodes.resize(ns);
        for (std::size_t j = 0; j < ns; ++j) g_nodes[j] = g.eval(grid.t.at(j));
    }
    // Rows share the fractional integral when the order is constant.
    std::vector<double> shared;
    const bool constant_order =
        !fractional || spec.tail.kind == TailKind::stable || spec.coupling == Coupling::levy_walk;
    if (fractional && constant_order && g.kind == TemporalWeight::Kind::indicator) {
        shared.resize(ns);
        for (std::size_t j = 0; j < ns; ++j)
            shared[j] =
                g.height * indicator_frac_integral(1.0 - spec.tail.beta, g.lo, g.hi, grid.t.at(j));
    } else if (fractional && constant_order) {
        shared = neg_frac_integral(g_nodes, 1.0 - spec.tail.beta, grid.t.dt);
    }
    for (std::size_t i = 0; i < nx; ++i) {
        const double x = grid.y_at(i);
        for (std::size_t j = 0; j < ns; ++j) {
            const double s = grid.t.at(j);
            double val = 0.0;
            if (spec.gamma_t) val += spec.gamma_at1(x, s) * g.eval(s);
            if (fractional) {
                if (constant_order)
                    val += shared[j];
                else if (g.kind == TemporalWeight::Kind::indicator)
                    val += g.height * indicator_frac_integral(1.0 - beta[i], g.lo, g.hi, s);
            }
            src[j * nx + i] = fx[i] * val;
        }
        if (fractional && !constant_order && g.kind != TemporalWeight::Kind::indicator) {
            const std::vector<double> row = neg_frac_integral(g_nodes, 1.0 - beta[i], grid.t.dt);
            for (std::size_t j = 0; j < ns; ++j) src[j * nx + i] += fx[i] * row[j];
        }
    }
    return src;
}

BackwardField solve_uncoupled(const ModelSpec& spec, const SpatialField& f,
                              const TemporalWeight& g, const SpaceTimeGrid& grid) {
    const std::size_t nx = grid.ny, ns = grid.t.n;
    const double dx = grid.dy, ds = grid.t.dt;

    std::vector<double> beta(nx, 0.5);
    const bool fractional = spec.tail.kind != TailKind::none;
    if (fractional)
        for (std::size_t i = 0; i < nx; ++i) beta[i] = spec.tail.order_at1(grid.y_at(i));

    BackwardField out;
    out.grid = grid;
    out.v.assign(nx * ns, 0.0);

    const std::vector<double> src = source_field(spec, f, g, grid, beta);

    // Per-node GL weights; rows G[k] over x.
    std::vector<double> glw;     // constant-order path
    std::vector<double> gltab;   // variable-order path, [k][i]
    std::vector<double> rfac(nx);
    if (fractional) {
        if (spec.tail.kind == TailKind::stable) {
            glw = gl_weights(spec.tail.beta, ns - 1);
            for (std::size_t i = 0; i < nx; ++i) rfac[i] = std::pow(ds, -spec.tail.beta);
        } else {
            gltab.assign(ns * nx, 1.0);
            for (std::size_t k = 1; k < ns; ++k)
                for (std::size_t i = 0; i < nx; ++i)
                    gltab[k * nx + i] = gltab[(k - 1) * nx + i] *
                                        (static_cast<double>(k) - 1.0 - beta[i]) /
                                        static_cast<double>(k);
            for (std::size_t i = 0; i < nx; ++i) rfac[i] = std::pow(ds, -beta[i]);
        }
    }

    std::vector<double> hist(nx), rhs(nx), lo(nx), di(nx), up(nx), sol(nx), work;
    std::vector<double> b(nx, 0.0), a(nx, 0.0);

    for (std::size_t j = ns - 1; j-- > 0;) {
        const double s = grid.t.at(j);
        for (std::size_t i = 0; i < nx; ++i) {
            const double x = grid.y_at(i);
            if (spec.drift) b[i] = spec.drift_at1(x, s);
            a[i] = spec.diffusion_at1(x, s);
        }
        if (fractional) {
            for (std::size_t i = 0; i < nx; ++i) hist[i] = 0.0;
            if (!glw.empty()) {
                for (std::size_t k = 1; k + j < ns; ++k) {
                    const double* vk = out.v.data() + (j + k) * nx;
                    const double w = glw[k];
                    for (std::size_t i = 0; i < nx; ++i) hist[i] += w * vk[i];
                }
            } else {
                for (std::size_t k = 1; k + j < ns; ++k) {
                    const double* vk = out.v.data() + (j + k) * nx;
                    const double* w = gltab.data() + k * nx;
                    for (std::size_t i = 0; i < nx; ++i) hist[i] += w[i] * vk[i];
                }
            }
            for (std::size_t i = 0; i < nx; ++i) {
                rhs[i] = src[j * nx + i] - rfac[i] * hist[i];
                di[i] = rfac[i] + a[i] / (dx * dx) + std::abs(b[i]) / dx;
                up[i] = -(0.5 * a[i] / (dx * dx) + std::max(b[i], 0.0) / dx);
                lo[i] = -(0.5 * a[i] / (dx * dx) + std::max(-b[i], 0.0) / dx);
            }
        } else {
            // Drift clock: gamma d_{-s} v = L v + Psi h, implicit Euler in s.
            const double* vn = out.v.data() + (j + 1) * nx;
            for (std::size_t i = 0; i < nx; ++i) {
                const double gamma = spec.gamma_at1(grid.y_at(i), s);
                if (!(gamma > 0.0))
                    throw std::invalid_argument("solve_backward: degenerate clock");
                const double r = gamma / ds;
                rhs[i] = src[j * nx + i] + r * vn[i];
                di[i] = r + a[i] / (dx * dx) + std::abs(b[i]) / dx;
                up[i] = -(0.5 * a[i] / (dx * dx) + std::max(b[i], 0.0) / dx);
                lo[i] = -(0.5 * a[i] / (dx * dx) + std::max(-b[i], 0.0) / dx);
            }
        }
        solve_tridiagonal(lo, di, up, rhs, sol, work);
        double* vj = out.v.data() + j * nx;
        for (std::size_t i = 0; i < nx; ++i) vj[i] = sol[i];
    }
    return out;
}

BackwardField solve_levy(const ModelSpec& spec, const SpatialField& f, const TemporalWeight& g,
                         const SpaceTimeGrid& grid) {
    const std::size_t nx = grid.ny, ns = grid.t.n;
    const double dx = grid.dy, ds = grid.t.dt;
    if (std::abs(dx - ds) > 1e-9 * ds)
        throw std::invalid_argument("solve_backward: Levy walk needs a diagonal grid (dx = ds)");

    const double beta = spec.tail.beta;
    std::vector<double> beta_dummy;
    const std::vector<double> src = source_field(spec, f, g, grid, beta_dummy);
    const std::vector<double> glw = gl_weights(beta, ns - 1);
    const double rb = std::pow(ds, -beta);
    const double pp = spec.p_plus, pm = 1.0 - spec.p_plus;

    BackwardField out;
    out.grid = grid;
    out.v.assign(nx * ns, 0.0);

    std::vector<double> acc(nx), rhs(nx), lo(nx), di(nx), up(nx), sol(nx), work, b(nx, 0.0);
    const bool drifted = !spec.drift_is_zero();

    for (std::size_t j = ns - 1; j-- > 0;) {
        const double s = grid.t.at(j);
        for (std::size_t i = 0; i < nx; ++i) acc[i] = 0.0;
        // Diagonal GL memory: level j+k shifted k cells along each direction.
        for (std::size_t k = 1; k + j < ns; ++k) {
            const double* vk = out.v.data() + (j + k) * nx;
            const double w = glw[k];
            if (k < nx) {
                for (std::size_t i = 0; i + k < nx; ++i) acc[i] += pp * w * vk[i + k];
                for (std::size_t i = k; i < nx; ++i) acc[i] += pm * w * vk[i - k];
            }
        }
        if (!drifted) {
            double* vj = out.v.data() + j * nx;
            for (std::size_t i = 0; i < nx; ++i) vj[i] = src[j * nx + i] / rb - acc[i];
        } else {
            for (std::size_t i = 0; i < nx; ++i) {
                b[i] = spec.drift_at1(grid.y_at(i), s);
                rhs[i] = src[j * nx + i] - rb * acc[i];
                di[i] = rb + std::abs(b[i]) / dx;
                up[i] = -std::max(b[i], 0.0) / dx;
                lo[i] = -std::max(-b[i], 0.0) / dx;
            }
            solve_tridiagonal(lo, di, up, rhs, sol, work);
            double* vj = out.v.data() + j * nx;
            for (std::size_t i = 0; i < nx; ++i) vj[i] = sol[i];
        }
    }
    return out;
}

}  // namespace

BackwardField solve_backward(const ModelSpec& spec, const SpatialField& f,
                             const TemporalWeight& g, const SpaceTimeGrid& grid) {
    if (grid.ny < 3 || grid.t.n < 2) throw std::invalid_argument("solve_backward: grid too small");
    if (!(g.hi < grid.t.top()))
        throw std::invalid_argument(
            "solve_backward: weight support must sit strictly below the window top");
    if (!f) throw std::invalid_argument("solve_backward: missing terminal profile");
    if (spec.coupling == Coupling::levy_walk) return solve_levy(spec, f, g, grid);
    return solve_uncoupled(spec, f, g, grid);
}

TerminalExpectation terminal_expectation(const ModelSpec& spec, const SpatialField& f, double t,
                                         const SpaceTimeGrid& grid, std::array<double, 3> widths) {
    if (!(widths[0] > widths[1] && widths[1] > widths[2]))
        throw std::invalid_argument("terminal_expectation: widths must decrease");
    TerminalExpectation te;
    te.widths = widths;
    te.sweep.reserve(3);
    for (double w : widths)
        te.sweep.push_back(solve_backward(spec, f, TemporalWeight::bump(t, w), grid));
    te.extrapolated.grid = grid;
    te.extrapolated.v.resize(te.sweep[2].v.size());
    double scale = 0.0;
    for (double v : te.sweep[2].v) scale = std::max(scale, std::abs(v));
    std::size_t suspect = 0, checked = 0;
    for (std::size_t m = 0; m < te.extrapolated.v.size(); ++m) {
        const double v1 = te.sweep[0].v[m], v2 = te.sweep[1].v[m], v3 = te.sweep[2].v[m];
        te.extrapolated.v[m] = 2.0 * v3 - v2;
        if (std::abs(v1 - v3) > 1e-6 * std::max(scale, 1e-300)) {
            ++checked;
            if ((v2 - v1) * (v3 - v2) < 0.0) ++suspect;
        }
    }
    te.converged = checked == 0 || suspect * 100 < checked;
    return te;
}

}  // namespace ctrwfp
