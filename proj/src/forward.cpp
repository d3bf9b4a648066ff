#include "ctrwfp/forward.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ctrwfp/frac_ops.hpp"
#include "ctrwfp/util.hpp"

namespace ctrwfp {

std::vector<double> point_mass_density(const SpaceTimeGrid& grid, double y, double total) {
    std::vector<double> mu(grid.ny, 0.0);
    const double pos = (y - grid.y0) / grid.dy;
    if (pos < 0.0 || pos > static_cast<double>(grid.ny - 1))
        throw std::invalid_argument("point_mass_density: point outside the grid");
    const auto i0 = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i0);
    // Hat split across the two straddling centers keeps the first moment exact.
    mu[i0] += (1.0 - frac) * total / grid.dy;
    if (frac > 0.0) mu[i0 + 1] += frac * total / grid.dy;
    return mu;
}

namespace {

struct FluxOperator {
    std::vector<double> lo, di, up;  // out_i = lo_i m_{i-1} + di_i m_i + up_i m_{i+1}

    void assemble(const ModelSpec& spec, const SpaceTimeGrid& grid, double t) {
        const std::size_t n = grid.ny;
        lo.assign(n, 0.0);
        di.assign(n, 0.0);
        up.assign(n, 0.0);
        const double dy = grid.dy;
        std::vector<double> b(n, 0.0), a(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double y = grid.y_at(i);
            if (spec.drift) b[i] = spec.drift_at1(y, t);
            a[i] = spec.diffusion_at1(y, t);
        }
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double be = 0.5 * (b[i] + b[i + 1]);
            const double bp = std::max(be, 0.0), bm = std::min(be, 0.0);
            const double ci = (bp + 0.5 * a[i] / dy) / dy;      // F_e weight on m_i
            const double cj = (bm - 0.5 * a[i + 1] / dy) / dy;  // F_e weight on m_{i+1}
            di[i] -= ci;
            up[i] -= cj;
            lo[i + 1] += ci;
            di[i + 1] += cj;
        }
        // Absorbing edges: outward advective and diffusive flux leaves the domain.
        di[0] -= (std::max(-b[0], 0.0) + 0.5 * a[0] / dy) / dy;
        di[n - 1] -= (std::max(b[n - 1], 0.0) + 0.5 * a[n - 1] / dy) / dy;
    }

    void apply(const std::vector<double>& m, std::vector<double>& out) const {
        const std::size_t n = di.size();
        for (std::size_t i = 0; i < n; ++i) {
            double acc = di[i] * m[i];
            if (i > 0) acc += lo[i] * m[i - 1];
            if (i + 1 < n) acc += up[i] * m[i + 1];
            out[i] = acc;
        }
    }
};

// Cell masses of the clock renewal density V over [k dt, (k+1) dt], per node.
std::vector<double> kernel_cells(const ModelSpec& spec, const SpaceTimeGrid& grid,
                                 const std::vector<double>& beta, double gamma0,
                                 std::size_t count) {
    const std::size_t n = grid.ny;
    const double dt = grid.t.dt;
    std::vector<double> cells(count * n);
    if (spec.tail.kind == TailKind::none) {
        for (std::size_t k = 0; k < count; ++k)
            for (std::size_t i = 0; i < n; ++i) cells[k * n + i] = dt / gamma0;
        return cells;
    }
    if (gamma0 > 0.0) {
        // Smooth density: midpoint values from the Talbot contour.
        for (std::size_t k = 0; k < count; ++k) {
            const double v =
                laplace_invert_renewal(gamma0, spec.tail.beta, true, (k + 0.5) * dt) * dt;
            for (std::size_t i = 0; i < n; ++i) cells[k * n + i] = v;
        }
        return cells;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double bi = beta[i];
        const double scale = std::pow(dt, bi) / std::tgamma(1.0 + bi);
        double prev = 0.0;
        for (std::size_t k = 0; k < count; ++k) {
            const double cur = std::pow(static_cast<double>(k + 1), bi);
            cells[k * n + i] = scale * (cur - prev);
            prev = cur;
        }
    }
    return cells;
}

}  // namespace

GridMeasure solve_fpe(const ModelSpec& spec, const std::vector<double>& mu, double s,
                      const SpaceTimeGrid& grid) {
    if (spec.coupling == Coupling::levy_walk)
        throw std::invalid_argument(
            "solve_fpe: coupled Levy-walk models have no forward decomposition; "
            "use Monte Carlo for their laws");
    if (mu.size() != grid.ny) throw std::invalid_argument("solve_fpe: mu/grid size mismatch");
    if (grid.ny < 3 || grid.t.n < 2) throw std::invalid_argument("solve_fpe: grid too small");

    GridMeasure field;
    field.grid = grid;
    field.injection_level = grid.time_index(s);
    field.initial = mu;
    field.mass.assign(grid.t.n * grid.ny, 0.0);
    field.leakage.assign(grid.t.n, 0.0);

    const std::size_t n = grid.ny;
    const std::size_t js = field.injection_level;
    const double dy = grid.dy;

    std::vector<double> mu_mass(n);
    for (std::size_t i = 0; i < n; ++i) mu_mass[i] = mu[i] * dy;
    field.total_initial = pairwise_sum(mu_mass);

    std::vector<double> beta(n, 1.0);
    double gamma0 = 0.0;
    if (spec.tail.kind == TailKind::none) {
        gamma0 = spec.gamma_at1(grid.y_at(0), s);
        if (!(gamma0 > 0.0)) throw std::invalid_argument("solve_fpe: degenerate clock");
    } else {
        for (std::size_t i = 0; i < n; ++i) beta[i] = spec.tail.order_at1(grid.y_at(i));
        if (spec.gamma_t) {
            gamma0 = spec.gamma_at1(grid.y_at(0), s);
            if (gamma0 > 0.0 && spec.tail.kind != TailKind::stable)
                throw std::invalid_argument(
                    "solve_fpe: mixed drift clock with variable order unsupported");
        }
    }

    const std::size_t horizon = grid.t.n - 1 - js;
    const std::vector<double> cells = kernel_cells(spec, grid, beta, gamma0, horizon);

    for (std::size_t i = 0; i < n; ++i) field.at(js, i) = mu[i];

    FluxOperator op;
    std::vector<double> hist(n), lop(n), rhs(n), alo(n), adi(n), aup(n), sol(n), work;
    std::vector<double> cell_mass(n);

    for (std::size_t j = js + 1; j < grid.t.n; ++j) {
        const double t = grid.t.at(j);
        op.assemble(spec, grid, t);
        const std::size_t m = j - js;  // history cells available
        for (std::size_t i = 0; i < n; ++i) hist[i] = 0.0;
        for (std::size_t k = 1; k < m; ++k) {
            const double* past = field.mass.data() + (j - k) * n;
            const double* w = cells.data() + k * n;
            for (std::size_t i = 0; i < n; ++i) hist[i] += w[i] * past[i];
        }
        op.apply(hist, lop);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = mu[i] + lop[i];
        const double* w0 = cells.data();
        for (std::size_t i = 0; i < n; ++i) {
            adi[i] = 1.0 - op.di[i] * w0[i];
            alo[i] = (i > 0) ? -op.lo[i] * w0[i - 1] : 0.0;
            aup[i] = (i + 1 < n) ? -op.up[i] * w0[i + 1] : 0.0;
        }
        solve_tridiagonal(alo, adi, aup, rhs, sol, work);
        double* level = field.mass.data() + j * n;
        for (std::size_t i = 0; i < n; ++i) {
            level[i] = sol[i];
            cell_mass[i] = sol[i] * dy;
            if (cell_mass[i] < -1e-12 * std::max(field.total_initial, 1e-300))
                throw std::runtime_error("solve_fpe: negativity beyond tolerance at t = " +
                                         std::to_string(t) + ", y = " +
                                         std::to_string(grid.y_at(i)));
        }
        field.leakage[j] = field.total_initial - pairwise_sum(cell_mass);
    }
    return field;
}

Moments solution_moments(const GridMeasure& field, double t) {
    const std::size_t j = field.grid.time_index(t);
    if (j <= field.injection_level)
        throw std::invalid_argument("solution_moments: query at or before the injection time");
    const std::size_t n = field.grid.ny;
    std::vector<double> w(n), wy(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = field.at(j, i) * field.grid.dy;
        wy[i] = w[i] * field.grid.y_at(i);
    }
    Moments mom;
    mom.mass = pairwise_sum(w);
    if (mom.mass <= 0.0) return mom;
    mom.mean = pairwise_sum(wy) / mom.mass;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = field.grid.y_at(i) - mom.mean;
        wy[i] = w[i] * d * d;
    }
    mom.variance = pairwise_sum(wy) / mom.mass;
    return mom;
}

}  // namespace ctrwfp
