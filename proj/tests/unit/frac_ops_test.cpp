#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "ctrwfp/frac_ops.hpp"
#include "ctrwfp/rng.hpp"
#include "doctest.h"

using namespace ctrwfp;

namespace {

double ramp_deriv_error(double ds) {
    const std::size_t n = static_cast<std::size_t>(std::llround(2.0 / ds)) + 1;
    std::vector<double> f(n);
    for (std::size_t k = 0; k < n; ++k) f[k] = 2.0 - ds * static_cast<double>(k);
    std::vector<double> d = apply_neg_frac_derivative(f, 0.5, ds);
    const std::size_t j = n / 2;  // s = 1
    const double exact = std::sqrt(2.0 - ds * static_cast<double>(j)) / std::tgamma(1.5);
    return std::abs(d[j] - exact);
}

}  // namespace

TEST_CASE("GL weights start 1, -beta and sum telescopes") {
    std::vector<double> g = gl_weights(0.5, 3);
    CHECK(g[0] == 1.0);
    CHECK(g[1] == -0.5);
    CHECK(g[2] == -0.125);
    CHECK(g[3] == doctest::Approx(-0.0625).epsilon(1e-15));
    GLStencil st = make_gl_stencil(0.5, 0.1, 3);
    CHECK(st.order == 0.5);
    CHECK(st.weights.size() == 4);
    CHECK(st.weights[1] == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("descending fractional derivative of a terminal ramp") {
    std::vector<double> zero(100, 0.0);
    for (double v : apply_neg_frac_derivative(zero, 0.5, 0.01)) CHECK(v == 0.0);

    CHECK(ramp_deriv_error(1e-3) < 0.005 * 1.1283792);
    const double e4 = ramp_deriv_error(4e-3);
    const double e2 = ramp_deriv_error(2e-3);
    CHECK(e4 / e2 > 1.6);
    CHECK(e4 / e2 < 2.6);
}

TEST_CASE("forward-window fractional integral") {
    std::vector<double> zero(50, 0.0);
    for (double v : neg_frac_integral(zero, 0.5, 0.01)) CHECK(v == 0.0);

    CHECK(indicator_frac_integral(0.5, 0.0, 1.0, 0.0) ==
          doctest::Approx(2.0 / std::sqrt(3.14159265358979323846)).epsilon(1e-12));
    CHECK(indicator_frac_integral(0.5, 0.5, 1.0, 2.0) == 0.0);

    const double ds = 1e-3;
    std::size_t n = 3001;
    std::vector<double> ind(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
        if (ds * static_cast<double>(k) <= 1.0) ind[k] = 1.0;
    std::vector<double> iv = neg_frac_integral(ind, 0.5, ds);
    CHECK(iv[0] == doctest::Approx(1.1283791670955126).epsilon(2e-3));

    // Order 1 reduces to the plain forward integral.
    n = 10001;
    std::vector<double> ex(n);
    for (std::size_t k = 0; k < n; ++k) ex[k] = std::exp(-ds * static_cast<double>(k));
    std::vector<double> i1 = neg_frac_integral(ex, 1.0, ds);
    CHECK(i1[0] == doctest::Approx(1.0 - std::exp(-10.0)).epsilon(1e-5));
}

TEST_CASE("transition operator on an indicator window") {
    ModelSpec spec = subdiffusion_preset(0.5);
    GridField h;
    h.x = {-0.3, 0.4};
    h.t = TimeGrid{0.0, 1e-3, 2601};
    h.v.assign(h.x.size() * h.t.n, 0.0);
    for (std::size_t ix = 0; ix < h.x.size(); ++ix)
        for (std::size_t jt = 0; jt < h.t.n; ++jt) {
            const double s = h.t.at(jt);
            if (s >= 1.5 && s <= 2.0) h.at(ix, jt) = 1.0;
        }
    GridField zero = h;
    std::fill(zero.v.begin(), zero.v.end(), 0.0);
    GridField pz = psi_apply(zero, spec);
    for (double v : pz.v) CHECK(v == 0.0);

    GridField ph = psi_apply(h, spec);
    // integral_{1}^{1.5} v^{-1/2} dv / Gamma(1/2) at s = 0.5.
    const double exact = (std::sqrt(1.5) - 1.0) / (0.5 * std::tgamma(0.5));
    CHECK(ph.at(0, 500) == doctest::Approx(exact).epsilon(0.01));
    CHECK(ph.at(1, 500) == doctest::Approx(exact).epsilon(0.01));

    GridField uh = upsilon_apply(h, spec);
    for (std::size_t i = 0; i < uh.v.size(); ++i) CHECK(uh.v[i] == ph.v[i]);
}

TEST_CASE("renewal kernel closed forms") {
    TimeGrid tg{1e-2, 1e-2, 100};
    MemoryKernel unit = memory_kernel(unit_clock_spec(), tg);
    CHECK(unit.provenance == KernelProvenance::closed_form);
    for (double v : unit.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

    MemoryKernel stable = memory_kernel(subdiffusion_preset(0.5), tg);
    CHECK(stable.stable);
    CHECK(stable.values[99] == doctest::Approx(1.0 / std::tgamma(0.5)).epsilon(1e-12));
}

TEST_CASE("contour inversion matches the stable closed form") {
    for (int i = 0; i < 40; ++i) {
        const double t = 0.1 * std::pow(100.0, i / 39.0);
        const double exact = std::pow(t, -0.5) / std::tgamma(0.5);
        const double got = laplace_invert_renewal(0.0, 0.5, true, t);
        CHECK(std::abs(got - exact) <= 1e-4 * exact);
    }
}

TEST_CASE("adjoint operator round trips through its inverse") {
    ModelSpec unit = unit_clock_spec();
    const double dt = 1e-2;
    const std::size_t n = 64;
    MemoryKernel kernel = memory_kernel(unit, TimeGrid{dt, dt, n});
    RngStream rng(3, 7);
    std::vector<double> m(n);
    double scale = 0.0;
    for (auto& v : m) {
        v = rng.normal();
        scale = std::max(scale, std::abs(v));
    }
    std::vector<double> back = psi_star_inverse(psi_star_apply(m, unit, dt), kernel);
    for (std::size_t k = 0; k < n; ++k)
        CHECK(std::abs(back[k] - m[k]) <= 1e-13 * (1.0 + scale));

    std::vector<double> zr = psi_star_inverse(std::vector<double>(n, 0.0), kernel);
    for (double v : zr) CHECK(v == 0.0);
}

TEST_CASE("stable round trip and GL agreement on a smooth bump") {
    ModelSpec spec = subdiffusion_preset(0.5);
    const double dt = 1e-3;
    const std::size_t n = 1001;
    std::vector<double> h(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double s = dt * static_cast<double>(k);
        h[k] = std::exp(-(s - 0.5) * (s - 0.5) / 0.02);
    }
    MemoryKernel kernel = memory_kernel(spec, TimeGrid{dt, dt, n});
    std::vector<double> back = psi_star_inverse(psi_star_apply(h, spec, dt), kernel);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        num += std::abs(back[k] - h[k]);
        den += std::abs(h[k]);
    }
    CHECK(num / den < 0.02);

    std::vector<double> gl = apply_gl_time_derivative(h, 0.5, dt);
    std::vector<double> ki = psi_star_inverse(h, kernel);
    double dnum = 0.0, dden = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        dnum += std::abs(gl[k] - ki[k]);
        dden += std::abs(ki[k]);
    }
    CHECK(dnum / dden < 0.02);
}
