#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctrwfp/backward.hpp"
#include "ctrwfp/checks.hpp"
#include "ctrwfp/config.hpp"
#include "ctrwfp/forward.hpp"
#include "ctrwfp/frac_ops.hpp"
#include "ctrwfp/oracles.hpp"
#include "ctrwfp/validation.hpp"

namespace py = pybind11;
using namespace ctrwfp;

namespace {

ModelSpec preset_spec(const std::string& preset, double beta, double p_plus) {
    if (preset == "subdiffusion") return subdiffusion_preset(beta);
    if (preset == "variable_order")
        return variable_order_preset(
            [](const double* x) { return 0.75 - 0.5 * std::exp(-x[0] * x[0]); });
    if (preset == "levy_walk") return levy_walk_preset(beta, nullptr, p_plus);
    if (preset == "unit_clock") return unit_clock_spec();
    throw std::invalid_argument("unknown preset " + preset);
}

}  // namespace

PYBIND11_MODULE(_ctrwfp, m) {
    m.doc() = "CTRW scaling limits: path sampling and fractional Kolmogorov solvers";
    m.attr("__version__") = "1.0.0";

    m.def("gl_weights", &gl_weights, py::arg("beta"), py::arg("n"),
          "Grunwald-Letnikov weights g_0..g_n");
    m.def("expected_inverse_time", &expected_inverse_time, py::arg("beta"), py::arg("t"),
          "E[E(t)] = t^beta / Gamma(1+beta)");
    m.def(
        "subordination_density",
        [](double t, const std::vector<double>& ys, double a) {
            return subordination_oracle(0.5, a, t, ys);
        },
        py::arg("t"), py::arg("ys"), py::arg("a") = 1.0,
        "beta = 1/2 subdiffusive density at the given points");

    m.def(
        "sample_law",
        [](const std::string& preset, double t, std::size_t n_paths, std::uint64_t seed,
           double beta, double p_plus, const std::string& engine, double dr, double c,
           std::size_t workers, double x0, double s0) {
            ModelSpec spec = preset_spec(preset, beta, p_plus);
            McOptions o;
            o.engine = engine == "chain" ? Engine::chain : Engine::limit;
            o.dr = dr;
            o.c = c;
            o.workers = workers;
            return mc_law_estimate(spec, x0, s0, t, n_paths, seed, o).values;
        },
        py::arg("preset"), py::arg("t"), py::arg("n_paths"), py::arg("seed"),
        py::arg("beta") = 0.5, py::arg("p_plus") = 0.5, py::arg("engine") = "limit",
        py::arg("dr") = 1e-3, py::arg("c") = 100.0, py::arg("workers") = 1, py::arg("x0") = 0.0,
        py::arg("s0") = 0.0, "i.i.d. draws of X(t); deterministic in (seed, config)");

    m.def(
        "forward_density",
        [](const std::string& preset, double beta, double t, std::size_t ny, std::size_t steps,
           double extent, double x0) {
            ModelSpec spec = preset_spec(preset, beta, 0.5);
            SpaceTimeGrid grid =
                make_centered_grid(extent, ny, 0.0, t / static_cast<double>(steps), steps + 1);
            GridMeasure law = solve_fpe(spec, point_mass_density(grid, x0), 0.0, grid);
            return py::make_tuple(grid.y_nodes(), law.slice(grid.t.n - 1));
        },
        py::arg("preset"), py::arg("beta"), py::arg("t"), py::arg("ny") = 200,
        py::arg("steps") = 500, py::arg("extent") = 10.0, py::arg("x0") = 0.0,
        "(y nodes, density at t) from the fractional Fokker-Planck march");

    m.def(
        "backward_value",
        [](const std::string& preset, double beta, double x0, double t1, double t2,
           std::size_t ny, std::size_t steps, double extent) {
            ModelSpec spec = preset_spec(preset, beta, 0.5);
            const double top = 1.1 * t2;
            SpaceTimeGrid grid =
                make_centered_grid(extent, ny, 0.0, top / static_cast<double>(steps), steps + 1);
            BackwardField field = solve_backward(
                spec, [](const double* x) { return std::exp(-x[0] * x[0]); },
                TemporalWeight::indicator(t1, t2), grid);
            return field.value(x0, 0.0);
        },
        py::arg("preset"), py::arg("beta"), py::arg("x0") = 0.0, py::arg("t1") = 0.5,
        py::arg("t2") = 1.0, py::arg("ny") = 200, py::arg("steps") = 300, py::arg("extent") = 8.0,
        "E-integral of exp(-x^2) over [t1,t2], solved backward, probed at (x0, 0)");

    m.def(
        "ks_distance",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            EmpiricalSample ea, eb;
            ea.values = a;
            eb.values = b;
            return ks_distance(ea, eb);
        },
        py::arg("a"), py::arg("b"), "two-sample sup-CDF distance");

    m.def(
        "config_hash",
        [](const std::string& text) { return parse_config(text).config_hash; },
        py::arg("text"), "canonical hash of a JSON configuration");

    m.def(
        "run_checks",
        [](const std::vector<std::string>& which, std::uint64_t seed, std::size_t workers) {
            py::list out;
            for (const CheckResult& r : run_acceptance_checks(which, seed, workers)) {
                py::dict d;
                d["id"] = r.id;
                d["name"] = r.name;
                d["statistic"] = r.statistic;
                d["threshold"] = r.threshold;
                d["pass"] = r.pass;
                d["detail"] = r.detail;
                d["seconds"] = r.seconds;
                out.append(d);
            }
            return out;
        },
        py::arg("which") = std::vector<std::string>{"all"}, py::arg("seed") = kAcceptanceSeed,
        py::arg("workers") = 0, "acceptance checks; one entry per requested id");
}
