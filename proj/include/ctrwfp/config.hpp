#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ctrwfp/grid.hpp"
#include "ctrwfp/model.hpp"

namespace ctrwfp {

struct RunConfig {
    std::string command;

    // model
    std::string preset = "subdiffusion";
    double beta = 0.5;
    double p_plus = 0.5;
    double diffusion = 1.0;
    double gamma0 = 0.0;
    std::optional<double> drift_const;
    std::optional<double> well_stiffness;
    double well_center = 0.0;
    double bf_base = 0.75, bf_dip = 0.5, bf_width = 1.0, bf_center = 0.0;
    double x0 = 0.0, s0 = 0.0;

    // grid
    double dy = 0.05;
    double dt = 2e-3;
    double extent = 10.0;  // half-width of the spatial domain
    std::optional<double> window_a, window_b;

    // ensemble
    std::size_t n_paths = 1000;
    std::optional<std::uint64_t> seed;
    std::size_t workers = 1;
    double dr = 1e-3;
    double c = 100.0;
    std::string engine = "limit";
    std::vector<double> times{1.0};

    // backward source h = f(x) g(s)
    std::string f_kind = "one";  // one | gaussian | indicator
    double f_center = 0.0, f_width = 1.0, f_lo = 0.0, f_hi = 1.0;
    std::string g_kind = "indicator";  // indicator | bump
    double g_t1 = 0.5, g_t2 = 1.0, g_t = 1.0, g_w = 0.1;

    // validate
    std::vector<std::string> checks{"all"};

    // output
    std::string out_dir = "out";

    bool strict = true;
    std::string config_hash;
    std::string canonical;  // canonical JSON echo of the effective config
};

// Strict parse: unknown keys are fatal (lenient mode downgrades them to
// warnings collected in *warnings).
RunConfig parse_config(const std::string& text, bool strict = true,
                       std::vector<std::string>* warnings = nullptr);
RunConfig parse_config_file(const std::string& path, bool strict = true,
                            std::vector<std::string>* warnings = nullptr);

ModelSpec build_spec(const RunConfig& cfg);

// Forward/backward grid from the config window rules: [a, b) with 10%
// padding around [s0, horizon] unless given explicitly.
SpaceTimeGrid build_grid(const RunConfig& cfg, double horizon);

std::uint64_t fnv1a64(const std::string& text);

// Orchestrates one command; returns the process exit status.
int run(const RunConfig& cfg);

}  // namespace ctrwfp
