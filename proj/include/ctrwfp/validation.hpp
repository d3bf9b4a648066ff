#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "ctrwfp/forward.hpp"
#include "ctrwfp/model.hpp"

namespace ctrwfp {

struct SampleProvenance {
    std::string spec;
    double t = 0.0;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
};

struct EmpiricalSample {
    std::vector<double> values;
    std::vector<double> weights;  // optional; nonnegative, summing to 1
    SampleProvenance provenance;
};

enum class Engine { chain, limit };

struct McOptions {
    Engine engine = Engine::limit;
    double c = 100.0;    // pre-limit scale (chain engine)
    double dr = 1e-3;    // operational-time step (limit engine)
    std::size_t workers = 1;
    std::size_t retry_budget = 3;
    double max_drop_fraction = 1e-3;
};

// i.i.d. samples of X^c(t) (chain) or X(t) (limit). Deterministic in
// (seed, config); worker count never changes the output.
EmpiricalSample mc_law_estimate(const ModelSpec& spec, double x0, double s0, double t,
                                std::size_t n_paths, std::uint64_t seed,
                                const McOptions& opts = {});

struct McCurves {
    std::vector<double> ts;
    std::vector<std::vector<double>> x;  // x[q][path]: X(t_q)
    std::vector<std::vector<double>> y;  // OCTRW values (limit engine)
    std::size_t dropped = 0;
};

McCurves mc_law_curves(const ModelSpec& spec, double x0, double s0,
                       const std::vector<double>& ts, std::size_t n_paths, std::uint64_t seed,
                       const McOptions& opts = {});

// Two-sample sup-CDF distance.
double ks_distance(const EmpiricalSample& a, const EmpiricalSample& b);
// One-sample distance against a solver slice at time t (cell-mass CDF).
double ks_distance_to_grid(const EmpiricalSample& sample, const GridMeasure& field, double t);
double ks_two_sample_threshold_99(std::size_t n, std::size_t m);
double ks_one_sample_threshold_99(std::size_t n);

struct PowerFit {
    double slope = 0.0;
    double std_error = 0.0;
};

// Least-squares slope in log-log coordinates.
PowerFit fit_power_exponent(const std::vector<double>& ts, const std::vector<double>& values);

struct PotentialEstimate {
    double value = 0.0;
    double std_error = 0.0;
    double unclear_fraction = 0.0;  // paths whose clock never cleared the support
    bool horizon_warning = false;
};

// Monte Carlo potential: mean of integral_0^{r_max} f(A_r, D_r) dr.
PotentialEstimate potential_estimate(const ModelSpec& spec, const SpaceTimeField& f, double x,
                                     double s, std::size_t n_paths, double r_max,
                                     std::uint64_t seed, double dr = 1e-3,
                                     std::size_t workers = 1,
                                     double support_top = std::numeric_limits<double>::quiet_NaN());

struct DualEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t dropped = 0;
};

// Mean of integral_{t1}^{t2} f(X(t)) dt over limit paths from (x0, s0).
DualEstimate mc_time_integral(const ModelSpec& spec, double x0, double s0,
                              const std::function<double(double)>& f, double t1, double t2,
                              std::size_t n_paths, double dr, std::uint64_t seed,
                              std::size_t workers = 1);

}  // namespace ctrwfp
