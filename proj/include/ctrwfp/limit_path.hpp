#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "ctrwfp/model.hpp"
#include "ctrwfp/rng.hpp"

namespace ctrwfp {

// Standard positive beta-stable variate scaled to span dr:
// E[exp(-lambda * increment)] = exp(-dr * lambda^beta).
double sample_stable_increment(double beta, double dr, RngStream& rng);

enum class SegmentKind { continuous, jump };

struct PathNode {
    double r;  // operational time
    double a;  // position
    double d;  // clock
};

// Joint limit pair (A_u, D_u). Clock jumps are zero-width in r and precede
// the continuous move of each step; for uncoupled models A is unchanged
// across a clock jump, for the Levy walk A and D jump together.
struct SpaceTimePath {
    double dr = 0.0;
    double x0 = 0.0, s0 = 0.0;
    double cutoff = 0.0;                 // Levy small-jump cutoff delta
    double truncation_bias_bound = 0.0;  // integral_0^delta w h_beta(w) dw * r_max
    std::vector<PathNode> nodes;         // nodes[0] = (0, x0, s0)
    std::vector<SegmentKind> kinds;      // kinds[k] spans nodes[k] -> nodes[k+1]
};

// Streaming generator of path segments; one step may emit several segments.
class PathCursor {
public:
    PathCursor(const ModelSpec& spec, double x0, double s0, double dr, RngStream& rng);

    struct Segment {
        double r0, r1;
        double a0, a1;
        double d0, d1;
        SegmentKind kind;
    };

    Segment next();
    double position() const { return a_; }
    double clock() const { return d_; }
    double operational_time() const { return r_; }
    double cutoff() const { return cutoff_; }
    // Bias bound from omitted sub-cutoff Levy jumps, over the span generated so far.
    double truncation_bias_bound() const;

private:
    const ModelSpec& spec_;
    RngStream& rng_;
    double dr_;
    double r_ = 0.0, a_ = 0.0, d_ = 0.0;
    double cutoff_ = 0.0;
    double jump_rate_ = 0.0;        // H_beta(cutoff)
    double mean_below_cutoff_ = 0.0;  // integral_0^delta w h_beta(w) dw
    double compensator_ = 0.0;        // E[w theta; w < delta] per unit r
    std::vector<Segment> queue_;
    std::size_t queue_pos_ = 0;

    void fill_queue();
};

SpaceTimePath sample_pair_path(const ModelSpec& spec, double x0, double s0, double r_max,
                               double dr, RngStream& rng);

struct TimeChange {
    double u;               // E(t)
    std::size_t node;       // first node index with D > t
    bool straddled_by_jump;  // D jumped across t
};

// E(t) = inf{u : D_u > t}; sandwich D(u-) <= t <= D(u).
TimeChange inverse_time_change(const SpaceTimePath& path, double t);

// X(t) = A(E(t)-) when the clock jumps across t, else A(E(t)); Y(t) = A(E(t)).
double ctrw_limit_value(const SpaceTimePath& path, double t);
double octrw_limit_value(const SpaceTimePath& path, double t);

struct LimitSample {
    std::vector<double> ctrw;   // X(t_q)
    std::vector<double> octrw;  // Y(t_q)
    double truncation_bias_bound = 0.0;
};

// Streaming evaluation of one fresh path at ascending query times.
LimitSample limit_values_at(const ModelSpec& spec, double x0, double s0,
                            const std::vector<double>& ts, double dr, RngStream& rng,
                            std::size_t max_segments = 200'000'000);

// integral over [t1,t2] of f(X(t)) dt along one fresh path.
double limit_time_integral(const ModelSpec& spec, double x0, double s0,
                           const std::function<double(double)>& f, double t1, double t2,
                           double dr, RngStream& rng, std::size_t max_segments = 200'000'000);

}  // namespace ctrwfp
