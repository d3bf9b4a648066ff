#include "ctrwfp/limit_path.hpp"

#include <cmath>
#include <stdexcept>

namespace ctrwfp {

double sample_stable_increment(double beta, double dr, RngStream& rng) {
    if (dr == 0.0) return 0.0;
    if (!(dr > 0.0)) throw std::domain_error("sample_stable_increment: dr must be nonnegative");
    return std::pow(dr, 1.0 / beta) * stable_positive(rng, beta);
}

PathCursor::PathCursor(const ModelSpec& spec, double x0, double s0, double dr, RngStream& rng)
    : spec_(spec), rng_(rng), dr_(dr), a_(x0), d_(s0) {
    if (!(dr > 0.0)) throw std::domain_error("PathCursor: dr must be positive");
    if (spec.coupling == Coupling::levy_walk) {
        const double beta = spec.tail.beta;
        cutoff_ = dr * dr;
        const double gamma_factor = 1.0 / std::tgamma(1.0 - beta);
        jump_rate_ = gamma_factor * std::pow(cutoff_, -beta);
        mean_below_cutoff_ = gamma_factor * beta * std::pow(cutoff_, 1.0 - beta) / (1.0 - beta);
        compensator_ = (2.0 * spec.p_plus - 1.0) * mean_below_cutoff_;
    }
    queue_.reserve(8);
}

double PathCursor::truncation_bias_bound() const { return mean_below_cutoff_ * r_; }

void PathCursor::fill_queue() {
    queue_.clear();
    queue_pos_ = 0;
    const double r0 = r_;
    const double r1 = r_ + dr_;
    if (spec_.coupling == Coupling::levy_walk) {
        const unsigned jumps = rng_.poisson(jump_rate_ * dr_);
        double a = a_, d = d_;
        for (unsigned j = 0; j < jumps; ++j) {
            const double w = cutoff_ * std::pow(rng_.uniform01_pos(), -1.0 / spec_.tail.beta);
            const double theta = (rng_.uniform01() < spec_.p_plus) ? 1.0 : -1.0;
            queue_.push_back({r0, r0, a, a + theta * w, d, d + w, SegmentKind::jump});
            a += theta * w;
            d += w;
        }
        double shift = compensator_ * dr_;
        if (spec_.drift) shift += spec_.drift_at1(a, d) * dr_;
        // Sub-cutoff flights enter as their mean drift in both components.
        const double fill = mean_below_cutoff_ * dr_;
        queue_.push_back({r0, r1, a, a + shift, d, d + fill, SegmentKind::continuous});
        a_ = a + shift;
        d_ = d + fill;
        r_ = r1;
        return;
    }
    double a = a_, d = d_;
    if (spec_.tail.kind != TailKind::none) {
        const double beta = spec_.tail.order_at1(a);
        const double s = sample_stable_increment(beta, dr_, rng_);
        queue_.push_back({r0, r0, a, a, d, d + s, SegmentKind::jump});
        d += s;
    }
    double da = 0.0;
    if (spec_.drift) da += spec_.drift_at1(a, d) * dr_;
    if (spec_.diffusion)
        da += std::sqrt(spec_.diffusion_at1(a, d) * dr_) * rng_.normal();
    double dd = 0.0;
    if (spec_.gamma_t) dd = spec_.gamma_at1(a, d) * dr_;
    queue_.push_back({r0, r1, a, a + da, d, d + dd, SegmentKind::continuous});
    a_ = a + da;
    d_ = d + dd;
    r_ = r1;
}

PathCursor::Segment PathCursor::next() {
    if (queue_pos_ >= queue_.size()) fill_queue();
    return queue_[queue_pos_++];
}

SpaceTimePath sample_pair_path(const ModelSpec& spec, double x0, double s0, double r_max,
                               double dr, RngStream& rng) {
    if (!(r_max > 0.0)) throw std::domain_error("sample_pair_path: r_max must be positive");
    const double steps = r_max / dr;
    if (!(steps < 5e8))
        throw std::invalid_argument("sample_pair_path: r_max/dr too large for node storage");
    SpaceTimePath path;
    path.dr = dr;
    path.x0 = x0;
    path.s0 = s0;
    PathCursor cursor(spec, x0, s0, dr, rng);
    path.cutoff = cursor.cutoff();
    path.nodes.reserve(static_cast<std::size_t>(steps) + 2);
    path.nodes.push_back({0.0, x0, s0});
    while (path.nodes.back().r < r_max) {
        const PathCursor::Segment seg = cursor.next();
        path.nodes.push_back({seg.r1, seg.a1, seg.d1});
        path.kinds.push_back(seg.kind);
    }
    path.truncation_bias_bound = cursor.truncation_bias_bound();
    return path;
}

TimeChange inverse_time_change(const SpaceTimePath& path, double t) {
    if (path.nodes.empty() || t < path.s0)
        throw std::domain_error("inverse_time_change: t precedes the path start");
    if (t >= path.nodes.back().d)
        throw std::domain_error("inverse_time_change: t beyond the sampled horizon");
    std::size_t lo = 0, hi = path.nodes.size() - 1;
    // First node with D > t; nodes[0].d = s0 <= t.
    while (lo + 1 < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (path.nodes[mid].d > t)
            hi = mid;
        else
            lo = mid;
    }
    const PathNode& prev = path.nodes[lo];
    const PathNode& node = path.nodes[hi];
    const bool jumped = path.kinds[lo] == SegmentKind::jump;
    double u = node.r;
    if (!jumped && node.d > prev.d) {
        const double phi = (t - prev.d) / (node.d - prev.d);
        u = prev.r + phi * (node.r - prev.r);
    }
    return {u, hi, jumped};
}

namespace {

double value_at(const SpaceTimePath& path, double t, bool octrw) {
    const TimeChange tc = inverse_time_change(path, t);
    const PathNode& prev = path.nodes[tc.node - 1];
    const PathNode& node = path.nodes[tc.node];
    if (tc.straddled_by_jump) return octrw ? node.a : prev.a;
    if (node.d > prev.d) {
        const double phi = (t - prev.d) / (node.d - prev.d);
        return prev.a + phi * (node.a - prev.a);
    }
    return node.a;
}

}  // namespace

double ctrw_limit_value(const SpaceTimePath& path, double t) { return value_at(path, t, false); }

double octrw_limit_value(const SpaceTimePath& path, double t) { return value_at(path, t, true); }

LimitSample limit_values_at(const ModelSpec& spec, double x0, double s0,
                            const std::vector<double>& ts, double dr, RngStream& rng,
                            std::size_t max_segments) {
    LimitSample out;
    out.ctrw.reserve(ts.size());
    out.octrw.reserve(ts.size());
    if (ts.empty()) return out;
    if (ts.front() < s0)
        throw std::domain_error("limit_values_at: query time precedes s0");
    PathCursor cursor(spec, x0, s0, dr, rng);
    std::size_t q = 0, n = 0;
    while (q < ts.size()) {
        if (++n > max_segments)
            throw std::runtime_error("limit_values_at: segment budget exhausted");
        const PathCursor::Segment seg = cursor.next();
        while (q < ts.size() && seg.d1 > ts[q]) {
            if (seg.kind == SegmentKind::jump) {
                out.ctrw.push_back(seg.a0);
                out.octrw.push_back(seg.a1);
            } else {
                const double phi = (ts[q] - seg.d0) / (seg.d1 - seg.d0);
                const double v = seg.a0 + phi * (seg.a1 - seg.a0);
                out.ctrw.push_back(v);
                out.octrw.push_back(v);
            }
            ++q;
        }
    }
    out.truncation_bias_bound = cursor.truncation_bias_bound();
    return out;
}

double limit_time_integral(const ModelSpec& spec, double x0, double s0,
                           const std::function<double(double)>& f, double t1, double t2,
                           double dr, RngStream& rng, std::size_t max_segments) {
    if (!(t2 > t1)) throw std::domain_error("limit_time_integral: need t2 > t1");
    if (t1 < s0) throw std::domain_error("limit_time_integral: window precedes s0");
    PathCursor cursor(spec, x0, s0, dr, rng);
    double acc = 0.0;
    std::size_t n = 0;
    for (;;) {
        if (++n > max_segments)
            throw std::runtime_error("limit_time_integral: segment budget exhausted");
        const PathCursor::Segment seg = cursor.next();
        if (seg.d1 <= t1) continue;
        const double lo = std::max(seg.d0, t1);
        const double hi = std::min(seg.d1, t2);
        if (hi > lo) {
            if (seg.kind == SegmentKind::jump) {
                acc += f(seg.a0) * (hi - lo);
            } else {
                const double span = seg.d1 - seg.d0;
                const double al = seg.a0 + (lo - seg.d0) / span * (seg.a1 - seg.a0);
                const double ah = seg.a0 + (hi - seg.d0) / span * (seg.a1 - seg.a0);
                acc += 0.5 * (f(al) + f(ah)) * (hi - lo);
            }
        }
        if (seg.d1 >= t2) break;
    }
    return acc;
}

}  // namespace ctrwfp
