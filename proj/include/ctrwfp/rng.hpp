#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace ctrwfp {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic stream: same (seed, stream_index) gives the same draws on any
// platform. Distribution transforms are implemented here, not taken from
// <random>, because the standard leaves those implementation-defined.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index) {
        std::uint64_t s = master_seed ^ (0xd1342543de82ef95ULL * (stream_index + 1));
        std::seed_seq seq{static_cast<unsigned>(splitmix64(s) >> 32),
                          static_cast<unsigned>(splitmix64(s)),
                          static_cast<unsigned>(splitmix64(s) >> 32),
                          static_cast<unsigned>(splitmix64(s))};
        gen_.seed(seq);
    }

    // uniform on [0, 1)
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }
    // uniform on (0, 1]
    double uniform01_pos() { return 1.0 - uniform01(); }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01_pos();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double exponential() { return -std::log(uniform01_pos()); }

    // mean is small in every caller (compound-Poisson thinning per step)
    std::uint64_t poisson(double mean) {
        double l = std::exp(-mean);
        std::uint64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform01_pos();
        } while (p > l);
        return k - 1;
    }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Standard positive beta-stable variate, normalized so E[exp(-l S)] = exp(-l^beta).
// Kanter's representation: S = [sin(bU)/sin(U)^... ] with U ~ U(0,pi), W ~ Exp(1).
inline double stable_positive(RngStream& rng, double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw std::domain_error("stable order must lie in (0,1)");
    double u = 3.14159265358979323846 * rng.uniform01_pos();
    double w = rng.exponential();
    double s1 = std::sin(beta * u);
    double s2 = std::sin((1.0 - beta) * u);
    double su = std::sin(u);
    return (s1 / std::pow(su, 1.0 / beta)) * std::pow(s2 / w, (1.0 - beta) / beta);
}

}  // namespace ctrwfp
