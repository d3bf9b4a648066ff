#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ctrwfp {

struct CheckResult {
    std::string id;    // "1".."13"
    std::string name;
    double statistic = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

inline constexpr std::uint64_t kAcceptanceSeed = 20260822;

// Runs the acceptance checks (which = {"all"} or a list of ids). Tolerances
// are pinned here; the verdict set is deterministic in (seed, workers-free).
std::vector<CheckResult> run_acceptance_checks(const std::vector<std::string>& which,
                                               std::uint64_t seed = kAcceptanceSeed,
                                               std::size_t workers = 0);

}  // namespace ctrwfp
