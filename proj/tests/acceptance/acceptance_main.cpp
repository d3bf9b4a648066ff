#include <cstdio>

#include "ctrwfp/checks.hpp"

int main() {
    const auto results = ctrwfp::run_acceptance_checks({"all"});
    bool all_pass = true;
    for (const auto& r : results) {
        std::printf("criterion %2s %-32s %s  statistic=%.6g threshold=%.6g  (%.1f s)\n",
                    r.id.c_str(), r.name.c_str(), r.pass ? "pass" : "FAIL", r.statistic,
                    r.threshold, r.seconds);
        std::printf("             %s\n", r.detail.c_str());
        all_pass = all_pass && r.pass;
    }
    std::printf("%s\n", all_pass ? "all criteria pass" : "ACCEPTANCE FAILURE");
    return all_pass ? 0 : 1;
}
