#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ctrwfp/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"continuous-time random walk limits: sampling and fractional solvers"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    std::size_t workers = 0;
    bool lenient = false;
    std::vector<std::string> checks;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON configuration file");
        sub->add_option("--seed", seed, "master RNG seed (overrides the config)");
        sub->add_option("--workers", workers, "worker threads, 0 = all hardware threads");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_flag("--lenient", lenient, "downgrade unknown config keys to warnings");
        return sub;
    };
    CLI::App* sim = add_common(
        app.add_subcommand("simulate", "sample CTRW/OCTRW values at the query times"));
    CLI::App* fwd = add_common(
        app.add_subcommand("solve-forward", "march the fractional Fokker-Planck law"));
    CLI::App* bwd = add_common(
        app.add_subcommand("solve-backward", "solve the fractional backward equation"));
    CLI::App* val = add_common(app.add_subcommand("validate", "run the acceptance checks"));
    val->add_option("--checks", checks, "check ids to run (default: all)");

    CLI11_PARSE(app, argc, argv);

    try {
        std::vector<std::string> warnings;
        ctrwfp::RunConfig cfg;
        if (!config_path.empty()) cfg = ctrwfp::parse_config_file(config_path, !lenient, &warnings);
        for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

        CLI::App* sub = app.get_subcommands().front();
        if (sub == sim) cfg.command = "simulate";
        if (sub == fwd) cfg.command = "solve-forward";
        if (sub == bwd) cfg.command = "solve-backward";
        if (sub == val) cfg.command = "validate";
        if (sub->count("--seed")) cfg.seed = seed;
        if (sub->count("--workers")) cfg.workers = workers;
        if (sub->count("--out")) cfg.out_dir = out_dir;
        if (!checks.empty()) cfg.checks = checks;
        cfg.strict = !lenient;
        return ctrwfp::run(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
