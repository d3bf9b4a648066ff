#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctrwfp/config.hpp"
#include "doctest.h"

using namespace ctrwfp;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("ctrwfp_test_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("empty object parses to defaults") {
    RunConfig cfg = parse_config("{}");
    CHECK(cfg.preset == "subdiffusion");
    CHECK(cfg.beta == 0.5);
    CHECK(cfg.dr == 1e-3);
    CHECK(cfg.n_paths == 1000);
    CHECK(!cfg.seed);
    CHECK(cfg.config_hash.size() == 16);

    SpaceTimeGrid grid = build_grid(cfg, 1.0);
    CHECK(grid.t.n == 551);
    CHECK(grid.t.top() == doctest::Approx(1.1).epsilon(1e-12));
    CHECK(grid.ny == 400);
}

TEST_CASE("constraint violations carry the offending key") {
    CHECK_THROWS_WITH_AS((void)parse_config(R"({"model":{"beta":1.5}})"),
                         doctest::Contains("(0,1)"), std::invalid_argument);
    CHECK_THROWS_WITH_AS((void)parse_config(R"({"model":{"bogus":1}})"),
                         doctest::Contains("model.bogus"), std::invalid_argument);
    CHECK_THROWS_WITH_AS((void)parse_config(R"({"grid":{"window":[2.0,1.0]}})"),
                         doctest::Contains("a < b"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_config(R"({"ensemble":{"engine":"magic"}})"),
                    std::invalid_argument);
    CHECK_THROWS_WITH_AS((void)parse_config(R"({"ensemble":{"times":[2.0,1.0]}})"),
                         doctest::Contains("strictly increasing"), std::invalid_argument);
    CHECK_THROWS_WITH_AS((void)parse_config(R"({"model":{"s0":3.0},"ensemble":{"times":[1.0]}})"),
                         doctest::Contains("exceed model.s0"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_config(R"({"checks":["14"]})"), std::invalid_argument);

    std::vector<std::string> warnings;
    RunConfig cfg = parse_config(R"({"model":{"bogus":1}})", false, &warnings);
    CHECK(cfg.preset == "subdiffusion");
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("model.bogus") != std::string::npos);
}

TEST_CASE("hash tracks statistical inputs and ignores execution details") {
    RunConfig a = parse_config(R"({"ensemble":{"seed":7}})");
    RunConfig b = parse_config(R"({"ensemble":{"seed":7}})");
    RunConfig c = parse_config(R"({"ensemble":{"seed":8}})");
    RunConfig d = parse_config(R"({"ensemble":{"seed":7,"workers":9}})");
    RunConfig e = parse_config(R"({"ensemble":{"seed":7},"output":{"dir":"elsewhere"}})");
    CHECK(a.config_hash == b.config_hash);
    CHECK(a.config_hash != c.config_hash);
    CHECK(a.config_hash == d.config_hash);
    CHECK(a.config_hash == e.config_hash);
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
}

TEST_CASE("simulate without a seed fails with a recorded error") {
    fs::path dir = fresh_dir("noseed");
    RunConfig cfg = parse_config(R"({"ensemble":{"n_paths":5}})");
    cfg.command = "simulate";
    cfg.out_dir = dir.string();
    CHECK(run(cfg) == 1);
    CHECK(slurp(dir / "error.json").find("seed") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("simulate output is reproducible across runs and workers") {
    const std::string base =
        R"({"command":"simulate","ensemble":{"seed":11,"n_paths":50,"times":[0.5],"dr":0.002)";
    fs::path d1 = fresh_dir("sim1"), d2 = fresh_dir("sim2"), d3 = fresh_dir("sim3");
    RunConfig c1 = parse_config(base + "}}");
    c1.out_dir = d1.string();
    RunConfig c2 = parse_config(base + "}}");
    c2.out_dir = d2.string();
    RunConfig c3 = parse_config(base + R"(,"workers":3}})");
    c3.out_dir = d3.string();
    REQUIRE(run(c1) == 0);
    REQUIRE(run(c2) == 0);
    REQUIRE(run(c3) == 0);
    const std::string p1 = slurp(d1 / "paths.csv");
    CHECK(p1 == slurp(d2 / "paths.csv"));
    CHECK(p1 == slurp(d3 / "paths.csv"));
    CHECK(p1.rfind("# config_hash=" + c1.config_hash, 0) == 0);
    CHECK(p1.find("path_id,t,x") != std::string::npos);
    fs::remove_all(d1);
    fs::remove_all(d2);
    fs::remove_all(d3);
}

TEST_CASE("forward command writes the solution and moments") {
    fs::path dir = fresh_dir("fwd");
    RunConfig cfg = parse_config(
        R"({"command":"solve-forward","grid":{"dy":0.25,"dt":0.01},"ensemble":{"times":[0.5]}})");
    cfg.out_dir = dir.string();
    REQUIRE(run(cfg) == 0);
    const std::string sol = slurp(dir / "solution.csv");
    CHECK(sol.rfind("# config_hash=", 0) == 0);
    CHECK(sol.find("x,t,value") != std::string::npos);
    const std::string meta = slurp(dir / "metadata.json");
    CHECK(meta.find("moments") != std::string::npos);
    CHECK(meta.find("final_leakage") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("forward command rejects coupled models") {
    fs::path dir = fresh_dir("fwdlevy");
    RunConfig cfg = parse_config(
        R"({"command":"solve-forward","model":{"preset":"levy_walk","beta":0.75}})");
    cfg.out_dir = dir.string();
    CHECK(run(cfg) == 1);
    CHECK(slurp(dir / "error.json").find("Monte Carlo") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("backward command reports the value at the start point") {
    fs::path dir = fresh_dir("bwd");
    RunConfig cfg = parse_config(
        R"({"command":"solve-backward","grid":{"dy":0.25,"dt":0.01},)"
        R"("source":{"f":{"kind":"gaussian"},"g":{"kind":"indicator","t1":0.3,"t2":0.6}}})");
    cfg.out_dir = dir.string();
    REQUIRE(run(cfg) == 0);
    const std::string sol = slurp(dir / "solution.csv");
    CHECK(sol.rfind("# config_hash=", 0) == 0);
    const std::string meta = slurp(dir / "metadata.json");
    const auto vpos = meta.find("\"value_at_start\":");
    REQUIRE(vpos != std::string::npos);
    const double v0 = std::stod(meta.substr(vpos + 17));
    CHECK(v0 > 0.0);
    // Cell centers straddle x = 0; their t = 0 average is the start value.
    double lo = -1.0, hi = -1.0;
    std::istringstream rows(sol);
    for (std::string line; std::getline(rows, line);) {
        if (line.rfind("-0.125,0,", 0) == 0) lo = std::stod(line.substr(9));
        if (line.rfind("0.125,0,", 0) == 0) hi = std::stod(line.substr(8));
    }
    REQUIRE(lo >= 0.0);
    REQUIRE(hi >= 0.0);
    CHECK(0.5 * (lo + hi) == doctest::Approx(v0).epsilon(1e-12));
    fs::remove_all(dir);
}

TEST_CASE("backward command handles coupled models on a diagonal grid") {
    fs::path dir = fresh_dir("bwdlevy");
    RunConfig cfg = parse_config(
        R"({"command":"solve-backward","model":{"preset":"levy_walk","beta":0.75},)"
        R"("grid":{"dy":0.02,"dt":0.02,"extent":2},)"
        R"("source":{"g":{"kind":"indicator","t1":0.5,"t2":1.0}}})");
    cfg.out_dir = dir.string();
    REQUIRE(run(cfg) == 0);
    const std::string meta = slurp(dir / "metadata.json");
    const auto vpos = meta.find("\"value_at_start\":");
    REQUIRE(vpos != std::string::npos);
    const double v0 = std::stod(meta.substr(vpos + 17));
    CHECK(v0 == doctest::Approx(0.5).epsilon(0.15));
    fs::remove_all(dir);
}

TEST_CASE("validate command emits per-check verdicts") {
    fs::path dir = fresh_dir("val");
    RunConfig cfg = parse_config(R"({"command":"validate","checks":["8"]})");
    cfg.out_dir = dir.string();
    CHECK(run(cfg) == 0);
    const std::string verdicts = slurp(dir / "verdicts.csv");
    CHECK(verdicts.find("check_id,statistic,threshold,verdict") != std::string::npos);
    CHECK(verdicts.find("pass") != std::string::npos);
    CHECK(slurp(dir / "verdicts.json").find("\"pass\"") != std::string::npos);
    fs::remove_all(dir);
}
