#include "ctrwfp/config.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <thread>

#include "ctrwfp/backward.hpp"
#include "ctrwfp/checks.hpp"
#include "ctrwfp/csv.hpp"
#include "ctrwfp/forward.hpp"
#include "ctrwfp/validation.hpp"

namespace ctrwfp {

using nlohmann::json;

namespace {

[[noreturn]] void bad_key(const std::string& key, const std::string& constraint) {
    throw std::invalid_argument("config: " + key + ": " + constraint);
}

void check_keys(const json& obj, const std::string& prefix,
                std::initializer_list<const char*> allowed, bool strict,
                std::vector<std::string>* warnings) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) known = true;
        if (known) continue;
        std::string full = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (strict) throw std::invalid_argument("config: unknown key \"" + full + "\"");
        if (warnings) warnings->push_back("ignoring unknown key \"" + full + "\"");
    }
}

std::string join_key(const std::string& prefix, const char* key) {
    return prefix.empty() ? key : prefix + "." + key;
}

double get_number(const json& obj, const char* key, const std::string& prefix, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) bad_key(join_key(prefix, key), "expected a number");
    return v.get<double>();
}

std::size_t get_count(const json& obj, const char* key, const std::string& prefix,
                      std::size_t fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        bad_key(join_key(prefix, key), "expected a nonnegative integer");
    return static_cast<std::size_t>(v.get<long long>());
}

std::string get_string(const json& obj, const char* key, const std::string& prefix,
                       std::string fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) bad_key(join_key(prefix, key), "expected a string");
    return v.get<std::string>();
}

void require_order(double beta, const std::string& key) {
    if (!(beta > 0.0 && beta < 1.0))
        bad_key(key, "must lie in the open interval (0,1), got " + std::to_string(beta));
}

void require_positive(double v, const std::string& key) {
    if (!(v > 0.0)) bad_key(key, "must be positive");
}

json effective_json(const RunConfig& c) {
    json j;
    if (!c.command.empty()) j["command"] = c.command;
    json m;
    m["preset"] = c.preset;
    m["beta"] = c.beta;
    m["p_plus"] = c.p_plus;
    m["diffusion"] = c.diffusion;
    m["gamma"] = c.gamma0;
    if (c.drift_const) m["drift"] = *c.drift_const;
    if (c.well_stiffness) {
        m["well_stiffness"] = *c.well_stiffness;
        m["well_center"] = c.well_center;
    }
    if (c.preset == "variable_order") {
        m["beta_base"] = c.bf_base;
        m["beta_dip"] = c.bf_dip;
        m["beta_width"] = c.bf_width;
        m["beta_center"] = c.bf_center;
    }
    m["x0"] = c.x0;
    m["s0"] = c.s0;
    j["model"] = std::move(m);
    json g;
    g["dy"] = c.dy;
    g["dt"] = c.dt;
    g["extent"] = c.extent;
    if (c.window_a && c.window_b) g["window"] = {*c.window_a, *c.window_b};
    j["grid"] = std::move(g);
    json e;
    e["n_paths"] = c.n_paths;
    if (c.seed) e["seed"] = *c.seed;
    e["workers"] = c.workers;
    e["dr"] = c.dr;
    e["c"] = c.c;
    e["engine"] = c.engine;
    e["times"] = c.times;
    j["ensemble"] = std::move(e);
    json f;
    f["kind"] = c.f_kind;
    if (c.f_kind == "gaussian") {
        f["center"] = c.f_center;
        f["width"] = c.f_width;
    } else if (c.f_kind == "indicator") {
        f["lo"] = c.f_lo;
        f["hi"] = c.f_hi;
    }
    json gg;
    gg["kind"] = c.g_kind;
    if (c.g_kind == "indicator") {
        gg["t1"] = c.g_t1;
        gg["t2"] = c.g_t2;
    } else {
        gg["t"] = c.g_t;
        gg["w"] = c.g_w;
    }
    j["source"] = {{"f", std::move(f)}, {"g", std::move(gg)}};
    j["checks"] = c.checks;
    j["output"] = {{"dir", c.out_dir}};
    return j;
}

void finalize(RunConfig& cfg) {
    json j = effective_json(cfg);
    cfg.canonical = j.dump();
    // Execution details never change results, so they stay out of the hash.
    j["ensemble"].erase("workers");
    j.erase("output");
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(j.dump())));
    cfg.config_hash = buf;
}

}  // namespace

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

RunConfig parse_config(const std::string& text, bool strict, std::vector<std::string>* warnings) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw std::invalid_argument("config: root must be a JSON object");

    RunConfig cfg;
    check_keys(root, "",
               {"command", "model", "grid", "ensemble", "source", "checks", "output"}, strict,
               warnings);
    cfg.strict = strict;
    cfg.command = get_string(root, "command", "", cfg.command);

    if (root.contains("model")) {
        const json& m = root.at("model");
        if (!m.is_object()) bad_key("model", "expected an object");
        check_keys(m, "model",
                   {"preset", "beta", "p_plus", "diffusion", "gamma", "drift", "well_stiffness",
                    "well_center", "beta_base", "beta_dip", "beta_width", "beta_center", "x0",
                    "s0"},
                   strict, warnings);
        cfg.preset = get_string(m, "preset", "model", cfg.preset);
        if (cfg.preset != "subdiffusion" && cfg.preset != "variable_order" &&
            cfg.preset != "levy_walk" && cfg.preset != "unit_clock")
            bad_key("model.preset",
                    "must be one of subdiffusion | variable_order | levy_walk | unit_clock");
        cfg.beta = get_number(m, "beta", "model", cfg.beta);
        if (cfg.preset != "unit_clock" && cfg.preset != "variable_order")
            require_order(cfg.beta, "model.beta");
        cfg.p_plus = get_number(m, "p_plus", "model", cfg.p_plus);
        if (!(cfg.p_plus >= 0.0 && cfg.p_plus <= 1.0))
            bad_key("model.p_plus", "must lie in [0,1]");
        cfg.diffusion = get_number(m, "diffusion", "model", cfg.diffusion);
        if (!(cfg.diffusion >= 0.0)) bad_key("model.diffusion", "must be nonnegative");
        cfg.gamma0 = get_number(m, "gamma", "model", cfg.gamma0);
        if (!(cfg.gamma0 >= 0.0)) bad_key("model.gamma", "must be nonnegative");
        if (m.contains("drift")) cfg.drift_const = get_number(m, "drift", "model", 0.0);
        if (m.contains("well_stiffness")) {
            cfg.well_stiffness = get_number(m, "well_stiffness", "model", 0.0);
            require_positive(*cfg.well_stiffness, "model.well_stiffness");
        }
        cfg.well_center = get_number(m, "well_center", "model", cfg.well_center);
        if (cfg.drift_const && cfg.well_stiffness)
            bad_key("model.drift", "constant drift and a well cannot both be set");
        cfg.bf_base = get_number(m, "beta_base", "model", cfg.bf_base);
        cfg.bf_dip = get_number(m, "beta_dip", "model", cfg.bf_dip);
        cfg.bf_width = get_number(m, "beta_width", "model", cfg.bf_width);
        cfg.bf_center = get_number(m, "beta_center", "model", cfg.bf_center);
        if (cfg.preset == "variable_order") {
            require_order(cfg.bf_base, "model.beta_base");
            if (!(cfg.bf_dip >= 0.0)) bad_key("model.beta_dip", "must be nonnegative");
            require_positive(cfg.bf_width, "model.beta_width");
        }
        cfg.x0 = get_number(m, "x0", "model", cfg.x0);
        cfg.s0 = get_number(m, "s0", "model", cfg.s0);
    }

    if (root.contains("grid")) {
        const json& g = root.at("grid");
        if (!g.is_object()) bad_key("grid", "expected an object");
        check_keys(g, "grid", {"dy", "dt", "extent", "window"}, strict, warnings);
        cfg.dy = get_number(g, "dy", "grid", cfg.dy);
        require_positive(cfg.dy, "grid.dy");
        cfg.dt = get_number(g, "dt", "grid", cfg.dt);
        require_positive(cfg.dt, "grid.dt");
        cfg.extent = get_number(g, "extent", "grid", cfg.extent);
        require_positive(cfg.extent, "grid.extent");
        if (g.contains("window")) {
            const json& w = g.at("window");
            if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number())
                bad_key("grid.window", "expected [a, b] with two numbers");
            cfg.window_a = w[0].get<double>();
            cfg.window_b = w[1].get<double>();
            if (!(*cfg.window_a < *cfg.window_b))
                bad_key("grid.window", "requires a < b");
        }
    }

    if (root.contains("ensemble")) {
        const json& e = root.at("ensemble");
        if (!e.is_object()) bad_key("ensemble", "expected an object");
        check_keys(e, "ensemble", {"n_paths", "seed", "workers", "dr", "c", "engine", "times"},
                   strict, warnings);
        cfg.n_paths = get_count(e, "n_paths", "ensemble", cfg.n_paths);
        if (cfg.n_paths == 0) bad_key("ensemble.n_paths", "must be at least 1");
        if (e.contains("seed")) {
            const json& s = e.at("seed");
            if (!s.is_number_integer() || s.get<long long>() < 0)
                bad_key("ensemble.seed", "expected a nonnegative integer");
            cfg.seed = s.get<std::uint64_t>();
        }
        cfg.workers = get_count(e, "workers", "ensemble", cfg.workers);
        cfg.dr = get_number(e, "dr", "ensemble", cfg.dr);
        require_positive(cfg.dr, "ensemble.dr");
        cfg.c = get_number(e, "c", "ensemble", cfg.c);
        require_positive(cfg.c, "ensemble.c");
        cfg.engine = get_string(e, "engine", "ensemble", cfg.engine);
        if (cfg.engine != "limit" && cfg.engine != "chain")
            bad_key("ensemble.engine", "must be limit | chain");
        if (e.contains("times")) {
            const json& ts = e.at("times");
            if (!ts.is_array() || ts.empty()) bad_key("ensemble.times", "expected a nonempty array");
            cfg.times.clear();
            for (const auto& v : ts) {
                if (!v.is_number()) bad_key("ensemble.times", "expected numbers");
                cfg.times.push_back(v.get<double>());
            }
            for (std::size_t q = 0; q + 1 < cfg.times.size(); ++q)
                if (!(cfg.times[q] < cfg.times[q + 1]))
                    bad_key("ensemble.times", "must be strictly increasing");
        }
    }
    for (double tq : cfg.times)
        if (!(tq > cfg.s0)) bad_key("ensemble.times", "every query time must exceed model.s0");

    if (root.contains("source")) {
        const json& s = root.at("source");
        if (!s.is_object()) bad_key("source", "expected an object");
        check_keys(s, "source", {"f", "g"}, strict, warnings);
        if (s.contains("f")) {
            const json& f = s.at("f");
            if (!f.is_object()) bad_key("source.f", "expected an object");
            check_keys(f, "source.f", {"kind", "center", "width", "lo", "hi"}, strict, warnings);
            cfg.f_kind = get_string(f, "kind", "source.f", cfg.f_kind);
            if (cfg.f_kind != "one" && cfg.f_kind != "gaussian" && cfg.f_kind != "indicator")
                bad_key("source.f.kind", "must be one | gaussian | indicator");
            cfg.f_center = get_number(f, "center", "source.f", cfg.f_center);
            cfg.f_width = get_number(f, "width", "source.f", cfg.f_width);
            if (cfg.f_kind == "gaussian") require_positive(cfg.f_width, "source.f.width");
            cfg.f_lo = get_number(f, "lo", "source.f", cfg.f_lo);
            cfg.f_hi = get_number(f, "hi", "source.f", cfg.f_hi);
            if (cfg.f_kind == "indicator" && !(cfg.f_lo < cfg.f_hi))
                bad_key("source.f", "requires lo < hi");
        }
        if (s.contains("g")) {
            const json& g = s.at("g");
            if (!g.is_object()) bad_key("source.g", "expected an object");
            check_keys(g, "source.g", {"kind", "t1", "t2", "t", "w"}, strict, warnings);
            cfg.g_kind = get_string(g, "kind", "source.g", cfg.g_kind);
            if (cfg.g_kind != "indicator" && cfg.g_kind != "bump")
                bad_key("source.g.kind", "must be indicator | bump");
            cfg.g_t1 = get_number(g, "t1", "source.g", cfg.g_t1);
            cfg.g_t2 = get_number(g, "t2", "source.g", cfg.g_t2);
            if (cfg.g_kind == "indicator" && !(cfg.g_t1 < cfg.g_t2))
                bad_key("source.g", "requires t1 < t2");
            cfg.g_t = get_number(g, "t", "source.g", cfg.g_t);
            cfg.g_w = get_number(g, "w", "source.g", cfg.g_w);
            if (cfg.g_kind == "bump") require_positive(cfg.g_w, "source.g.w");
        }
    }

    if (root.contains("checks")) {
        const json& c = root.at("checks");
        if (!c.is_array() || c.empty()) bad_key("checks", "expected a nonempty array");
        cfg.checks.clear();
        for (const auto& v : c) {
            std::string id = v.is_string() ? v.get<std::string>()
                             : v.is_number_integer() ? std::to_string(v.get<long long>())
                                                     : std::string();
            bool ok = id == "all";
            for (int k = 1; k <= 13 && !ok; ++k) ok = id == std::to_string(k);
            if (!ok) bad_key("checks", "entries must be \"all\" or ids 1..13");
            cfg.checks.push_back(id);
        }
    }

    if (root.contains("output")) {
        const json& o = root.at("output");
        if (!o.is_object()) bad_key("output", "expected an object");
        check_keys(o, "output", {"dir"}, strict, warnings);
        cfg.out_dir = get_string(o, "dir", "output", cfg.out_dir);
        if (cfg.out_dir.empty()) bad_key("output.dir", "must not be empty");
    }

    finalize(cfg);
    return cfg;
}

RunConfig parse_config_file(const std::string& path, bool strict,
                            std::vector<std::string>* warnings) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("config: cannot read file " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config(text, strict, warnings);
}

ModelSpec build_spec(const RunConfig& cfg) {
    SpaceTimeField drift;
    double bound = 0.0;
    if (cfg.drift_const) {
        double b = *cfg.drift_const;
        drift = [b](const double*, double) { return b; };
        bound = std::abs(b);
    } else if (cfg.well_stiffness) {
        double k = *cfg.well_stiffness, c0 = cfg.well_center;
        drift = [k, c0](const double* x, double) { return -k * (x[0] - c0); };
        bound = k * (cfg.extent + std::abs(c0));
    }
    ModelSpec spec;
    if (cfg.preset == "subdiffusion") {
        spec = subdiffusion_preset(cfg.beta, drift, bound);
    } else if (cfg.preset == "variable_order") {
        double base = cfg.bf_base, dip = cfg.bf_dip, width = cfg.bf_width, ctr = cfg.bf_center;
        spec = variable_order_preset([base, dip, width, ctr](const double* x) {
            double z = (x[0] - ctr) / width;
            return base - dip * std::exp(-z * z);
        });
        if (drift) {
            spec.drift = drift;
            spec.bound_drift = bound;
        }
    } else if (cfg.preset == "levy_walk") {
        spec = levy_walk_preset(cfg.beta, drift, cfg.p_plus, bound);
    } else if (cfg.preset == "unit_clock") {
        spec = unit_clock_spec(drift, cfg.diffusion);
        spec.bound_drift = bound;
        return spec;
    } else {
        throw std::invalid_argument("config: model.preset: unknown preset " + cfg.preset);
    }
    if (cfg.preset != "levy_walk" && cfg.diffusion != 1.0) {
        double a = cfg.diffusion;
        spec.diffusion = [a](const double*, double) { return a; };
        spec.bound_diffusion = a;
    }
    if (cfg.preset != "levy_walk" && cfg.gamma0 > 0.0) {
        double g = cfg.gamma0;
        spec.gamma_t = [g](const double*, double) { return g; };
        spec.bound_gamma = g;
    }
    return spec;
}

SpaceTimeGrid build_grid(const RunConfig& cfg, double horizon) {
    if (!(horizon > cfg.s0))
        throw std::invalid_argument("config: the time horizon must exceed model.s0");
    const double span = horizon - cfg.s0;
    auto steps = static_cast<std::size_t>(std::llround(span / cfg.dt));
    if (steps < 2) steps = 2;
    const double dt = span / static_cast<double>(steps);

    std::size_t below = 0;
    if (cfg.window_a) {
        if (!(*cfg.window_a <= cfg.s0))
            throw std::invalid_argument(
                "config: grid.window: the window must start at or before model.s0");
        below = static_cast<std::size_t>(std::ceil((cfg.s0 - *cfg.window_a) / dt - 1e-9));
    }
    double top_target = cfg.window_b ? *cfg.window_b : horizon + 0.1 * span;
    if (!(top_target > horizon))
        throw std::invalid_argument(
            "config: grid.window: the window must end after the last query time");
    auto above = static_cast<std::size_t>(std::ceil((top_target - horizon) / dt - 1e-9));
    if (above == 0) above = 1;

    auto ny = static_cast<std::size_t>(std::llround(2.0 * cfg.extent / cfg.dy));
    if (ny < 3) ny = 3;
    const double t0 = cfg.s0 - static_cast<double>(below) * dt;
    return make_centered_grid(cfg.extent, ny, t0, dt, below + steps + above + 1);
}

namespace {

SpatialField make_f(const RunConfig& cfg) {
    if (cfg.f_kind == "one") return [](const double*) { return 1.0; };
    if (cfg.f_kind == "gaussian") {
        double c0 = cfg.f_center, w = cfg.f_width;
        return [c0, w](const double* x) {
            double z = (x[0] - c0) / w;
            return std::exp(-z * z);
        };
    }
    double lo = cfg.f_lo, hi = cfg.f_hi;
    return [lo, hi](const double* x) { return (x[0] >= lo && x[0] <= hi) ? 1.0 : 0.0; };
}

TemporalWeight make_g(const RunConfig& cfg) {
    if (cfg.g_kind == "bump") return TemporalWeight::bump(cfg.g_t, cfg.g_w);
    return TemporalWeight::indicator(cfg.g_t1, cfg.g_t2);
}

json base_metadata(const RunConfig& cfg) {
    json meta;
    meta["command"] = cfg.command;
    meta["config_hash"] = cfg.config_hash;
    meta["config"] = json::parse(cfg.canonical);
    meta["versions"] = {{"ctrwfp", "1.0.0"}, {"artifact_format", 1}};
    return meta;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << j.dump(2) << "\n";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int run_simulate(const RunConfig& cfg, json& meta) {
    if (!cfg.seed)
        bad_key("ensemble.seed", "required for simulate so runs are reproducible");
    ModelSpec spec = build_spec(cfg);
    McOptions opts;
    opts.engine = cfg.engine == "chain" ? Engine::chain : Engine::limit;
    opts.c = cfg.c;
    opts.dr = cfg.dr;
    opts.workers = cfg.workers ? cfg.workers
                               : std::max(1u, std::thread::hardware_concurrency());
    McCurves curves = mc_law_curves(spec, cfg.x0, cfg.s0, cfg.times, cfg.n_paths, *cfg.seed, opts);

    const bool with_y = !curves.y.empty();
    std::vector<std::string> cols{"path_id", "t", "x"};
    if (with_y) cols.emplace_back("y_octrw");
    CsvWriter csv(cfg.out_dir + "/paths.csv", cfg.config_hash, cols);
    const std::size_t kept = curves.x.empty() ? 0 : curves.x.front().size();
    for (std::size_t p = 0; p < kept; ++p)
        for (std::size_t q = 0; q < curves.ts.size(); ++q) {
            if (with_y)
                csv.write_row_prefixed(p, {curves.ts[q], curves.x[q][p], curves.y[q][p]});
            else
                csv.write_row_prefixed(p, {curves.ts[q], curves.x[q][p]});
        }

    meta["engine"] = cfg.engine;
    meta["seed"] = *cfg.seed;
    meta["n_paths_requested"] = cfg.n_paths;
    meta["n_paths_emitted"] = kept;
    meta["paths_dropped"] = curves.dropped;
    if (spec.coupling == Coupling::levy_walk && cfg.engine == "limit") {
        double beta = spec.tail.beta, cut = cfg.dr * cfg.dr;
        meta["jump_cutoff"] = cut;
        meta["truncation_bias_bound_per_unit_time"] =
            beta * std::pow(cut, 1.0 - beta) / ((1.0 - beta) * std::tgamma(1.0 - beta));
    }
    return 0;
}

int run_solve_forward(const RunConfig& cfg, json& meta) {
    ModelSpec spec = build_spec(cfg);
    const double horizon = cfg.times.back();
    SpaceTimeGrid grid = build_grid(cfg, horizon);
    if (!(std::abs(cfg.x0) < cfg.extent - grid.dy))
        bad_key("model.x0", "must lie inside the spatial domain (-extent, extent)");
    std::vector<double> mu = point_mass_density(grid, cfg.x0, 1.0);
    GridMeasure law = solve_fpe(spec, mu, cfg.s0, grid);

    CsvWriter csv(cfg.out_dir + "/solution.csv", cfg.config_hash, {"x", "t", "value"});
    for (std::size_t jt = 0; jt < grid.t.n; ++jt)
        for (std::size_t iy = 0; iy < grid.ny; ++iy)
            csv.write_row({grid.y_at(iy), grid.t.at(jt), law.at(jt, iy)});

    json mm = json::array();
    for (double tq : cfg.times) {
        auto jt = static_cast<std::size_t>(std::llround((tq - grid.t.t0) / grid.t.dt));
        if (jt >= grid.t.n) jt = grid.t.n - 1;
        if (jt <= law.injection_level) continue;
        Moments mo = solution_moments(law, grid.t.at(jt));
        mm.push_back({{"t_requested", tq},
                      {"t_grid", grid.t.at(jt)},
                      {"mass", mo.mass},
                      {"mean", mo.mean},
                      {"variance", mo.variance},
                      {"leakage", law.leakage[jt]}});
    }
    meta["moments"] = std::move(mm);
    meta["grid"] = {{"ny", grid.ny}, {"dy", grid.dy}, {"t0", grid.t.t0},
                    {"dt", grid.t.dt}, {"nt", grid.t.n}};
    meta["final_leakage"] = law.leakage.back();
    return 0;
}

int run_solve_backward(const RunConfig& cfg, json& meta) {
    ModelSpec spec = build_spec(cfg);
    TemporalWeight g = make_g(cfg);
    const double horizon = std::max(cfg.times.back(), g.hi);
    SpaceTimeGrid grid = build_grid(cfg, horizon);
    BackwardField field = solve_backward(spec, make_f(cfg), g, grid);

    CsvWriter csv(cfg.out_dir + "/solution.csv", cfg.config_hash, {"x", "t", "value"});
    for (std::size_t js = 0; js < grid.t.n; ++js)
        for (std::size_t ix = 0; ix < grid.ny; ++ix)
            csv.write_row({grid.y_at(ix), grid.t.at(js), field.at(js, ix)});

    meta["grid"] = {{"ny", grid.ny}, {"dy", grid.dy}, {"t0", grid.t.t0},
                    {"dt", grid.t.dt}, {"nt", grid.t.n}};
    meta["value_at_start"] = field.value(cfg.x0, cfg.s0);
    meta["weight_support"] = {g.lo, g.hi};
    return 0;
}

int run_validate(const RunConfig& cfg, json& meta) {
    const std::uint64_t seed = cfg.seed.value_or(kAcceptanceSeed);
    auto results = run_acceptance_checks(cfg.checks, seed, cfg.workers);

    CsvWriter csv(cfg.out_dir + "/verdicts.csv", cfg.config_hash,
                  {"check_id", "statistic", "threshold", "verdict"});
    json list = json::array();
    bool all_pass = true;
    for (const auto& r : results) {
        csv.write_strings({r.id, CsvWriter::number(r.statistic), CsvWriter::number(r.threshold),
                           r.pass ? "pass" : "fail"});
        list.push_back({{"check_id", r.id},
                        {"name", r.name},
                        {"statistic", r.statistic},
                        {"threshold", r.threshold},
                        {"verdict", r.pass ? "pass" : "fail"},
                        {"detail", r.detail},
                        {"seconds", r.seconds}});
        std::cout << "check " << r.id << " (" << r.name << "): "
                  << (r.pass ? "pass" : "FAIL") << "  statistic=" << r.statistic
                  << " threshold=" << r.threshold << "\n";
        all_pass = all_pass && r.pass;
    }
    meta["seed"] = seed;
    meta["checks"] = list;
    meta["all_pass"] = all_pass;
    write_json(cfg.out_dir + "/verdicts.json", meta);
    return all_pass ? 0 : 2;
}

}  // namespace

int run(const RunConfig& cfg_in) {
    RunConfig cfg = cfg_in;
    const auto t0 = std::chrono::steady_clock::now();
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    try {
        finalize(cfg);
        json meta = base_metadata(cfg);
        int status = 0;
        if (cfg.command == "simulate")
            status = run_simulate(cfg, meta);
        else if (cfg.command == "solve-forward")
            status = run_solve_forward(cfg, meta);
        else if (cfg.command == "solve-backward")
            status = run_solve_backward(cfg, meta);
        else if (cfg.command == "validate")
            status = run_validate(cfg, meta);
        else
            throw std::invalid_argument(
                "config: command must be simulate | solve-forward | solve-backward | validate");
        meta["elapsed_seconds"] = seconds_since(t0);
        write_json(cfg.out_dir + "/metadata.json", meta);
        return status;
    } catch (const std::exception& e) {
        json err;
        err["error"] = e.what();
        err["command"] = cfg.command;
        if (!cfg.config_hash.empty()) err["config_hash"] = cfg.config_hash;
        try {
            write_json(cfg.out_dir + "/error.json", err);
        } catch (...) {
        }
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace ctrwfp
