// SPDX-License-Identifier: Apache-2.0
#include "cylsh/runconfig.hpp"

#include <sstream>

namespace cylsh {

namespace {

// Re-raises a value error from a typed lookup at the entry's line.
template <class F>
auto checked(const Config& cfg, const std::string& section, const std::string& key, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& ex) {
        if (const auto* e = cfg.find(section, key)) cfg.fail(*e, ex.what());
        throw ConfigError(cfg.source(), 0, ex.what());
    }
}

std::string join_ints(const std::vector<int>& v)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

}  // namespace

const std::map<std::string, std::set<std::string>>& run_config_schema()
{
    static const std::map<std::string, std::set<std::string>> schema{
        {"phantom", {"kind", "n", "kappa", "supersample", "ellipse"}},
        {"geometry", {"angle_range", "n_angles", "delta"}},
        {"transform", {"kind", "scales", "p", "beta"}},
        {"solver",
         {"alpha", "max_iterations", "tolerance", "patience", "shrink", "sufficient_decrease", "step_growth",
          "inner_iterations", "nonnegative"}},
        {"experiment", {"scenario", "n_grid", "trials", "c_alpha", "c_delta", "n_min", "seed", "keep_reconstructions"}},
        {"output", {"dir", "timing", "trace"}},
    };
    return schema;
}

Config parse_run_config(const std::string& text, const std::string& source)
{
    Config cfg = Config::parse(text, source);
    cfg.require_known(run_config_schema());
    experiment_config_from(cfg);  // value checks
    return cfg;
}

Config load_run_config(const std::string& path)
{
    Config cfg = Config::load(path);
    cfg.require_known(run_config_schema());
    experiment_config_from(cfg);
    return cfg;
}

SolveOptions solve_options_from(const Config& cfg)
{
    SolveOptions o;
    o.max_iterations = static_cast<int>(cfg.get_int("solver", "max_iterations", o.max_iterations));
    o.tolerance = cfg.get_double("solver", "tolerance", o.tolerance);
    o.patience = static_cast<int>(cfg.get_int("solver", "patience", o.patience));
    o.shrink = cfg.get_double("solver", "shrink", o.shrink);
    o.sufficient_decrease = cfg.get_double("solver", "sufficient_decrease", o.sufficient_decrease);
    o.step_growth = cfg.get_double("solver", "step_growth", o.step_growth);
    o.inner_iterations = static_cast<int>(cfg.get_int("solver", "inner_iterations", o.inner_iterations));
    o.nonnegative = cfg.get_bool("solver", "nonnegative", o.nonnegative);
    try {
        o.validate();
    } catch (const std::exception& ex) {
        const Config::Entry* e = nullptr;
        for (const auto& entry : cfg.entries())
            if (entry.section == "solver") e = &entry;
        if (e) cfg.fail(*e, ex.what());
        throw ConfigError(cfg.source(), 0, ex.what());
    }
    return o;
}

ExperimentConfig experiment_config_from(const Config& cfg)
{
    ExperimentConfig e;
    e.phantom = checked(cfg, "phantom", "kind",
                        [&] { return phantom_kind_from_string(cfg.get_string("phantom", "kind", "cartoon")); });
    e.n = static_cast<int>(cfg.get_int("phantom", "n", e.n));
    e.kappa = static_cast<int>(cfg.get_int("phantom", "kappa", e.kappa));
    e.range = checked(cfg, "geometry", "angle_range",
                      [&] { return angle_range_from_string(cfg.get_string("geometry", "angle_range", "full")); });
    e.transform = checked(cfg, "transform", "kind",
                          [&] { return transform_kind_from_string(cfg.get_string("transform", "kind", "shearlet")); });
    e.scales = static_cast<int>(cfg.get_int("transform", "scales", e.scales));
    e.p = cfg.get_double("transform", "p", e.p);
    if (cfg.has("transform", "beta")) e.beta = cfg.get_double("transform", "beta", 0.0);
    e.scenario = checked(cfg, "experiment", "scenario", [&] {
        return noise_scenario_from_string(cfg.get_string("experiment", "scenario", "decreasing"));
    });
    e.n_grid = cfg.get_ints("experiment", "n_grid", e.n_grid);
    e.trials = static_cast<int>(cfg.get_int("experiment", "trials", e.trials));
    e.c_alpha = cfg.get_double("experiment", "c_alpha", e.c_alpha);
    e.c_delta = cfg.get_double("experiment", "c_delta", e.c_delta);
    e.n_min = static_cast<int>(cfg.get_int("experiment", "n_min", e.n_min));
    e.seed = cfg.get_u64("experiment", "seed", e.seed);
    e.keep_reconstructions = cfg.get_bool("experiment", "keep_reconstructions", e.keep_reconstructions);
    e.record_timing = cfg.get_bool("output", "timing", e.record_timing);
    e.solver = solve_options_from(cfg);
    try {
        e.validate();
    } catch (const std::exception& ex) {
        const Config::Entry* last = nullptr;
        for (const auto& entry : cfg.entries())
            if (entry.section == "experiment" || entry.section == "phantom" || entry.section == "transform")
                last = &entry;
        if (last) throw ConfigError(cfg.source(), last->line, ex.what());
        throw ConfigError(cfg.source(), 0, ex.what());
    }
    return e;
}

void record_resolved(Config& cfg, const ExperimentConfig& e)
{
    cfg.set("phantom", "kind", to_string(e.phantom));
    cfg.set("phantom", "n", std::to_string(e.n));
    cfg.set("phantom", "kappa", std::to_string(e.kappa));
    cfg.set("geometry", "angle_range", to_string(e.range));
    cfg.set("transform", "kind", to_string(e.transform));
    cfg.set("transform", "scales", std::to_string(e.scales));
    cfg.set("transform", "p", format_double(e.p));
    cfg.set("transform", "beta", format_double(e.beta.value_or(1.25 * (2.0 - e.p))));
    cfg.set("solver", "max_iterations", std::to_string(e.solver.max_iterations));
    cfg.set("solver", "tolerance", format_double(e.solver.tolerance));
    cfg.set("solver", "patience", std::to_string(e.solver.patience));
    cfg.set("solver", "shrink", format_double(e.solver.shrink));
    cfg.set("solver", "sufficient_decrease", format_double(e.solver.sufficient_decrease));
    cfg.set("solver", "step_growth", format_double(e.solver.step_growth));
    cfg.set("solver", "inner_iterations", std::to_string(e.solver.inner_iterations));
    cfg.set("solver", "nonnegative", e.solver.nonnegative ? "true" : "false");
    cfg.set("experiment", "scenario", to_string(e.scenario));
    cfg.set("experiment", "n_grid", join_ints(e.n_grid));
    cfg.set("experiment", "trials", std::to_string(e.trials));
    cfg.set("experiment", "c_alpha", format_double(e.c_alpha));
    cfg.set("experiment", "c_delta", format_double(e.c_delta));
    cfg.set("experiment", "n_min", std::to_string(e.n_min > 0 ? e.n_min : e.n_grid.front()));
    cfg.set("experiment", "seed", std::to_string(e.seed));
}

}  // namespace cylsh
