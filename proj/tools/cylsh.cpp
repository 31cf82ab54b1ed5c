// SPDX-License-Identifier: Apache-2.0
// Command-line front end: phantoms, forward simulation, reconstruction and
// the rate / approximation studies.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cylsh/config.hpp"
#include "cylsh/experiments.hpp"
#include "cylsh/io.hpp"
#include "cylsh/phantoms.hpp"
#include "cylsh/regularizer.hpp"
#include "cylsh/rng.hpp"
#include "cylsh/runconfig.hpp"
#include "cylsh/selftest.hpp"
#include "cylsh/solver.hpp"
#include "cylsh/tomo.hpp"

namespace fs = std::filesystem;
using namespace cylsh;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNoConvergence = 2;

struct Globals {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    int threads = 0;
    std::string out;
};

struct Context {
    Config cfg;
    ExperimentConfig exp;
    fs::path out;
};

Context make_context(const Globals& g)
{
    Context c;
    c.cfg = g.config_path.empty() ? parse_run_config("", "<defaults>") : load_run_config(g.config_path);
    if (g.seed) c.cfg.set("experiment", "seed", std::to_string(*g.seed));
    c.exp = experiment_config_from(c.cfg);
    c.exp.threads = resolve_threads(g.threads);
    std::string dir = g.out.empty() ? c.cfg.get_string("output", "dir", ".") : g.out;
    c.out = dir;
    fs::create_directories(c.out);
    return c;
}

void write_text(const fs::path& p, const std::string& text)
{
    std::ofstream os(p, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    os << text;
}

void write_resolved(Context& c)
{
    record_resolved(c.cfg, c.exp);
    write_text(c.out / "resolved.cfg", c.cfg.dump());
}

PhantomPair make_phantom(const Context& c)
{
    if (c.exp.phantom == PhantomKind::stempo) return stempo_surrogate(c.exp.n, c.exp.kappa);
    return cartoon_phantom(c.exp.n, c.exp.kappa, cartoon_spec_from_config(c.cfg));
}

int cmd_phantom(Context& c)
{
    const auto ph = make_phantom(c);
    write_volume((c.out / "truth_low.vol").string(), ph.low);
    write_volume((c.out / "truth_high.vol").string(), ph.high);
    write_resolved(c);
    std::cout << "wrote " << (c.out / "truth_low.vol").string() << " and truth_high.vol (" << ph.low.grid().str()
              << ")\n";
    return kExitOk;
}

int cmd_forward(Context& c)
{
    const auto ph = make_phantom(c);
    const Geometry geom = Geometry::standard(c.exp.n);
    const int N = static_cast<int>(c.cfg.get_int("geometry", "n_angles", c.exp.n_grid.front()));
    if (N < 1) throw ConfigError(c.cfg.source(), c.cfg.find("geometry", "n_angles")->line, "n_angles must be >= 1");
    double delta = 0.0;
    if (c.cfg.has("geometry", "delta")) {
        delta = c.cfg.get_double("geometry", "delta", 0.0);
    } else {
        const NoiseSpec ns{c.exp.scenario, c.exp.c_delta, c.exp.n_min > 0 ? c.exp.n_min : c.exp.n_grid.front(),
                           reference_data_sup(ph.high, geom)};
        delta = noise_level(ns, N);
    }
    const auto pattern = sample_angles(N, c.exp.kappa, c.exp.range, derive_seed(c.exp.seed, {1}));
    const auto g = simulate_data(ph.high, geom, pattern, delta, derive_seed(c.exp.seed, {2}));
    write_sinogram((c.out / "sinogram.sino").string(), g);
    c.cfg.set("geometry", "n_angles", std::to_string(N));
    c.cfg.set("geometry", "delta", format_double(delta));
    write_resolved(c);
    std::cout << "wrote " << (c.out / "sinogram.sino").string() << " (kappa=" << c.exp.kappa << ", N=" << N
              << ", delta=" << delta << ")\n";
    return kExitOk;
}

int cmd_reconstruct(Context& c, const std::string& sino_path)
{
    const auto g = read_sinogram(sino_path);
    const int n = c.exp.n;
    const Geometry geom = Geometry::standard(n);
    if (g.n_dtc != geom.n_dtc)
        throw std::invalid_argument("sinogram has " + std::to_string(g.n_dtc) + " detector bins; [phantom] n = " +
                                    std::to_string(n) + " expects " + std::to_string(geom.n_dtc));
    const GridSpec grid{n, n, g.pattern.kappa()};
    const auto T = make_transform(c.exp.transform, grid, c.exp.scales);
    const Regularizer reg(T, WeightScheme{c.exp.p, c.exp.beta});
    const int N = g.pattern.angles_per_step();
    const double alpha = c.cfg.has("solver", "alpha") ? c.cfg.get_double("solver", "alpha", 0.0)
                                                      : alpha_schedule(c.exp.scenario, N, c.exp.c_alpha);
    SolveOptions opts = c.exp.solver;
    std::ofstream trace;
    if (c.cfg.get_bool("output", "trace", false)) {
        trace.open(c.out / "trace.csv", std::ios::trunc);
        trace << "iteration,objective,residual,R,step\n";
        trace.precision(17);
        opts.trace = &trace;
    }
    const auto res = reconstruct(g, geom, reg, alpha, opts);
    write_volume((c.out / "reconstruction.vol").string(), res.f, T->layout()->scales);
    std::ostringstream rep;
    rep.precision(17);
    rep << "alpha = " << alpha << "\niterations = " << res.report.iterations << "\nobjective = " << res.report.objective
        << "\nresidual = " << res.report.residual << "\nregularizer = " << res.report.regularizer
        << "\nconverged = " << (res.report.converged ? "true" : "false") << '\n';
    write_text(c.out / "report.txt", rep.str());
    c.cfg.set("solver", "alpha", format_double(alpha));
    write_resolved(c);
    std::cout << rep.str();
    if (!res.report.converged) {
        std::cerr << "error: solver did not converge within " << opts.max_iterations << " iterations\n";
        return kExitNoConvergence;
    }
    return kExitOk;
}

int cmd_rates(Context& c)
{
    const auto result = run_rate_experiment(c.exp);
    {
        std::ofstream os(c.out / "rates.csv", std::ios::binary | std::ios::trunc);
        write_records_csv(os, result.records);
    }
    {
        std::ofstream os(c.out / "fit.csv", std::ios::binary | std::ios::trunc);
        write_fit_csv(os, to_string(c.exp.scenario), to_string(c.exp.transform), c.exp.p, result.fit);
    }
    {
        std::ofstream os(c.out / "summary.csv", std::ios::binary | std::ios::trunc);
        os << "N,mean_bregman,std_bregman,count,failures\n";
        for (const auto& a : result.aggregate)
            os << a.n_angles << ',' << format_double(a.mean) << ',' << format_double(a.stddev) << ',' << a.count << ','
               << a.failures << '\n';
    }
    if (c.exp.keep_reconstructions && c.exp.trials >= 2) {
        for (std::size_t i = 0; i < c.exp.n_grid.size(); ++i) {
            std::vector<Volume> group;
            for (int t = 0; t < c.exp.trials; ++t) {
                const std::size_t k = i * c.exp.trials + t;
                if (!result.records[k].failed) group.push_back(result.reconstructions[k]);
            }
            if (group.size() >= 2)
                write_volume((c.out / ("variance_N" + std::to_string(c.exp.n_grid[i]) + ".vol")).string(),
                             variance_study(group));
        }
    }
    write_resolved(c);
    int failures = 0;
    for (const auto& a : result.aggregate) {
        std::printf("N=%d mean D=%.6g std=%.3g (%d ok, %d failed)\n", a.n_angles, a.mean, a.stddev, a.count,
                    a.failures);
        failures += a.failures;
    }
    std::printf("fit: c = %.6g, b = %.6g\n", result.fit.c, result.fit.b);
    for (const auto& r : result.records)
        if (r.failed) std::fprintf(stderr, "N=%d trial %d failed: %s\n", r.n_angles, r.trial, r.error.c_str());
    return failures ? kExitNoConvergence : kExitOk;
}

int cmd_nterm(Context& c)
{
    const GridSpec grid{c.exp.n, c.exp.n, c.exp.n};
    const auto f = rasterize_video(default_cylindrical_cartoon(), grid);
    const std::vector<std::shared_ptr<const SparsifyingTransform>> transforms{
        make_transform(TransformKind::shearlet, grid, c.exp.scales), make_transform(TransformKind::wavelet, grid)};
    const auto ns = middle_decades_grid(grid.size());
    const auto curves = nterm_approximation_study(f, transforms, ns);
    {
        std::ofstream os(c.out / "nterm.csv", std::ios::binary | std::ios::trunc);
        os << "transform,N,error,kept_energy\n";
        for (const auto& cv : curves)
            for (std::size_t i = 0; i < cv.n_terms.size(); ++i)
                os << cv.transform << ',' << static_cast<long long>(cv.n_terms[i]) << ',' << format_double(cv.errors[i])
                   << ',' << format_double(cv.kept_energy[i]) << '\n';
    }
    {
        std::ofstream os(c.out / "nterm_fit.csv", std::ios::binary | std::ios::trunc);
        os << "transform,c,b,num_points\n";
        for (const auto& cv : curves)
            os << cv.transform << ',' << format_double(cv.fit.c) << ',' << format_double(cv.fit.b) << ','
               << cv.fit.num_points << '\n';
    }
    write_resolved(c);
    for (const auto& cv : curves) std::printf("%s: slope %.4f over %d points\n", cv.transform.c_str(), cv.fit.b, cv.fit.num_points);
    return kExitOk;
}

int cmd_fit(const Globals& g, const std::string& csv)
{
    std::ifstream is(csv);
    if (!is) throw std::runtime_error("cannot open " + csv);
    std::vector<double> n, v;
    read_points_csv(is, n, v);
    const auto fit = fit_monomial(n, v);
    std::printf("c = %.12g\nb = %.12g\npoints = %d\n", fit.c, fit.b, fit.num_points);
    if (!g.out.empty()) {
        fs::create_directories(g.out);
        std::ofstream os(fs::path(g.out) / "fit.csv", std::ios::binary | std::ios::trunc);
        write_fit_csv(os, "input", "input", 0.0, fit);
    }
    return kExitOk;
}

int cmd_variance(Context& c, const std::vector<std::string>& inputs)
{
    std::vector<Volume> vols;
    for (const auto& p : inputs) vols.push_back(read_volume(p).volume);
    const auto var = variance_study(vols);
    write_volume((c.out / "variance.vol").string(), var);
    write_resolved(c);
    std::printf("wrote %s (max variance %.6g)\n", (c.out / "variance.vol").string().c_str(), max_abs(var.values()));
    return kExitOk;
}

int cmd_selftest(const Globals& g)
{
    const auto checks = run_selftest(g.seed.value_or(1));
    bool all = true;
    for (const auto& ch : checks) {
        std::printf("%s  %-45s %.3e (<= %.1e)\n", ch.pass ? "PASS" : "FAIL", ch.name.c_str(), ch.value, ch.threshold);
        all = all && ch.pass;
    }
    return all ? kExitOk : kExitInvalid;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Dynamic tomography with cylindrical shearlet regularization"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config_path, "run config (key = value with [sections])");
    app.add_option("--seed", g.seed, "base seed (overrides [experiment] seed)");
    app.add_option("--threads", g.threads, "worker threads (CYLSH_THREADS overrides)")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "output directory (overrides [output] dir)");

    auto* phantom = app.add_subcommand("phantom", "rasterize the configured phantom (low and double resolution)");
    auto* forward = app.add_subcommand("forward", "simulate a noisy sinogram of the phantom");
    auto* recon = app.add_subcommand("reconstruct", "minimize the regularized functional for a sinogram");
    std::string sino;
    recon->add_option("--sinogram", sino, "input sinogram")->required();
    auto* rates = app.add_subcommand("rates", "run the Bregman-distance convergence-rate study");
    auto* nterm = app.add_subcommand("nterm", "N-term approximation study (shearlet vs wavelet)");
    auto* fit = app.add_subcommand("fit", "fit c*N^b to (N, value) points of a CSV file");
    std::string csv;
    fit->add_option("--csv", csv, "input CSV")->required();
    auto* variance = app.add_subcommand("variance", "pixelwise sample variance of volume files");
    std::vector<std::string> inputs;
    variance->add_option("inputs", inputs, "volume files")->required()->expected(2, -1);
    auto* selftest = app.add_subcommand("selftest", "run the invariant self checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (selftest->parsed()) return cmd_selftest(g);
        if (fit->parsed()) return cmd_fit(g, csv);
        Context c = make_context(g);
        if (phantom->parsed()) return cmd_phantom(c);
        if (forward->parsed()) return cmd_forward(c);
        if (recon->parsed()) return cmd_reconstruct(c, sino);
        if (rates->parsed()) return cmd_rates(c);
        if (nterm->parsed()) return cmd_nterm(c);
        if (variance->parsed()) return cmd_variance(c, inputs);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
    return kExitInvalid;
}
