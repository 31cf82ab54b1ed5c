// SPDX-License-Identifier: Apache-2.0
#include "cylsh/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <istream>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cylsh/config.hpp"
#include "cylsh/phantoms.hpp"
#include "cylsh/regularizer.hpp"
#include "cylsh/rng.hpp"
#include "cylsh/shearlet.hpp"
#include "cylsh/wavelet.hpp"

namespace cylsh {

namespace {

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string fmt(double v) { return format_double(v); }

}  // namespace

std::string to_string(TransformKind k) { return k == TransformKind::shearlet ? "shearlet" : "wavelet"; }

TransformKind transform_kind_from_string(const std::string& s)
{
    if (s == "shearlet") return TransformKind::shearlet;
    if (s == "wavelet") return TransformKind::wavelet;
    throw std::invalid_argument("unknown transform '" + s + "' (shearlet|wavelet)");
}

std::string to_string(PhantomKind k) { return k == PhantomKind::cartoon ? "cartoon" : "stempo"; }

PhantomKind phantom_kind_from_string(const std::string& s)
{
    if (s == "cartoon") return PhantomKind::cartoon;
    if (s == "stempo") return PhantomKind::stempo;
    throw std::invalid_argument("unknown phantom '" + s + "' (cartoon|stempo)");
}

std::shared_ptr<const SparsifyingTransform> make_transform(TransformKind kind, const GridSpec& grid, int scales)
{
    if (kind == TransformKind::wavelet) return std::make_shared<Wavelet3D>(grid, WaveletBank::daubechies2(3));
    if (scales <= 0) scales = std::min(3, grid.max_scales());
    if (scales < 1) throw std::invalid_argument("make_transform: grid " + grid.str() + " admits no shearlet scale");
    return std::make_shared<CylindricalShearlet>(grid, scales);
}

double alpha_schedule(NoiseScenario scenario, int n_angles, double c_alpha)
{
    if (n_angles < 1) throw std::invalid_argument("alpha_schedule: N must be >= 1");
    if (scenario == NoiseScenario::decreasing) return c_alpha / n_angles;
    return c_alpha / std::cbrt(static_cast<double>(n_angles));
}

MonomialFit fit_monomial(std::span<const double> n, std::span<const double> values)
{
    if (n.size() != values.size()) throw std::invalid_argument("fit_monomial: size mismatch");
    if (n.size() < 2) throw std::invalid_argument("fit_monomial: need at least two points");
    const std::size_t m = n.size();
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (!(n[i] > 0.0) || !(values[i] > 0.0)) throw std::invalid_argument("fit_monomial: values must be positive");
        sx += std::log(n[i]);
        sy += std::log(values[i]);
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double dx = std::log(n[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(values[i]) - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_monomial: all N equal");
    MonomialFit f;
    f.b = sxy / sxx;
    f.c = std::exp(my - f.b * mx);
    f.num_points = static_cast<int>(m);
    return f;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn)
{
    const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, threads)));
    std::vector<std::exception_ptr> errors(count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i; (i = next.fetch_add(1)) < count;) {
                    try {
                        fn(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

int resolve_threads(int requested)
{
    if (const char* env = std::getenv("CYLSH_THREADS")) {
        try {
            const long long v = parse_int(env);
            if (v >= 1) return static_cast<int>(v);
        } catch (const std::exception&) {
        }
        throw std::invalid_argument(std::string("CYLSH_THREADS must be a positive integer, got '") + env + "'");
    }
    if (requested > 0) return requested;
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void ExperimentConfig::validate() const
{
    if (n < 8) throw std::invalid_argument("experiment: n must be >= 8");
    if (kappa < 1) throw std::invalid_argument("experiment: kappa must be >= 1");
    if (trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
    if (n_grid.empty()) throw std::invalid_argument("experiment: empty N grid");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < 1) throw std::invalid_argument("experiment: N values must be positive");
        if (i && n_grid[i] <= n_grid[i - 1]) throw std::invalid_argument("experiment: N grid must be strictly increasing");
    }
    if (!(c_alpha > 0.0) || !(c_delta > 0.0)) throw std::invalid_argument("experiment: c_alpha and c_delta must be positive");
    if (n_min > n_grid.front()) throw std::invalid_argument("experiment: n_min exceeds the smallest N");
    if (!(p >= 1.0 && p <= 2.0)) throw std::invalid_argument("experiment: p must lie in [1, 2]");
    solver.validate();
}

double reference_data_sup(const Volume& f_highres, const Geometry& low)
{
    const auto pattern = equispaced_angles(360, f_highres.grid().nt);
    const auto g = bin_detector_pairs(dynamic_forward(f_highres, Geometry::refined(low), pattern));
    return max_abs(g.data);
}

std::vector<AggregateRow> aggregate_records(std::span<const RateRecord> records)
{
    std::map<int, std::vector<const RateRecord*>> by_n;
    for (const auto& r : records) by_n[r.n_angles].push_back(&r);
    std::vector<AggregateRow> out;
    for (const auto& [n, rows] : by_n) {
        AggregateRow a;
        a.n_angles = n;
        std::vector<double> v;
        for (const auto* r : rows) {
            if (r->failed)
                ++a.failures;
            else
                v.push_back(r->bregman);
        }
        a.count = static_cast<int>(v.size());
        if (!v.empty()) {
            a.mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
            if (v.size() > 1) {
                double s = 0.0;
                for (double x : v) s += (x - a.mean) * (x - a.mean);
                a.stddev = std::sqrt(s / (v.size() - 1));
            }
        }
        out.push_back(a);
    }
    return out;
}

RateResult run_rate_experiment(const ExperimentConfig& cfg)
{
    cfg.validate();
    const PhantomPair truth =
        cfg.phantom == PhantomKind::cartoon ? cartoon_phantom(cfg.n, cfg.kappa) : stempo_surrogate(cfg.n, cfg.kappa);
    const Geometry low = Geometry::standard(cfg.n);
    RateResult result;
    result.data_sup = reference_data_sup(truth.high, low);

    const GridSpec grid{cfg.n, cfg.n, cfg.kappa};
    const auto transform = make_transform(cfg.transform, grid, cfg.scales);
    const Regularizer reg(transform, WeightScheme{cfg.p, cfg.beta});
    const NoiseSpec noise{cfg.scenario, cfg.c_delta, cfg.n_min > 0 ? cfg.n_min : cfg.n_grid.front(), result.data_sup};
    const double truth_norm = norm2(truth.low.values());

    const std::size_t tasks = cfg.n_grid.size() * static_cast<std::size_t>(cfg.trials);
    result.records.resize(tasks);
    if (cfg.keep_reconstructions) result.reconstructions.resize(tasks);

    parallel_for(tasks, cfg.threads, [&](std::size_t task) {
        const int N = cfg.n_grid[task / cfg.trials];
        const int trial = static_cast<int>(task % cfg.trials);
        RateRecord& rec = result.records[task];
        rec.scenario = to_string(cfg.scenario);
        rec.transform = to_string(cfg.transform);
        rec.p = cfg.p;
        rec.n_angles = N;
        rec.trial = trial;
        try {
            rec.delta = noise_level(noise, N);
            rec.alpha = alpha_schedule(cfg.scenario, N, cfg.c_alpha);
            const auto n64 = static_cast<std::uint64_t>(N), t64 = static_cast<std::uint64_t>(trial);
            const auto pattern = sample_angles(N, cfg.kappa, cfg.range, derive_seed(cfg.seed, {1, n64, t64}));
            const auto g = simulate_data(truth.high, low, pattern, rec.delta, derive_seed(cfg.seed, {2, n64, t64}));
            SolveOptions opts = cfg.solver;
            opts.trace = nullptr;
            const auto sol = reconstruct(g, low, reg, rec.alpha, opts);
            rec.iterations = sol.report.iterations;
            rec.seconds = cfg.record_timing ? sol.report.seconds : 0.0;
            rec.bregman = reg.bregman_distance(sol.f, truth.low);
            rec.rel_l2 = distance(sol.f.values(), truth.low.values()) / truth_norm;
            rec.ssim = ssim(sol.f, truth.low);
            if (!sol.report.converged) {
                rec.failed = true;
                rec.error = sol.report.step_underflow ? "step underflow" : "no convergence within iteration limit";
            }
            if (cfg.keep_reconstructions) result.reconstructions[task] = sol.f;
        } catch (const std::exception& e) {
            rec.failed = true;
            rec.error = e.what();
        }
    });

    result.aggregate = aggregate_records(result.records);
    std::vector<double> ns, means;
    for (const auto& a : result.aggregate)
        if (a.count > 0 && a.mean > 0.0) {
            ns.push_back(a.n_angles);
            means.push_back(a.mean);
        }
    if (ns.size() >= 2) result.fit = fit_monomial(ns, means);
    return result;
}

void write_records_csv(std::ostream& os, std::span<const RateRecord> records)
{
    os << "scenario,transform,p,N,trial,delta,alpha,bregman,rel_l2,ssim,iters,seconds\n";
    for (const auto& r : records) {
        os << r.scenario << ',' << r.transform << ',' << fmt(r.p) << ',' << r.n_angles << ',' << r.trial << ','
           << fmt(r.delta) << ',' << fmt(r.alpha) << ',' << (r.failed ? std::string("nan") : fmt(r.bregman)) << ','
           << fmt(r.rel_l2) << ',' << fmt(r.ssim) << ',' << r.iterations << ',' << fmt(r.seconds) << '\n';
    }
}

std::vector<RateRecord> read_records_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("records csv: empty input");
    if (line != "scenario,transform,p,N,trial,delta,alpha,bregman,rel_l2,ssim,iters,seconds")
        throw std::runtime_error("records csv: unexpected header '" + line + "'");
    std::vector<RateRecord> out;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto c = split_csv_line(line);
        if (c.size() != 12) throw std::runtime_error("records csv: line " + std::to_string(lineno) + " has wrong arity");
        RateRecord r;
        r.scenario = c[0];
        r.transform = c[1];
        r.p = parse_double(c[2]);
        r.n_angles = static_cast<int>(parse_int(c[3]));
        r.trial = static_cast<int>(parse_int(c[4]));
        r.delta = parse_double(c[5]);
        r.alpha = parse_double(c[6]);
        r.failed = c[7] == "nan";
        r.bregman = r.failed ? 0.0 : parse_double(c[7]);
        r.rel_l2 = parse_double(c[8]);
        r.ssim = parse_double(c[9]);
        r.iterations = static_cast<int>(parse_int(c[10]));
        r.seconds = parse_double(c[11]);
        out.push_back(r);
    }
    return out;
}

void write_fit_csv(std::ostream& os, const std::string& scenario, const std::string& transform, double p,
                   const MonomialFit& fit)
{
    os << "scenario,transform,p,c,b,num_points\n"
       << scenario << ',' << transform << ',' << fmt(p) << ',' << fmt(fit.c) << ',' << fmt(fit.b) << ','
       << fit.num_points << '\n';
}

void read_points_csv(std::istream& is, std::vector<double>& n, std::vector<double>& values)
{
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("points csv: empty input");
    const auto header = split_csv_line(line);
    auto col = [&](const std::string& name) -> int {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    };
    const int ncol = col("N");
    if (ncol < 0) throw std::runtime_error("points csv: no 'N' column");
    int vcol = col("bregman");
    if (vcol < 0) vcol = col("value");
    if (vcol < 0) vcol = ncol == 0 ? 1 : 0;
    if (vcol >= static_cast<int>(header.size())) throw std::runtime_error("points csv: no value column");
    std::map<double, std::pair<double, int>> acc;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto c = split_csv_line(line);
        if (c.size() != header.size())
            throw std::runtime_error("points csv: line " + std::to_string(lineno) + " has wrong arity");
        if (c[static_cast<std::size_t>(vcol)] == "nan") continue;
        auto& a = acc[parse_double(c[static_cast<std::size_t>(ncol)])];
        a.first += parse_double(c[static_cast<std::size_t>(vcol)]);
        a.second += 1;
    }
    n.clear();
    values.clear();
    for (const auto& [k, v] : acc) {
        n.push_back(k);
        values.push_back(v.first / v.second);
    }
}

double ssim(const Volume& estimate, const Volume& reference)
{
    if (estimate.grid() != reference.grid()) throw std::invalid_argument("ssim: grid mismatch");
    const auto& g = reference.grid();
    constexpr int w = 7;
    if (g.nx < w || g.ny < w) throw std::invalid_argument("ssim: slices smaller than the window");
    const auto [lo, hi] = std::minmax_element(reference.data(), reference.data() + reference.size());
    const double range = std::max(*hi - *lo, 1e-12);
    const double c1 = (0.01 * range) * (0.01 * range), c2 = (0.03 * range) * (0.03 * range);
    const double inv = 1.0 / (w * w);
    double total = 0.0;
    std::size_t count = 0;
    for (int t = 0; t < g.nt; ++t)
        for (int y0 = 0; y0 + w <= g.ny; ++y0)
            for (int x0 = 0; x0 + w <= g.nx; ++x0) {
                double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
                for (int y = y0; y < y0 + w; ++y)
                    for (int x = x0; x < x0 + w; ++x) {
                        const double a = estimate(x, y, t), b = reference(x, y, t);
                        ma += a;
                        mb += b;
                        saa += a * a;
                        sbb += b * b;
                        sab += a * b;
                    }
                ma *= inv;
                mb *= inv;
                const double va = saa * inv - ma * ma, vb = sbb * inv - mb * mb, cab = sab * inv - ma * mb;
                total += ((2 * ma * mb + c1) * (2 * cab + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
                ++count;
            }
    return total / count;
}

std::vector<std::size_t> middle_decades_grid(std::size_t voxels, int points)
{
    if (points < 2) throw std::invalid_argument("middle_decades_grid: need >= 2 points");
    const double center = std::sqrt(static_cast<double>(voxels));
    std::vector<std::size_t> out;
    for (int i = 0; i < points; ++i) {
        const double e = -1.0 + 2.0 * i / (points - 1);
        const auto v = static_cast<std::size_t>(std::llround(center * std::pow(10.0, e)));
        if (v >= 1 && (out.empty() || v > out.back())) out.push_back(v);
    }
    return out;
}

std::vector<NTermCurve> nterm_approximation_study(const Volume& f,
                                                  std::span<const std::shared_ptr<const SparsifyingTransform>> transforms,
                                                  std::span<const std::size_t> n_terms)
{
    if (max_abs(f.values()) == 0.0) throw std::invalid_argument("nterm study: zero volume");
    std::vector<NTermCurve> out;
    for (const auto& T : transforms) {
        NTermCurve curve;
        curve.transform = T->name();
        const auto c = T->analyze(f);
        std::vector<std::size_t> order(c.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double x = std::abs(c.values[a]), y = std::abs(c.values[b]);
            return x != y ? x > y : a < b;
        });
        CoefficientSet kept(c.layout);
        for (std::size_t n : n_terms) {
            const std::size_t m = std::min(n, c.size());
            std::fill(kept.values.begin(), kept.values.end(), 0.0);
            double energy = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                const double v = c.values[order[i]];
                kept.values[order[i]] = v;
                energy += v * v;
            }
            const auto fn = T->synthesize(kept);
            const double e = distance(f.values(), fn.values());
            curve.n_terms.push_back(static_cast<double>(n));
            curve.errors.push_back(e * e);
            curve.kept_energy.push_back(energy);
        }
        std::vector<double> ns, es;
        for (std::size_t i = 0; i < curve.errors.size(); ++i)
            if (curve.errors[i] > 0.0) {
                ns.push_back(curve.n_terms[i]);
                es.push_back(curve.errors[i]);
            }
        if (ns.size() >= 2) curve.fit = fit_monomial(ns, es);
        out.push_back(std::move(curve));
    }
    return out;
}

Volume variance_study(std::span<const Volume> samples)
{
    if (samples.size() < 2) throw std::invalid_argument("variance_study: need at least two samples");
    const auto& g = samples.front().grid();
    for (const auto& s : samples)
        if (s.grid() != g) throw std::invalid_argument("variance_study: grid mismatch");
    Volume var(g);
    const double m = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < var.size(); ++i) {
        double mean = 0.0;
        for (const auto& s : samples) mean += s.data()[i];
        mean /= m;
        double acc = 0.0;
        for (const auto& s : samples) acc += (s.data()[i] - mean) * (s.data()[i] - mean);
        var.data()[i] = acc / (m - 1.0);
    }
    return var;
}

bool spread_soft_check(std::span<const AggregateRow> shearlet, std::span<const AggregateRow> wavelet, double slack)
{
    if (shearlet.empty() || wavelet.empty()) throw std::invalid_argument("spread_soft_check: empty table");
    return shearlet.front().stddev <= slack * wavelet.front().stddev;
}

}  // namespace cylsh
