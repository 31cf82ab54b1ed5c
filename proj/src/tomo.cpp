// SPDX-License-Identifier: Apache-2.0
#include "cylsh/tomo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "cylsh/io.hpp"
#include "cylsh/rng.hpp"

namespace cylsh {

namespace {

constexpr const char* kSinogramMagic = "CYLSH-SINOGRAM-1";

// Visits every (pixel, bin, weight) triple of the projection stencil at one
// angle. Forward and adjoint share this so they are exact transposes.
template <class Visit>
void for_each_stencil(const Geometry& g, double theta, Visit&& visit)
{
    const double c = std::cos(theta), s = std::sin(theta);
    const double half = 0.5 * (g.n - 1);
    const double dcenter = 0.5 * (g.n_dtc - 1);
    const double scale = g.pixel * g.pixel / g.bin_width;
    const double dx = g.pixel * c / g.bin_width;
    const double dy = g.pixel * s / g.bin_width;
    const double x0 = -half * dx;
    for (int iy = 0; iy < g.n; ++iy) {
        const double row = dcenter + x0 + (iy - half) * dy;
        const std::size_t base = static_cast<std::size_t>(iy) * g.n;
        for (int ix = 0; ix < g.n; ++ix) {
            const double t = row + ix * dx;
            const double fl = std::floor(t);
            const int b = static_cast<int>(fl);
            const double frac = t - fl;
            if (b >= 0 && b < g.n_dtc) visit(base + ix, b, scale * (1.0 - frac));
            if (b + 1 >= 0 && b + 1 < g.n_dtc && frac > 0.0) visit(base + ix, b + 1, scale * frac);
        }
    }
}

void check_block(std::size_t slice, std::size_t block, const Geometry& g, std::size_t n_angles)
{
    if (slice != static_cast<std::size_t>(g.n) * g.n)
        throw std::invalid_argument("radon: slice size does not match geometry");
    if (block != n_angles * g.n_dtc) throw std::invalid_argument("radon: block size does not match angles");
}

}  // namespace

Geometry Geometry::standard(int n)
{
    if (n < 1) throw std::invalid_argument("Geometry: n must be positive");
    int d = static_cast<int>(std::ceil(n * std::numbers::sqrt2 - 1e-12));
    if ((d - n) % 2 != 0) ++d;
    return Geometry{n, d, 1.0, 1.0};
}

Geometry Geometry::refined(const Geometry& low)
{
    return Geometry{2 * low.n, 2 * low.n_dtc, 0.5 * low.pixel, 0.5 * low.bin_width};
}

void Geometry::validate() const
{
    if (n < 1 || n_dtc < 1) throw std::invalid_argument("Geometry: n and n_dtc must be positive");
    if (!(pixel > 0.0) || !(bin_width > 0.0)) throw std::invalid_argument("Geometry: pitches must be positive");
    if (n_dtc * bin_width < n * pixel * std::numbers::sqrt2 - 1e-9)
        throw std::invalid_argument("Geometry: detector does not cover the image diagonal");
}

std::string to_string(AngleRange r)
{
    switch (r) {
    case AngleRange::full: return "full";
    case AngleRange::half: return "half";
    case AngleRange::alternating: return "alternating";
    }
    return "full";
}

AngleRange angle_range_from_string(const std::string& s)
{
    if (s == "full") return AngleRange::full;
    if (s == "half") return AngleRange::half;
    if (s == "alternating") return AngleRange::alternating;
    throw std::invalid_argument("unknown angle range '" + s + "' (full|half|alternating)");
}

std::string to_string(NoiseScenario s) { return s == NoiseScenario::decreasing ? "decreasing" : "fixed"; }

NoiseScenario noise_scenario_from_string(const std::string& s)
{
    if (s == "decreasing") return NoiseScenario::decreasing;
    if (s == "fixed") return NoiseScenario::fixed;
    throw std::invalid_argument("unknown noise scenario '" + s + "' (decreasing|fixed)");
}

int SamplingPattern::angles_per_step() const
{
    if (angles.empty()) throw std::invalid_argument("SamplingPattern: no time steps");
    const std::size_t n = angles.front().size();
    for (const auto& a : angles)
        if (a.size() != n) throw std::invalid_argument("SamplingPattern: ragged angle lists");
    return static_cast<int>(n);
}

void radon_forward(std::span<const double> slice, const Geometry& geom, std::span<const double> angles,
                   std::span<double> block)
{
    check_block(slice.size(), block.size(), geom, angles.size());
    std::fill(block.begin(), block.end(), 0.0);
    for (std::size_t a = 0; a < angles.size(); ++a) {
        double* row = block.data() + a * geom.n_dtc;
        for_each_stencil(geom, angles[a], [&](std::size_t pix, int bin, double w) { row[bin] += w * slice[pix]; });
    }
}

void radon_adjoint(std::span<const double> block, const Geometry& geom, std::span<const double> angles,
                   std::span<double> slice)
{
    check_block(slice.size(), block.size(), geom, angles.size());
    std::fill(slice.begin(), slice.end(), 0.0);
    for (std::size_t a = 0; a < angles.size(); ++a) {
        const double* row = block.data() + a * geom.n_dtc;
        for_each_stencil(geom, angles[a], [&](std::size_t pix, int bin, double w) { slice[pix] += w * row[bin]; });
    }
}

DynamicRadon::DynamicRadon(Geometry geom, SamplingPattern pattern) : geom_(geom), pattern_(std::move(pattern))
{
    geom_.validate();
    block_ = static_cast<std::size_t>(pattern_.angles_per_step()) * geom_.n_dtc;
}

std::size_t DynamicRadon::domain_size() const
{
    return static_cast<std::size_t>(geom_.n) * geom_.n * pattern_.kappa();
}

std::size_t DynamicRadon::range_size() const { return block_ * pattern_.kappa(); }

void DynamicRadon::apply(std::span<const double> f, std::span<double> g) const
{
    if (f.size() != domain_size() || g.size() != range_size())
        throw std::invalid_argument("DynamicRadon: size mismatch (time steps or grid)");
    const std::size_t ss = static_cast<std::size_t>(geom_.n) * geom_.n;
    for (int t = 0; t < pattern_.kappa(); ++t)
        radon_forward(f.subspan(t * ss, ss), geom_, pattern_.angles[t], g.subspan(t * block_, block_));
}

void DynamicRadon::adjoint(std::span<const double> g, std::span<double> f) const
{
    if (f.size() != domain_size() || g.size() != range_size())
        throw std::invalid_argument("DynamicRadon: size mismatch (time steps or grid)");
    const std::size_t ss = static_cast<std::size_t>(geom_.n) * geom_.n;
    for (int t = 0; t < pattern_.kappa(); ++t)
        radon_adjoint(g.subspan(t * block_, block_), geom_, pattern_.angles[t], f.subspan(t * ss, ss));
}

Sinogram dynamic_forward(const Volume& f, const Geometry& geom, const SamplingPattern& pattern)
{
    const auto& gr = f.grid();
    if (gr.nx != geom.n || gr.ny != geom.n) throw std::invalid_argument("dynamic_forward: grid/geometry mismatch");
    if (gr.nt != pattern.kappa()) throw std::invalid_argument("dynamic_forward: time step count mismatch");
    DynamicRadon op(geom, pattern);
    Sinogram g{pattern, geom.n_dtc, std::vector<double>(op.range_size())};
    op.apply(f.values(), g.data);
    return g;
}

Volume dynamic_adjoint(const Sinogram& g, const Geometry& geom)
{
    if (g.n_dtc != geom.n_dtc) throw std::invalid_argument("dynamic_adjoint: detector count mismatch");
    DynamicRadon op(geom, g.pattern);
    if (g.data.size() != op.range_size()) throw std::invalid_argument("dynamic_adjoint: sinogram size mismatch");
    Volume f(op.grid());
    op.adjoint(g.data, f.values());
    return f;
}

SamplingPattern sample_angles(int n_angles, int kappa, AngleRange range, std::uint64_t seed)
{
    if (n_angles < 1) throw std::invalid_argument("sample_angles: N must be >= 1");
    if (kappa < 1) throw std::invalid_argument("sample_angles: kappa must be >= 1");
    constexpr double pi = std::numbers::pi;
    SamplingPattern p;
    p.seed = seed;
    p.range = range;
    p.angles.resize(static_cast<std::size_t>(kappa));
    for (int t = 0; t < kappa; ++t) {
        double lo = 0.0, hi = 2.0 * pi;
        if (range == AngleRange::half) hi = pi;
        if (range == AngleRange::alternating) {
            lo = (t % 2 == 0) ? 0.0 : pi;
            hi = lo + pi;
        }
        Rng rng(derive_seed(seed, {0x616e676cULL, static_cast<std::uint64_t>(t)}));
        std::uniform_real_distribution<double> u(lo, hi);
        auto& a = p.angles[static_cast<std::size_t>(t)];
        a.resize(static_cast<std::size_t>(n_angles));
        for (auto& v : a) v = u(rng);
    }
    return p;
}

SamplingPattern equispaced_angles(int count, int kappa)
{
    if (count < 1 || kappa < 1) throw std::invalid_argument("equispaced_angles: counts must be positive");
    SamplingPattern p;
    std::vector<double> a(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) a[static_cast<std::size_t>(k)] = 2.0 * std::numbers::pi * k / count;
    p.angles.assign(static_cast<std::size_t>(kappa), a);
    return p;
}

double noise_level(const NoiseSpec& spec, int n_angles)
{
    if (!(spec.c_delta > 0.0)) throw std::invalid_argument("noise_level: c_delta must be positive");
    if (spec.scenario == NoiseScenario::fixed) return spec.c_delta * spec.data_sup;
    if (n_angles < spec.n_min) throw std::invalid_argument("noise_level: N below N_min");
    return spec.c_delta * spec.n_min * spec.data_sup / n_angles;
}

Sinogram add_noise(const Sinogram& g, double delta, std::uint64_t seed)
{
    if (!(delta >= 0.0)) throw std::invalid_argument("add_noise: delta must be nonnegative");
    Sinogram out = g;
    if (delta == 0.0) return out;
    for (int t = 0; t < g.pattern.kappa(); ++t) {
        Rng rng(derive_seed(seed, {0x6e6f6973ULL, static_cast<std::uint64_t>(t)}));
        std::normal_distribution<double> normal;
        for (double& v : out.block(t)) v += delta * normal(rng);
    }
    return out;
}

Sinogram bin_detector_pairs(const Sinogram& fine)
{
    if (fine.n_dtc % 2 != 0) throw std::invalid_argument("bin_detector_pairs: odd detector count");
    Sinogram out{fine.pattern, fine.n_dtc / 2, std::vector<double>(fine.data.size() / 2)};
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = 0.5 * (fine.data[2 * i] + fine.data[2 * i + 1]);
    return out;
}

Sinogram simulate_data(const Volume& f_highres, const Geometry& low, const SamplingPattern& pattern, double delta,
                       std::uint64_t seed)
{
    const Geometry fine = Geometry::refined(low);
    const auto& g = f_highres.grid();
    if (g.nx != fine.n || g.ny != fine.n)
        throw std::invalid_argument("simulate_data: truth must have side 2n = " + std::to_string(fine.n));
    return add_noise(bin_detector_pairs(dynamic_forward(f_highres, fine, pattern)), delta, seed);
}

double operator_norm(const Geometry& geom, const SamplingPattern& pattern, double rel_tol)
{
    DynamicRadon op(geom, pattern);
    return power_method(op, rel_tol).norm;
}

void write_sinogram(const std::string& path, const Sinogram& g)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    const int n = g.pattern.angles_per_step();
    os << kSinogramMagic << '\n'
       << g.pattern.kappa() << ' ' << n << ' ' << g.n_dtc << '\n'
       << g.pattern.seed << ' ' << to_string(g.pattern.range) << '\n';
    char buf[40];
    for (const auto& a : g.pattern.angles) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", a[i]);
            os << (i ? " " : "") << buf;
        }
        os << '\n';
    }
    write_f64_le(os, g.data);
}

Sinogram read_sinogram(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::getline(is, line);
    if (line != kSinogramMagic) throw std::runtime_error(path + ": not a sinogram file");
    Sinogram g;
    int kappa = 0, n = 0;
    std::string range;
    {
        std::getline(is, line);
        std::istringstream ls(line);
        if (!(ls >> kappa >> n >> g.n_dtc) || kappa < 1 || n < 1 || g.n_dtc < 1)
            throw std::runtime_error(path + ": bad shape line");
    }
    {
        std::getline(is, line);
        std::istringstream ls(line);
        if (!(ls >> g.pattern.seed >> range)) throw std::runtime_error(path + ": bad seed line");
        g.pattern.range = angle_range_from_string(range);
    }
    g.pattern.angles.resize(static_cast<std::size_t>(kappa));
    for (auto& a : g.pattern.angles) {
        if (!std::getline(is, line)) throw std::runtime_error(path + ": truncated angle list");
        std::istringstream ls(line);
        a.resize(static_cast<std::size_t>(n));
        for (auto& v : a)
            if (!(ls >> v)) throw std::runtime_error(path + ": short angle line");
    }
    g.data.resize(static_cast<std::size_t>(kappa) * n * g.n_dtc);
    read_f64_le(is, g.data);
    return g;
}

}  // namespace cylsh
