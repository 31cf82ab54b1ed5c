// SPDX-License-Identifier: Apache-2.0
#include "cylsh/phantoms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cylsh {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Unit-cube coordinate of sub-sample u (of s) in cell i (of n).
double sub_coord(int i, int u, int s, int n) { return (i + (u + 0.5) / s) / n; }

// Coordinate on [-1, 1] of sub-sample u (of s) in cell i (of n).
double sym_coord(int i, int u, int s, int n) { return -1.0 + 2.0 * (i + (u + 0.5) / s) / n; }

void check_supersample(int s)
{
    if (s < 1 || s > 16) throw std::invalid_argument("supersample must lie in [1, 16]");
}

}  // namespace

double StarRegion::rho(double theta) const
{
    double r = a0;
    for (std::size_t k = 0; k < cos_coef.size(); ++k) r += cos_coef[k] * std::cos((k + 1) * theta);
    for (std::size_t k = 0; k < sin_coef.size(); ++k) r += sin_coef[k] * std::sin((k + 1) * theta);
    return r;
}

double StarRegion::rho_second(double theta) const
{
    double r = 0.0;
    for (std::size_t k = 0; k < cos_coef.size(); ++k) {
        const double m = static_cast<double>(k + 1);
        r -= m * m * cos_coef[k] * std::cos(m * theta);
    }
    for (std::size_t k = 0; k < sin_coef.size(); ++k) {
        const double m = static_cast<double>(k + 1);
        r -= m * m * sin_coef[k] * std::sin(m * theta);
    }
    return r;
}

bool StarRegion::contains(double x, double y) const
{
    const double dx = x - cx, dy = y - cy;
    const double r = std::hypot(dx, dy);
    if (r == 0.0) return a0 > 0.0 || rho(0.0) > 0.0;
    return r <= rho(std::atan2(dy, dx));
}

StarDiagnostics validate_star(const StarRegion& star, int samples)
{
    if (samples < 8) throw std::invalid_argument("validate_star: too few samples");
    StarDiagnostics d;
    d.min_rho = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const double t = kTwoPi * i / samples;
        const double r = star.rho(t);
        d.max_rho = std::max(d.max_rho, r);
        d.min_rho = std::min(d.min_rho, r);
        d.sup_rho2 = std::max(d.sup_rho2, std::abs(star.rho_second(t)));
    }
    std::ostringstream msg;
    if (!(star.rho_cap < 1.0)) msg << "rho_0 = " << star.rho_cap << " is not < 1; ";
    if (!(d.min_rho > 0.0)) msg << "rho not positive (min " << d.min_rho << "); ";
    if (d.max_rho > star.rho_cap) msg << "max rho " << d.max_rho << " exceeds rho_0 " << star.rho_cap << "; ";
    if (d.max_rho >= 1.0) msg << "max rho " << d.max_rho << " >= 1; ";
    if (d.sup_rho2 > star.z_bound) msg << "sup |rho''| " << d.sup_rho2 << " exceeds Z " << star.z_bound << "; ";
    d.message = msg.str();
    d.pass = d.message.empty();
    if (d.pass) d.message = "ok";
    return d;
}

double SpatialProfile::operator()(double x, double y) const
{
    const double dx = x - cx, dy = y - cy;
    return a - b * (dx * dx + dy * dy);
}

double TemporalProfile::operator()(double t) const { return c0 + t * (c1 + t * c2); }

double Trajectory::operator()(double t) const
{
    double v = 0.0;
    for (std::size_t k = coef.size(); k-- > 0;) v = (v + coef[k]) * t;
    return v;
}

void VideoSpec::validate() const
{
    const auto d = validate_star(star);
    if (!d.pass) throw std::invalid_argument("star region: " + d.message);
    if (star.cx - d.max_rho < 0.0 || star.cx + d.max_rho > 1.0 || star.cy - d.max_rho < 0.0 ||
        star.cy + d.max_rho > 1.0)
        throw std::invalid_argument("star region leaves the unit square");
    check_supersample(supersample);
    constexpr int m = 64;
    for (int i = 0; i <= m; ++i) {
        for (int k = 0; k <= m; ++k) {
            const double x = static_cast<double>(i) / m, y = static_cast<double>(k) / m;
            const double gx = -2.0 * h.b * (x - h.cx), gy = -2.0 * h.b * (y - h.cy);
            if (std::abs(h(x, y)) > 1.0 || std::abs(gx) > 1.0 || std::abs(gy) > 1.0)
                throw std::invalid_argument("spatial profile violates the derivative bound");
        }
        const double t = static_cast<double>(i) / m;
        if (std::abs(z(t)) > 1.0 || std::abs(z.c1 + 2.0 * z.c2 * t) > 1.0)
            throw std::invalid_argument("temporal profile violates the derivative bound");
        for (int k = 0; k <= m; ++k) {
            const double v = h(star.cx + 0.0, star.cy + 0.0) * z(t);
            const double th = kTwoPi * k / m;
            const double r = star.rho(th);
            const double w = h(star.cx + r * std::cos(th), star.cy + r * std::sin(th)) * z(t);
            if (v < 0.0 || v > 1.0 || w < 0.0 || w > 1.0)
                throw std::invalid_argument("intensity h*z leaves [0, 1] on the star region");
        }
    }
    if (std::abs(2.0 * h.b) > 1.0) throw std::invalid_argument("spatial profile second derivative exceeds 1");
    if (std::abs(2.0 * z.c2) > 1.0) throw std::invalid_argument("temporal profile second derivative exceeds 1");
}

Volume rasterize_video(const VideoSpec& spec, const GridSpec& grid)
{
    spec.validate();
    grid.validate();
    Volume f(grid);
    const int s = spec.supersample;
    const double inv = 1.0 / (s * s);
    for (int k = 0; k < grid.nt; ++k) {
        const double t = (k + 0.5) / grid.nt;
        const double q1 = spec.q1(t), q2 = spec.q2(t);
        const double zt = spec.z(t);
        for (int iy = 0; iy < grid.ny; ++iy) {
            for (int ix = 0; ix < grid.nx; ++ix) {
                int hits = 0;
                for (int v = 0; v < s; ++v)
                    for (int u = 0; u < s; ++u)
                        hits += spec.star.contains(sub_coord(ix, u, s, grid.nx) - q1, sub_coord(iy, v, s, grid.ny) - q2);
                const double x = (ix + 0.5) / grid.nx - q1, y = (iy + 0.5) / grid.ny - q2;
                f(ix, iy, k) = spec.h(x, y) * (hits * inv) * zt;
            }
        }
    }
    return f;
}

Volume rasterize_cylindrical(const StarRegion& star, const SpatialProfile& h, const TemporalProfile& z,
                             const GridSpec& grid, int supersample)
{
    VideoSpec spec{star, h, z, {}, {}, supersample};
    spec.validate();
    grid.validate();
    const int s = supersample;
    const double inv = 1.0 / (s * s);
    // Spatial part once, then scaled per slice.
    std::vector<double> hs(grid.slice_size());
    for (int iy = 0; iy < grid.ny; ++iy) {
        for (int ix = 0; ix < grid.nx; ++ix) {
            int hits = 0;
            for (int v = 0; v < s; ++v)
                for (int u = 0; u < s; ++u) hits += star.contains(sub_coord(ix, u, s, grid.nx), sub_coord(iy, v, s, grid.ny));
            hs[static_cast<std::size_t>(iy) * grid.nx + ix] = h((ix + 0.5) / grid.nx, (iy + 0.5) / grid.ny) * (hits * inv);
        }
    }
    Volume f(grid);
    for (int k = 0; k < grid.nt; ++k) {
        const double zt = z((k + 0.5) / grid.nt);
        auto sl = f.slice(k);
        for (std::size_t i = 0; i < hs.size(); ++i) sl[i] = hs[i] * zt;
    }
    return f;
}

std::vector<double> rasterize_frame(const VideoSpec& spec, int n, double t)
{
    // Translate the star and the intensity profile instead of the sample points.
    StarRegion moved = spec.star;
    moved.cx += spec.q1(t);
    moved.cy += spec.q2(t);
    SpatialProfile h = spec.h;
    h.cx += spec.q1(t);
    h.cy += spec.q2(t);
    const int s = spec.supersample;
    const double inv = 1.0 / (s * s);
    const double zt = spec.z(t);
    std::vector<double> out(static_cast<std::size_t>(n) * n);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            int hits = 0;
            for (int v = 0; v < s; ++v)
                for (int u = 0; u < s; ++u) hits += moved.contains(sub_coord(ix, u, s, n), sub_coord(iy, v, s, n));
            out[static_cast<std::size_t>(iy) * n + ix] = h((ix + 0.5) / n, (iy + 0.5) / n) * (hits * inv) * zt;
        }
    return out;
}

VideoSpec default_cylindrical_cartoon()
{
    VideoSpec v;
    v.star.a0 = 0.28;
    v.star.cos_coef = {0.0, 0.0, 0.04};
    v.star.sin_coef = {0.0, 0.02};
    v.star.cx = 0.5;
    v.star.cy = 0.5;
    v.star.z_bound = 1.0;
    v.star.rho_cap = 0.4;
    v.h = SpatialProfile{0.9, 0.5, 0.45, 0.5};
    v.z = TemporalProfile{0.6, 0.5, -0.3};
    return v;
}

double Ellipse::intensity(double tau) const
{
    if (kind == Kind::ramp) return p0 + (p1 - p0) * tau;
    return p0 + p1 * std::sin(kTwoPi * (p2 * tau + p3));
}

bool Ellipse::contains(double x, double y) const
{
    const double th = angle_deg * std::numbers::pi / 180.0;
    const double c = std::cos(th), s = std::sin(th);
    const double dx = x - cx, dy = y - cy;
    const double u = (c * dx + s * dy) / a, v = (-s * dx + c * dy) / b;
    return u * u + v * v <= 1.0;
}

CartoonSpec default_cartoon_spec()
{
    using K = Ellipse::Kind;
    CartoonSpec s;
    s.ellipses = {
        {0.0, 0.0, 0.82, 0.70, 0.0, K::ramp, 0.15, 0.55, 0, 0},
        {-0.15, 0.10, 0.45, 0.35, 25.0, K::ramp, 0.90, 0.30, 0, 0},
        {0.45, -0.25, 0.12, 0.08, -30.0, K::periodic, 0.60, 0.35, 1.0, 0.0},
        {0.35, 0.35, 0.08, 0.08, 0.0, K::periodic, 0.55, 0.40, 2.0, 0.25},
        {-0.30, -0.45, 0.15, 0.07, 15.0, K::periodic, 0.60, 0.30, 1.5, 0.5},
        {0.00, -0.50, 0.06, 0.06, 0.0, K::periodic, 0.70, 0.25, 3.0, 0.1},
        {-0.25, 0.15, 0.10, 0.06, 60.0, K::periodic, 0.50, 0.35, 1.0, 0.75},
    };
    return s;
}

CartoonSpec cartoon_spec_from_config(const Config& cfg)
{
    CartoonSpec s;
    s.supersample = static_cast<int>(cfg.get_int("phantom", "supersample", 2));
    check_supersample(s.supersample);
    for (const auto* e : cfg.all("phantom", "ellipse")) {
        std::istringstream is(e->value);
        Ellipse el;
        std::string kind;
        if (!(is >> el.cx >> el.cy >> el.a >> el.b >> el.angle_deg >> kind >> el.p0 >> el.p1))
            cfg.fail(*e, "expected: cx cy a b angle kind p0 p1 [p2 p3]");
        if (kind == "ramp") {
            el.kind = Ellipse::Kind::ramp;
        } else if (kind == "periodic") {
            el.kind = Ellipse::Kind::periodic;
            if (!(is >> el.p2 >> el.p3)) cfg.fail(*e, "periodic ellipse needs mean amp cycles phase");
        } else {
            cfg.fail(*e, "ellipse kind must be ramp or periodic");
        }
        std::string extra;
        if (is >> extra) cfg.fail(*e, "trailing text '" + extra + "'");
        if (!(el.a > 0.0 && el.b > 0.0)) cfg.fail(*e, "semi-axes must be positive");
        const double lo = el.kind == Ellipse::Kind::ramp ? std::min(el.p0, el.p1) : el.p0 - std::abs(el.p1);
        const double hi = el.kind == Ellipse::Kind::ramp ? std::max(el.p0, el.p1) : el.p0 + std::abs(el.p1);
        if (lo <= 0.0 || hi > 1.0) cfg.fail(*e, "intensity must stay within (0, 1]");
        s.ellipses.push_back(el);
    }
    if (s.ellipses.empty()) s.ellipses = default_cartoon_spec().ellipses;
    return s;
}

double step_time(int k, int kappa) { return kappa > 1 ? static_cast<double>(k) / (kappa - 1) : 0.0; }

Volume rasterize_cartoon(const CartoonSpec& spec, int n, int kappa)
{
    check_supersample(spec.supersample);
    if (n < 1 || kappa < 1) throw std::invalid_argument("rasterize_cartoon: sizes must be positive");
    const int s = spec.supersample;
    const std::size_t ne = spec.ellipses.size();
    // Index of the topmost ellipse at every sub-sample (time independent).
    std::vector<int> top(static_cast<std::size_t>(n) * n * s * s, -1);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            for (int v = 0; v < s; ++v)
                for (int u = 0; u < s; ++u) {
                    const double x = sym_coord(ix, u, s, n), y = sym_coord(iy, v, s, n);
                    int id = -1;
                    for (std::size_t e = 0; e < ne; ++e)
                        if (spec.ellipses[e].contains(x, y)) id = static_cast<int>(e);
                    top[((static_cast<std::size_t>(iy) * n + ix) * s + v) * s + u] = id;
                }
    Volume f(GridSpec{n, n, kappa});
    std::vector<double> val(ne);
    const double inv = 1.0 / (s * s);
    for (int k = 0; k < kappa; ++k) {
        const double tau = step_time(k, kappa);
        for (std::size_t e = 0; e < ne; ++e) val[e] = spec.ellipses[e].intensity(tau);
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                double acc = 0.0;
                const std::size_t base = (static_cast<std::size_t>(iy) * n + ix) * s * s;
                for (int q = 0; q < s * s; ++q) {
                    const int id = top[base + q];
                    if (id >= 0) acc += val[static_cast<std::size_t>(id)];
                }
                f(ix, iy, k) = acc * inv;
            }
    }
    return f;
}

PhantomPair cartoon_phantom(int n, int kappa, const CartoonSpec& spec)
{
    if (n < 8 || kappa < 1) throw std::invalid_argument("cartoon_phantom: need n >= 8 and kappa >= 1");
    return {rasterize_cartoon(spec, n, kappa), rasterize_cartoon(spec, 2 * n, kappa)};
}

void stempo_square_center(const StempoSpec& spec, int k, int kappa, double& x, double& y)
{
    const double tau = step_time(k, kappa);
    x = spec.start_x + (spec.end_x - spec.start_x) * tau;
    y = spec.start_y + (spec.end_y - spec.start_y) * tau;
}

Volume rasterize_stempo(const StempoSpec& spec, int n, int kappa)
{
    check_supersample(spec.supersample);
    if (n < 1 || kappa < 1) throw std::invalid_argument("rasterize_stempo: sizes must be positive");
    const int s = spec.supersample;
    const double inv = 1.0 / (s * s);
    struct Disk {
        double x, y, r, v;
    };
    const Disk disks[] = {{-0.40, 0.45, 0.12, 0.5}, {0.45, -0.45, 0.10, 0.6}, {0.0, 0.0, 0.06, 0.4}};
    auto background = [&](double x, double y) {
        const double r = std::hypot(x, y);
        if (r >= spec.ring_inner && r <= spec.ring_outer) return spec.ring_value;
        if (r > spec.ring_outer) return 0.0;
        for (const auto& d : disks)
            if (std::hypot(x - d.x, y - d.y) <= d.r) return d.v;
        return 0.15;
    };
    Volume f(GridSpec{n, n, kappa});
    const double half = 0.5 * spec.square_side;
    for (int k = 0; k < kappa; ++k) {
        double sx = 0, sy = 0;
        stempo_square_center(spec, k, kappa, sx, sy);
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                double acc = 0.0;
                for (int v = 0; v < s; ++v)
                    for (int u = 0; u < s; ++u) {
                        const double x = sym_coord(ix, u, s, n), y = sym_coord(iy, v, s, n);
                        const bool in_sq = std::abs(x - sx) <= half && std::abs(y - sy) <= half;
                        acc += in_sq ? spec.square_value : background(x, y);
                    }
                f(ix, iy, k) = acc * inv;
            }
    }
    return f;
}

PhantomPair stempo_surrogate(int n, int kappa, const StempoSpec& spec)
{
    if (n < 8 || kappa < 1) throw std::invalid_argument("stempo_surrogate: need n >= 8 and kappa >= 1");
    return {rasterize_stempo(spec, n, kappa), rasterize_stempo(spec, 2 * n, kappa)};
}

Volume block_average_2x(const Volume& high)
{
    const auto& g = high.grid();
    if (g.nx % 2 || g.ny % 2) throw std::invalid_argument("block_average_2x: odd spatial size");
    Volume low(GridSpec{g.nx / 2, g.ny / 2, g.nt});
    for (int k = 0; k < g.nt; ++k)
        for (int iy = 0; iy < g.ny / 2; ++iy)
            for (int ix = 0; ix < g.nx / 2; ++ix)
                low(ix, iy, k) = 0.25 * (high(2 * ix, 2 * iy, k) + high(2 * ix + 1, 2 * iy, k) +
                                         high(2 * ix, 2 * iy + 1, k) + high(2 * ix + 1, 2 * iy + 1, k));
    return low;
}

}  // namespace cylsh
