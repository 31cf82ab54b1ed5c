// SPDX-License-Identifier: Apache-2.0
#include "cylsh/selftest.hpp"

#include <cmath>
#include <memory>
#include <random>

#include "cylsh/regularizer.hpp"
#include "cylsh/rng.hpp"
#include "cylsh/shearlet.hpp"
#include "cylsh/tomo.hpp"
#include "cylsh/wavelet.hpp"

namespace cylsh {

namespace {

Volume random_volume(const GridSpec& g, Rng& rng)
{
    std::normal_distribution<double> normal;
    Volume v(g);
    for (double& x : v.values()) x = normal(rng);
    return v;
}

CheckResult check(std::string name, double value, double threshold)
{
    return {std::move(name), value <= threshold, value, threshold};
}

double tightness(const SparsifyingTransform& T, const Volume& f)
{
    const auto c = T.analyze(f);
    const double e = norm2(f.values());
    const double energy = std::abs(c.energy() - e * e) / (e * e);
    const auto back = T.synthesize(c);
    return std::max(energy, distance(back.values(), f.values()) / e);
}

}  // namespace

std::vector<CheckResult> run_selftest(std::uint64_t seed)
{
    std::vector<CheckResult> out;
    Rng rng(seed);
    const GridSpec grid{32, 32, 8};

    const auto sh = std::make_shared<CylindricalShearlet>(grid, 2);
    out.push_back(check("shearlet Parseval identity", tightness(*sh, random_volume(grid, rng)), 1e-10));
    const auto wv = std::make_shared<Wavelet3D>(grid);
    out.push_back(check("wavelet orthonormality", tightness(*wv, random_volume(grid, rng)), 1e-10));

    const Geometry geom = Geometry::standard(grid.nx);
    const auto pattern = sample_angles(7, grid.nt, AngleRange::full, seed);
    const DynamicRadon op(geom, pattern);
    {
        const auto f = random_volume(grid, rng);
        std::vector<double> g(op.range_size()), Af(op.range_size()), Atg(op.domain_size());
        std::normal_distribution<double> normal;
        for (double& v : g) v = normal(rng);
        op.apply(f.values(), Af);
        op.adjoint(g, Atg);
        const double lhs = dot(Af, g), rhs = dot(f.values(), Atg);
        out.push_back(check("dynamic Radon adjoint", std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-300), 1e-12));
    }

    {
        const Regularizer reg(sh, WeightScheme{1.5, {}});
        const auto f = random_volume(grid, rng);
        const auto d = random_volume(grid, rng);
        const auto grad = reg.gradient(f);
        // Central difference taken per coefficient (the analysis is linear),
        // which avoids cancelling two large sums.
        const double h = 1e-6;
        const auto cf = sh->analyze(f), cd = sh->analyze(d);
        const auto w = reg.weights();
        double s = 0.0;
        for (std::size_t i = 0; i < cf.size(); ++i) {
            const double a = cf.values[i], b = h * cd.values[i];
            s += w[i] * (std::pow(std::abs(a + b), 1.5) - std::pow(std::abs(a - b), 1.5));
        }
        const double fd = s / (1.5 * 2.0 * h);
        const double an = dot(grad.values(), d.values());
        out.push_back(check("regularizer gradient vs finite differences", std::abs(fd - an) / std::abs(an), 1e-5));
        const auto g2 = random_volume(grid, rng);
        out.push_back(check("Bregman distance nonnegative", -reg.bregman_distance(f, g2), 0.0));
    }
    return out;
}

}  // namespace cylsh
