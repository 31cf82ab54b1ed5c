// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "cylsh/rng.hpp"
#include "cylsh/shearlet.hpp"
#include "cylsh/wavelet.hpp"
#include "cylsh/windows.hpp"

using namespace cylsh;

namespace {

Volume random_volume(const GridSpec& g, std::uint64_t seed)
{
    Rng rng(seed);
    std::normal_distribution<double> normal;
    Volume v(g);
    for (double& x : v.values()) x = normal(rng);
    return v;
}

std::shared_ptr<const FilterBank> bank_32x32x16()
{
    static auto bank = std::make_shared<const FilterBank>(GridSpec{32, 32, 16}, 2);
    return bank;
}

}  // namespace

TEST_CASE("windows: bump, radial and angular identities")
{
    CHECK(WindowFunctions::phi(0, 0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(WindowFunctions::phi(1.0 / 16, -1.0 / 16, 0.05) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(WindowFunctions::phi(0.125, 0, 0) == 0.0);
    CHECK(WindowFunctions::phi(0.3, 0, 0) == 0.0);

    const double v0 = WindowFunctions::angular(0.0), v1 = WindowFunctions::angular(1.0),
                 vm = WindowFunctions::angular(-1.0);
    CHECK(v0 * v0 + v1 * v1 + vm * vm == doctest::Approx(1.0).epsilon(1e-12));

    double worst = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double z = -1.0 + 2.0 * i / 2000;
        const double s =
            WindowFunctions::angular_sq(z - 1) + WindowFunctions::angular_sq(z) + WindowFunctions::angular_sq(z + 1);
        worst = std::max(worst, std::abs(s - 1.0));
    }
    CHECK(worst <= 1e-12);

    // W vanishes once |xi|_inf > 1/2, and telescopes with phi.
    CHECK(WindowFunctions::radial(0.51, 0.0, 0.0) == 0.0);
    CHECK(WindowFunctions::radial(0.1, 0.6, -0.2) == 0.0);
    worst = 0.0;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.49, 0.49);
    for (int i = 0; i < 500; ++i) {
        const double a = u(rng), b = u(rng), c = u(rng);
        const double p = WindowFunctions::phi(a, b, c), p4 = WindowFunctions::phi(a / 4, b / 4, c / 4);
        worst = std::max(worst, std::abs(WindowFunctions::radial_sq(a, b, c) - (p4 * p4 - p * p)));
    }
    CHECK(worst <= 1e-14);

    CHECK(WindowFunctions::transition(0.3) + WindowFunctions::transition(0.7) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("dilation and shear matrices")
{
    const Matrix3 a1{{{4, 0, 0}, {0, 2, 0}, {0, 0, 4}}};
    const Matrix3 a2{{{2, 0, 0}, {0, 4, 0}, {0, 0, 4}}};
    CHECK(dilation_matrix(1) == a1);
    CHECK(dilation_matrix(2) == a2);
    const Matrix3 b1 = shear_matrix(1);
    int off = 0;
    for (int r = 0; r < 3; ++r) {
        CHECK(b1[r][r] == 1);
        for (int c = r + 1; c < 3; ++c) CHECK(b1[r][c] == 0);  // lower triangular
        for (int c = 0; c < r; ++c) off += b1[r][c];
    }
    CHECK(off == 1);
    CHECK_THROWS(dilation_matrix(3));
}

TEST_CASE("filter bank: index set, directional counts and admissibility")
{
    const FilterBank bank(GridSpec{128, 128, 8}, 3);
    CHECK(bank.directions_per_scale() == std::vector<int>{8, 8, 16});
    CHECK(bank.count() == 33);
    int lowpass = 0;
    for (const auto& idx : bank.indices()) {
        const int kmax = 1 << bank.shear_levels()[static_cast<std::size_t>(std::max(idx.scale, 0))];
        switch (idx.kind) {
        case ShearletIndex::Kind::lowpass: ++lowpass; CHECK(idx.scale == -1); break;
        case ShearletIndex::Kind::interior: CHECK(std::abs(idx.shear) < kmax); CHECK((idx.cone == 1 || idx.cone == 2)); break;
        case ShearletIndex::Kind::boundary: CHECK(std::abs(idx.shear) == kmax); CHECK(idx.cone == 0); break;
        }
    }
    CHECK(lowpass == 1);
    CHECK(bank.partition_defect() <= 1e-12);

    CHECK_THROWS_AS(FilterBank(GridSpec{32, 32, 8}, 3), std::invalid_argument);
    CHECK_NOTHROW(FilterBank(GridSpec{32, 32, 8}, 2));
    CHECK(GridSpec{64, 64, 16}.max_scales() == 2);
    CHECK(GridSpec{128, 128, 16}.max_scales() == 3);
    CHECK_THROWS(GridSpec{4, 32, 8}.validate());
}

TEST_CASE("shearlet: partition of unity on the DFT grid")
{
    CHECK(bank_32x32x16()->partition_defect() <= 1e-12);
    const FilterBank odd(GridSpec{33, 34, 9}, 2);
    CHECK(odd.partition_defect() <= 1e-12);
}

TEST_CASE("shearlet: Parseval identity, round trip and adjointness")
{
    const CylindricalShearlet sh(bank_32x32x16());
    const GridSpec g = sh.grid();

    const auto zero = sh.analyze(Volume(g));
    CHECK(max_abs(zero.values) == 0.0);
    CHECK(max_abs(sh.synthesize(CoefficientSet(sh.layout())).values()) == 0.0);

    for (std::uint64_t s = 1; s <= 5; ++s) {
        const auto f = random_volume(g, s);
        const auto c = sh.analyze(f);
        const double e = dot(f.values(), f.values());
        CHECK(std::abs(c.energy() - e) / e <= 1e-10);
        const auto back = sh.synthesize(c);
        CHECK(distance(back.values(), f.values()) / std::sqrt(e) <= 1e-10);

        // <analyze f, c'> = <f, synthesize c'> for an unrelated c'.
        CoefficientSet c2(sh.layout());
        Rng rng(100 + s);
        std::normal_distribution<double> normal;
        for (double& v : c2.values) v = normal(rng);
        const double lhs = dot(c.values, c2.values);
        const double rhs = dot(f.values(), sh.synthesize(c2).values());
        CHECK(std::abs(lhs - rhs) / std::abs(lhs) <= 1e-10);
    }

    Volume impulse(g);
    impulse(5, 17, 3) = 1.0;
    CHECK(sh.analyze(impulse).energy() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("shearlet: shape mismatches are rejected")
{
    const CylindricalShearlet sh(bank_32x32x16());
    CHECK_THROWS_AS(sh.analyze(Volume(GridSpec{32, 32, 8})), std::invalid_argument);
    const CylindricalShearlet other(GridSpec{32, 32, 8}, 2);
    CHECK_THROWS_AS(sh.synthesize(other.analyze(Volume(GridSpec{32, 32, 8}))), std::invalid_argument);
}

TEST_CASE("shearlet: swapping x1 and x2 swaps the cones")
{
    const CylindricalShearlet sh(bank_32x32x16());
    const GridSpec g = sh.grid();
    const auto f = random_volume(g, 11);
    Volume ft(g);
    for (int t = 0; t < g.nt; ++t)
        for (int y = 0; y < g.ny; ++y)
            for (int x = 0; x < g.nx; ++x) ft(y, x, t) = f(x, y, t);
    const auto c = sh.analyze(f);
    const auto ct = sh.analyze(ft);
    double worst = 0.0;
    for (const auto& idx : sh.bank().indices()) {
        if (idx.kind != ShearletIndex::Kind::interior || idx.cone != 1) continue;
        ShearletIndex mirrored = idx;
        mirrored.cone = 2;
        const auto a = c.band(sh.band_of(idx));
        const auto b = ct.band(sh.band_of(mirrored));
        for (int t = 0; t < g.nt; ++t)
            for (int y = 0; y < g.ny; ++y)
                for (int x = 0; x < g.nx; ++x)
                    worst = std::max(worst, std::abs(a[f.index(x, y, t)] - b[f.index(y, x, t)]));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("wavelet: Daubechies-2 filters and orthogonality")
{
    const auto bank = WaveletBank::daubechies2(3);
    const double r3 = std::sqrt(3.0), d = 4.0 * std::sqrt(2.0);
    const double ref[4] = {(1 + r3) / d, (3 + r3) / d, (3 - r3) / d, (1 - r3) / d};
    for (int i = 0; i < 4; ++i) CHECK(std::abs(bank.lowpass[i]) == doctest::Approx(std::abs(ref[i])).epsilon(1e-14));
    double ss = 0.0, shift = 0.0, cross = 0.0;
    for (int i = 0; i < 4; ++i) {
        ss += bank.lowpass[i] * bank.lowpass[i];
        cross += bank.lowpass[i] * bank.highpass[i];
    }
    shift = bank.lowpass[0] * bank.lowpass[2] + bank.lowpass[1] * bank.lowpass[3];
    CHECK(std::abs(ss - 1.0) <= 1e-12);
    CHECK(std::abs(shift) <= 1e-12);
    CHECK(std::abs(cross) <= 1e-12);
    CHECK(bank.orthogonality_defect() <= 1e-12);
}

TEST_CASE("wavelet: isometry, round trip and constant volumes")
{
    const GridSpec g{32, 32, 16};
    const Wavelet3D w(g);
    const auto f = random_volume(g, 5);
    const auto c = w.analyze(f);
    const double e = norm2(f.values());
    CHECK(std::abs(std::sqrt(c.energy()) - e) / e <= 1e-10);
    CHECK(distance(w.synthesize(c).values(), f.values()) / e <= 1e-10);

    const auto c2 = wavelet3d_analyze(f, WaveletBank::daubechies2());
    CHECK(c2.values == c.values);
    CHECK(distance(wavelet3d_synthesize(c2, g, WaveletBank::daubechies2()).values(), f.values()) / e <= 1e-10);

    Volume one(g, 1.0);
    const auto cc = w.analyze(one);
    const auto approx = cc.band(0);
    double in_approx = 0.0;
    for (double v : approx) in_approx += v * v;
    CHECK(cc.layout->bands[0].scale == -1);
    CHECK(in_approx / cc.energy() == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(Wavelet3D(GridSpec{36, 32, 16}), std::invalid_argument);
}
