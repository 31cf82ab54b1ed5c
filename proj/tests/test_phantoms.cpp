// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cylsh/config.hpp"
#include "cylsh/phantoms.hpp"

using namespace cylsh;

TEST_CASE("star region: radius, curvature and membership")
{
    const auto spec = default_cylindrical_cartoon();
    const auto& star = spec.star;
    CHECK(star.rho(0.0) == doctest::Approx(0.28 + 0.04));
    const double h = 1e-4;
    for (double th : {0.0, 0.7, 2.5, 4.0}) {
        const double fd = (star.rho(th + h) - 2 * star.rho(th) + star.rho(th - h)) / (h * h);
        CHECK(star.rho_second(th) == doctest::Approx(fd).epsilon(1e-5));
    }
    CHECK(star.contains(0.5, 0.5));
    CHECK(star.contains(0.5 + 0.3, 0.5));
    CHECK_FALSE(star.contains(0.5 + 0.33, 0.5));

    const auto d = validate_star(star);
    CHECK(d.pass);
    CHECK((d.sup_rho2 >= 0.36 && d.sup_rho2 <= 0.44 + 1e-12));
    CHECK(d.max_rho <= star.rho_cap);

    StarRegion wiggly = star;
    wiggly.cos_coef = {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.05};  // |rho''| up to 3.2
    CHECK_FALSE(validate_star(wiggly).pass);
    StarRegion big = star;
    big.a0 = 0.45;
    CHECK_FALSE(validate_star(big).pass);
}

TEST_CASE("profiles and trajectories")
{
    const SpatialProfile h{0.9, 0.5, 0.45, 0.5};
    CHECK(h(0.45, 0.5) == doctest::Approx(0.9));
    CHECK(h(0.55, 0.5) == doctest::Approx(0.9 - 0.5 * 0.01));
    const TemporalProfile z{0.6, 0.5, -0.3};
    CHECK(z(1.0) == doctest::Approx(0.8));
    const Trajectory q{{0.1, -0.2, 0.05}};
    CHECK(q(0.0) == 0.0);
    CHECK(q(0.5) == doctest::Approx(0.05 - 0.05 + 0.00625));
}

TEST_CASE("video validation rejects bound violations")
{
    auto spec = default_cylindrical_cartoon();
    CHECK_NOTHROW(spec.validate());
    auto steep = spec;
    steep.h.b = 2.0;
    CHECK_THROWS_AS(steep.validate(), std::invalid_argument);
    auto bright = spec;
    bright.z = TemporalProfile{1.2, 0.0, 0.0};
    CHECK_THROWS_AS(bright.validate(), std::invalid_argument);
    auto outside = spec;
    outside.star.cx = 0.1;
    CHECK_THROWS_AS(outside.validate(), std::invalid_argument);
}

TEST_CASE("motionless video equals the cylindrical rasterizer exactly")
{
    const auto spec = default_cylindrical_cartoon();
    const GridSpec g{32, 32, 8};
    const Volume a = rasterize_video(spec, g);
    const Volume b = rasterize_cylindrical(spec.star, spec.h, spec.z, g, spec.supersample);
    CHECK(a == b);
    for (double v : a.values()) CHECK((v >= 0.0 && v <= 1.0));
    CHECK(max_abs(a.values()) > 0.5);
}

TEST_CASE("moving frames agree with translated sample points")
{
    auto spec = default_cylindrical_cartoon();
    spec.q1.coef = {0.05};
    spec.q2.coef = {0.0, -0.04};
    const GridSpec g{32, 32, 4};
    const Volume v = rasterize_video(spec, g);
    for (int k = 0; k < g.nt; ++k) {
        const auto frame = rasterize_frame(spec, g.nx, (k + 0.5) / g.nt);
        double l1 = 0.0;
        for (std::size_t i = 0; i < frame.size(); ++i) l1 += std::abs(frame[i] - v.slice(k)[i]);
        CHECK(l1 / frame.size() <= 1e-3);
    }
}

TEST_CASE("cartoon: intensities, time dependence and resolution pair")
{
    CHECK(step_time(0, 16) == 0.0);
    CHECK(step_time(15, 16) == 1.0);
    CHECK(step_time(0, 1) == 0.0);

    const auto spec = default_cartoon_spec();
    for (const auto& e : spec.ellipses)
        for (int k = 0; k <= 10; ++k) {
            const double v = e.intensity(k / 10.0);
            CHECK((v > 0.0 && v <= 1.0));
        }
    Ellipse osc{0, 0, 0.1, 0.1, 0, Ellipse::Kind::periodic, 0.5, 0.2, 2.0, 0.25};
    CHECK(osc.intensity(0.0) == doctest::Approx(0.7));
    CHECK(osc.intensity(0.25) == doctest::Approx(0.3));

    const auto pair = cartoon_phantom(32, 6);
    CHECK(pair.low.grid() == GridSpec{32, 32, 6});
    CHECK(pair.high.grid() == GridSpec{64, 64, 6});
    for (double v : pair.high.values()) CHECK((v >= 0.0 && v <= 1.0));
    CHECK(pair.low.slice(0)[0] == 0.0);  // corners lie outside the body
    // The two resolutions describe one object.
    const Volume coarse = block_average_2x(pair.high);
    CHECK(distance(coarse.values(), pair.low.values()) / norm2(pair.low.values()) <= 0.05);
    // Slices differ over time.
    CHECK(distance(pair.low.slice(0), pair.low.slice(5)) > 0.1);
    CHECK_THROWS(cartoon_phantom(4, 2));
}

TEST_CASE("cartoon ellipses from config lines")
{
    const auto cfg = Config::parse(
        "[phantom]\n"
        "ellipse = 0 0 0.8 0.7 0 ramp 0.2 0.6\n"
        "ellipse = 0.3 0.3 0.1 0.1 10 periodic 0.5 0.3 1 0\n"
        "supersample = 3\n");
    const auto spec = cartoon_spec_from_config(cfg);
    REQUIRE(spec.ellipses.size() == 2);
    CHECK(spec.supersample == 3);
    CHECK(spec.ellipses[1].kind == Ellipse::Kind::periodic);
    CHECK(spec.ellipses[1].angle_deg == 10.0);

    const auto bad = Config::parse("[phantom]\n\nellipse = 0 0 0.8 0.7 0 ramp 0.2 1.6\n", "bad.cfg");
    try {
        cartoon_spec_from_config(bad);
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("bad.cfg:3") != std::string::npos);
    }
    CHECK_THROWS_AS(cartoon_spec_from_config(Config::parse("[phantom]\nellipse = 0 0 1 1 0 wobble 0.1 0.2\n")),
                    ConfigError);
    CHECK(cartoon_spec_from_config(Config::parse("")).ellipses.size() == default_cartoon_spec().ellipses.size());
}

TEST_CASE("stempo surrogate: square trajectory and layout")
{
    const StempoSpec spec;
    double x = 0, y = 0;
    stempo_square_center(spec, 0, 8, x, y);
    CHECK(x == doctest::Approx(-0.45));
    CHECK(y == doctest::Approx(-0.35));
    stempo_square_center(spec, 7, 8, x, y);
    CHECK(x == doctest::Approx(0.45));
    const auto pair = stempo_surrogate(32, 8);
    CHECK(pair.high.grid() == GridSpec{64, 64, 8});
    // Pixel containing the square center at the first step reads the square value.
    const int ix = static_cast<int>((-0.45 + 1.0) / 2.0 * 32), iy = static_cast<int>((-0.35 + 1.0) / 2.0 * 32);
    CHECK(pair.low(ix, iy, 0) == doctest::Approx(spec.square_value));
    CHECK(pair.low(ix, iy, 7) != doctest::Approx(spec.square_value));
    CHECK(pair.low(0, 0, 0) == 0.0);
}

TEST_CASE("block average")
{
    Volume h(GridSpec{4, 4, 1});
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) h(x, y, 0) = x + 4 * y;
    const auto l = block_average_2x(h);
    CHECK(l(0, 0, 0) == doctest::Approx(2.5));
    CHECK(l(1, 1, 0) == doctest::Approx(12.5));
    CHECK_THROWS(block_average_2x(Volume(GridSpec{3, 4, 1})));
}
