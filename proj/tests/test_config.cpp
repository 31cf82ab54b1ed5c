// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <string>

#include "cylsh/config.hpp"
#include "cylsh/runconfig.hpp"

using namespace cylsh;

namespace {

int error_line(const std::string& text)
{
    try {
        parse_run_config(text, "test.cfg");
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

}  // namespace

TEST_CASE("config parsing: sections, comments and typed getters")
{
    const auto cfg = Config::parse(
        "# leading comment\n"
        "[a]\n"
        "x = 1.5   # trailing comment\n"
        "name = hello world\n"
        "list = 8, 16 32\n"
        "flag = yes\n"
        "x = 2.5\n"
        "\n"
        "[b]\n"
        "n = -7\n"
        "seed = 18446744073709551615\n");
    CHECK(cfg.get_double("a", "x", 0) == 2.5);  // last occurrence wins
    CHECK(cfg.all("a", "x").size() == 2);
    CHECK(cfg.get_string("a", "name", "") == "hello world");
    CHECK(cfg.get_ints("a", "list", {}) == std::vector<int>{8, 16, 32});
    CHECK(cfg.get_doubles("a", "list", {}) == std::vector<double>{8, 16, 32});
    CHECK(cfg.get_bool("a", "flag", false));
    CHECK(cfg.get_int("b", "n", 0) == -7);
    CHECK(cfg.get_u64("b", "seed", 0) == 18446744073709551615ULL);
    CHECK(cfg.get_double("b", "missing", 4.0) == 4.0);
    CHECK_FALSE(cfg.has("a", "n"));
    CHECK(cfg.find("b", "n")->line == 10);
}

TEST_CASE("config errors carry the source and line")
{
    try {
        Config::parse("[a]\nx = 1\njunk line\n", "f.cfg");
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).rfind("f.cfg:3: ", 0) == 0);
    }
    CHECK_THROWS_AS(Config::parse("[unterminated\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse("key_before_section = 1\n"), ConfigError);
    const auto cfg = Config::parse("[a]\nx = abc\ny = 1.5\nz = maybe\n");
    CHECK_THROWS_AS(cfg.get_double("a", "x", 0), ConfigError);
    CHECK_THROWS_AS(cfg.get_int("a", "y", 0), ConfigError);
    CHECK_THROWS_AS(cfg.get_bool("a", "z", false), ConfigError);
    CHECK_THROWS(Config::load("/nonexistent/cylsh.cfg"));
}

TEST_CASE("value helpers")
{
    CHECK(parse_double("1e-3") == 0.001);
    CHECK_THROWS(parse_double("1e-3x"));
    CHECK(parse_int("42") == 42);
    CHECK_THROWS(parse_int("4.2"));
    CHECK(parse_double_list("1, 2 3") == std::vector<double>{1, 2, 3});
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(parse_double(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("dump round trips")
{
    auto cfg = Config::parse("[s]\nk = v\n[t]\nm = 1\n[s]\nj = 2\n");
    cfg.set("t", "m", "5");
    cfg.set("u", "new", "x");
    const std::string text = cfg.dump();
    const auto again = Config::parse(text);
    CHECK(again.dump() == text);
    CHECK(again.get_int("t", "m", 0) == 5);
    CHECK(again.get_string("u", "new", "") == "x");
    CHECK(again.get_int("s", "j", 0) == 2);
}

TEST_CASE("run config schema and validation")
{
    CHECK(error_line("[phantom]\nn = 32\n[solver]\nmaxiter = 10\n") == 4);
    CHECK(error_line("[phantom]\nn = 32\n[bogus]\n x = 1\n") == 4);
    CHECK(error_line("[experiment]\nscenario = sometimes\n") == 2);
    CHECK(error_line("[solver]\nshrink = 2\n") == 2);
    CHECK(error_line("[experiment]\nn_grid = 16 8\n") == 2);
    CHECK(error_line("[transform]\nkind = curvelet\n") == 2);
    CHECK(error_line("[experiment]\ntrials = many\n") == 2);
    CHECK(error_line("[phantom]\nn = 32\n") == -1);
}

TEST_CASE("run config resolves to experiment settings")
{
    auto cfg = parse_run_config(
        "[phantom]\nn = 32\nkappa = 8\n"
        "[transform]\nkind = wavelet\np = 1.2\n"
        "[solver]\nmax_iterations = 77\nnonnegative = false\n"
        "[experiment]\nscenario = fixed\nn_grid = 4,8,16\ntrials = 2\nc_alpha = 0.5\nseed = 9\n"
        "[output]\ntiming = true\n");
    const auto e = experiment_config_from(cfg);
    CHECK(e.n == 32);
    CHECK(e.kappa == 8);
    CHECK(e.transform == TransformKind::wavelet);
    CHECK(e.p == 1.2);
    CHECK(e.scenario == NoiseScenario::fixed);
    CHECK(e.n_grid == std::vector<int>{4, 8, 16});
    CHECK(e.seed == 9);
    CHECK(e.solver.max_iterations == 77);
    CHECK_FALSE(e.solver.nonnegative);
    CHECK(e.record_timing);

    record_resolved(cfg, e);
    const auto resolved = Config::parse(cfg.dump());
    CHECK(resolved.get_string("experiment", "n_min", "") == "4");
    CHECK(resolved.get_double("transform", "beta", 0) == doctest::Approx(1.25 * 0.8));
    const auto e2 = experiment_config_from(resolved);
    CHECK(e2.n_grid == e.n_grid);
    CHECK(e2.c_alpha == e.c_alpha);
}
