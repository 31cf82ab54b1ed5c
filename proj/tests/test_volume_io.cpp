// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "cylsh/io.hpp"
#include "cylsh/rng.hpp"
#include "cylsh/volume.hpp"

using namespace cylsh;

namespace {

std::string temp_path(const std::string& name)
{
    return (std::filesystem::temp_directory_path() / ("cylsh_test_" + name)).string();
}

}  // namespace

TEST_CASE("grid: sizes, validation and admissible scales")
{
    const GridSpec g{32, 16, 8};
    CHECK(g.size() == 4096);
    CHECK(g.slice_size() == 512);
    CHECK_NOTHROW(g.validate());
    CHECK_THROWS(GridSpec{7, 16, 8}.validate());
    CHECK_THROWS(GridSpec{16, 16, 1}.validate());
    CHECK(GridSpec{8, 8, 2}.max_scales() == 1);
    CHECK(GridSpec{32, 32, 2}.max_scales() == 2);
    CHECK(GridSpec{32, 64, 2}.max_scales() == 2);
    CHECK(GridSpec{128, 128, 2}.admits(3));
    CHECK_FALSE(GridSpec{127, 128, 2}.admits(3));
}

TEST_CASE("volume: indexing is x fastest, then y, then t")
{
    Volume v(GridSpec{8, 9, 3});
    v(2, 4, 1) = 7.0;
    CHECK(v.values()[(1 * 9 + 4) * 8 + 2] == 7.0);
    CHECK(v.slice(1)[4 * 8 + 2] == 7.0);
    CHECK(v.slice(1).size() == 72);
    v.fill(1.5);
    CHECK(sum(v.values()) == doctest::Approx(1.5 * 216));
}

TEST_CASE("vector helpers")
{
    const std::vector<double> a{1, 2, 2}, b{0, 2, 5};
    CHECK(dot(a, b) == 14.0);
    CHECK(norm2(a) == doctest::Approx(3.0));
    CHECK(max_abs(b) == 5.0);
    CHECK(distance(a, b) == doctest::Approx(std::sqrt(1.0 + 0 + 9)));
    std::vector<double> y = b;
    axpy(2.0, a, y);
    CHECK(y == std::vector<double>{2, 6, 9});
    CHECK_THROWS(dot(a, std::vector<double>{1.0}));
}

TEST_CASE("little-endian payloads round trip bit-exactly")
{
    const std::vector<double> v{0.0, -0.0, 1.0 / 3.0, std::numeric_limits<double>::denorm_min(),
                                std::numeric_limits<double>::infinity(), -1e300};
    std::stringstream ss;
    write_f64_le(ss, v);
    const std::string bytes = ss.str();
    REQUIRE(bytes.size() == 48);
    // 1.0 / 3.0 = 0x3FD5555555555555, least significant byte first.
    CHECK(static_cast<unsigned char>(bytes[16]) == 0x55);
    CHECK(static_cast<unsigned char>(bytes[23]) == 0x3F);
    std::vector<double> back(v.size());
    read_f64_le(ss, back);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::memcmp(&back[i], &v[i], sizeof(double)) == 0);
}

TEST_CASE("volume file round trip")
{
    Rng rng(4);
    std::uniform_real_distribution<double> u(-1, 1);
    Volume v(GridSpec{8, 10, 3});
    for (double& x : v.values()) x = u(rng);
    const std::string path = temp_path("roundtrip.vol");
    write_volume(path, v, 2);
    const auto back = read_volume(path);
    CHECK(back.volume == v);
    CHECK(back.scales == 2);
    const std::string bytes = read_file_bytes(path);
    CHECK(bytes.rfind("CYLSH-VOLUME-1\n", 0) == 0);
    write_volume(path, v, 2);
    CHECK(read_file_bytes(path) == bytes);
    std::remove(path.c_str());
}

TEST_CASE("volume file errors")
{
    const std::string path = temp_path("bad.vol");
    {
        std::ofstream os(path);
        os << "NOT-A-VOLUME\n8\n8\n2\n0\n";
    }
    CHECK_THROWS(read_volume(path));
    {
        std::ofstream os(path);
        os << "CYLSH-VOLUME-1\n8\n8\n2\n0\n";  // truncated payload
    }
    CHECK_THROWS(read_volume(path));
    std::remove(path.c_str());
    CHECK_THROWS(read_volume(temp_path("does_not_exist.vol")));
}
