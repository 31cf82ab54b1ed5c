// SPDX-License-Identifier: Apache-2.0
#include "cylsh/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace cylsh {

namespace {

constexpr const char* kVolumeMagic = "CYLSH-VOLUME-1";

std::uint64_t to_le(std::uint64_t v)
{
    if constexpr (std::endian::native == std::endian::little) return v;
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffULL) << (8 * (7 - i));
    return r;
}

int parse_int_line(std::istream& is, const std::string& path, const char* what)
{
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error(path + ": truncated header (" + what + ")");
    std::size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(line, &pos);
    } catch (const std::exception&) {
        throw std::runtime_error(path + ": bad " + what + " '" + line + "'");
    }
    if (pos != line.size()) throw std::runtime_error(path + ": bad " + what + " '" + line + "'");
    return v;
}

}  // namespace

void write_f64_le(std::ostream& os, std::span<const double> values)
{
    std::vector<std::uint64_t> buf(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) buf[i] = to_le(std::bit_cast<std::uint64_t>(values[i]));
    os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * 8));
    if (!os) throw std::runtime_error("write failed");
}

void read_f64_le(std::istream& is, std::span<double> values)
{
    std::vector<std::uint64_t> buf(values.size());
    is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * 8));
    if (is.gcount() != static_cast<std::streamsize>(buf.size() * 8)) throw std::runtime_error("truncated payload");
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = std::bit_cast<double>(to_le(buf[i]));
}

void write_volume(const std::string& path, const Volume& v, int scales)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    const auto& g = v.grid();
    os << kVolumeMagic << '\n' << g.nx << '\n' << g.ny << '\n' << g.nt << '\n' << scales << '\n';
    write_f64_le(os, v.values());
}

VolumeFile read_volume(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::string magic;
    std::getline(is, magic);
    if (magic != kVolumeMagic) throw std::runtime_error(path + ": not a volume file");
    GridSpec g;
    g.nx = parse_int_line(is, path, "nx");
    g.ny = parse_int_line(is, path, "ny");
    g.nt = parse_int_line(is, path, "nt");
    VolumeFile out;
    out.scales = parse_int_line(is, path, "scale count");
    if (g.nx <= 0 || g.ny <= 0 || g.nt <= 0) throw std::runtime_error(path + ": nonpositive dimension");
    out.volume = Volume(g);
    read_f64_le(is, out.volume.values());
    return out;
}

std::string read_file_bytes(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace cylsh
