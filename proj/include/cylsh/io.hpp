// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "cylsh/volume.hpp"

namespace cylsh {

/// Raw little-endian float64 payloads, independent of host byte order.
void write_f64_le(std::ostream& os, std::span<const double> values);
void read_f64_le(std::istream& is, std::span<double> values);

/// Volume file: five text lines (magic, nx, ny, nt, scale count) followed by
/// nx*ny*nt little-endian doubles, x fastest.
void write_volume(const std::string& path, const Volume& v, int scales = 0);

struct VolumeFile {
    Volume volume;
    int scales = 0;
};
VolumeFile read_volume(const std::string& path);

/// Bytes of a file, for byte-identity checks.
std::string read_file_bytes(const std::string& path);

}  // namespace cylsh
