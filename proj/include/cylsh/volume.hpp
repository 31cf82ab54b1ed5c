// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace cylsh {

/// Voxel counts of a space-time grid. Axes are (x1, x2, x3) with x3 the
/// temporal axis; memory order is x1 fastest, then x2, then x3.
struct GridSpec {
    int nx = 0;
    int ny = 0;
    int nt = 0;

    std::size_t size() const { return static_cast<std::size_t>(nx) * ny * nt; }
    std::size_t slice_size() const { return static_cast<std::size_t>(nx) * ny; }

    bool operator==(const GridSpec&) const = default;

    /// Throws std::invalid_argument unless spatial dims >= 8 and nt >= 2.
    void validate() const;

    /// Largest scale count J with nx, ny >= 2^(2J+1).
    int max_scales() const;

    /// True when nx, ny >= 2^(2*scales+1).
    bool admits(int scales) const;

    std::string str() const;
};

/// Real-valued space-time volume (a dynamic image: one n x n slice per time step).
class Volume {
public:
    Volume() = default;
    explicit Volume(GridSpec grid, double fill = 0.0);

    const GridSpec& grid() const { return grid_; }
    std::size_t size() const { return data_.size(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::span<double> values() { return data_; }
    std::span<const double> values() const { return data_; }

    double& operator()(int x, int y, int t) { return data_[index(x, y, t)]; }
    double operator()(int x, int y, int t) const { return data_[index(x, y, t)]; }

    std::span<double> slice(int t);
    std::span<const double> slice(int t) const;

    std::size_t index(int x, int y, int t) const {
        return (static_cast<std::size_t>(t) * grid_.ny + y) * grid_.nx + x;
    }

    void fill(double v);

    bool operator==(const Volume&) const = default;

private:
    GridSpec grid_{};
    std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double sum(std::span<const double> a);
double max_abs(std::span<const double> a);
/// ||a - b||_2
double distance(std::span<const double> a, std::span<const double> b);
/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);

}  // namespace cylsh
