// SPDX-License-Identifier: Apache-2.0
#include "cylsh/volume.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cylsh {

void GridSpec::validate() const
{
    if (nx < 8 || ny < 8)
        throw std::invalid_argument("grid " + str() + ": spatial dimensions must be >= 8");
    if (nt < 2)
        throw std::invalid_argument("grid " + str() + ": temporal dimension must be >= 2");
}

bool GridSpec::admits(int scales) const
{
    if (scales < 1 || scales > 12) return false;
    const long need = 1L << (2 * scales + 1);
    return nx >= need && ny >= need;
}

int GridSpec::max_scales() const
{
    int j = 0;
    while (admits(j + 1)) ++j;
    return j;
}

std::string GridSpec::str() const
{
    return std::to_string(nx) + "x" + std::to_string(ny) + "x" + std::to_string(nt);
}

Volume::Volume(GridSpec grid, double fill) : grid_(grid), data_(grid.size(), fill)
{
    if (grid.nx <= 0 || grid.ny <= 0 || grid.nt <= 0)
        throw std::invalid_argument("volume dimensions must be positive");
}

std::span<double> Volume::slice(int t)
{
    return std::span<double>(data_).subspan(static_cast<std::size_t>(t) * grid_.slice_size(),
                                            grid_.slice_size());
}

std::span<const double> Volume::slice(int t) const
{
    return std::span<const double>(data_).subspan(static_cast<std::size_t>(t) * grid_.slice_size(),
                                                  grid_.slice_size());
}

void Volume::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

double dot(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double sum(std::span<const double> a) { return std::accumulate(a.begin(), a.end(), 0.0); }

double max_abs(std::span<const double> a)
{
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

double distance(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size()) throw std::invalid_argument("distance: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

void axpy(double a, std::span<const double> x, std::span<double> y)
{
    if (x.size() != y.size()) throw std::invalid_argument("axpy: size mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

}  // namespace cylsh
