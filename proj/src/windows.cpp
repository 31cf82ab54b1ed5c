// SPDX-License-Identifier: Apache-2.0
#include "cylsh/windows.hpp"

#include <algorithm>
#include <cmath>

namespace cylsh {

namespace {
constexpr double kInner = 1.0 / 16.0;
constexpr double kOuter = 1.0 / 8.0;
}  // namespace

double WindowFunctions::transition(double t)
{
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

double WindowFunctions::bump1d(double x)
{
    const double ax = std::abs(x);
    return 1.0 - transition((ax - kInner) / (kOuter - kInner));
}

double WindowFunctions::phi(double xi1, double xi2, double xi3)
{
    return bump1d(xi1) * bump1d(xi2) * bump1d(xi3);
}

double WindowFunctions::radial_sq(double xi1, double xi2, double xi3)
{
    const double outer = phi(xi1 / 4.0, xi2 / 4.0, xi3 / 4.0);
    const double inner = phi(xi1, xi2, xi3);
    return std::max(0.0, outer * outer - inner * inner);
}

double WindowFunctions::radial(double xi1, double xi2, double xi3)
{
    return std::sqrt(radial_sq(xi1, xi2, xi3));
}

double WindowFunctions::angular_sq(double z)
{
    if (z <= -1.0 || z >= 1.0) return 0.0;
    return z <= 0.0 ? transition(1.0 + z) : transition(1.0 - z);
}

double WindowFunctions::angular(double z) { return std::sqrt(angular_sq(z)); }

WindowFunctions build_windows() { return {}; }

}  // namespace cylsh
