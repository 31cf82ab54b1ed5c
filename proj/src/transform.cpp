// SPDX-License-Identifier: Apache-2.0
#include "cylsh/transform.hpp"

#include <algorithm>
#include <stdexcept>

namespace cylsh {

std::vector<int> CoefficientLayout::scale_per_coefficient() const
{
    std::vector<int> out(total, -1);
    for (const auto& b : bands)
        std::fill_n(out.begin() + static_cast<std::ptrdiff_t>(b.offset), b.size, b.scale);
    return out;
}

double CoefficientSet::energy() const
{
    double e = 0.0;
    for (double v : values) e += v * v;
    return e;
}

CoefficientSet SparsifyingTransform::analyze(const Volume& f) const
{
    if (f.grid() != grid())
        throw std::invalid_argument(name() + ": volume grid " + f.grid().str() +
                                    " does not match transform grid " + grid().str());
    CoefficientSet c(layout());
    analyze(f.values(), c.values);
    return c;
}

Volume SparsifyingTransform::synthesize(const CoefficientSet& c) const
{
    if (!c.layout || c.layout->total != layout()->total || c.layout->bands.size() != layout()->bands.size())
        throw std::invalid_argument(name() + ": coefficient set does not match transform layout");
    Volume f(grid());
    synthesize(c.values, f.values());
    return f;
}

IdentityTransform::IdentityTransform(GridSpec grid) : grid_(grid)
{
    auto l = std::make_shared<CoefficientLayout>();
    l->bands.push_back(Band{0, 0, grid.size(), "identity"});
    l->total = grid.size();
    l->scales = 1;
    layout_ = std::move(l);
}

void IdentityTransform::analyze(std::span<const double> f, std::span<double> coeffs) const
{
    if (f.size() != grid_.size() || coeffs.size() != grid_.size())
        throw std::invalid_argument("identity: size mismatch");
    std::copy(f.begin(), f.end(), coeffs.begin());
}

void IdentityTransform::synthesize(std::span<const double> coeffs, std::span<double> f) const
{
    if (f.size() != grid_.size() || coeffs.size() != grid_.size())
        throw std::invalid_argument("identity: size mismatch");
    std::copy(coeffs.begin(), coeffs.end(), f.begin());
}

}  // namespace cylsh
