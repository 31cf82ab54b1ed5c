// SPDX-License-Identifier: Apache-2.0
#include "cylsh/linear_operator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "cylsh/rng.hpp"
#include "cylsh/volume.hpp"

namespace cylsh {

void IdentityOperator::apply(std::span<const double> x, std::span<double> y) const
{
    if (x.size() != n_ || y.size() != n_) throw std::invalid_argument("identity operator: size mismatch");
    std::copy(x.begin(), x.end(), y.begin());
}

void IdentityOperator::adjoint(std::span<const double> y, std::span<double> x) const { apply(y, x); }

PowerMethodResult power_method(const LinearOperator& op, double rel_tol, int max_iter, std::uint64_t seed)
{
    const std::size_t n = op.domain_size();
    if (n == 0) throw std::invalid_argument("power_method: empty domain");
    std::vector<double> x(n), ax(op.range_size()), atax(n);
    Rng rng(seed);
    std::normal_distribution<double> normal;
    for (auto& v : x) v = normal(rng);
    double nx = norm2(x);
    for (auto& v : x) v /= nx;

    PowerMethodResult res;
    double lambda = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        op.apply(x, ax);
        const double rq = dot(ax, ax);  // x^T A^T A x, ||x|| = 1
        op.adjoint(ax, atax);
        res.iterations = it;
        const bool done = it > 1 && std::abs(rq - lambda) <= rel_tol * rq;
        lambda = rq;
        if (done) {
            res.converged = true;
            break;
        }
        nx = norm2(atax);
        if (nx == 0.0) break;
        for (std::size_t i = 0; i < n; ++i) x[i] = atax[i] / nx;
    }
    res.norm = std::sqrt(lambda);
    return res;
}

}  // namespace cylsh
