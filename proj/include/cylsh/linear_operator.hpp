// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace cylsh {

/// Matrix-free real linear map with its transpose.
class LinearOperator {
public:
    virtual ~LinearOperator() = default;
    virtual std::size_t domain_size() const = 0;
    virtual std::size_t range_size() const = 0;
    virtual void apply(std::span<const double> x, std::span<double> y) const = 0;
    virtual void adjoint(std::span<const double> y, std::span<double> x) const = 0;
};

class IdentityOperator final : public LinearOperator {
public:
    explicit IdentityOperator(std::size_t n) : n_(n) {}
    std::size_t domain_size() const override { return n_; }
    std::size_t range_size() const override { return n_; }
    void apply(std::span<const double> x, std::span<double> y) const override;
    void adjoint(std::span<const double> y, std::span<double> x) const override;

private:
    std::size_t n_;
};

struct PowerMethodResult {
    double norm = 0.0;  ///< estimate of the spectral norm ||A||
    int iterations = 0;
    bool converged = false;
};

/// Power iteration on A^T A from a seeded Gaussian start vector. Stops when
/// the Rayleigh quotient changes by less than `rel_tol` relative.
PowerMethodResult power_method(const LinearOperator& op, double rel_tol = 1e-6, int max_iter = 2000,
                               std::uint64_t seed = 12345);

}  // namespace cylsh
