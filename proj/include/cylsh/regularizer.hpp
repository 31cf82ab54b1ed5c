// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "cylsh/transform.hpp"
#include "cylsh/volume.hpp"

namespace cylsh {

/// Weighted l^p scheme on frame coefficients: weight(j) = 2^(j*beta + 2.5*j*(p/2 - 1)),
/// low-pass weight 1. beta defaults to 1.25*(2 - p), which makes every weight 1.
struct WeightScheme {
    double p = 1.5;
    std::optional<double> beta;

    double effective_beta() const { return beta.value_or(1.25 * (2.0 - p)); }
    /// Weight of scale j (j = -1 is the low-pass band).
    double weight(int scale) const;
    /// inf_j weight(j) >= 1 exactly when beta >= 1.25*(2 - p).
    bool coercive() const { return effective_beta() >= 1.25 * (2.0 - p); }
};

/// Per-scale weights for j = 0..scales-1, followed by the low-pass weight.
std::vector<double> weight_sequence(double p, double beta, int scales);

/// Clip-to-[-1,1] sign selection: sign(c) where c != 0, else clip(reference).
/// The result always belongs to the subdifferential of |.| at c.
void l1_subgradient_selection(std::span<const double> c, std::span<const double> reference,
                              std::span<double> out);

/// In-place soft thresholding with per-coefficient thresholds tau * weight.
void soft_threshold(std::span<double> c, double tau, std::span<const double> weights);

/// R(f) = (1/p) * sum_lambda w_lambda |<f, psi_lambda>|^p for a Parseval
/// transform, with gradients, l1 subgradients and Bregman distances.
class Regularizer {
public:
    Regularizer(std::shared_ptr<const SparsifyingTransform> transform, WeightScheme weights);

    const SparsifyingTransform& transform() const { return *transform_; }
    std::shared_ptr<const SparsifyingTransform> transform_ptr() const { return transform_; }
    const WeightScheme& scheme() const { return scheme_; }
    double p() const { return scheme_.p; }
    /// Weight of each coefficient.
    std::span<const double> weights() const { return weights_; }

    /// R from precomputed coefficients.
    double value_of_coefficients(std::span<const double> c) const;
    double value(const Volume& f) const;

    /// Coefficient-domain gradient w * |c|^(p-1) * sign(c) (p > 1).
    void coefficient_gradient(std::span<const double> c, std::span<double> out) const;
    /// grad R(f) = synthesize(w * |c|^(p-1) * sign(c)), c = analyze(f). Requires p > 1.
    Volume gradient(const Volume& f) const;

    /// Element of dR(f_hat) for p = 1 with the sign of analyze(f_ref) as
    /// reference at vanishing coefficients.
    Volume subgradient_p1(const Volume& f_hat, const Volume& f_ref) const;

    /// Symmetric Bregman distance <g(f_hat) - g(f_dag), f_hat - f_dag> with g
    /// the gradient (p > 1) or the selected subgradient (p = 1).
    double bregman_distance(const Volume& f_hat, const Volume& f_dag) const;

    /// Soft thresholding of `c` with thresholds tau * weight.
    CoefficientSet prox_weighted_l1(const CoefficientSet& c, double tau) const;

private:
    std::shared_ptr<const SparsifyingTransform> transform_;
    WeightScheme scheme_;
    std::vector<double> weights_;
};

}  // namespace cylsh
