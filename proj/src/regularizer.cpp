// SPDX-License-Identifier: Apache-2.0
#include "cylsh/regularizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cylsh {

namespace {

// |c|^(p-1) sign(c), with the negative power guarded at denormals.
double signed_power(double c, double pm1)
{
    const double a = std::abs(c);
    if (a < 1e-300) return 0.0;
    const double m = pm1 == 1.0 ? a : std::pow(a, pm1);
    return c > 0.0 ? m : -m;
}

double sign(double c) { return c > 0.0 ? 1.0 : (c < 0.0 ? -1.0 : 0.0); }

}  // namespace

double WeightScheme::weight(int scale) const
{
    if (scale < 0) return 1.0;
    const double j = scale;
    return std::exp2(j * effective_beta() + 2.5 * j * (p / 2.0 - 1.0));
}

std::vector<double> weight_sequence(double p, double beta, int scales)
{
    if (!(p > 0.0 && p <= 2.0)) throw std::invalid_argument("weight_sequence: p must lie in (0, 2]");
    if (scales < 1) throw std::invalid_argument("weight_sequence: scales must be >= 1");
    WeightScheme ws{p, beta};
    std::vector<double> w;
    for (int j = 0; j < scales; ++j) w.push_back(ws.weight(j));
    w.push_back(1.0);
    return w;
}

void l1_subgradient_selection(std::span<const double> c, std::span<const double> reference,
                              std::span<double> out)
{
    if (c.size() != reference.size() || c.size() != out.size())
        throw std::invalid_argument("l1_subgradient_selection: size mismatch");
    for (std::size_t i = 0; i < c.size(); ++i)
        out[i] = c[i] != 0.0 ? sign(c[i]) : std::clamp(reference[i], -1.0, 1.0);
}

void soft_threshold(std::span<double> c, double tau, std::span<const double> weights)
{
    if (c.size() != weights.size()) throw std::invalid_argument("soft_threshold: size mismatch");
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double t = tau * weights[i];
        const double a = std::abs(c[i]) - t;
        c[i] = a > 0.0 ? std::copysign(a, c[i]) : 0.0;
    }
}

Regularizer::Regularizer(std::shared_ptr<const SparsifyingTransform> transform, WeightScheme weights)
    : transform_(std::move(transform)), scheme_(weights)
{
    if (!transform_) throw std::invalid_argument("Regularizer: null transform");
    if (!(scheme_.p > 0.0 && scheme_.p <= 2.0)) throw std::invalid_argument("Regularizer: p must lie in (0, 2]");
    const auto layout = transform_->layout();
    weights_.resize(layout->total);
    for (const auto& b : layout->bands)
        std::fill_n(weights_.begin() + static_cast<std::ptrdiff_t>(b.offset), b.size, scheme_.weight(b.scale));
}

double Regularizer::value_of_coefficients(std::span<const double> c) const
{
    if (c.size() != weights_.size()) throw std::invalid_argument("Regularizer: coefficient size mismatch");
    const double p = scheme_.p;
    double s = 0.0;
    if (p == 1.0) {
        for (std::size_t i = 0; i < c.size(); ++i) s += weights_[i] * std::abs(c[i]);
    } else if (p == 2.0) {
        for (std::size_t i = 0; i < c.size(); ++i) s += weights_[i] * c[i] * c[i];
    } else {
        for (std::size_t i = 0; i < c.size(); ++i) s += weights_[i] * std::pow(std::abs(c[i]), p);
    }
    return s / p;
}

double Regularizer::value(const Volume& f) const
{
    return value_of_coefficients(transform_->analyze(f).values);
}

void Regularizer::coefficient_gradient(std::span<const double> c, std::span<double> out) const
{
    if (!(scheme_.p > 1.0)) throw std::domain_error("Regularizer: gradient requires p > 1");
    if (c.size() != weights_.size() || out.size() != weights_.size())
        throw std::invalid_argument("Regularizer: coefficient size mismatch");
    const double pm1 = scheme_.p - 1.0;
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = weights_[i] * signed_power(c[i], pm1);
}

Volume Regularizer::gradient(const Volume& f) const
{
    auto c = transform_->analyze(f);
    coefficient_gradient(c.values, c.values);
    return transform_->synthesize(c);
}

Volume Regularizer::subgradient_p1(const Volume& f_hat, const Volume& f_ref) const
{
    auto c = transform_->analyze(f_hat);
    auto r = transform_->analyze(f_ref);
    for (double& v : r.values) v = sign(v);
    l1_subgradient_selection(c.values, r.values, c.values);
    for (std::size_t i = 0; i < c.values.size(); ++i) c.values[i] *= weights_[i];
    return transform_->synthesize(c);
}

double Regularizer::bregman_distance(const Volume& f_hat, const Volume& f_dag) const
{
    if (f_hat.grid() != f_dag.grid()) throw std::invalid_argument("bregman_distance: grid mismatch");
    Volume g_hat, g_dag;
    if (scheme_.p > 1.0) {
        g_hat = gradient(f_hat);
        g_dag = gradient(f_dag);
    } else if (scheme_.p == 1.0) {
        g_hat = subgradient_p1(f_hat, f_dag);
        g_dag = subgradient_p1(f_dag, f_hat);
    } else {
        throw std::domain_error("bregman_distance: requires p >= 1");
    }
    double d = 0.0;
    for (std::size_t i = 0; i < f_hat.size(); ++i)
        d += (g_hat.data()[i] - g_dag.data()[i]) * (f_hat.data()[i] - f_dag.data()[i]);
    return d;
}

CoefficientSet Regularizer::prox_weighted_l1(const CoefficientSet& c, double tau) const
{
    if (!(tau > 0.0)) throw std::invalid_argument("prox_weighted_l1: tau must be positive");
    CoefficientSet out = c;
    soft_threshold(out.values, tau, weights_);
    return out;
}

}  // namespace cylsh
