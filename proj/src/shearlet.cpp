// SPDX-License-Identifier: Apache-2.0
#include "cylsh/shearlet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cylsh/windows.hpp"

namespace cylsh {

namespace {

int signed_index(int i, int n) { return i < (n + 1) / 2 ? i : i - n; }
int mirror_index(int i, int n) { return (n - i) % n; }

// Squared cone weights; the diagonal |xi1| = |xi2| (including the temporal
// axis xi1 = xi2 = 0) is split evenly between the cones.
void cone_weights(double w1, double w2, double& c1, double& c2)
{
    const double a1 = std::abs(w1), a2 = std::abs(w2);
    if (a2 < a1) {
        c1 = 1.0;
        c2 = 0.0;
    } else if (a1 < a2) {
        c1 = 0.0;
        c2 = 1.0;
    } else {
        c1 = 0.5;
        c2 = 0.5;
    }
}

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

std::string ShearletIndex::label() const
{
    switch (kind) {
    case Kind::lowpass:
        return "lowpass";
    case Kind::interior:
        return "j" + std::to_string(scale) + "_c" + std::to_string(cone) + "_k" + std::to_string(shear);
    case Kind::boundary:
        return "j" + std::to_string(scale) + "_b_k" + std::to_string(shear);
    }
    return {};
}

Matrix3 dilation_matrix(int cone)
{
    if (cone == 1) return {{{4, 0, 0}, {0, 2, 0}, {0, 0, 4}}};
    if (cone == 2) return {{{2, 0, 0}, {0, 4, 0}, {0, 0, 4}}};
    throw std::invalid_argument("dilation_matrix: cone must be 1 or 2");
}

Matrix3 shear_matrix(int cone)
{
    if (cone == 1) return {{{1, 0, 0}, {1, 1, 0}, {0, 0, 1}}};
    if (cone == 2) return {{{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}};
    throw std::invalid_argument("shear_matrix: cone must be 1 or 2");
}

std::vector<int> default_shear_levels(int scales)
{
    std::vector<int> s(static_cast<std::size_t>(std::max(scales, 0)));
    for (int j = 0; j < scales; ++j) s[static_cast<std::size_t>(j)] = std::max(j, 1);
    return s;
}

FilterBank::FilterBank(GridSpec grid, int scales, std::vector<int> shear_levels)
    : grid_(grid), scales_(scales), shear_levels_(std::move(shear_levels)), fft_(grid)
{
    grid_.validate();
    if (!grid_.admits(scales))
        throw std::invalid_argument("grid " + grid_.str() + " too small for " + std::to_string(scales) +
                                    " scales (need nx, ny >= 2^(2*scales+1))");
    if (shear_levels_.empty()) shear_levels_ = default_shear_levels(scales);
    if (static_cast<int>(shear_levels_.size()) != scales)
        throw std::invalid_argument("shear level list must have one entry per scale");
    for (int s : shear_levels_)
        if (s < 0 || s > 6) throw std::invalid_argument("shear level out of range [0, 6]");

    indices_.push_back({ShearletIndex::Kind::lowpass, 0, -1, 0});
    for (int j = 0; j < scales; ++j) {
        const int kmax = 1 << shear_levels_[static_cast<std::size_t>(j)];
        for (int cone = 1; cone <= 2; ++cone)
            for (int k = -kmax + 1; k <= kmax - 1; ++k)
                indices_.push_back({ShearletIndex::Kind::interior, cone, j, k});
        indices_.push_back({ShearletIndex::Kind::boundary, 0, j, -kmax});
        indices_.push_back({ShearletIndex::Kind::boundary, 0, j, kmax});
    }

    const int hx = fft_.half_nx();
    const std::size_t npts = fft_.spectrum_size();
    const std::size_t nf = indices_.size();
    filters_.assign(nf, std::vector<double>(npts, 0.0));

    std::vector<double> raw(nf), mir(nf);
    auto evaluate = [&](int sx, int sy, int st, std::vector<double>& out) {
        const double w1 = static_cast<double>(sx) / grid_.nx;
        const double w2 = static_cast<double>(sy) / grid_.ny;
        const double x1 = frequency(sx, grid_.nx), x2 = frequency(sy, grid_.ny),
                     x3 = frequency(st, grid_.nt);
        double c1 = 0.0, c2 = 0.0;
        cone_weights(w1, w2, c1, c2);
        const double r1 = ratio(w2, w1), r2 = ratio(w1, w2);
        const double lp = WindowFunctions::phi(x1, x2, x3);
        std::size_t f = 0;
        out[f++] = lp * lp;
        double dil = 1.0;
        for (int j = 0; j < scales_; ++j, dil *= 4.0) {
            const double wsq = WindowFunctions::radial_sq(x1 / dil, x2 / dil, x3 / dil);
            const int s = shear_levels_[static_cast<std::size_t>(j)];
            const int kmax = 1 << s;
            const double z1 = std::ldexp(r1, s), z2 = std::ldexp(r2, s);
            for (int cone = 1; cone <= 2; ++cone) {
                const double cw = cone == 1 ? c1 : c2;
                const double z = cone == 1 ? z1 : z2;
                for (int k = -kmax + 1; k <= kmax - 1; ++k)
                    out[f++] = cw == 0.0 || wsq == 0.0 ? 0.0 : wsq * cw * WindowFunctions::angular_sq(z - k);
            }
            for (int k : {-kmax, kmax}) {
                out[f++] = wsq == 0.0 ? 0.0
                                      : wsq * (c1 * WindowFunctions::angular_sq(z1 - k) +
                                               c2 * WindowFunctions::angular_sq(z2 - k));
            }
        }
    };

    std::size_t p = 0;
    for (int it = 0; it < grid_.nt; ++it) {
        for (int iy = 0; iy < grid_.ny; ++iy) {
            for (int ix = 0; ix < hx; ++ix, ++p) {
                evaluate(signed_index(ix, grid_.nx), signed_index(iy, grid_.ny), signed_index(it, grid_.nt), raw);
                evaluate(signed_index(mirror_index(ix, grid_.nx), grid_.nx),
                         signed_index(mirror_index(iy, grid_.ny), grid_.ny),
                         signed_index(mirror_index(it, grid_.nt), grid_.nt), mir);
                double total = 0.0;
                for (std::size_t f = 0; f < nf; ++f) {
                    raw[f] = 0.5 * (raw[f] + mir[f]);
                    total += raw[f];
                }
                if (!(total > 0.0)) throw std::logic_error("filter bank: empty partition at a frequency");
                for (std::size_t f = 0; f < nf; ++f) filters_[f][p] = std::sqrt(raw[f] / total);
            }
        }
    }
}

double FilterBank::frequency(int signed_index, int n) const
{
    return std::ldexp(static_cast<double>(signed_index) / n, 2 * scales_ - 3);
}

std::vector<int> FilterBank::directions_per_scale() const
{
    std::vector<int> counts(static_cast<std::size_t>(scales_), 0);
    for (const auto& idx : indices_)
        if (idx.kind != ShearletIndex::Kind::lowpass) ++counts[static_cast<std::size_t>(idx.scale)];
    return counts;
}

double FilterBank::partition_defect() const
{
    double worst = 0.0;
    for (std::size_t p = 0; p < fft_.spectrum_size(); ++p) {
        double s = 0.0;
        for (const auto& h : filters_) s += h[p] * h[p];
        worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
}

CylindricalShearlet::CylindricalShearlet(std::shared_ptr<const FilterBank> bank) : bank_(std::move(bank))
{
    auto l = std::make_shared<CoefficientLayout>();
    const std::size_t n = bank_->grid().size();
    for (std::size_t i = 0; i < bank_->count(); ++i) {
        const auto& idx = bank_->indices()[i];
        l->bands.push_back(Band{idx.scale, i * n, n, idx.label()});
    }
    l->total = n * bank_->count();
    l->scales = bank_->scales();
    layout_ = std::move(l);
}

CylindricalShearlet::CylindricalShearlet(GridSpec grid, int scales)
    : CylindricalShearlet(std::make_shared<const FilterBank>(grid, scales))
{
}

void CylindricalShearlet::analyze(std::span<const double> f, std::span<double> coeffs) const
{
    const auto& g = bank_->grid();
    if (f.size() != g.size() || coeffs.size() != layout_->total)
        throw std::invalid_argument("shearlet analyze: shape mismatch (expected grid " + g.str() + ")");
    const auto& fft = bank_->fft();
    const std::size_t ns = fft.spectrum_size();
    std::vector<Complex> spec(ns), prod(ns);
    fft.forward(f, spec);
    const double scale = 1.0 / static_cast<double>(g.size());
    for (std::size_t b = 0; b < bank_->count(); ++b) {
        const auto h = bank_->filter(b);
        for (std::size_t p = 0; p < ns; ++p) prod[p] = spec[p] * (h[p] * scale);
        fft.inverse(prod, coeffs.subspan(b * g.size(), g.size()));
    }
}

void CylindricalShearlet::synthesize(std::span<const double> coeffs, std::span<double> f) const
{
    const auto& g = bank_->grid();
    if (f.size() != g.size() || coeffs.size() != layout_->total)
        throw std::invalid_argument("shearlet synthesize: shape mismatch (expected grid " + g.str() + ")");
    const auto& fft = bank_->fft();
    const std::size_t ns = fft.spectrum_size();
    std::vector<Complex> acc(ns, Complex(0.0, 0.0)), spec(ns);
    for (std::size_t b = 0; b < bank_->count(); ++b) {
        fft.forward(coeffs.subspan(b * g.size(), g.size()), spec);
        const auto h = bank_->filter(b);
        for (std::size_t p = 0; p < ns; ++p) acc[p] += spec[p] * h[p];
    }
    const double scale = 1.0 / static_cast<double>(g.size());
    for (auto& v : acc) v *= scale;
    fft.inverse(acc, f);
}

std::size_t CylindricalShearlet::band_of(const ShearletIndex& idx) const
{
    const auto& ind = bank_->indices();
    const auto it = std::find(ind.begin(), ind.end(), idx);
    if (it == ind.end()) throw std::out_of_range("shearlet index " + idx.label() + " not in bank");
    return static_cast<std::size_t>(it - ind.begin());
}

}  // namespace cylsh
