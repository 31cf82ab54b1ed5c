// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <memory>
#include <string>

#include "cylsh/transform.hpp"

namespace cylsh {

/// Orthogonal 4-tap filter pair with the number of decomposition levels.
struct WaveletBank {
    enum class Boundary { periodic };

    std::array<double, 4> lowpass{};
    std::array<double, 4> highpass{};
    int levels = 3;
    Boundary boundary = Boundary::periodic;

    /// Daubechies-2 (two vanishing moments).
    static WaveletBank daubechies2(int levels = 3);

    /// Largest deviation from the orthogonality / perfect-reconstruction
    /// identities: sum h^2 = 1, sum h_t h_{t+2} = 0, sum h g shifted = 0.
    double orthogonality_defect() const;
};

/// Separable 3D discrete wavelet transform (Mallat pyramid), packed so that
/// each subband is contiguous: the coarsest approximation first, then the
/// seven detail bands of each level from coarse to fine.
class Wavelet3D final : public SparsifyingTransform {
public:
    Wavelet3D(GridSpec grid, WaveletBank bank = WaveletBank::daubechies2());

    const GridSpec& grid() const override { return grid_; }
    std::shared_ptr<const CoefficientLayout> layout() const override { return layout_; }
    std::string name() const override { return "wavelet"; }
    const WaveletBank& bank() const { return bank_; }

    using SparsifyingTransform::analyze;
    using SparsifyingTransform::synthesize;
    void analyze(std::span<const double> f, std::span<double> coeffs) const override;
    void synthesize(std::span<const double> coeffs, std::span<double> f) const override;

private:
    GridSpec grid_;
    WaveletBank bank_;
    std::shared_ptr<const CoefficientLayout> layout_;
};

CoefficientSet wavelet3d_analyze(const Volume& f, const WaveletBank& bank);
Volume wavelet3d_synthesize(const CoefficientSet& c, const GridSpec& grid, const WaveletBank& bank);

}  // namespace cylsh
