// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "cylsh/fft.hpp"
#include "cylsh/transform.hpp"
#include "cylsh/volume.hpp"

namespace cylsh {

/// Identifies one subband of the cylindrical shearlet system.
///
/// Interior shearlets satisfy |shear| < 2^s (s the shear level of the
/// scale); boundary shearlets sit at |shear| = 2^s and are shared by both
/// cones, so their cone is 0.
struct ShearletIndex {
    enum class Kind { lowpass, interior, boundary };

    Kind kind = Kind::lowpass;
    int cone = 0;    ///< 1 or 2 for interior, 0 otherwise
    int scale = -1;  ///< -1 for the low-pass
    int shear = 0;

    std::string label() const;
    bool operator==(const ShearletIndex&) const = default;
};

using Matrix3 = std::array<std::array<int, 3>, 3>;

/// Anisotropic dilation A_(cone): diag(4,2,4) for cone 1, diag(2,4,4) for cone 2.
Matrix3 dilation_matrix(int cone);
/// Shear B_(cone), in its Fourier-side (transposed) form; x3 is never sheared.
Matrix3 shear_matrix(int cone);

/// Default shear level per scale, max(j, 1); three scales give 8, 8 and 16
/// directions after boundary merging.
std::vector<int> default_shear_levels(int scales);

/// Number of directional subbands at shear level s after boundary merging.
constexpr int directions_for_shear_level(int s) { return 1 << (s + 2); }

/// Fourier-domain cylindrical shearlet filters on a 3D DFT grid.
///
/// Filters are real, even in frequency and stored on the r2c half spectrum.
/// After construction, sum_index |filter|^2 == 1 at every DFT frequency up
/// to rounding. Immutable and safe to share across threads.
class FilterBank {
public:
    FilterBank(GridSpec grid, int scales, std::vector<int> shear_levels = {});

    const GridSpec& grid() const { return grid_; }
    int scales() const { return scales_; }
    const std::vector<int>& shear_levels() const { return shear_levels_; }
    const std::vector<ShearletIndex>& indices() const { return indices_; }
    std::size_t count() const { return indices_.size(); }

    /// Half-spectrum filter values for subband `i`.
    std::span<const double> filter(std::size_t i) const { return filters_.at(i); }
    const RealFFT3& fft() const { return fft_; }

    /// Directional subbands per scale (boundary shearlets counted once).
    std::vector<int> directions_per_scale() const;

    /// max over the DFT grid of |sum |filter|^2 - 1|.
    double partition_defect() const;

    /// Maps a signed DFT index to the continuous frequency variable used by
    /// the windows along an axis of length n.
    double frequency(int signed_index, int n) const;

private:
    GridSpec grid_;
    int scales_;
    std::vector<int> shear_levels_;
    std::vector<ShearletIndex> indices_;
    std::vector<std::vector<double>> filters_;
    RealFFT3 fft_;
};

/// Undecimated cylindrical shearlet transform: one full-size real subband per
/// index. analyze/synthesize form an exact adjoint pair and a Parseval frame.
class CylindricalShearlet final : public SparsifyingTransform {
public:
    explicit CylindricalShearlet(std::shared_ptr<const FilterBank> bank);
    CylindricalShearlet(GridSpec grid, int scales);

    const GridSpec& grid() const override { return bank_->grid(); }
    std::shared_ptr<const CoefficientLayout> layout() const override { return layout_; }
    std::string name() const override { return "shearlet"; }
    const FilterBank& bank() const { return *bank_; }

    using SparsifyingTransform::analyze;
    using SparsifyingTransform::synthesize;
    void analyze(std::span<const double> f, std::span<double> coeffs) const override;
    void synthesize(std::span<const double> coeffs, std::span<double> f) const override;

    /// Subband position of `idx` in the coefficient layout; throws if absent.
    std::size_t band_of(const ShearletIndex& idx) const;

private:
    std::shared_ptr<const FilterBank> bank_;
    std::shared_ptr<const CoefficientLayout> layout_;
};

}  // namespace cylsh
