// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cylsh/volume.hpp"

namespace cylsh {

/// One block of coefficients sharing a scale (and hence a regularizer weight).
struct Band {
    int scale = -1;  ///< -1 marks the low-pass / approximation band
    std::size_t offset = 0;
    std::size_t size = 0;
    std::string label;
};

/// Band structure of a transform's coefficient vector.
struct CoefficientLayout {
    std::vector<Band> bands;
    std::size_t total = 0;
    int scales = 0;

    /// Scale of every coefficient, expanded (used for weights).
    std::vector<int> scale_per_coefficient() const;
};

/// Coefficients produced by a transform, flat storage plus band layout.
struct CoefficientSet {
    std::shared_ptr<const CoefficientLayout> layout;
    std::vector<double> values;

    CoefficientSet() = default;
    explicit CoefficientSet(std::shared_ptr<const CoefficientLayout> l)
        : layout(std::move(l)), values(layout->total, 0.0)
    {
    }

    std::span<double> band(std::size_t b)
    {
        const auto& bd = layout->bands.at(b);
        return std::span<double>(values).subspan(bd.offset, bd.size);
    }
    std::span<const double> band(std::size_t b) const
    {
        const auto& bd = layout->bands.at(b);
        return std::span<const double>(values).subspan(bd.offset, bd.size);
    }
    std::size_t size() const { return values.size(); }
    double energy() const;
};

/// Linear analysis/synthesis pair. Implementations here are Parseval frames
/// (synthesize is the adjoint of analyze and synthesize * analyze = Id).
class SparsifyingTransform {
public:
    virtual ~SparsifyingTransform() = default;

    virtual const GridSpec& grid() const = 0;
    virtual std::shared_ptr<const CoefficientLayout> layout() const = 0;
    virtual std::string name() const = 0;

    virtual void analyze(std::span<const double> f, std::span<double> coeffs) const = 0;
    virtual void synthesize(std::span<const double> coeffs, std::span<double> f) const = 0;

    CoefficientSet analyze(const Volume& f) const;
    Volume synthesize(const CoefficientSet& c) const;
};

/// Coefficients equal voxel values, one band at scale 0. Useful for toy
/// problems and for checking solver paths independently of any frame.
class IdentityTransform final : public SparsifyingTransform {
public:
    explicit IdentityTransform(GridSpec grid);

    const GridSpec& grid() const override { return grid_; }
    std::shared_ptr<const CoefficientLayout> layout() const override { return layout_; }
    std::string name() const override { return "identity"; }
    void analyze(std::span<const double> f, std::span<double> coeffs) const override;
    void synthesize(std::span<const double> coeffs, std::span<double> f) const override;

private:
    GridSpec grid_;
    std::shared_ptr<const CoefficientLayout> layout_;
};

}  // namespace cylsh
