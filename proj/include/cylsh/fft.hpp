// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "cylsh/volume.hpp"

namespace cylsh {

using Complex = std::complex<double>;

/// Real-to-complex / complex-to-real 3D DFT over a GridSpec.
///
/// The half spectrum has extent nt x ny x (nx/2+1), x1 halved. Both
/// directions are unnormalized (FFTW convention); callers divide by
/// grid.size() after an inverse. Plans are built with FFTW_ESTIMATE so that
/// identical inputs give bit-identical outputs across processes. Executing a
/// plan is thread-safe; construction serializes on a global planner lock.
class RealFFT3 {
public:
    explicit RealFFT3(GridSpec grid);
    ~RealFFT3();

    RealFFT3(const RealFFT3&) = delete;
    RealFFT3& operator=(const RealFFT3&) = delete;
    RealFFT3(RealFFT3&&) noexcept;
    RealFFT3& operator=(RealFFT3&&) noexcept;

    const GridSpec& grid() const { return grid_; }
    int half_nx() const { return grid_.nx / 2 + 1; }
    std::size_t spectrum_size() const
    {
        return static_cast<std::size_t>(half_nx()) * grid_.ny * grid_.nt;
    }

    void forward(std::span<const double> in, std::span<Complex> out) const;
    /// Destroys nothing: `in` is copied to scratch before the c2r transform.
    void inverse(std::span<const Complex> in, std::span<double> out) const;

private:
    GridSpec grid_;
    void* plan_fwd_ = nullptr;
    void* plan_inv_ = nullptr;
};

}  // namespace cylsh
