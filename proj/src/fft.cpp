// SPDX-License-Identifier: Apache-2.0
#include "cylsh/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace cylsh {

namespace {

std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

struct FftwBuffer {
    explicit FftwBuffer(std::size_t bytes) : ptr(fftw_malloc(bytes))
    {
        if (!ptr) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(ptr); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    void* ptr;
};

}  // namespace

RealFFT3::RealFFT3(GridSpec grid) : grid_(grid)
{
    if (grid.nx <= 0 || grid.ny <= 0 || grid.nt <= 0)
        throw std::invalid_argument("RealFFT3: dimensions must be positive");
    FftwBuffer real(sizeof(double) * grid.size());
    FftwBuffer spec(sizeof(fftw_complex) * spectrum_size());
    const int dims[3] = {grid.nt, grid.ny, grid.nx};
    std::lock_guard lock(planner_mutex());
    plan_fwd_ = fftw_plan_dft_r2c(3, dims, static_cast<double*>(real.ptr),
                                  static_cast<fftw_complex*>(spec.ptr),
                                  FFTW_ESTIMATE | FFTW_UNALIGNED);
    plan_inv_ = fftw_plan_dft_c2r(3, dims, static_cast<fftw_complex*>(spec.ptr),
                                  static_cast<double*>(real.ptr),
                                  FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan_fwd_ || !plan_inv_) throw std::runtime_error("RealFFT3: FFTW planning failed");
}

RealFFT3::~RealFFT3()
{
    std::lock_guard lock(planner_mutex());
    if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_inv_) fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
}

RealFFT3::RealFFT3(RealFFT3&& o) noexcept
    : grid_(o.grid_),
      plan_fwd_(std::exchange(o.plan_fwd_, nullptr)),
      plan_inv_(std::exchange(o.plan_inv_, nullptr))
{
}

RealFFT3& RealFFT3::operator=(RealFFT3&& o) noexcept
{
    std::swap(grid_, o.grid_);
    std::swap(plan_fwd_, o.plan_fwd_);
    std::swap(plan_inv_, o.plan_inv_);
    return *this;
}

void RealFFT3::forward(std::span<const double> in, std::span<Complex> out) const
{
    if (in.size() != grid_.size() || out.size() != spectrum_size())
        throw std::invalid_argument("RealFFT3::forward: size mismatch");
    // r2c does not modify its input.
    fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_fwd_), const_cast<double*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
}

void RealFFT3::inverse(std::span<const Complex> in, std::span<double> out) const
{
    if (in.size() != spectrum_size() || out.size() != grid_.size())
        throw std::invalid_argument("RealFFT3::inverse: size mismatch");
    std::vector<Complex> scratch(in.begin(), in.end());
    fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_inv_),
                         reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
}

}  // namespace cylsh
