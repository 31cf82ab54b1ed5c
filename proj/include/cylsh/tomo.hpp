// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cylsh/linear_operator.hpp"
#include "cylsh/volume.hpp"

namespace cylsh {

/// Parallel-beam geometry for an n x n image centered at the origin.
struct Geometry {
    int n = 0;               ///< image side in pixels
    int n_dtc = 0;           ///< detector bins
    double pixel = 1.0;      ///< pixel pitch
    double bin_width = 1.0;  ///< detector pitch

    /// Unit pitch, N_dtc = smallest integer >= n*sqrt(2) with the parity of n.
    static Geometry standard(int n);
    /// Twice the resolution of `low` over the same field of view: side 2n,
    /// 2*N_dtc bins, both pitches halved.
    static Geometry refined(const Geometry& low);

    void validate() const;
    bool operator==(const Geometry&) const = default;
};

enum class AngleRange { full, half, alternating };

std::string to_string(AngleRange r);
AngleRange angle_range_from_string(const std::string& s);

struct SamplingPattern {
    std::vector<std::vector<double>> angles;  ///< one list per time step
    std::uint64_t seed = 0;
    AngleRange range = AngleRange::full;

    int kappa() const { return static_cast<int>(angles.size()); }
    /// Angles per step (all steps share the count); throws when ragged or empty.
    int angles_per_step() const;
    bool operator==(const SamplingPattern&) const = default;
};

/// kappa blocks of N x N_dtc detector values, row-major per block.
struct Sinogram {
    SamplingPattern pattern;
    int n_dtc = 0;
    std::vector<double> data;

    std::size_t block_size() const { return static_cast<std::size_t>(pattern.angles_per_step()) * n_dtc; }
    std::span<double> block(int t) { return std::span<double>(data).subspan(t * block_size(), block_size()); }
    std::span<const double> block(int t) const
    {
        return std::span<const double>(data).subspan(t * block_size(), block_size());
    }
    bool operator==(const Sinogram&) const = default;
};

enum class NoiseScenario { decreasing, fixed };

std::string to_string(NoiseScenario s);
NoiseScenario noise_scenario_from_string(const std::string& s);

struct NoiseSpec {
    NoiseScenario scenario = NoiseScenario::decreasing;
    double c_delta = 0.6;
    int n_min = 24;
    double data_sup = 1.0;  ///< ||A f_dag||_inf
};

/// Projection of one n x n slice (x fastest) at the given angles into a
/// angles.size() x n_dtc block. Pixel-driven linear interpolation on the detector.
void radon_forward(std::span<const double> slice, const Geometry& geom, std::span<const double> angles,
                   std::span<double> block);
/// Exact transpose of radon_forward; overwrites `slice`.
void radon_adjoint(std::span<const double> block, const Geometry& geom, std::span<const double> angles,
                   std::span<double> slice);

/// Block-diagonal space-time operator: time step t projected at its own angles.
class DynamicRadon final : public LinearOperator {
public:
    DynamicRadon(Geometry geom, SamplingPattern pattern);

    const Geometry& geometry() const { return geom_; }
    const SamplingPattern& pattern() const { return pattern_; }
    GridSpec grid() const { return {geom_.n, geom_.n, pattern_.kappa()}; }

    std::size_t domain_size() const override;
    std::size_t range_size() const override;
    void apply(std::span<const double> f, std::span<double> g) const override;
    void adjoint(std::span<const double> g, std::span<double> f) const override;

private:
    Geometry geom_;
    SamplingPattern pattern_;
    std::size_t block_;
};

Sinogram dynamic_forward(const Volume& f, const Geometry& geom, const SamplingPattern& pattern);
Volume dynamic_adjoint(const Sinogram& g, const Geometry& geom);

/// kappa independent draws of N uniform angles. Step t uses its own stream
/// derived from (seed, t).
SamplingPattern sample_angles(int n_angles, int kappa, AngleRange range, std::uint64_t seed);

/// Evenly spaced angles k*2*pi/count, repeated for each of kappa steps.
SamplingPattern equispaced_angles(int count, int kappa);

double noise_level(const NoiseSpec& spec, int n_angles);

/// g + delta * standard normal, one stream per time step derived from (seed, t).
Sinogram add_noise(const Sinogram& g, double delta, std::uint64_t seed);

/// Average adjacent detector pairs of a fine sinogram (n_dtc must be even).
Sinogram bin_detector_pairs(const Sinogram& fine);

/// Inverse-crime-free data: projects the 2n truth on the refined geometry,
/// bins detector pairs down to `low` and adds noise.
Sinogram simulate_data(const Volume& f_highres, const Geometry& low, const SamplingPattern& pattern, double delta,
                       std::uint64_t seed);

/// Power-method estimate of ||A_theta||.
double operator_norm(const Geometry& geom, const SamplingPattern& pattern, double rel_tol = 1e-6);

void write_sinogram(const std::string& path, const Sinogram& g);
Sinogram read_sinogram(const std::string& path);

}  // namespace cylsh
