// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "cylsh/config.hpp"
#include "cylsh/volume.hpp"

namespace cylsh {

/// Star-shaped set {c + r(cos t, sin t) : r <= rho(t)} in the unit square with
/// rho(t) = a0 + sum_k a_k cos(k t) + b_k sin(k t).
struct StarRegion {
    double a0 = 0.3;
    std::vector<double> cos_coef;  ///< a_1, a_2, ...
    std::vector<double> sin_coef;  ///< b_1, b_2, ...
    double cx = 0.5, cy = 0.5;
    double z_bound = 10.0;  ///< Z, bound on sup |rho''|
    double rho_cap = 0.5;   ///< rho_0 < 1

    double rho(double theta) const;
    double rho_second(double theta) const;
    bool contains(double x, double y) const;
};

struct StarDiagnostics {
    double sup_rho2 = 0.0;
    double max_rho = 0.0;
    double min_rho = 0.0;
    bool pass = false;
    std::string message;
};

/// Evaluates rho and its spectral second derivative on a fine theta grid.
StarDiagnostics validate_star(const StarRegion& star, int samples = 4096);

/// h(x) = a - b |x - c|^2 on the unit square.
struct SpatialProfile {
    double a = 1.0;
    double b = 0.0;
    double cx = 0.5, cy = 0.5;
    double operator()(double x, double y) const;
};

/// z(t) = c0 + c1 t + c2 t^2 on [0, 1].
struct TemporalProfile {
    double c0 = 1.0, c1 = 0.0, c2 = 0.0;
    double operator()(double t) const;
};

/// q(t) = sum_k coef[k-1] t^k, so q(0) = 0.
struct Trajectory {
    std::vector<double> coef;
    double operator()(double t) const;
};

struct VideoSpec {
    StarRegion star;
    SpatialProfile h;
    TemporalProfile z;
    Trajectory q1, q2;
    int supersample = 2;  ///< per-axis sub-samples for the indicator

    /// Throws std::invalid_argument when a derivative or range bound fails.
    void validate() const;
};

/// f(x) = h(x' - q(t)) chi_S(x' - q(t)) z(t) at voxel centers of the unit
/// cube, with chi_S averaged over supersample^2 spatial sub-samples.
Volume rasterize_video(const VideoSpec& spec, const GridSpec& grid);

/// f(x) = h(x') chi_S(x') z(t): the motionless special case, written out
/// separately so the reduction q = 0 can be checked exactly.
Volume rasterize_cylindrical(const StarRegion& star, const SpatialProfile& h, const TemporalProfile& z,
                             const GridSpec& grid, int supersample = 2);

/// One n x n frame at time t of the translated star S_t = S + q(t).
std::vector<double> rasterize_frame(const VideoSpec& spec, int n, double t);

/// Default cylindrical cartoon-like function used by the approximation study.
VideoSpec default_cylindrical_cartoon();

/// Time-dependent ellipse intensity: either a linear ramp v0 -> v1 over the
/// sequence or mean + amp * sin(2 pi (cycles * tau + phase)).
struct Ellipse {
    double cx = 0, cy = 0, a = 0.1, b = 0.1, angle_deg = 0;
    enum class Kind { ramp, periodic } kind = Kind::ramp;
    double p0 = 0, p1 = 0, p2 = 0, p3 = 0;

    double intensity(double tau) const;
    bool contains(double x, double y) const;
};

/// Shapes are painted in order onto [-1, 1]^2; later shapes overwrite.
struct CartoonSpec {
    std::vector<Ellipse> ellipses;
    int supersample = 2;
};

CartoonSpec default_cartoon_spec();
/// Reads `ellipse = cx cy a b angle kind p0 p1 [p2 p3]` lines (and an
/// optional `supersample`) from section [phantom].
CartoonSpec cartoon_spec_from_config(const Config& cfg);

struct PhantomPair {
    Volume low;   ///< n x n x kappa
    Volume high;  ///< 2n x 2n x kappa, same continuous object
};

/// Normalized time of step k among kappa: k/(kappa-1), or 0 when kappa = 1.
double step_time(int k, int kappa);

Volume rasterize_cartoon(const CartoonSpec& spec, int n, int kappa);
PhantomPair cartoon_phantom(int n, int kappa, const CartoonSpec& spec = default_cartoon_spec());

struct StempoSpec {
    double ring_inner = 0.80, ring_outer = 0.90, ring_value = 0.8;
    double square_side = 0.30, square_value = 1.0;
    double start_x = -0.45, start_y = -0.35, end_x = 0.45, end_y = 0.35;
    int supersample = 2;
};

/// Square center at step k (linear in k).
void stempo_square_center(const StempoSpec& spec, int k, int kappa, double& x, double& y);
Volume rasterize_stempo(const StempoSpec& spec, int n, int kappa);
PhantomPair stempo_surrogate(int n, int kappa, const StempoSpec& spec = StempoSpec{});

/// 2x2x1 block average of a 2n x 2n x kappa volume.
Volume block_average_2x(const Volume& high);

}  // namespace cylsh
