// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cylsh/solver.hpp"
#include "cylsh/tomo.hpp"
#include "cylsh/transform.hpp"
#include "cylsh/volume.hpp"

namespace cylsh {

enum class TransformKind { shearlet, wavelet };

std::string to_string(TransformKind k);
TransformKind transform_kind_from_string(const std::string& s);

/// Cylindrical shearlet (scales = 0 picks the largest admissible count, at
/// most 3) or the 3-level periodic Daubechies-2 wavelet.
std::shared_ptr<const SparsifyingTransform> make_transform(TransformKind kind, const GridSpec& grid, int scales = 0);

/// decreasing: c_alpha / N; fixed: c_alpha * N^(-1/3).
double alpha_schedule(NoiseScenario scenario, int n_angles, double c_alpha);

struct MonomialFit {
    double c = 0.0;
    double b = 0.0;
    int num_points = 0;
};

/// Least-squares fit of log(value) = log(c) + b log(N).
MonomialFit fit_monomial(std::span<const double> n, std::span<const double> values);

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Exceptions are
/// rethrown (first by index) after all workers finish.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

/// Thread count: CYLSH_THREADS when set, else `requested` when > 0, else
/// the hardware concurrency.
int resolve_threads(int requested);

enum class PhantomKind { cartoon, stempo };
std::string to_string(PhantomKind k);
PhantomKind phantom_kind_from_string(const std::string& s);

struct ExperimentConfig {
    PhantomKind phantom = PhantomKind::cartoon;
    int n = 64;
    int kappa = 16;
    NoiseScenario scenario = NoiseScenario::decreasing;
    std::vector<int> n_grid{8, 16, 32, 64};
    int trials = 3;
    double c_alpha = 3.0;
    double c_delta = 0.05;
    int n_min = 0;  ///< 0: first entry of n_grid
    double p = 1.5;
    std::optional<double> beta;
    TransformKind transform = TransformKind::shearlet;
    int scales = 0;
    AngleRange range = AngleRange::full;
    std::uint64_t seed = 20240601;
    SolveOptions solver;
    int threads = 1;
    bool keep_reconstructions = false;
    bool record_timing = false;  ///< wall time in CSV rows (breaks byte identity)

    void validate() const;
};

struct RateRecord {
    std::string scenario;
    std::string transform;
    double p = 0.0;
    int n_angles = 0;
    int trial = 0;
    double delta = 0.0;
    double alpha = 0.0;
    double bregman = 0.0;
    double rel_l2 = 0.0;
    double ssim = 0.0;
    int iterations = 0;
    double seconds = 0.0;
    bool failed = false;
    std::string error;
};

struct AggregateRow {
    int n_angles = 0;
    double mean = 0.0;    ///< mean Bregman distance over successful trials
    double stddev = 0.0;  ///< sample standard deviation (0 for one trial)
    int count = 0;
    int failures = 0;
};

struct RateResult {
    std::vector<RateRecord> records;  ///< ordered by (N, trial)
    std::vector<AggregateRow> aggregate;
    MonomialFit fit;
    double data_sup = 0.0;                ///< ||A f_dag||_inf
    std::vector<Volume> reconstructions;  ///< parallel to records when kept
};

/// ||A f_dag||_inf over 360 equispaced angles (refined geometry, binned).
double reference_data_sup(const Volume& f_highres, const Geometry& low);

std::vector<AggregateRow> aggregate_records(std::span<const RateRecord> records);

RateResult run_rate_experiment(const ExperimentConfig& cfg);

void write_records_csv(std::ostream& os, std::span<const RateRecord> records);
std::vector<RateRecord> read_records_csv(std::istream& is);
void write_fit_csv(std::ostream& os, const std::string& scenario, const std::string& transform, double p,
                   const MonomialFit& fit);

/// (N, value) points from a CSV with an `N` column and a value column
/// (`bregman` when present, else `value`, else the second column). Rows
/// sharing N are averaged.
void read_points_csv(std::istream& is, std::vector<double>& n, std::vector<double>& values);

/// Mean SSIM over slices with a 7x7 uniform window; the dynamic range is
/// taken from `reference`.
double ssim(const Volume& estimate, const Volume& reference);

struct NTermCurve {
    std::string transform;
    std::vector<double> n_terms;
    std::vector<double> errors;       ///< ||f - f_N||^2
    std::vector<double> kept_energy;  ///< sum of the kept squared coefficients
    MonomialFit fit;
};

/// Log-spaced term counts over [sqrt(M)/10, 10 sqrt(M)], M = voxel count.
std::vector<std::size_t> middle_decades_grid(std::size_t voxels, int points = 9);

/// Keeps the largest-magnitude coefficients (ties broken by index), then
/// synthesizes and records the squared error, for each transform and count.
std::vector<NTermCurve> nterm_approximation_study(const Volume& f,
                                                  std::span<const std::shared_ptr<const SparsifyingTransform>> transforms,
                                                  std::span<const std::size_t> n_terms);

/// Per-voxel unbiased sample variance (divisor count - 1).
Volume variance_study(std::span<const Volume> samples);

/// Trial-to-trial spread check: shearlet std <= slack * wavelet std at the
/// smallest N of both tables.
bool spread_soft_check(std::span<const AggregateRow> shearlet, std::span<const AggregateRow> wavelet,
                       double slack = 1.5);

}  // namespace cylsh
