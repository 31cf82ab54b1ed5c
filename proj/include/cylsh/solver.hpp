// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "cylsh/linear_operator.hpp"
#include "cylsh/regularizer.hpp"
#include "cylsh/tomo.hpp"
#include "cylsh/volume.hpp"

namespace cylsh {

struct SolveOptions {
    int max_iterations = 2000;
    double tolerance = 1e-6;  ///< relative objective change
    int patience = 5;         ///< consecutive iterations below tolerance
    double shrink = 0.5;      ///< backtracking factor in (0, 1)
    double sufficient_decrease = 1.0;  ///< weight of the quadratic model term, >= 1
    double step_growth = 1.0;          ///< trial step expansion per iteration (>= 1)
    double initial_step = 0.0;         ///< 0: N / ||A||^2 from the power method
    double operator_norm = 0.0;        ///< known ||A|| (skips the power method when > 0)
    int inner_iterations = 50;         ///< dual iterations of the p = 1 prox
    bool nonnegative = true;
    std::optional<Volume> initial;  ///< defaults to zero
    std::ostream* trace = nullptr;  ///< CSV rows: iteration,objective,residual,R,step

    void validate() const;
};

struct SolveReport {
    int iterations = 0;
    double objective = 0.0;
    double residual = 0.0;    ///< ||A f - g||
    double data_term = 0.0;   ///< ||A f - g||^2 / (2N)
    double regularizer = 0.0; ///< R(f)
    double projected_gradient = 0.0;  ///< ||f - P(f - grad F(f))|| (p > 1 only)
    double final_step = 0.0;
    bool converged = false;
    bool step_underflow = false;
    double seconds = 0.0;
    std::vector<double> objective_trace;  ///< F of the kept iterate, per iteration
};

struct SolveResult {
    Volume f;
    SolveReport report;
};

/// F(f) = ||A f - g||^2 / (2 n_angles) + alpha R(f).
double objective(const LinearOperator& A, std::span<const double> g, int n_angles, const Regularizer& reg,
                 double alpha, const Volume& f);
double objective(const Volume& f, const Sinogram& g, const Geometry& geom, const Regularizer& reg, double alpha);

/// Minimizes F over volumes on reg.transform().grid() (subject to f >= 0 when
/// requested). p > 1 uses monotone accelerated projected gradient with
/// backtracking; p = 1 uses monotone accelerated proximal gradient with an
/// inexact dual prox for the analysis l1 term.
SolveResult solve(const LinearOperator& A, std::span<const double> g, int n_angles, const Regularizer& reg,
                  double alpha, const SolveOptions& opts = {});

/// solve() with the block-diagonal Radon operator of the sinogram's pattern.
SolveResult reconstruct(const Sinogram& g, const Geometry& geom, const Regularizer& reg, double alpha,
                        const SolveOptions& opts = {});

}  // namespace cylsh
