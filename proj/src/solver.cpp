// SPDX-License-Identifier: Apache-2.0
#include "cylsh/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace cylsh {

namespace {

using Vec = std::vector<double>;

void clip_nonnegative(Vec& v)
{
    for (double& x : v) x = std::max(x, 0.0);
}

// out = a + s1 (b - a) + s2 (a - c)
void extrapolate(const Vec& a, const Vec& b, const Vec& c, double s1, double s2, Vec& out)
{
    out.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + s1 * (b[i] - a[i]) + s2 * (a[i] - c[i]);
}

double half_sq_residual(const Vec& Af, std::span<const double> g, int n_angles, double* residual = nullptr)
{
    double s = 0.0;
    for (std::size_t i = 0; i < Af.size(); ++i) {
        const double d = Af[i] - g[i];
        s += d * d;
    }
    if (residual) *residual = std::sqrt(s);
    return s / (2.0 * n_angles);
}

class Solver {
public:
    Solver(const LinearOperator& A, std::span<const double> g, int n_angles, const Regularizer& reg, double alpha,
           const SolveOptions& opts)
        : A_(A), g_(g), N_(n_angles), reg_(reg), T_(reg.transform()), alpha_(alpha), opts_(opts)
    {
        if (n_angles < 1) throw std::invalid_argument("solve: n_angles must be positive");
        if (!(alpha >= 0.0)) throw std::invalid_argument("solve: alpha must be nonnegative");
        if (reg.p() < 1.0) throw std::invalid_argument("solve: p must be >= 1");
        if (g.size() != A.range_size()) throw std::invalid_argument("solve: data size does not match operator");
        if (A.domain_size() != T_.grid().size())
            throw std::invalid_argument("solve: operator domain does not match transform grid " + T_.grid().str());
        opts.validate();
        double norm = opts.operator_norm;
        if (!(norm > 0.0)) norm = power_method(A).norm;
        lipschitz_ = norm * norm / N_;
        ncoef_ = T_.layout()->total;
    }

    SolveResult run()
    {
        const auto t0 = std::chrono::steady_clock::now();
        SolveResult res;
        res.f = Volume(T_.grid());
        x_.assign(T_.grid().size(), 0.0);
        if (opts_.initial) {
            if (opts_.initial->grid() != T_.grid()) throw std::invalid_argument("solve: initial iterate grid mismatch");
            x_.assign(opts_.initial->data(), opts_.initial->data() + opts_.initial->size());
            if (opts_.nonnegative) clip_nonnegative(x_);
        }
        Ax_.resize(A_.range_size());
        A_.apply(x_, Ax_);
        cx_.resize(ncoef_);
        T_.analyze(x_, cx_);
        Fx_ = half_sq_residual(Ax_, g_, N_) + alpha_ * reg_.value_of_coefficients(cx_);

        if (reg_.p() > 1.0)
            run_smooth(res.report);
        else
            run_l1(res.report);

        std::copy(x_.begin(), x_.end(), res.f.data());
        auto& rep = res.report;
        rep.data_term = half_sq_residual(Ax_, g_, N_, &rep.residual);
        rep.regularizer = reg_.value_of_coefficients(cx_);
        rep.objective = rep.data_term + alpha_ * rep.regularizer;
        if (reg_.p() > 1.0) rep.projected_gradient = projected_gradient_norm();
        rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return res;
    }

private:
    // grad of the smooth part at a point with known A f and coefficients.
    void smooth_gradient(const Vec& Af, const Vec& cf, Vec& grad)
    {
        r_.resize(Af.size());
        for (std::size_t i = 0; i < Af.size(); ++i) r_[i] = Af[i] - g_[i];
        grad.resize(x_.size());
        A_.adjoint(r_, grad);
        const double inv = 1.0 / N_;
        for (double& v : grad) v *= inv;
        if (alpha_ > 0.0 && reg_.p() > 1.0) {
            gc_.resize(ncoef_);
            reg_.coefficient_gradient(cf, gc_);
            tmp_.resize(x_.size());
            T_.synthesize(gc_, tmp_);
            for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += alpha_ * tmp_[i];
        }
    }

    double projected_gradient_norm()
    {
        Vec grad;
        smooth_gradient(Ax_, cx_, grad);
        double s = 0.0;
        for (std::size_t i = 0; i < x_.size(); ++i) {
            double z = x_[i] - grad[i];
            if (opts_.nonnegative) z = std::max(z, 0.0);
            s += (x_[i] - z) * (x_[i] - z);
        }
        return std::sqrt(s);
    }

    // Records an iteration; returns true once the stopping rule fires.
    bool record(SolveReport& rep, int k, double F_prev, double step)
    {
        rep.iterations = k;
        rep.objective_trace.push_back(Fx_);
        rep.final_step = step;
        if (opts_.trace) {
            double res = 0.0;
            half_sq_residual(Ax_, g_, N_, &res);
            *opts_.trace << k << ',' << Fx_ << ',' << res << ',' << reg_.value_of_coefficients(cx_) << ',' << step
                         << '\n';
        }
        const double rel = std::abs(F_prev - Fx_) / std::max(std::abs(Fx_), 1e-300);
        quiet_ = rel < opts_.tolerance ? quiet_ + 1 : 0;
        if (quiet_ >= opts_.patience) {
            rep.converged = true;
            return true;
        }
        return false;
    }

    // Keeps z when it does not increase F, then forms the extrapolated point.
    void advance(const Vec& z, const Vec& Az, const Vec& cz, double Fz, double& t, bool track_coefficients)
    {
        x_old_ = x_;
        Ax_old_ = Ax_;
        if (track_coefficients) cx_old_ = cx_;
        if (Fz <= Fx_) {
            x_ = z;
            Ax_ = Az;
            cx_ = cz;
            Fx_ = Fz;
        } else {
            t = 1.0;  // restart
        }
        const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const double s1 = t / t_new, s2 = (t - 1.0) / t_new;
        extrapolate(x_, z, x_old_, s1, s2, y_);
        extrapolate(Ax_, Az, Ax_old_, s1, s2, Ay_);
        if (track_coefficients) extrapolate(cx_, cz, cx_old_, s1, s2, cy_);
        t = t_new;
    }

    void run_smooth(SolveReport& rep)
    {
        const double tau0 = opts_.initial_step > 0.0 ? opts_.initial_step : 1.0 / std::max(lipschitz_, 1e-300);
        double tau = tau0;
        const bool use_reg = alpha_ > 0.0;
        y_ = x_;
        Ay_ = Ax_;
        cy_ = cx_;
        Vec grad, z, Az(A_.range_size()), cz(ncoef_);
        double t = 1.0;
        for (int k = 1; k <= opts_.max_iterations; ++k) {
            smooth_gradient(Ay_, cy_, grad);
            const double Sy = half_sq_residual(Ay_, g_, N_) + (use_reg ? alpha_ * reg_.value_of_coefficients(cy_) : 0.0);
            tau *= opts_.step_growth;
            double Sz = 0.0;
            for (;;) {
                z.resize(y_.size());
                for (std::size_t i = 0; i < z.size(); ++i) z[i] = y_[i] - tau * grad[i];
                if (opts_.nonnegative) clip_nonnegative(z);
                A_.apply(z, Az);
                if (use_reg) T_.analyze(z, cz);
                Sz = half_sq_residual(Az, g_, N_) + (use_reg ? alpha_ * reg_.value_of_coefficients(cz) : 0.0);
                double lin = 0.0, dd = 0.0;
                for (std::size_t i = 0; i < z.size(); ++i) {
                    const double d = z[i] - y_[i];
                    lin += grad[i] * d;
                    dd += d * d;
                }
                const double model = Sy + lin + opts_.sufficient_decrease * dd / (2.0 * tau);
                if (Sz <= model + 1e-13 * std::abs(Sy)) break;
                tau *= opts_.shrink;
                if (tau < 1e-20 * tau0) {
                    rep.step_underflow = true;
                    break;
                }
            }
            if (rep.step_underflow) {
                rep.iterations = k;
                return;
            }
            if (!use_reg) T_.analyze(z, cz);
            const double F_prev = Fx_;
            advance(z, Az, cz, Sz, t, true);
            if (record(rep, k, F_prev, tau)) return;
        }
    }

    // prox of lambda*||W SH f||_1 + nonnegativity at v, warm-started dual.
    void prox_l1(const Vec& v, double lambda, Vec& z)
    {
        z.resize(v.size());
        if (lambda == 0.0) {
            z = v;
            if (opts_.nonnegative) clip_nonnegative(z);
            return;
        }
        const auto weights = reg_.weights();
        if (u_.size() != ncoef_) u_.assign(ncoef_, 0.0);
        Vec w = u_, u_new(ncoef_), q(ncoef_), f(v.size()), s(v.size());
        double t = 1.0;
        for (int it = 0; it < opts_.inner_iterations; ++it) {
            T_.synthesize(w, s);
            for (std::size_t i = 0; i < f.size(); ++i) f[i] = v[i] - s[i];
            if (opts_.nonnegative) clip_nonnegative(f);
            T_.analyze(f, q);
            for (std::size_t i = 0; i < ncoef_; ++i) q[i] += w[i];
            // Projection onto the box |u| <= lambda*w: q - soft(q).
            u_new = q;
            soft_threshold(u_new, lambda, weights);
            for (std::size_t i = 0; i < ncoef_; ++i) u_new[i] = q[i] - u_new[i];
            const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            const double beta = (t - 1.0) / t_new;
            for (std::size_t i = 0; i < ncoef_; ++i) w[i] = u_new[i] + beta * (u_new[i] - u_[i]);
            u_.swap(u_new);
            t = t_new;
        }
        T_.synthesize(u_, s);
        for (std::size_t i = 0; i < z.size(); ++i) z[i] = v[i] - s[i];
        if (opts_.nonnegative) clip_nonnegative(z);
    }

    void run_l1(SolveReport& rep)
    {
        const double tau = opts_.initial_step > 0.0 ? opts_.initial_step : 1.0 / std::max(lipschitz_, 1e-300);
        y_ = x_;
        Ay_ = Ax_;
        Vec grad, v, z, Az(A_.range_size()), cz(ncoef_);
        double t = 1.0;
        for (int k = 1; k <= opts_.max_iterations; ++k) {
            r_.resize(Ay_.size());
            for (std::size_t i = 0; i < Ay_.size(); ++i) r_[i] = Ay_[i] - g_[i];
            grad.resize(x_.size());
            A_.adjoint(r_, grad);
            v.resize(x_.size());
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = y_[i] - tau * grad[i] / N_;
            prox_l1(v, tau * alpha_, z);
            A_.apply(z, Az);
            T_.analyze(z, cz);
            const double Fz = half_sq_residual(Az, g_, N_) + alpha_ * reg_.value_of_coefficients(cz);
            const double F_prev = Fx_;
            advance(z, Az, cz, Fz, t, false);
            if (record(rep, k, F_prev, tau)) return;
        }
    }

    const LinearOperator& A_;
    std::span<const double> g_;
    int N_;
    const Regularizer& reg_;
    const SparsifyingTransform& T_;
    double alpha_;
    const SolveOptions& opts_;
    double lipschitz_ = 0.0;
    std::size_t ncoef_ = 0;
    int quiet_ = 0;

    Vec x_, Ax_, cx_, x_old_, Ax_old_, cx_old_, y_, Ay_, cy_;
    Vec r_, gc_, tmp_, u_;
    double Fx_ = 0.0;
};

}  // namespace

void SolveOptions::validate() const
{
    if (max_iterations < 1) throw std::invalid_argument("SolveOptions: max_iterations must be >= 1");
    if (!(tolerance > 0.0)) throw std::invalid_argument("SolveOptions: tolerance must be positive");
    if (patience < 1) throw std::invalid_argument("SolveOptions: patience must be >= 1");
    if (!(shrink > 0.0 && shrink < 1.0)) throw std::invalid_argument("SolveOptions: shrink must lie in (0, 1)");
    if (!(sufficient_decrease >= 1.0)) throw std::invalid_argument("SolveOptions: sufficient_decrease must be >= 1");
    if (!(step_growth >= 1.0)) throw std::invalid_argument("SolveOptions: step_growth must be >= 1");
    if (inner_iterations < 1) throw std::invalid_argument("SolveOptions: inner_iterations must be >= 1");
    if (initial_step < 0.0 || operator_norm < 0.0) throw std::invalid_argument("SolveOptions: negative step/norm");
}

double objective(const LinearOperator& A, std::span<const double> g, int n_angles, const Regularizer& reg,
                 double alpha, const Volume& f)
{
    if (f.size() != A.domain_size() || g.size() != A.range_size())
        throw std::invalid_argument("objective: shape mismatch");
    Vec Af(A.range_size());
    A.apply(f.values(), Af);
    const double data = half_sq_residual(Af, g, n_angles);
    return alpha == 0.0 ? data : data + alpha * reg.value(f);
}

double objective(const Volume& f, const Sinogram& g, const Geometry& geom, const Regularizer& reg, double alpha)
{
    DynamicRadon op(geom, g.pattern);
    return objective(op, g.data, g.pattern.angles_per_step(), reg, alpha, f);
}

SolveResult solve(const LinearOperator& A, std::span<const double> g, int n_angles, const Regularizer& reg,
                  double alpha, const SolveOptions& opts)
{
    Solver s(A, g, n_angles, reg, alpha, opts);
    return s.run();
}

SolveResult reconstruct(const Sinogram& g, const Geometry& geom, const Regularizer& reg, double alpha,
                        const SolveOptions& opts)
{
    if (g.n_dtc != geom.n_dtc) throw std::invalid_argument("reconstruct: detector count mismatch");
    DynamicRadon op(geom, g.pattern);
    if (op.grid() != reg.transform().grid())
        throw std::invalid_argument("reconstruct: transform grid " + reg.transform().grid().str() +
                                    " does not match data grid " + op.grid().str());
    return solve(op, g.data, g.pattern.angles_per_step(), reg, alpha, opts);
}

}  // namespace cylsh
