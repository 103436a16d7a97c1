#include <chrono>
#include <cmath>
#include <utility>

#include "csc/bp.hpp"
#include "csc/errors.hpp"
#include "csc/metrics.hpp"
#include "bp_detail.hpp"

namespace csc {

namespace {
double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}
}  // namespace

// Splitting form of the penalized objective: each position i owns a private
// stripe vector g_i constrained to agree with the slice S_i gamma of the
// global code, plus a thresholded copy a_i of its center block.  One sweep
// updates, in order, the thresholded centers, the private stripes (a shared
// positive-definite normal matrix factorized once), the global code by
// averaging the overlapping stripe copies, and the two dual blocks.  Every
// update touches only stripe-local data; the global code appears only through
// its slices.
BpResult bp_admm_local(const ConvOperator& op, const Eigen::VectorXd& y,
                       const BpConfig& config, const TraceFn& trace) {
    config.validate();
    if (y.size() != op.N())
        throw DimensionMismatchError("signal length does not match the operator");
    const auto t0 = std::chrono::steady_clock::now();

    const int n_ = op.n(), m_ = op.m(), N_ = op.N();
    const int w = op.stripe_width();
    const int width = 2 * n_ - 1;
    const int center0 = (n_ - 1) * m_;
    const double rho = config.rho;

    const Eigen::MatrixXd omega = op.stripe_dictionary();

    // Normal matrix of the per-position subproblem; identical for every
    // position, so it is factorized a single time.
    Eigen::MatrixXd normal = (omega.transpose() * omega) / n_;
    normal.diagonal().array() += rho;
    normal.diagonal().segment(center0, m_).array() += rho;
    Eigen::LDLT<Eigen::MatrixXd> subproblem(normal);
    if (subproblem.info() != Eigen::Success)
        throw RankDeficientError("per-position normal matrix could not be factorized");

    // Fixed data part of every right-hand side: correlations of the patch at i
    // with the stripe dictionary, weighted by the patch-averaging factor 1/n.
    Eigen::MatrixXd data_term(w, N_);
    for (int i = 0; i < N_; ++i)
        data_term.col(i) = omega.transpose() * op.patch(y, i) / n_;

    Eigen::MatrixXd stripes = Eigen::MatrixXd::Zero(w, N_);     // private copies g_i
    Eigen::MatrixXd centers = Eigen::MatrixXd::Zero(m_, N_);    // thresholded a_i
    Eigen::MatrixXd dual_center = Eigen::MatrixXd::Zero(m_, N_);
    Eigen::MatrixXd dual_stripe = Eigen::MatrixXd::Zero(w, N_);
    Eigen::VectorXd gamma = Eigen::VectorXd::Zero(op.atom_count());

    double lambda = detail::initial_lambda(config, op, y);
    BpResult result;
    result.lambda_final = lambda;
    result.residual_norms.push_back(y.norm());

    // The thresholded centers stacked position-major are the reported code:
    // unlike the consensus average they are exactly sparse, which the
    // optimality certificate and support comparisons rely on.
    Eigen::VectorXd code_estimate = Eigen::VectorXd::Zero(op.atom_count());

    Eigen::VectorXd rhs(w), accumulator(op.atom_count());
    Eigen::VectorXd previous_gamma = gamma;
    for (int it = 1; it <= config.max_iterations; ++it) {
        // Threshold the center block of every private stripe.
        for (int i = 0; i < N_; ++i) {
            centers.col(i) = apply_prox(
                config.mode, stripes.col(i).segment(center0, m_) + dual_center.col(i),
                lambda / rho);
            code_estimate.segment(static_cast<Eigen::Index>(i) * m_, m_) = centers.col(i);
        }

        // Refresh the private stripes against data, consensus, and centers.
        for (int i = 0; i < N_; ++i) {
            rhs = data_term.col(i) + rho * (op.stripe(gamma, i) + dual_stripe.col(i));
            rhs.segment(center0, m_) += rho * (centers.col(i) - dual_center.col(i));
            stripes.col(i) = subproblem.solve(rhs);
        }

        // Rebuild the global code: each coefficient block is the average of
        // the width overlapping stripe copies that contain it.
        accumulator.setZero();
        for (int i = 0; i < N_; ++i) {
            for (int k = 0; k < width; ++k) {
                const int p = ((i - n_ + 1 + k) % N_ + N_) % N_;
                accumulator.segment(static_cast<Eigen::Index>(p) * m_, m_) +=
                    stripes.col(i).segment(static_cast<Eigen::Index>(k) * m_, m_) -
                    dual_stripe.col(i).segment(static_cast<Eigen::Index>(k) * m_, m_);
            }
        }
        gamma = accumulator / width;

        // Dual ascent and the two consensus gaps.
        double gap_center = 0.0, gap_stripe = 0.0;
        for (int i = 0; i < N_; ++i) {
            const Eigen::VectorXd d = stripes.col(i).segment(center0, m_) - centers.col(i);
            dual_center.col(i) += d;
            gap_center = std::max(gap_center, d.norm());
        }
        for (int i = 0; i < N_; ++i) {
            const Eigen::VectorXd s = op.stripe(gamma, i) - stripes.col(i);
            dual_stripe.col(i) += s;
            gap_stripe = std::max(gap_stripe, s.norm());
        }

        // Relative movement of the global code: small consensus gaps alone do
        // not imply stationarity (the duals can still be drifting), so the
        // stop requires the code itself to have settled as well.
        const double change = (gamma - previous_gamma).norm() /
                              std::max(gamma.norm(), 1e-300);
        previous_gamma = gamma;

        const Eigen::VectorXd residual = y - op.apply(code_estimate);
        const double rnorm = residual.norm();
        const double objective =
            0.5 * rnorm * rnorm + lambda * penalty_value(config.mode, code_estimate);
        result.residual_norms.push_back(rnorm);
        result.objective.push_back(objective);
        result.iterations = it;
        result.lambda_final = lambda;
        result.primal_center = gap_center;
        result.primal_stripe = gap_stripe;
        if (trace)
            trace({it, objective, rnorm, gap_center, gap_stripe, seconds_since(t0), change});
        if (detail::wants_snapshot(config, it)) result.snapshots.emplace_back(it, code_estimate);

        if (detail::lambda_settled(config, lambda) && gap_center <= config.convergence_tol &&
            gap_stripe <= config.convergence_tol && change <= config.convergence_tol) {
            result.converged = true;
            break;
        }
        lambda = detail::next_lambda(config, lambda);
    }

    result.code = SparseCode{std::move(code_estimate), op.m()};
    result.support = support_set(op, result.code.values);
    result.wall_time = seconds_since(t0);
    return result;
}

}  // namespace csc
