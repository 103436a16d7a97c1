#include <algorithm>
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

// Every position works only with local quantities: its length-n patch of the
// current residual, the n x m local dictionary, and its own coefficient
// block.  The global estimate is re-assembled by adding up the n-sample
// contributions.  The arithmetic matches bp_global_reference operation for
// operation, so both solvers produce the same iterates; this routine is the
// shape a distributed implementation would take.
BpResult bp_ist_local(const ConvOperator& op, const Eigen::VectorXd& y,
                      const BpConfig& config, const TraceFn& trace) {
    config.validate();
    if (y.size() != op.N())
        throw DimensionMismatchError("signal length does not match the operator");
    const auto t0 = std::chrono::steady_clock::now();

    const int n_ = op.n(), m_ = op.m(), N_ = op.N();
    const Eigen::MatrixXd& atoms = op.local().atoms;

    const SigmaEstimate sigma = op.largest_singular_value(config.sigma_tol);
    const double c = config.step_safety * sigma.value * sigma.value;
    double lambda = detail::initial_lambda(config, op, y);

    BpResult result;
    result.sigma_max = sigma.value;
    result.lambda_final = lambda;

    Eigen::VectorXd gamma = Eigen::VectorXd::Zero(op.atom_count());
    Eigen::VectorXd residual = y;
    result.residual_norms.push_back(residual.norm());

    Eigen::VectorXd next(op.atom_count());
    Eigen::VectorXd pat(n_), contrib(n_);
    for (int it = 1; it <= config.max_iterations; ++it) {
        // Each position correlates its residual patch against the local
        // dictionary and thresholds its own block.
        const double threshold = lambda / c;
        for (int p = 0; p < N_; ++p) {
            const int tail = std::min(n_, N_ - p);
            pat.head(tail) = residual.segment(p, tail);
            if (tail < n_) pat.tail(n_ - tail) = residual.head(n_ - tail);
            const Eigen::VectorXd grad_block = atoms.transpose() * pat;
            const Eigen::VectorXd candidate =
                gamma.segment(static_cast<Eigen::Index>(p) * m_, m_) + grad_block / c;
            for (int j = 0; j < m_; ++j)
                next[static_cast<Eigen::Index>(p) * m_ + j] =
                    apply_prox(config.mode, candidate[j], threshold);
        }

        const double change = (next - gamma).norm();
        const double scale = std::max(next.norm(), 1e-300);
        gamma = next;

        // Superpose the per-position contributions into the new estimate.
        Eigen::VectorXd estimate = Eigen::VectorXd::Zero(N_);
        for (int p = 0; p < N_; ++p) {
            contrib.noalias() = atoms * gamma.segment(static_cast<Eigen::Index>(p) * m_, m_);
            const int tail = std::min(n_, N_ - p);
            estimate.segment(p, tail) += contrib.head(tail);
            if (tail < n_) estimate.head(n_ - tail) += contrib.tail(n_ - tail);
        }
        residual = y - estimate;

        const double rnorm = residual.norm();
        const double objective =
            0.5 * rnorm * rnorm + lambda * penalty_value(config.mode, gamma);
        result.residual_norms.push_back(rnorm);
        result.objective.push_back(objective);
        result.iterations = it;
        result.lambda_final = lambda;
        if (trace)
            trace({it, objective, rnorm, 0.0, 0.0, seconds_since(t0), change / scale});
        if (detail::wants_snapshot(config, it)) result.snapshots.emplace_back(it, gamma);

        if (detail::lambda_settled(config, lambda) &&
            change <= config.convergence_tol * scale) {
            result.converged = true;
            break;
        }
        lambda = detail::next_lambda(config, lambda);
    }

    result.code = SparseCode{std::move(gamma), op.m()};
    result.support = support_set(op, result.code.values);
    result.wall_time = seconds_since(t0);
    return result;
}

}  // namespace csc
