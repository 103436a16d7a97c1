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

BpResult bp_global_reference(const ConvOperator& op, const Eigen::VectorXd& y,
                             const BpConfig& config, const TraceFn& trace) {
    config.validate();
    if (y.size() != op.N())
        throw DimensionMismatchError("signal length does not match the operator");
    const auto t0 = std::chrono::steady_clock::now();

    const SigmaEstimate sigma = op.largest_singular_value(config.sigma_tol);
    const double c = config.step_safety * sigma.value * sigma.value;
    double lambda = detail::initial_lambda(config, op, y);

    BpResult result;
    result.sigma_max = sigma.value;
    result.lambda_final = lambda;

    Eigen::VectorXd gamma = Eigen::VectorXd::Zero(op.atom_count());
    Eigen::VectorXd residual = y;
    result.residual_norms.push_back(residual.norm());

    for (int it = 1; it <= config.max_iterations; ++it) {
        const Eigen::VectorXd grad = op.adjoint(residual);
        const Eigen::VectorXd candidate = gamma + grad / c;
        Eigen::VectorXd next = apply_prox(config.mode, candidate, lambda / c);

        const double change = (next - gamma).norm();
        const double scale = std::max(next.norm(), 1e-300);
        gamma = std::move(next);
        residual = y - op.apply(gamma);

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
