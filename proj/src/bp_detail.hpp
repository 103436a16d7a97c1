#pragma once

#include <algorithm>
#include <cmath>

#include "csc/bp.hpp"
#include "csc/errors.hpp"

// Shared plumbing of the three penalized solvers: penalty-weight continuation
// and config checks.  Internal to the library.
namespace csc::detail {

// Penalty weight at iteration 1.  A non-positive scheduled start is replaced
// by 0.1 * ||D^T y||_inf so the first sweeps keep only dominant correlations.
inline double initial_lambda(const BpConfig& config, const ConvOperator& op,
                             const Eigen::VectorXd& y) {
    if (config.lambda) return *config.lambda;
    const LambdaSchedule& s = *config.schedule;
    if (s.initial > 0.0) return s.initial;
    const double corr = op.adjoint(y).lpNorm<Eigen::Infinity>();
    return std::max(0.1 * corr, s.floor);
}

inline double next_lambda(const BpConfig& config, double lambda) {
    if (config.lambda) return lambda;
    const LambdaSchedule& s = *config.schedule;
    return std::max(lambda * s.decay, s.floor);
}

// Convergence checks only bind once the continuation has bottomed out;
// a fixed weight is "bottomed out" from the start.
inline bool lambda_settled(const BpConfig& config, double lambda) {
    if (config.lambda) return true;
    return lambda <= config.schedule->floor * (1.0 + 1e-12);
}

inline bool wants_snapshot(const BpConfig& config, int iteration) {
    return std::find(config.checkpoints.begin(), config.checkpoints.end(), iteration) !=
           config.checkpoints.end();
}

}  // namespace csc::detail
