#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "csc/conv_operator.hpp"
#include "csc/prox.hpp"
#include "csc/pursuit.hpp"

namespace csc {

// Geometric continuation of the penalty weight: start at `initial` (or, when
// initial <= 0, at 0.1 * ||D^T y||_inf computed from the data), multiply by
// `decay` each iteration, never drop below `floor`.  Convergence tests only
// become binding once the weight has reached the floor.
struct LambdaSchedule {
    double initial = 0.0;
    double decay = 0.99;
    double floor = 1e-8;
};

struct BpConfig {
    std::optional<double> lambda;             // fixed penalty weight
    std::optional<LambdaSchedule> schedule;   // or annealed weight; exactly one is set
    int max_iterations = 100000;
    double convergence_tol = 1e-8;   // relative l2 change of the code; the splitting
                                     // solver additionally gates its consensus residuals
                                     // on this threshold
    double step_safety = 1.01;       // step 1/c with c = step_safety * sigma_max^2
    double rho = 1.0;                // augmented-Lagrangian weight of the splitting solver
    PenaltyMode mode = PenaltyMode::L1;
    double sigma_tol = 1e-6;         // power-iteration tolerance for sigma_max
    std::vector<int> checkpoints;    // iteration numbers whose code is snapshotted

    static BpConfig fixed_lambda(double value);
    static BpConfig annealed(LambdaSchedule schedule = LambdaSchedule{});

    void validate() const;  // throws SpecInvalidError
};

// One per-iteration trace record.  The consensus residuals are zero for the
// gradient solvers, which have no splitting variables; code_change is the
// relative l2 movement of the global code this iteration — the dual-side
// convergence measure shared by all three solvers.
struct TraceRow {
    int iteration = 0;
    double objective = 0.0;
    double residual_norm = 0.0;
    double primal_center = 0.0;
    double primal_stripe = 0.0;
    double wall_time = 0.0;
    double code_change = 0.0;
};
using TraceFn = std::function<void(const TraceRow&)>;

struct BpResult : PursuitResult {
    double lambda_final = 0.0;   // penalty weight in effect at the last iteration
    double sigma_max = 0.0;      // spectral estimate used for the step (gradient solvers)
    double primal_center = 0.0;  // final consensus residuals (splitting solver)
    double primal_stripe = 0.0;
    std::vector<std::pair<int, Eigen::VectorXd>> snapshots;
};

// Proximal-gradient descent on the global objective
//   0.5 ||y - D gamma||_2^2 + lambda * ||gamma||_1,
// the reference the local solvers are measured against.
BpResult bp_global_reference(const ConvOperator& op, const Eigen::VectorXd& y,
                             const BpConfig& config, const TraceFn& trace = {});

// The same iteration carried out patch by patch: each position pulls its patch
// of the current residual, correlates against the local dictionary, and
// thresholds its own coefficient block.  Iterates match bp_global_reference
// float for float.
BpResult bp_ist_local(const ConvOperator& op, const Eigen::VectorXd& y,
                      const BpConfig& config, const TraceFn& trace = {});

// Consensus splitting over stripes: every position keeps a private stripe
// vector plus an auxiliary thresholded center block, and the global code is
// re-assembled by averaging the overlapping stripe copies each sweep.
BpResult bp_admm_local(const ConvOperator& op, const Eigen::VectorXd& y,
                       const BpConfig& config, const TraceFn& trace = {});

// First-order optimality certificate for the l1-penalized objective at a
// candidate code: off the support the residual correlations must stay within
// lambda, on the support they must equal lambda * sign(coefficient).
struct KktReport {
    double lambda = 0.0;
    double max_correlation = 0.0;       // ||D^T (y - D gamma)||_inf
    double max_support_deviation = 0.0; // max_j in supp |d_j^T r - lambda sign(gamma_j)|
    int support_size = 0;

    bool satisfied(double rel_tol = 1e-4) const {
        return max_correlation <= lambda * (1.0 + rel_tol) &&
               max_support_deviation <= lambda * rel_tol;
    }
};

KktReport kkt_check(const ConvOperator& op, const Eigen::VectorXd& y,
                    const Eigen::VectorXd& code, double lambda, double support_tol = 1e-10);

}  // namespace csc
