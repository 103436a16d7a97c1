#pragma once

#include <Eigen/Dense>

#include "csc/conv_operator.hpp"
#include "csc/pursuit.hpp"

namespace csc {

// Greedy pursuit configuration. Exactly one stopping rule is active: run a
// fixed number of selections, or stop once the residual norm drops to the
// threshold. max_iterations caps either rule (0 means the atom count); a run
// whose rule is still unmet at the cap is returned with converged=false.
struct OmpConfig {
    enum class Stop { FixedIterations, ResidualThreshold };
    Stop stop = Stop::FixedIterations;
    int target_iterations = 0;
    double residual_threshold = 0.0;
    int max_iterations = 0;
    // Cholesky update pivot below which the restricted Gram is declared
    // numerically singular.
    double ls_tolerance = 1e-12;

    static OmpConfig fixed(int k);
    static OmpConfig residual(double eps);
};

// Orthogonal matching pursuit against the implicit convolutional dictionary.
// Each iteration picks the atom best correlated with the residual (ties break
// to the lowest index; an already-selected winner is skipped and counted),
// then refits all coefficients by least squares on the support via the
// restricted Gram, updated by an incremental Cholesky factorization.
PursuitResult omp(const ConvOperator& op, const Eigen::VectorXd& y, const OmpConfig& cfg);

}  // namespace csc
