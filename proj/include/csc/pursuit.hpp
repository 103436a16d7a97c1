#pragma once

#include <vector>

#include "csc/metrics.hpp"
#include "csc/sparse_code.hpp"

namespace csc {

// Outcome shared by all pursuit solvers. residual_norms starts with the norm
// of the input signal and appends one value per completed iteration; convex
// solvers fill the objective trace instead of the support selection data.
struct PursuitResult {
    SparseCode code;
    SupportSet support;
    std::vector<double> residual_norms;
    std::vector<double> objective;
    int iterations = 0;
    double wall_time = 0.0;
    bool converged = false;
    int reselection_warnings = 0;
};

}  // namespace csc
