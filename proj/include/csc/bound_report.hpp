#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "csc/conv_operator.hpp"
#include "csc/text_io.hpp"

namespace csc {

// Hypothesis flag and, exactly when the hypothesis holds, the bound value.
struct TheoremRecord {
    bool hypothesis_holds = false;
    std::optional<double> bound;
};

// Everything the recovery guarantees say about one (code, noise) instance.
struct BoundReport {
    int N = 0, n = 0, m = 0;
    int l0 = 0;
    int l0_inf = 0;
    double mu = 0.0;
    double eps_global = 0.0;
    double eps_local = 0.0;
    std::optional<double> gamma_min_abs;  // absent for an empty code

    TheoremRecord p0inf;  // feasible-code stability, squared l2
    TheoremRecord omp;    // greedy pursuit, squared l2
    TheoremRecord bp;     // convex relaxation, sup norm

    KeyValueFile to_key_values() const;

    // Fixed CSV layout shared by all exports; absent values are empty cells,
    // flags are 0/1.
    static std::vector<std::string> csv_header();
    std::vector<std::string> csv_row() const;
};

// Evaluates every bound for a code and noise realization. The coherence is
// passed in so batch runs can reuse one computation.
BoundReport evaluate_bounds(const ConvOperator& op, const Eigen::VectorXd& code,
                            const Eigen::VectorXd& noise, double mu, double zero_tol = 1e-10);

}  // namespace csc
