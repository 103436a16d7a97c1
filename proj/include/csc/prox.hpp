#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace csc {

// Penalty flavor of the solvers: l1 gives the soft-threshold proximal map the
// guarantees are stated for; l0 swaps in hard thresholding and is offered
// without any of those guarantees.
enum class PenaltyMode { L1, L0 };

inline double soft_threshold(double v, double t) {
    const double mag = std::abs(v) - t;
    return mag > 0.0 ? std::copysign(mag, v) : 0.0;
}

// Proximal map of t * l0: keep an entry when v^2 > 2t.
inline double hard_threshold(double v, double t) { return v * v > 2.0 * t ? v : 0.0; }

inline double apply_prox(PenaltyMode mode, double v, double t) {
    return mode == PenaltyMode::L1 ? soft_threshold(v, t) : hard_threshold(v, t);
}

inline Eigen::VectorXd apply_prox(PenaltyMode mode, const Eigen::VectorXd& v, double t) {
    Eigen::VectorXd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = apply_prox(mode, v[i], t);
    return out;
}

inline double penalty_value(PenaltyMode mode, const Eigen::VectorXd& v) {
    if (mode == PenaltyMode::L1) return v.lpNorm<1>();
    double count = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (v[i] != 0.0) count += 1.0;
    return count;
}

}  // namespace csc
