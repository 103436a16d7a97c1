#pragma once

#include <Eigen/Dense>

#include "csc/errors.hpp"

namespace csc {

// Local dictionary: n x m matrix whose columns are the filters. Every global
// atom is one of these columns placed at some cyclic shift of the signal.
// Columns are expected to be unit norm (tolerance 1e-12); construct through
// normalize_local_dictionary when that is not already the case.
struct LocalDictionary {
    Eigen::MatrixXd atoms;  // n rows, m columns

    LocalDictionary() = default;
    explicit LocalDictionary(Eigen::MatrixXd a) : atoms(std::move(a)) {
        if (atoms.rows() < 1 || atoms.cols() < 1)
            throw DimensionMismatchError("local dictionary must be at least 1x1");
    }

    int n() const { return static_cast<int>(atoms.rows()); }
    int m() const { return static_cast<int>(atoms.cols()); }

    bool columns_unit_norm(double tol = 1e-12) const;
};

struct NormalizeResult {
    LocalDictionary dictionary;
    Eigen::VectorXd factors;  // per-column norms of the input
};

// Scales every column to unit norm and reports the applied factors.
// Throws ZeroAtomError if any column norm falls below 1e-14.
NormalizeResult normalize_local_dictionary(const Eigen::MatrixXd& raw);

}  // namespace csc
