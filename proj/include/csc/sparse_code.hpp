#pragma once

#include <Eigen/Dense>
#include <vector>

#include "csc/errors.hpp"

namespace csc {

// Coefficient vector of the global model, length N*m. Layout is
// position-major: entry p*m + j is the coefficient of filter j placed at
// shift position p. The m coefficients of one shift are contiguous.
struct SparseCode {
    Eigen::VectorXd values;
    int m = 1;

    SparseCode() = default;
    SparseCode(Eigen::VectorXd v, int m_) : values(std::move(v)), m(m_) {
        if (m < 1 || values.size() % m != 0)
            throw DimensionMismatchError("code length must be a multiple of m");
    }

    int N() const { return static_cast<int>(values.size()) / m; }
    int size() const { return static_cast<int>(values.size()); }

    // Coefficients of shift position p.
    Eigen::VectorXd block(int p) const {
        if (p < 0 || p >= N()) throw IndexOutOfRangeError("shift position out of range");
        return values.segment(static_cast<Eigen::Index>(p) * m, m);
    }

    // Indices with magnitude strictly above tol, ascending.
    std::vector<int> support(double tol = 0.0) const {
        std::vector<int> idx;
        for (int i = 0; i < size(); ++i)
            if (std::abs(values[i]) > tol) idx.push_back(i);
        return idx;
    }
};

}  // namespace csc
