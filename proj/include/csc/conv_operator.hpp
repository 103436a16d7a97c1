#pragma once

#include <Eigen/Dense>

#include "csc/local_dictionary.hpp"
#include "csc/sparse_code.hpp"

namespace csc {

struct SigmaEstimate {
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
};

// Global convolutional dictionary over a length-N signal with periodic
// boundary. The operator is kept implicit: column p*m + j is filter j of the
// local dictionary placed cyclically at shift position p. All products are
// evaluated by direct sliding correlations, O(N*n*m).
class ConvOperator {
public:
    ConvOperator(LocalDictionary local, int N);

    int n() const { return local_.n(); }
    int m() const { return local_.m(); }
    int N() const { return N_; }
    int atom_count() const { return N_ * m(); }
    int stripe_width() const { return (2 * n() - 1) * m(); }
    const LocalDictionary& local() const { return local_; }

    // X = D * code. Accepts a raw coefficient vector of length N*m.
    Eigen::VectorXd apply(const Eigen::VectorXd& code) const;
    Eigen::VectorXd apply(const SparseCode& code) const { return apply(code.values); }

    // D^T * signal, evaluated patch by patch: block p of the result is the
    // local dictionary transposed times the patch at p.
    Eigen::VectorXd adjoint(const Eigen::VectorXd& signal) const;

    // Dense N x N*m matrix. Guarded: refuses when N*m exceeds 2^22.
    Eigen::MatrixXd materialize() const;

    // One global atom as a dense column.
    Eigen::VectorXd column(int p, int j) const;

    // Length-n patch starting at position i, cyclic.
    Eigen::VectorXd patch(const Eigen::VectorXd& signal, int i) const;
    // Adjoint of patch extraction: place a patch back at position i.
    Eigen::VectorXd scatter_patch(const Eigen::VectorXd& p, int i) const;

    // Stripe of a code at position i: the (2n-1) coefficient blocks of the
    // shifts that can touch the patch at i, ordered by shift.
    Eigen::VectorXd stripe(const Eigen::VectorXd& code, int i) const;
    Eigen::VectorXd scatter_stripe(const Eigen::VectorXd& s, int i) const;

    // Center block of a stripe: the coefficients of the patch's own shift.
    Eigen::VectorXd center(const Eigen::VectorXd& stripe) const;

    // Stripe dictionary: n x (2n-1)m matrix mapping a stripe to its patch.
    Eigen::MatrixXd stripe_dictionary() const;

    // Inner product of the atoms (p, j1) and (p + delta, j2); shift invariant,
    // so only the cyclic offset delta matters. Exact for every N >= n,
    // including windows that wrap.
    double atom_inner(int j1, int j2, int delta) const;

    // Largest absolute inner product over distinct atom pairs. Only
    // overlapping shift offsets are scanned; disjoint pairs are exactly zero.
    double mutual_coherence() const;

    // Power iteration on D D^T; returns sqrt of the dominant eigenvalue.
    SigmaEstimate largest_singular_value(double tol = 1e-6, int max_iterations = 1000) const;

private:
    LocalDictionary local_;
    int N_;
};

}  // namespace csc
