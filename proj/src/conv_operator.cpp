#include "csc/conv_operator.hpp"

#include <cmath>

#include "csc/rng.hpp"

namespace csc {

namespace {
constexpr int kDenseGuard = 1 << 22;
}

bool LocalDictionary::columns_unit_norm(double tol) const {
    for (int j = 0; j < m(); ++j)
        if (std::abs(atoms.col(j).norm() - 1.0) > tol) return false;
    return true;
}

NormalizeResult normalize_local_dictionary(const Eigen::MatrixXd& raw) {
    NormalizeResult out;
    out.factors.resize(raw.cols());
    Eigen::MatrixXd scaled = raw;
    for (int j = 0; j < raw.cols(); ++j) {
        const double norm = raw.col(j).norm();
        if (norm < 1e-14) throw ZeroAtomError("dictionary column " + std::to_string(j) + " has zero norm");
        out.factors[j] = norm;
        scaled.col(j) /= norm;
    }
    out.dictionary = LocalDictionary(std::move(scaled));
    return out;
}

ConvOperator::ConvOperator(LocalDictionary local, int N) : local_(std::move(local)), N_(N) {
    if (N_ < local_.n())
        throw DimensionMismatchError("signal length must be at least the filter length");
    if (!local_.columns_unit_norm())
        throw SpecInvalidError("local dictionary columns must be unit norm");
}

Eigen::VectorXd ConvOperator::apply(const Eigen::VectorXd& code) const {
    if (code.size() != atom_count())
        throw DimensionMismatchError("code length does not match N*m");
    const int n_ = n(), m_ = m();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(N_);
    Eigen::VectorXd contrib(n_);
    for (int p = 0; p < N_; ++p) {
        contrib.noalias() = local_.atoms * code.segment(static_cast<Eigen::Index>(p) * m_, m_);
        const int tail = std::min(n_, N_ - p);
        out.segment(p, tail) += contrib.head(tail);
        if (tail < n_) out.head(n_ - tail) += contrib.tail(n_ - tail);
    }
    return out;
}

Eigen::VectorXd ConvOperator::adjoint(const Eigen::VectorXd& signal) const {
    if (signal.size() != N_)
        throw DimensionMismatchError("signal length does not match N");
    const int n_ = n(), m_ = m();
    Eigen::VectorXd out(atom_count());
    Eigen::VectorXd pat(n_);
    for (int p = 0; p < N_; ++p) {
        const int tail = std::min(n_, N_ - p);
        pat.head(tail) = signal.segment(p, tail);
        if (tail < n_) pat.tail(n_ - tail) = signal.head(n_ - tail);
        out.segment(static_cast<Eigen::Index>(p) * m_, m_).noalias() = local_.atoms.transpose() * pat;
    }
    return out;
}

Eigen::MatrixXd ConvOperator::materialize() const {
    if (atom_count() > kDenseGuard)
        throw TooLargeError("dense dictionary would exceed the size guard");
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(N_, atom_count());
    for (int p = 0; p < N_; ++p)
        for (int j = 0; j < m(); ++j)
            for (int t = 0; t < n(); ++t)
                D((p + t) % N_, p * m() + j) = local_.atoms(t, j);
    return D;
}

Eigen::VectorXd ConvOperator::column(int p, int j) const {
    if (p < 0 || p >= N_ || j < 0 || j >= m())
        throw IndexOutOfRangeError("atom index out of range");
    Eigen::VectorXd col = Eigen::VectorXd::Zero(N_);
    for (int t = 0; t < n(); ++t) col[(p + t) % N_] = local_.atoms(t, j);
    return col;
}

Eigen::VectorXd ConvOperator::patch(const Eigen::VectorXd& signal, int i) const {
    if (signal.size() != N_)
        throw DimensionMismatchError("signal length does not match N");
    if (i < 0 || i >= N_) throw IndexOutOfRangeError("patch position out of range");
    const int n_ = n();
    Eigen::VectorXd out(n_);
    const int tail = std::min(n_, N_ - i);
    out.head(tail) = signal.segment(i, tail);
    if (tail < n_) out.tail(n_ - tail) = signal.head(n_ - tail);
    return out;
}

Eigen::VectorXd ConvOperator::scatter_patch(const Eigen::VectorXd& p, int i) const {
    if (p.size() != n()) throw DimensionMismatchError("patch length does not match n");
    if (i < 0 || i >= N_) throw IndexOutOfRangeError("patch position out of range");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(N_);
    for (int t = 0; t < n(); ++t) out[(i + t) % N_] += p[t];
    return out;
}

Eigen::VectorXd ConvOperator::stripe(const Eigen::VectorXd& code, int i) const {
    if (code.size() != atom_count())
        throw DimensionMismatchError("code length does not match N*m");
    if (i < 0 || i >= N_) throw IndexOutOfRangeError("stripe position out of range");
    const int m_ = m(), w = 2 * n() - 1;
    Eigen::VectorXd out(stripe_width());
    for (int s = 0; s < w; ++s) {
        const int p = ((i - n() + 1 + s) % N_ + N_) % N_;
        out.segment(static_cast<Eigen::Index>(s) * m_, m_) =
            code.segment(static_cast<Eigen::Index>(p) * m_, m_);
    }
    return out;
}

Eigen::VectorXd ConvOperator::scatter_stripe(const Eigen::VectorXd& s, int i) const {
    if (s.size() != stripe_width())
        throw DimensionMismatchError("stripe length does not match (2n-1)m");
    if (i < 0 || i >= N_) throw IndexOutOfRangeError("stripe position out of range");
    const int m_ = m(), w = 2 * n() - 1;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(atom_count());
    for (int k = 0; k < w; ++k) {
        const int p = ((i - n() + 1 + k) % N_ + N_) % N_;
        out.segment(static_cast<Eigen::Index>(p) * m_, m_) +=
            s.segment(static_cast<Eigen::Index>(k) * m_, m_);
    }
    return out;
}

Eigen::VectorXd ConvOperator::center(const Eigen::VectorXd& stripe) const {
    if (stripe.size() != stripe_width())
        throw DimensionMismatchError("stripe length does not match (2n-1)m");
    return stripe.segment(static_cast<Eigen::Index>(n() - 1) * m(), m());
}

Eigen::MatrixXd ConvOperator::stripe_dictionary() const {
    const int n_ = n(), m_ = m();
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(n_, stripe_width());
    for (int s = 0; s < 2 * n_ - 1; ++s)
        for (int j = 0; j < m_; ++j)
            for (int r = 0; r < n_; ++r) {
                const int t = r - s + n_ - 1;  // filter row visible at patch row r
                if (t >= 0 && t < n_) omega(r, s * m_ + j) = local_.atoms(t, j);
            }
    return omega;
}

double ConvOperator::atom_inner(int j1, int j2, int delta) const {
    const int n_ = n();
    const int d = (delta % N_ + N_) % N_;
    double sum = 0.0;
    for (int t1 = 0; t1 < n_; ++t1) {
        const int t2 = ((t1 - d) % N_ + N_) % N_;
        if (t2 < n_) sum += local_.atoms(t1, j1) * local_.atoms(t2, j2);
    }
    return sum;
}

double ConvOperator::mutual_coherence() const {
    const int n_ = n(), m_ = m();
    double best = 0.0;
    for (int delta = 0; delta < N_; ++delta) {
        if (delta > n_ - 1 && delta < N_ - n_ + 1) continue;  // disjoint supports
        for (int j1 = 0; j1 < m_; ++j1)
            for (int j2 = 0; j2 < m_; ++j2) {
                if (delta == 0 && j1 == j2) continue;
                best = std::max(best, std::abs(atom_inner(j1, j2, delta)));
            }
    }
    return best;
}

SigmaEstimate ConvOperator::largest_singular_value(double tol, int max_iterations) const {
    CounterRng rng(0x5CA1AB1Eull);
    Eigen::VectorXd v(N_);
    for (int i = 0; i < N_; ++i) v[i] = rng.gaussian();
    v /= v.norm();

    SigmaEstimate est;
    double lambda_prev = 0.0;
    for (int it = 1; it <= max_iterations; ++it) {
        const Eigen::VectorXd a = adjoint(v);
        const double lambda = a.squaredNorm();  // v^T D D^T v
        est.value = std::sqrt(lambda);
        est.iterations = it;
        if (lambda == 0.0) {
            est.converged = true;
            return est;
        }
        if (it > 1 && std::abs(lambda - lambda_prev) <= tol * lambda) {
            est.converged = true;
            return est;
        }
        lambda_prev = lambda;
        Eigen::VectorXd w = apply(a);
        v = w / w.norm();
    }
    est.converged = false;
    return est;
}

}  // namespace csc
