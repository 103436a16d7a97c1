#include "csc/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "csc/errors.hpp"

namespace csc {

SupportSet::SupportSet(std::vector<int> idx, int n_, int m_, int N_)
    : indices(std::move(idx)), n(n_), m(m_), N(N_) {
    if (n < 1 || m < 1 || N < n) throw DimensionMismatchError("bad support shape");
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    for (int i : indices)
        if (i < 0 || i >= N * m) throw IndexOutOfRangeError("support index out of range");
}

bool SupportSet::contains(int i) const {
    return std::binary_search(indices.begin(), indices.end(), i);
}

SupportSet support_set(const ConvOperator& op, const Eigen::VectorXd& code, double tol) {
    if (code.size() != op.atom_count())
        throw DimensionMismatchError("code length does not match N*m");
    std::vector<int> idx;
    for (int i = 0; i < code.size(); ++i)
        if (std::abs(code[i]) > tol) idx.push_back(i);
    return SupportSet(std::move(idx), op.n(), op.m(), op.N());
}

int l0_norm(const Eigen::VectorXd& v, double tol) {
    int count = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v[i]) > tol) ++count;
    return count;
}

namespace {

// Max window sum of per-position block counts. A window covers the distinct
// positions within cyclic distance n-1, so when 2n-1 >= N it covers the whole
// ring and the result is the total count.
int max_window_count(const std::vector<int>& counts, int n) {
    const int N = static_cast<int>(counts.size());
    if (2 * n - 1 >= N) {
        int total = 0;
        for (int c : counts) total += c;
        return total;
    }
    int best = 0;
    for (int i = 0; i < N; ++i) {
        int sum = 0;
        for (int k = 0; k < 2 * n - 1; ++k) sum += counts[((i - n + 1 + k) % N + N) % N];
        best = std::max(best, sum);
    }
    return best;
}

}  // namespace

int l0_inf_norm(const Eigen::VectorXd& code, int n, int m, double tol) {
    if (m < 1 || code.size() % m != 0) throw DimensionMismatchError("code length must be a multiple of m");
    const int N = static_cast<int>(code.size()) / m;
    if (N < n) throw DimensionMismatchError("code shorter than one filter span");
    std::vector<int> counts(N, 0);
    for (int p = 0; p < N; ++p)
        for (int j = 0; j < m; ++j)
            if (std::abs(code[static_cast<Eigen::Index>(p) * m + j]) > tol) ++counts[p];
    return max_window_count(counts, n);
}

int l0_inf_norm(const ConvOperator& op, const Eigen::VectorXd& code, double tol) {
    if (code.size() != op.atom_count())
        throw DimensionMismatchError("code length does not match N*m");
    return l0_inf_norm(code, op.n(), op.m(), tol);
}

int support_l0_inf(const SupportSet& s) {
    std::vector<int> counts(s.N, 0);
    for (int i : s.indices) ++counts[i / s.m];
    return max_window_count(counts, s.n);
}

double local_noise_level(const ConvOperator& op, const Eigen::VectorXd& noise) {
    if (noise.size() != op.N()) throw DimensionMismatchError("noise length does not match N");
    double best = 0.0;
    for (int i = 0; i < op.N(); ++i) best = std::max(best, op.patch(noise, i).norm());
    return best;
}

namespace {
void check_mu_k(double mu, int k) {
    if (!(mu > 0.0)) throw SpecInvalidError("coherence must be positive");
    if (k < 0) throw SpecInvalidError("sparsity must be non-negative");
}
}  // namespace

double srip_bound(double mu, int k) {
    check_mu_k(mu, k);
    if (k < 1) throw SpecInvalidError("sparsity must be at least 1");
    return (k - 1) * mu;
}

std::pair<double, double> gram_eigen_bounds(double mu, int k) {
    const double d = srip_bound(mu, k);
    return {1.0 - d, 1.0 + d};
}

std::optional<double> stability_bound_p0inf(double eps, double mu, int k) {
    check_mu_k(mu, k);
    if (!(k < 0.5 * (1.0 + 1.0 / mu))) return std::nullopt;
    return 4.0 * eps * eps / (1.0 - (2 * k - 1) * mu);
}

std::optional<double> stability_bound_p0inf_srip(double eps, double delta2k) {
    if (!(delta2k < 1.0)) return std::nullopt;
    return 4.0 * eps * eps / (1.0 - delta2k);
}

bool omp_hypothesis(double mu, int k, double eps_local, double gamma_min) {
    check_mu_k(mu, k);
    if (!(gamma_min > 0.0)) throw SpecInvalidError("gamma_min must be positive");
    if (eps_local < 0.0) throw SpecInvalidError("eps_local must be non-negative");
    return k < 0.5 * (1.0 + 1.0 / mu) - (eps_local / gamma_min) / mu;
}

double omp_phase_line(double mu, int k) {
    check_mu_k(mu, k);
    return 0.5 * mu * (1.0 + 1.0 / mu) - mu * k;
}

std::optional<double> omp_error_bound(double eps, double mu, int k) {
    check_mu_k(mu, k);
    if (!(mu * (k - 1) < 1.0)) return std::nullopt;
    return eps * eps / (1.0 - mu * (k - 1));
}

bool erc_coherence_condition(double mu, int k) {
    check_mu_k(mu, k);
    return k < 0.5 * (1.0 + 1.0 / mu);
}

std::optional<double> erc_l1_bound(double mu, int k) {
    check_mu_k(mu, k);
    if (!((k - 1) * mu < 1.0)) return std::nullopt;
    return k * mu / (1.0 - (k - 1) * mu);
}

bool bp_hypothesis(double mu, int k) {
    check_mu_k(mu, k);
    return k < (1.0 + 1.0 / mu) / 3.0;
}

double bp_linf_bound(double eps_local) {
    if (eps_local < 0.0) throw SpecInvalidError("eps_local must be non-negative");
    return 7.5 * eps_local;
}

}  // namespace csc
