#include "csc/exact_metrics.hpp"

#include <algorithm>
#include <cmath>

#include "csc/errors.hpp"

namespace csc {

namespace {

struct Enumerator {
    int n, m, N, k;
    long long limit;
    long long visited = 0;
    const std::function<void(const std::vector<int>&, int)>* visit;
    std::vector<int> windows;  // active count seen by each stripe
    std::vector<int> chosen;

    // A window counts the distinct positions within cyclic distance n-1, so
    // when 2n-1 >= N every window sees every position exactly once.
    int lo() const { return 2 * n - 1 >= N ? 0 : -(n - 1); }
    int hi() const { return 2 * n - 1 >= N ? N - 1 : n - 1; }

    void add(int p, int delta) {
        for (int off = lo(); off <= hi(); ++off) windows[((p + off) % N + N) % N] += delta;
    }

    bool within_limit(int p) const {
        for (int off = lo(); off <= hi(); ++off)
            if (windows[((p + off) % N + N) % N] > k) return false;
        return true;
    }

    void recurse(int idx) {
        if (idx == N * m) {
            if (chosen.empty()) return;
            if (++visited > limit) throw TooLargeError("support enumeration exceeds the candidate guard");
            (*visit)(chosen, *std::max_element(windows.begin(), windows.end()));
            return;
        }
        recurse(idx + 1);
        const int p = idx / m;
        chosen.push_back(idx);
        add(p, 1);
        if (within_limit(p)) recurse(idx + 1);
        add(p, -1);
        chosen.pop_back();
    }
};

}  // namespace

long long enumerate_supports(int n, int m, int N, int k, long long max_candidates,
                             const std::function<void(const std::vector<int>&, int)>& visit) {
    if (n < 1 || m < 1 || N < n) throw DimensionMismatchError("bad model shape");
    if (k < 1) throw SpecInvalidError("stripe sparsity must be at least 1");
    Enumerator e;
    e.n = n;
    e.m = m;
    e.N = N;
    e.k = k;
    e.limit = max_candidates;
    e.visit = &visit;
    e.windows.assign(N, 0);
    e.recurse(0);
    return e.visited;
}

Eigen::MatrixXd restricted_gram(const ConvOperator& op, const std::vector<int>& indices) {
    const int m = op.m();
    const int t = static_cast<int>(indices.size());
    Eigen::MatrixXd G(t, t);
    for (int a = 0; a < t; ++a)
        for (int b = a; b < t; ++b) {
            const int pa = indices[a] / m, ja = indices[a] % m;
            const int pb = indices[b] / m, jb = indices[b] % m;
            G(a, b) = G(b, a) = op.atom_inner(ja, jb, pb - pa);
        }
    return G;
}

double srip_exact(const ConvOperator& op, int k, long long max_candidates) {
    if (k < 1 || k > op.stripe_width())
        throw SpecInvalidError("no support can attain the requested stripe sparsity");
    double worst = 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    enumerate_supports(op.n(), op.m(), op.N(), k, max_candidates,
                       [&](const std::vector<int>& idx, int attained) {
                           if (attained != k) return;
                           eig.compute(restricted_gram(op, idx), Eigen::EigenvaluesOnly);
                           const double lo = eig.eigenvalues().minCoeff();
                           const double hi = eig.eigenvalues().maxCoeff();
                           worst = std::max({worst, hi - 1.0, 1.0 - lo});
                       });
    return worst;
}

double erc_constant(const ConvOperator& op, const SupportSet& support) {
    if (support.n != op.n() || support.m != op.m() || support.N != op.N())
        throw DimensionMismatchError("support shape does not match the operator");
    if (support.indices.empty()) return 1.0;
    if (support.size() > 4096) throw TooLargeError("support exceeds the dense pseudoinverse guard");

    const int t = support.size();
    Eigen::MatrixXd DT(op.N(), t);
    for (int a = 0; a < t; ++a)
        DT.col(a) = op.column(support.indices[a] / op.m(), support.indices[a] % op.m());

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(DT, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.singularValues()[t - 1] <= 1e-10)
        throw RankDeficientError("restricted dictionary is rank deficient");

    // Shift positions active in the support; an off-support atom only matters
    // if its window meets one of them.
    std::vector<char> active(op.N(), 0);
    for (int i : support.indices) active[i / op.m()] = 1;

    double worst = 0.0;
    for (int p = 0; p < op.N(); ++p) {
        bool overlaps = false;
        for (int off = -(op.n() - 1); off <= op.n() - 1 && !overlaps; ++off)
            overlaps = active[((p + off) % op.N() + op.N()) % op.N()] != 0;
        if (!overlaps) continue;
        for (int j = 0; j < op.m(); ++j) {
            const int idx = p * op.m() + j;
            if (support.contains(idx)) continue;
            const Eigen::VectorXd x = svd.solve(op.column(p, j));
            worst = std::max(worst, x.lpNorm<1>());
        }
    }
    return 1.0 - worst;
}

}  // namespace csc
