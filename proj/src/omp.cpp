#include "csc/omp.hpp"

#include <chrono>
#include <cmath>

#include "csc/errors.hpp"

namespace csc {

OmpConfig OmpConfig::fixed(int k) {
    if (k < 0) throw SpecInvalidError("iteration count must be non-negative");
    OmpConfig c;
    c.stop = Stop::FixedIterations;
    c.target_iterations = k;
    return c;
}

OmpConfig OmpConfig::residual(double eps) {
    if (eps < 0.0) throw SpecInvalidError("residual threshold must be non-negative");
    OmpConfig c;
    c.stop = Stop::ResidualThreshold;
    c.residual_threshold = eps;
    return c;
}

PursuitResult omp(const ConvOperator& op, const Eigen::VectorXd& y, const OmpConfig& cfg) {
    if (y.size() != op.N()) throw DimensionMismatchError("signal length does not match N");
    if (cfg.stop == OmpConfig::Stop::FixedIterations && cfg.target_iterations > op.atom_count())
        throw SpecInvalidError("cannot select more atoms than the dictionary holds");

    const auto t0 = std::chrono::steady_clock::now();
    const int m = op.m();
    int cap = cfg.max_iterations > 0 ? cfg.max_iterations : op.atom_count();
    if (cfg.stop == OmpConfig::Stop::FixedIterations) cap = std::min(cap, cfg.target_iterations);

    std::vector<int> picked;               // selection order
    std::vector<char> in_support(op.atom_count(), 0);
    Eigen::MatrixXd L(cap, cap);           // lower Cholesky factor of the support Gram
    Eigen::VectorXd b(cap);                // atom-signal inner products
    Eigen::VectorXd x;                     // support coefficients
    Eigen::VectorXd r = y;

    PursuitResult res;
    res.residual_norms.push_back(r.norm());

    auto rule_met = [&]() {
        if (cfg.stop == OmpConfig::Stop::ResidualThreshold)
            return res.residual_norms.back() <= cfg.residual_threshold;
        return static_cast<int>(picked.size()) == cfg.target_iterations;
    };

    while (!rule_met() && static_cast<int>(picked.size()) < cap) {
        const Eigen::VectorXd c = op.adjoint(r);

        int best = -1, best_any = -1;
        double best_val = 0.0, best_any_val = 0.0;
        for (int i = 0; i < c.size(); ++i) {
            const double v = std::abs(c[i]);
            if (v > best_any_val) {
                best_any_val = v;
                best_any = i;
            }
            if (!in_support[i] && v > best_val) {
                best_val = v;
                best = i;
            }
        }
        if (best < 0 || best_val == 0.0) break;  // nothing selectable
        if (best_any >= 0 && in_support[best_any]) ++res.reselection_warnings;

        const int k = static_cast<int>(picked.size());
        const int p = best / m, j = best % m;

        // Cholesky update with the new atom; unit atoms put 1 on the Gram diagonal.
        Eigen::VectorXd g(k);
        for (int a = 0; a < k; ++a)
            g[a] = op.atom_inner(picked[a] % m, j, p - picked[a] / m);
        const Eigen::VectorXd w =
            k > 0 ? L.topLeftCorner(k, k).triangularView<Eigen::Lower>().solve(g).eval()
                  : Eigen::VectorXd();
        const double pivot = 1.0 - w.squaredNorm();
        if (pivot < cfg.ls_tolerance)
            throw RankDeficientError("restricted Gram is numerically singular");
        L.row(k).head(k) = w.transpose();
        L(k, k) = std::sqrt(pivot);

        picked.push_back(best);
        in_support[best] = 1;
        b[k] = op.local().atoms.col(j).dot(op.patch(y, p));

        // Refit on the support and rebuild the residual from scratch.
        const int t = k + 1;
        x = L.topLeftCorner(t, t).triangularView<Eigen::Lower>().solve(b.head(t));
        L.topLeftCorner(t, t).triangularView<Eigen::Lower>().transpose().solveInPlace(x);
        Eigen::VectorXd fit = Eigen::VectorXd::Zero(op.N());
        for (int a = 0; a < t; ++a) {
            const int pa = picked[a] / m, ja = picked[a] % m;
            for (int u = 0; u < op.n(); ++u)
                fit[(pa + u) % op.N()] += x[a] * op.local().atoms(u, ja);
        }
        r = y - fit;
        res.residual_norms.push_back(r.norm());
    }

    Eigen::VectorXd code = Eigen::VectorXd::Zero(op.atom_count());
    for (size_t a = 0; a < picked.size(); ++a) code[picked[a]] = x.size() ? x[a] : 0.0;
    res.code = SparseCode(std::move(code), m);
    res.support = SupportSet(picked, op.n(), m, op.N());
    res.iterations = static_cast<int>(picked.size());
    res.converged = rule_met();
    res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace csc
