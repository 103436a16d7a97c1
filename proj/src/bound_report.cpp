#include "csc/bound_report.hpp"

#include <cmath>
#include <limits>

#include "csc/errors.hpp"
#include "csc/metrics.hpp"

namespace csc {

namespace {

std::string opt_cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

std::vector<std::string> BoundReport::csv_header() {
    return {"N",   "n",       "m",        "l0",     "l0_inf",        "mu",         "eps",
            "eps_L", "gamma_min", "omp_hyp", "omp_bound", "bp_hyp", "bp_linf_bound", "p0inf_bound"};
}

std::vector<std::string> BoundReport::csv_row() const {
    return {std::to_string(N),
            std::to_string(n),
            std::to_string(m),
            std::to_string(l0),
            std::to_string(l0_inf),
            format_double(mu),
            format_double(eps_global),
            format_double(eps_local),
            opt_cell(gamma_min_abs),
            omp.hypothesis_holds ? "1" : "0",
            opt_cell(omp.bound),
            bp.hypothesis_holds ? "1" : "0",
            opt_cell(bp.bound),
            opt_cell(p0inf.bound)};
}

KeyValueFile BoundReport::to_key_values() const {
    KeyValueFile kv;
    kv.set("N", static_cast<long long>(N));
    kv.set("n", static_cast<long long>(n));
    kv.set("m", static_cast<long long>(m));
    kv.set("l0", static_cast<long long>(l0));
    kv.set("l0_inf", static_cast<long long>(l0_inf));
    kv.set("mu", mu);
    kv.set("eps", eps_global);
    kv.set("eps_L", eps_local);
    if (gamma_min_abs) kv.set("gamma_min", *gamma_min_abs);
    kv.set("p0inf_hyp", static_cast<long long>(p0inf.hypothesis_holds ? 1 : 0));
    if (p0inf.bound) kv.set("p0inf_bound", *p0inf.bound);
    kv.set("omp_hyp", static_cast<long long>(omp.hypothesis_holds ? 1 : 0));
    if (omp.bound) kv.set("omp_bound", *omp.bound);
    kv.set("bp_hyp", static_cast<long long>(bp.hypothesis_holds ? 1 : 0));
    if (bp.bound) kv.set("bp_linf_bound", *bp.bound);
    return kv;
}

BoundReport evaluate_bounds(const ConvOperator& op, const Eigen::VectorXd& code,
                            const Eigen::VectorXd& noise, double mu, double zero_tol) {
    BoundReport r;
    r.N = op.N();
    r.n = op.n();
    r.m = op.m();
    r.mu = mu;
    r.l0 = l0_norm(code, zero_tol);
    r.l0_inf = l0_inf_norm(op, code, zero_tol);
    r.eps_global = noise.norm();
    r.eps_local = local_noise_level(op, noise);

    double gmin = 0.0;
    if (r.l0 > 0) {
        gmin = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < code.size(); ++i)
            if (std::abs(code[i]) > zero_tol) gmin = std::min(gmin, std::abs(code[i]));
        r.gamma_min_abs = gmin;
    }

    const int k = r.l0_inf;
    r.p0inf.hypothesis_holds = k < 0.5 * (1.0 + 1.0 / mu);
    if (r.p0inf.hypothesis_holds) r.p0inf.bound = stability_bound_p0inf(r.eps_global, mu, k);

    // An empty code is recovered by running no iterations at all, so the
    // greedy hypothesis is vacuously true there.
    r.omp.hypothesis_holds =
        r.l0 == 0 ? true : omp_hypothesis(mu, k, r.eps_local, gmin);
    if (r.omp.hypothesis_holds) r.omp.bound = omp_error_bound(r.eps_global, mu, k);

    r.bp.hypothesis_holds = bp_hypothesis(mu, k);
    if (r.bp.hypothesis_holds) r.bp.bound = bp_linf_bound(r.eps_local);

    if (r.eps_local > r.eps_global + 1e-12)
        throw SpecInvalidError("local noise level exceeds the global one");
    if (r.l0_inf > r.l0) throw SpecInvalidError("stripe sparsity exceeds the total sparsity");
    return r;
}

}  // namespace csc
