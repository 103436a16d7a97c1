#include "csc/bp.hpp"

#include <cmath>

#include "csc/errors.hpp"

namespace csc {

BpConfig BpConfig::fixed_lambda(double value) {
    if (!(value >= 0.0))
        throw SpecInvalidError("fixed penalty weight must be non-negative");
    BpConfig config;
    config.lambda = value;
    return config;
}

BpConfig BpConfig::annealed(LambdaSchedule schedule) {
    BpConfig config;
    config.schedule = schedule;
    return config;
}

void BpConfig::validate() const {
    if (lambda.has_value() == schedule.has_value())
        throw SpecInvalidError("exactly one of a fixed penalty weight or a schedule is required");
    if (lambda && !(*lambda >= 0.0))
        throw SpecInvalidError("fixed penalty weight must be non-negative");
    if (schedule) {
        if (!(schedule->decay > 0.0) || !(schedule->decay < 1.0))
            throw SpecInvalidError("schedule decay must lie in (0, 1)");
        if (!(schedule->floor > 0.0))
            throw SpecInvalidError("schedule floor must be positive");
        if (schedule->initial > 0.0 && schedule->initial < schedule->floor)
            throw SpecInvalidError("schedule start must not undercut its floor");
    }
    if (max_iterations < 1) throw SpecInvalidError("max_iterations must be at least 1");
    if (!(convergence_tol > 0.0)) throw SpecInvalidError("convergence_tol must be positive");
    if (!(step_safety > 1.0)) throw SpecInvalidError("step_safety must exceed 1");
    if (!(rho > 0.0)) throw SpecInvalidError("rho must be positive");
    for (int c : checkpoints)
        if (c < 1) throw SpecInvalidError("checkpoint iterations start at 1");
}

KktReport kkt_check(const ConvOperator& op, const Eigen::VectorXd& y,
                    const Eigen::VectorXd& code, double lambda, double support_tol) {
    if (!(lambda > 0.0))
        throw SpecInvalidError("optimality certificate needs a positive penalty weight");
    if (y.size() != op.N() || code.size() != op.atom_count())
        throw DimensionMismatchError("certificate input sizes do not match the operator");

    const Eigen::VectorXd corr = op.adjoint(y - op.apply(code));
    KktReport report;
    report.lambda = lambda;
    report.max_correlation = corr.lpNorm<Eigen::Infinity>();
    for (Eigen::Index j = 0; j < code.size(); ++j) {
        if (std::abs(code[j]) <= support_tol) continue;
        ++report.support_size;
        const double sign = code[j] > 0.0 ? 1.0 : -1.0;
        report.max_support_deviation =
            std::max(report.max_support_deviation, std::abs(corr[j] - lambda * sign));
    }
    return report;
}

}  // namespace csc
