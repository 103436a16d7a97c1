#include "csc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "csc/bp.hpp"
#include "csc/errors.hpp"
#include "csc/metrics.hpp"
#include "csc/omp.hpp"
#include "csc/rng.hpp"
#include "csc/text_io.hpp"

namespace csc {

void TrialBatchConfig::validate() const {
    if (trials < 1) throw SpecInvalidError("a batch needs at least one trial");
    if (cardinality_lo < 0 || cardinality_hi < cardinality_lo)
        throw SpecInvalidError("cardinality range must satisfy 0 <= lo <= hi");
    if (!(scale_lo > 0.0) || !(scale_hi >= scale_lo))
        throw SpecInvalidError("amplitude scale range needs 0 < lo <= hi");
}

void BpBatchConfig::validate() const {
    base.validate();
    if (!(lambda_factor >= 0.0))
        throw SpecInvalidError("penalty factor must be non-negative");
    if (!(convergence_tol > 0.0) || max_iterations < 1)
        throw SpecInvalidError("solver budget must be positive");
}

namespace {

struct TrialDraw {
    std::uint64_t instance_seed;
    double amplitude_scale;
    SignalInstance instance;
};

TrialDraw draw_trial(const ConvOperator& op, const TrialBatchConfig& config, int trial) {
    const std::uint64_t trial_seed =
        CounterRng::substream_seed(config.master_seed, static_cast<std::uint64_t>(trial));
    CounterRng meta(CounterRng::substream_seed(trial_seed, 0));
    const double u = meta.uniform01();
    const double scale = config.scale_lo * std::exp(u * std::log(config.scale_hi / config.scale_lo));

    SignalSpec spec;
    spec.seed = CounterRng::substream_seed(trial_seed, 1);
    spec.cardinality_lo = config.cardinality_lo;
    spec.cardinality_hi = config.cardinality_hi;
    spec.amplitude = AmplitudeLaw::uniform(scale);
    spec.noise = config.noise;
    return TrialDraw{spec.seed, scale, generate_instance(op, spec)};
}

std::string csv_cell(double v) { return format_double(v); }
std::string csv_cell(const std::optional<double>& v) { return v ? format_double(*v) : ""; }
std::string csv_cell(bool v) { return v ? "1" : "0"; }
std::string csv_cell(int v) { return std::to_string(v); }
std::string csv_cell(std::uint64_t v) { return std::to_string(v); }

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n') c = ';';
    return s;
}

}  // namespace

std::vector<OmpTrialRecord> omp_batch(const ConvOperator& op, const OmpBatchConfig& config) {
    config.base.validate();
    const double mu = op.mutual_coherence();

    std::vector<OmpTrialRecord> records;
    records.reserve(config.base.trials);
    for (int trial = 0; trial < config.base.trials; ++trial) {
        const TrialDraw draw = draw_trial(op, config.base, trial);
        const SignalInstance& inst = draw.instance;

        OmpTrialRecord rec;
        rec.trial = trial;
        rec.instance_seed = draw.instance_seed;
        rec.amplitude_scale = draw.amplitude_scale;
        rec.l0 = inst.l0;
        rec.l0_inf = inst.l0_inf;
        rec.gamma_min = inst.gamma_min_abs;
        rec.eps_global = inst.eps_global;
        rec.eps_local = inst.eps_local;
        rec.coherence_ok = erc_coherence_condition(mu, inst.l0_inf);
        rec.hypothesis_ok =
            inst.l0 == 0 ||
            (inst.gamma_min_abs &&
             omp_hypothesis(mu, inst.l0_inf, inst.eps_local, *inst.gamma_min_abs));
        rec.error_bound = omp_error_bound(inst.eps_global, mu, inst.l0_inf);
        rec.phase_line = omp_phase_line(mu, inst.l0_inf);
        if (inst.gamma_min_abs && *inst.gamma_min_abs > 0.0)
            rec.phase_ratio = inst.eps_local / *inst.gamma_min_abs;

        try {
            const PursuitResult result = omp(op, inst.signal, OmpConfig::fixed(inst.l0));
            rec.distance_l2 = (result.code.values - inst.code.values).norm();
            rec.success = result.support.indices == inst.code.support();
            rec.reselection_warnings = result.reselection_warnings;
        } catch (const Error& e) {
            rec.error = e.what();
            rec.distance_l2 = std::numeric_limits<double>::quiet_NaN();
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<BpTrialRecord> bp_batch(const ConvOperator& op, const BpBatchConfig& config) {
    config.validate();
    const double mu = op.mutual_coherence();

    std::vector<BpTrialRecord> records;
    records.reserve(config.base.trials);
    for (int trial = 0; trial < config.base.trials; ++trial) {
        const TrialDraw draw = draw_trial(op, config.base, trial);
        const SignalInstance& inst = draw.instance;

        BpTrialRecord rec;
        rec.trial = trial;
        rec.instance_seed = draw.instance_seed;
        rec.amplitude_scale = draw.amplitude_scale;
        rec.l0 = inst.l0;
        rec.l0_inf = inst.l0_inf;
        rec.gamma_min = inst.gamma_min_abs;
        rec.eps_global = inst.eps_global;
        rec.eps_local = inst.eps_local;
        rec.lambda = config.lambda_factor * inst.eps_local;
        rec.hypothesis_ok = bp_hypothesis(mu, inst.l0_inf);
        rec.linf_bound = bp_linf_bound(inst.eps_local);
        if (inst.gamma_min_abs && *inst.gamma_min_abs > 0.0) {
            rec.phase_ratio = inst.eps_local / *inst.gamma_min_abs;
            rec.full_recovery_expected = *rec.phase_ratio < 2.0 / 15.0;
        }

        try {
            BpConfig solver = BpConfig::fixed_lambda(rec.lambda);
            solver.convergence_tol = config.convergence_tol;
            solver.max_iterations = config.max_iterations;
            const BpResult result = bp_global_reference(op, inst.signal, solver);

            rec.distance_l2 = (result.code.values - inst.code.values).norm();
            rec.distance_linf =
                (result.code.values - inst.code.values).lpNorm<Eigen::Infinity>();
            if (inst.eps_local > 0.0) rec.ratio_linf = rec.distance_linf / inst.eps_local;
            const std::vector<int> planted = inst.code.support();
            const std::vector<int> found = support_set(op, result.code.values, 1e-10).indices;
            rec.success = found == planted;
            rec.support_subset =
                std::includes(planted.begin(), planted.end(), found.begin(), found.end());
            rec.converged = result.converged;
            rec.iterations = result.iterations;
        } catch (const Error& e) {
            rec.error = e.what();
            rec.distance_l2 = std::numeric_limits<double>::quiet_NaN();
            rec.distance_linf = std::numeric_limits<double>::quiet_NaN();
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<std::string> omp_batch_header() {
    return {"trial", "l0", "l0_inf", "gamma_min", "eps_L", "distance_l2", "success",
            "seed", "amplitude_scale", "eps_global", "coherence_ok", "hypothesis_ok",
            "error_bound", "phase_ratio", "phase_line", "reselection_warnings", "error"};
}

std::vector<std::string> omp_batch_row(const OmpTrialRecord& r) {
    const bool failed = !r.error.empty();
    return {csv_cell(r.trial),
            csv_cell(r.l0),
            csv_cell(r.l0_inf),
            csv_cell(r.gamma_min),
            csv_cell(r.eps_local),
            failed ? "" : csv_cell(r.distance_l2),
            csv_cell(r.success),
            csv_cell(r.instance_seed),
            csv_cell(r.amplitude_scale),
            csv_cell(r.eps_global),
            csv_cell(r.coherence_ok),
            csv_cell(r.hypothesis_ok),
            csv_cell(r.error_bound),
            csv_cell(r.phase_ratio),
            csv_cell(r.phase_line),
            csv_cell(r.reselection_warnings),
            sanitize(r.error)};
}

std::vector<std::string> bp_batch_header() {
    return {"trial", "l0", "l0_inf", "gamma_min", "eps_L", "distance_l2", "success",
            "seed", "amplitude_scale", "eps_global", "lambda", "distance_linf",
            "ratio_linf", "support_subset", "hypothesis_ok", "phase_ratio",
            "full_recovery_expected", "linf_bound", "converged", "iterations", "error"};
}

std::vector<std::string> bp_batch_row(const BpTrialRecord& r) {
    const bool failed = !r.error.empty();
    return {csv_cell(r.trial),
            csv_cell(r.l0),
            csv_cell(r.l0_inf),
            csv_cell(r.gamma_min),
            csv_cell(r.eps_local),
            failed ? "" : csv_cell(r.distance_l2),
            csv_cell(r.success),
            csv_cell(r.instance_seed),
            csv_cell(r.amplitude_scale),
            csv_cell(r.eps_global),
            csv_cell(r.lambda),
            failed ? "" : csv_cell(r.distance_linf),
            csv_cell(r.ratio_linf),
            csv_cell(r.support_subset),
            csv_cell(r.hypothesis_ok),
            csv_cell(r.phase_ratio),
            csv_cell(r.full_recovery_expected),
            csv_cell(r.linf_bound),
            csv_cell(r.converged),
            csv_cell(r.iterations),
            sanitize(r.error)};
}

}  // namespace csc
