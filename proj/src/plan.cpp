#include "csc/plan.hpp"

#include <filesystem>
#include <set>

#include "csc/errors.hpp"
#include "csc/text_io.hpp"

namespace csc {

const char* plan_kind_name(PlanKind kind) {
    switch (kind) {
        case PlanKind::OmpBatch: return "omp-batch";
        case PlanKind::BpBatch: return "bp-batch";
        case PlanKind::Evolution: return "evolution";
        case PlanKind::Convergence: return "convergence";
    }
    return "unknown";
}

void ExperimentPlan::validate() const {
    if (N < n) throw PlanInvalidError("signal length must be at least the filter length");
    if (n < 1 || m < 1) throw PlanInvalidError("dictionary shape must be positive");
    try {
        if (kind == PlanKind::OmpBatch || kind == PlanKind::BpBatch) {
            batch.validate();
            if (kind == PlanKind::BpBatch) {
                if (!(lambda_factor >= 0.0))
                    throw SpecInvalidError("penalty factor must be non-negative");
            }
            if (!(solver_tol > 0.0) || solver_max_iterations < 1)
                throw SpecInvalidError("solver budget must be positive");
        } else {
            if (cardinality < 0) throw SpecInvalidError("cardinality must be non-negative");
            if (!(amplitude_lo > 0.0) || !(amplitude_hi >= amplitude_lo))
                throw SpecInvalidError("amplitude band needs 0 < lo <= hi");
            if (sigma < 0.0) throw SpecInvalidError("noise deviation must be non-negative");
            if (!(rho > 0.0)) throw SpecInvalidError("rho must be positive");
            if (!(solver_tol > 0.0) || solver_max_iterations < 1)
                throw SpecInvalidError("solver budget must be positive");
            for (int c : checkpoints)
                if (c < 1) throw SpecInvalidError("checkpoint iterations start at 1");
        }
    } catch (const SpecInvalidError& e) {
        throw PlanInvalidError(std::string("plan '") + name + "': " + e.what());
    }
}

ExperimentPlan plan_defaults(const std::string& name) {
    ExperimentPlan plan;
    plan.name = name;
    if (name == "fig2-omp-distance" || name == "fig3a-omp-phase") {
        plan.kind = PlanKind::OmpBatch;
        plan.batch.master_seed = name == "fig2-omp-distance" ? 101 : 102;
        plan.batch.trials = 500;
        plan.batch.cardinality_lo = 1;
        plan.batch.cardinality_hi = 500;
        plan.batch.scale_lo = 1.0;
        plan.batch.scale_hi = 10.0;
        plan.batch.noise = NoiseLaw::global_norm(0.1);
    } else if (name == "fig3b-bp-phase" || name == "fig4-bp-linf") {
        plan.kind = PlanKind::BpBatch;
        plan.batch.master_seed = name == "fig3b-bp-phase" ? 103 : 104;
        plan.batch.trials = 500;
        plan.batch.cardinality_lo = 1;
        plan.batch.cardinality_hi = name == "fig3b-bp-phase" ? 30 : 8;
        plan.batch.scale_lo = 1.0;
        plan.batch.scale_hi = 10.0;
        plan.batch.noise = NoiseLaw::global_norm(0.1);
        plan.solver_tol = 1e-10;
        plan.solver_max_iterations = 200000;
    } else if (name == "fig5-admm-evolution") {
        plan.kind = PlanKind::Evolution;
        plan.dictionary = "dct";
        plan.n = 25;
        plan.m = 5;
        plan.N = 300;
        plan.instance_seed = 105;
        plan.cardinality = 50;
        plan.sigma = 0.0;
        plan.checkpoints = {20, 200, 1000};
        plan.solver_tol = 1e-8;
        plan.solver_max_iterations = 5000;
    } else if (name == "fig6-convergence-time") {
        plan.kind = PlanKind::Convergence;
        plan.dictionary = "dct";
        plan.n = 25;
        plan.m = 5;
        plan.N = 300;
        plan.instance_seed = 106;
        plan.cardinality = 50;
        plan.sigma = 0.04;
        plan.solver_tol = 1e-8;
        plan.solver_max_iterations = 3000;
    } else {
        throw PlanInvalidError("unknown plan name '" + name + "'");
    }
    return plan;
}

namespace {

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (const std::string& tok : split(text, ','))
        if (!tok.empty()) out.push_back(static_cast<int>(parse_int(tok)));
    return out;
}

NoiseLaw parse_noise(const std::string& kind, double value) {
    if (kind == "none") return NoiseLaw::none();
    if (kind == "global-norm") return NoiseLaw::global_norm(value);
    if (kind == "sigma") return NoiseLaw::gaussian(value);
    throw PlanInvalidError("unknown noise kind '" + kind + "'");
}

}  // namespace

ExperimentPlan load_plan(const std::string& path) {
    KeyValueFile kv;
    try {
        kv = KeyValueFile::load(path);
    } catch (const IoError& e) {
        throw PlanInvalidError(std::string("cannot read plan: ") + e.what());
    }
    ExperimentPlan plan = plan_defaults(kv.require("name"));

    const std::set<std::string> known = {
        "name", "dictionary", "design_seed", "n", "m", "coherence_lo", "coherence_hi",
        "N", "master_seed", "trials", "cardinality_lo", "cardinality_hi", "scale_lo",
        "scale_hi", "noise_kind", "noise_value", "lambda_factor", "solver_tol",
        "solver_max_iterations", "instance_seed", "cardinality", "amplitude_lo",
        "amplitude_hi", "sigma", "checkpoints", "rho", "schedule_initial",
        "schedule_decay", "schedule_floor"};
    for (const auto& [key, value] : kv.entries()) {
        (void)value;
        if (!known.count(key)) throw PlanInvalidError("unknown plan key '" + key + "'");
    }

    plan.dictionary = kv.get_string("dictionary", plan.dictionary);
    plan.design_seed = static_cast<std::uint64_t>(
        kv.get_int("design_seed", static_cast<long long>(plan.design_seed)));
    plan.n = static_cast<int>(kv.get_int("n", plan.n));
    plan.m = static_cast<int>(kv.get_int("m", plan.m));
    plan.coherence_lo = kv.get_double("coherence_lo", plan.coherence_lo);
    plan.coherence_hi = kv.get_double("coherence_hi", plan.coherence_hi);
    plan.N = static_cast<int>(kv.get_int("N", plan.N));

    plan.batch.master_seed = static_cast<std::uint64_t>(
        kv.get_int("master_seed", static_cast<long long>(plan.batch.master_seed)));
    plan.batch.trials = static_cast<int>(kv.get_int("trials", plan.batch.trials));
    plan.batch.cardinality_lo =
        static_cast<int>(kv.get_int("cardinality_lo", plan.batch.cardinality_lo));
    plan.batch.cardinality_hi =
        static_cast<int>(kv.get_int("cardinality_hi", plan.batch.cardinality_hi));
    plan.batch.scale_lo = kv.get_double("scale_lo", plan.batch.scale_lo);
    plan.batch.scale_hi = kv.get_double("scale_hi", plan.batch.scale_hi);
    if (kv.has("noise_kind") || kv.has("noise_value")) {
        const std::string kind = kv.get_string(
            "noise_kind", plan.batch.noise.kind == NoiseLaw::Kind::None
                              ? "none"
                              : (plan.batch.noise.kind == NoiseLaw::Kind::GlobalNorm
                                     ? "global-norm"
                                     : "sigma"));
        const double value = kv.get_double("noise_value", plan.batch.noise.value);
        try {
            plan.batch.noise = parse_noise(kind, value);
        } catch (const SpecInvalidError& e) {
            throw PlanInvalidError(e.what());
        }
    }

    plan.lambda_factor = kv.get_double("lambda_factor", plan.lambda_factor);
    plan.solver_tol = kv.get_double("solver_tol", plan.solver_tol);
    plan.solver_max_iterations =
        static_cast<int>(kv.get_int("solver_max_iterations", plan.solver_max_iterations));

    plan.instance_seed = static_cast<std::uint64_t>(
        kv.get_int("instance_seed", static_cast<long long>(plan.instance_seed)));
    plan.cardinality = static_cast<int>(kv.get_int("cardinality", plan.cardinality));
    plan.amplitude_lo = kv.get_double("amplitude_lo", plan.amplitude_lo);
    plan.amplitude_hi = kv.get_double("amplitude_hi", plan.amplitude_hi);
    plan.sigma = kv.get_double("sigma", plan.sigma);
    if (kv.has("checkpoints")) plan.checkpoints = parse_int_list(kv.require("checkpoints"));
    plan.rho = kv.get_double("rho", plan.rho);
    plan.schedule.initial = kv.get_double("schedule_initial", plan.schedule.initial);
    plan.schedule.decay = kv.get_double("schedule_decay", plan.schedule.decay);
    plan.schedule.floor = kv.get_double("schedule_floor", plan.schedule.floor);

    plan.validate();
    return plan;
}

LocalDictionary plan_dictionary(const ExperimentPlan& plan, const std::string& plan_dir) {
    if (plan.dictionary == "design") {
        DictionaryDesignConfig config;
        config.n = plan.n;
        config.m = plan.m;
        config.coherence_lo = plan.coherence_lo;
        config.coherence_hi = plan.coherence_hi;
        return low_coherence_dictionary(plan.design_seed, config);
    }
    if (plan.dictionary == "dct") return dct_local_dictionary(plan.n, plan.m);
    std::filesystem::path p(plan.dictionary);
    if (p.is_relative() && !plan_dir.empty()) p = std::filesystem::path(plan_dir) / p;
    return read_dictionary(p.string());
}

}  // namespace csc
