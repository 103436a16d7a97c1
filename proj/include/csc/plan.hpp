#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "csc/bp.hpp"
#include "csc/experiments.hpp"
#include "csc/signal_lab.hpp"

namespace csc {

enum class PlanKind { OmpBatch, BpBatch, Evolution, Convergence };

// One reproducible experiment.  A plan file is key=value text; every key has
// a default fixed by the plan name, so shipped plans stay small and the
// authoritative parameter set lands in the run's metadata.
struct ExperimentPlan {
    std::string name;
    PlanKind kind = PlanKind::OmpBatch;

    // Dictionary: "design" (seeded low-coherence filter design), "dct"
    // (orthonormal cosine bank), or a dictionary file path, resolved relative
    // to the plan file.
    std::string dictionary = "design";
    std::uint64_t design_seed = 2024;
    int n = 64;
    int m = 1;
    double coherence_lo = 0.085;
    double coherence_hi = 0.0905;
    int N = 640;

    // Trial batches.
    TrialBatchConfig batch;
    double lambda_factor = 4.0;
    double solver_tol = 1e-10;
    int solver_max_iterations = 200000;

    // Single-instance studies.
    std::uint64_t instance_seed = 1;
    int cardinality = 50;
    double amplitude_lo = 1.0;
    double amplitude_hi = 2.0;
    double sigma = 0.0;  // Gaussian noise deviation; 0 keeps the instance clean
    std::vector<int> checkpoints = {20, 200, 1000};
    double rho = 1.0;
    LambdaSchedule schedule;

    void validate() const;  // throws PlanInvalidError
};

// Blank plan of a given name with that experiment's default parameters.
// Recognized names:
//   fig2-omp-distance    greedy pursuit error against its guarantee
//   fig3a-omp-phase      greedy recovery phase diagram
//   fig3b-bp-phase       convex recovery phase diagram
//   fig4-bp-linf         convex sup-norm error against its guarantee
//   fig5-admm-evolution  splitting-solver iterate evolution snapshots
//   fig6-convergence-time  objective-versus-time traces of the three solvers
ExperimentPlan plan_defaults(const std::string& name);

// Parse a plan file: defaults of its "name" overridden by the other keys.
// Unrecognized keys are an error.
ExperimentPlan load_plan(const std::string& path);

// Dictionary referenced by a plan; file paths resolve against plan_dir.
LocalDictionary plan_dictionary(const ExperimentPlan& plan, const std::string& plan_dir);

const char* plan_kind_name(PlanKind kind);

}  // namespace csc
