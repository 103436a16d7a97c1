#pragma once

#include <string>
#include <vector>

#include "csc/plan.hpp"

namespace csc {

// Execute a plan and write its artifact set under out_dir:
//   metadata.txt  every effective parameter, derived dictionary stats, runtimes
//   results.csv   per-trial (batches) or per-iteration/per-snapshot table
//   plot.txt      declarative "plotspec v1" description a bundled script renders
//   bound.csv     sampled guarantee curves (batch kinds with a fixed noise norm)
//   *.vec         planted code and snapshot codes (evolution kind)
// Re-running a plan reproduces results.csv byte for byte; wall-time columns
// are the only nondeterministic cells and are confined to the convergence
// kind (and metadata, which is never digested).
void run_experiment(const ExperimentPlan& plan, const std::string& out_dir,
                    const std::string& plan_dir = "");

struct VerifyReport {
    int status = 0;  // 0 pass, 1 guarantee violations, 2 missing or malformed artifacts
    std::vector<std::string> messages;

    void fail(int s, std::string message);
};

// Check a finished run directory against the guarantees its plan claims.
VerifyReport verify_run(const std::string& dir);

}  // namespace csc
