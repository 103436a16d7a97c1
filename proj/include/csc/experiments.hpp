#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csc/conv_operator.hpp"
#include "csc/signal_lab.hpp"

namespace csc {

// Shared recipe of the randomized trial batches: every trial gets its own
// substream of the master seed, draws an amplitude half-width log-uniformly
// from [scale_lo, scale_hi] (so small and large coefficients are equally
// represented per decade), plants a code with uniform values in that range,
// and adds the configured noise.
struct TrialBatchConfig {
    std::uint64_t master_seed = 1;
    int trials = 500;
    int cardinality_lo = 1;
    int cardinality_hi = 500;
    double scale_lo = 1.0;
    double scale_hi = 10.0;
    NoiseLaw noise = NoiseLaw::none();

    void validate() const;  // throws SpecInvalidError
};

struct OmpBatchConfig {
    TrialBatchConfig base;
};

// One greedy-pursuit trial.  The flags split the recovery condition the way
// the phase plots do: coherence_ok keeps only the stripe-sparsity threshold,
// hypothesis_ok adds the noise-to-amplitude term.
struct OmpTrialRecord {
    int trial = 0;
    std::uint64_t instance_seed = 0;
    double amplitude_scale = 0.0;
    int l0 = 0;
    int l0_inf = 0;
    std::optional<double> gamma_min;
    double eps_global = 0.0;
    double eps_local = 0.0;
    double distance_l2 = 0.0;
    bool success = false;  // recovered support equals the planted one
    bool coherence_ok = false;
    bool hypothesis_ok = false;
    std::optional<double> error_bound;  // squared-distance guarantee when defined
    std::optional<double> phase_ratio;  // eps_local / gamma_min
    double phase_line = 0.0;            // recovery threshold at this l0_inf
    int reselection_warnings = 0;
    std::string error;  // nonempty when the trial raised; other fields best-effort
};

std::vector<OmpTrialRecord> omp_batch(const ConvOperator& op, const OmpBatchConfig& config);

struct BpBatchConfig {
    TrialBatchConfig base;
    double lambda_factor = 4.0;  // penalty weight = factor * eps_local
    double convergence_tol = 1e-10;
    int max_iterations = 200000;

    void validate() const;
};

struct BpTrialRecord {
    int trial = 0;
    std::uint64_t instance_seed = 0;
    double amplitude_scale = 0.0;
    int l0 = 0;
    int l0_inf = 0;
    std::optional<double> gamma_min;
    double eps_global = 0.0;
    double eps_local = 0.0;
    double lambda = 0.0;
    double distance_l2 = 0.0;
    double distance_linf = 0.0;
    std::optional<double> ratio_linf;   // distance_linf / eps_local
    bool success = false;               // recovered support equals the planted one
    bool support_subset = false;        // recovered support inside the planted one
    bool hypothesis_ok = false;         // stripe sparsity below the relaxation threshold
    std::optional<double> phase_ratio;  // eps_local / gamma_min
    bool full_recovery_expected = false;  // phase_ratio < 2/15
    double linf_bound = 0.0;              // 7.5 * eps_local
    bool converged = false;
    int iterations = 0;
    std::string error;
};

std::vector<BpTrialRecord> bp_batch(const ConvOperator& op, const BpBatchConfig& config);

// Column layouts of the two result streams.  The leading seven columns are
// shared so downstream tooling can treat both files uniformly; batch-specific
// columns follow.
std::vector<std::string> omp_batch_header();
std::vector<std::string> omp_batch_row(const OmpTrialRecord& r);
std::vector<std::string> bp_batch_header();
std::vector<std::string> bp_batch_row(const BpTrialRecord& r);

}  // namespace csc
