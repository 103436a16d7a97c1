#include "csc/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "csc/bp.hpp"
#include "csc/conv_operator.hpp"
#include "csc/errors.hpp"
#include "csc/experiments.hpp"
#include "csc/metrics.hpp"
#include "csc/signal_lab.hpp"
#include "csc/text_io.hpp"

namespace fs = std::filesystem;

namespace csc {
namespace {

std::string fd(double v) { return format_double(v); }

std::string join(const std::string& dir, const std::string& file) {
    return (fs::path(dir) / file).string();
}

void write_text(const std::string& path, const std::vector<std::string>& lines) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    for (const auto& line : lines) out << line << '\n';
    if (!out) throw IoError("write failed for " + path);
}

const char* noise_kind_name(NoiseLaw::Kind kind) {
    switch (kind) {
        case NoiseLaw::Kind::None: return "none";
        case NoiseLaw::Kind::GlobalNorm: return "global-norm";
        case NoiseLaw::Kind::GaussianSigma: return "sigma";
    }
    return "unknown";
}

std::string int_list(const std::vector<int>& v) {
    std::ostringstream out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ',';
        out << v[i];
    }
    return out.str();
}

void describe_batch(KeyValueFile& meta, const TrialBatchConfig& batch) {
    meta.set("master_seed", static_cast<long long>(batch.master_seed));
    meta.set("trials", static_cast<long long>(batch.trials));
    meta.set("cardinality_lo", static_cast<long long>(batch.cardinality_lo));
    meta.set("cardinality_hi", static_cast<long long>(batch.cardinality_hi));
    meta.set("cardinality_law", "uniform-integer");
    meta.set("scale_lo", batch.scale_lo);
    meta.set("scale_hi", batch.scale_hi);
    meta.set("amplitude_law", "uniform-log-scale");
    meta.set("noise", noise_kind_name(batch.noise.kind));
    meta.set("noise_value", batch.noise.value);
}

// Sampled guarantee curves for the greedy batches: the squared-error bound
// (defined while mu*(k-1) < 1) and the recovery threshold line, one row per
// stripe sparsity.  Only meaningful when every trial shares one noise norm.
void write_omp_bounds(const std::string& out_dir, double mu, double eps) {
    CsvTable table;
    table.header = {"l0_inf", "distance_bound_sq", "distance_bound", "phase_line"};
    for (int k = 1;; ++k) {
        const auto sq = omp_error_bound(eps, mu, k);
        const double line = omp_phase_line(mu, k);
        if (!sq && line <= 0.0) break;
        table.rows.push_back({std::to_string(k),
                              sq ? fd(*sq) : std::string{},
                              sq ? fd(std::sqrt(*sq)) : std::string{},
                              fd(line)});
        if (k > 10000) break;  // unreachable guard
    }
    table.save(join(out_dir, "bound.csv"));
}

void run_omp_batch(const ConvOperator& op, const ExperimentPlan& plan,
                   const std::string& out_dir, KeyValueFile& meta) {
    OmpBatchConfig config;
    config.base = plan.batch;
    const auto records = omp_batch(op, config);

    CsvTable table;
    table.header = omp_batch_header();
    int trial_errors = 0;
    for (const auto& rec : records) {
        table.rows.push_back(omp_batch_row(rec));
        if (!rec.error.empty()) ++trial_errors;
    }
    table.save(join(out_dir, "results.csv"));

    const double mu = op.mutual_coherence();
    const bool fixed_noise = plan.batch.noise.kind == NoiseLaw::Kind::GlobalNorm;
    if (fixed_noise) write_omp_bounds(out_dir, mu, plan.batch.noise.value);

    std::vector<std::string> plot = {
        "format=plotspec v1",
        "panel x=l0_inf yscale=log xlabel=stripe sparsity ylabel=recovery error "
        "title=greedy pursuit error",
        "series y=distance_l2 filter=success:1 marker=o label=support recovered",
        "series y=distance_l2 filter=success:0 marker=x label=support missed",
    };
    if (fixed_noise)
        plot.push_back("curve file=bound.csv x=l0_inf y=distance_bound label=error guarantee");
    plot.push_back("vline x=" + fd(0.5 * (1.0 + 1.0 / mu)) + " label=coherence threshold");
    plot.push_back(
        "panel x=l0_inf y=phase_ratio yscale=log xlabel=stripe sparsity "
        "ylabel=noise-to-amplitude ratio title=greedy recovery phase");
    plot.push_back("series filter=success:1 marker=o label=support recovered");
    plot.push_back("series filter=success:0 marker=x label=support missed");
    if (fixed_noise)
        plot.push_back("curve file=bound.csv x=l0_inf y=phase_line label=recovery threshold");
    write_text(join(out_dir, "plot.txt"), plot);

    meta.set("mutual_coherence", mu);
    describe_batch(meta, plan.batch);
    meta.set("rows", static_cast<long long>(records.size()));
    meta.set("trial_errors", static_cast<long long>(trial_errors));
}

void run_bp_batch(const ConvOperator& op, const ExperimentPlan& plan,
                  const std::string& out_dir, KeyValueFile& meta) {
    BpBatchConfig config;
    config.base = plan.batch;
    config.lambda_factor = plan.lambda_factor;
    config.convergence_tol = plan.solver_tol;
    config.max_iterations = plan.solver_max_iterations;
    const auto records = bp_batch(op, config);

    CsvTable table;
    table.header = bp_batch_header();
    int trial_errors = 0;
    for (const auto& rec : records) {
        table.rows.push_back(bp_batch_row(rec));
        if (!rec.error.empty()) ++trial_errors;
    }
    table.save(join(out_dir, "results.csv"));

    const double mu = op.mutual_coherence();
    const std::vector<std::string> plot = {
        "format=plotspec v1",
        "panel x=l0_inf y=phase_ratio yscale=log xlabel=stripe sparsity "
        "ylabel=noise-to-amplitude ratio title=convex recovery phase",
        "series filter=success:1 marker=o label=support recovered",
        "series filter=success:0 marker=x label=support missed",
        "hline y=" + fd(2.0 / 15.0) + " label=full recovery threshold",
        "vline x=" + fd((1.0 + 1.0 / mu) / 3.0) + " label=sparsity threshold",
        "panel x=l0_inf y=ratio_linf xlabel=stripe sparsity "
        "ylabel=sup-norm error over local noise title=convex sup-norm error",
        "series filter=success:1 marker=o label=support recovered",
        "series filter=success:0 marker=x label=support missed",
        "hline y=7.5 label=sup-norm guarantee",
    };
    write_text(join(out_dir, "plot.txt"), plot);

    meta.set("mutual_coherence", mu);
    describe_batch(meta, plan.batch);
    meta.set("lambda_factor", plan.lambda_factor);
    meta.set("solver_tol", plan.solver_tol);
    meta.set("solver_max_iterations", static_cast<long long>(plan.solver_max_iterations));
    meta.set("rows", static_cast<long long>(records.size()));
    meta.set("trial_errors", static_cast<long long>(trial_errors));
}

SignalSpec single_instance_spec(const ExperimentPlan& plan) {
    SignalSpec spec;
    spec.seed = plan.instance_seed;
    spec.cardinality_lo = plan.cardinality;
    spec.cardinality_hi = plan.cardinality;
    spec.amplitude = AmplitudeLaw::band(plan.amplitude_lo, plan.amplitude_hi);
    spec.noise = plan.sigma > 0.0 ? NoiseLaw::gaussian(plan.sigma) : NoiseLaw::none();
    return spec;
}

void describe_instance(KeyValueFile& meta, const ExperimentPlan& plan,
                       const SignalInstance& inst) {
    meta.set("instance_seed", static_cast<long long>(plan.instance_seed));
    meta.set("cardinality", static_cast<long long>(plan.cardinality));
    meta.set("amplitude_lo", plan.amplitude_lo);
    meta.set("amplitude_hi", plan.amplitude_hi);
    meta.set("sigma", plan.sigma);
    meta.set("l0", static_cast<long long>(inst.l0));
    meta.set("l0_inf", static_cast<long long>(inst.l0_inf));
    meta.set("eps_global", inst.eps_global);
    meta.set("eps_local", inst.eps_local);
    if (inst.gamma_min_abs) meta.set("gamma_min", *inst.gamma_min_abs);
}

void run_evolution(const ConvOperator& op, const ExperimentPlan& plan,
                   const std::string& out_dir, KeyValueFile& meta) {
    const SignalSpec spec = single_instance_spec(plan);
    spec.validate(op);
    const SignalInstance inst = generate_instance(op, spec);

    BpConfig config = BpConfig::annealed(plan.schedule);
    config.convergence_tol = plan.solver_tol;
    config.max_iterations = plan.solver_max_iterations;
    config.rho = plan.rho;
    config.checkpoints = plan.checkpoints;
    const BpResult result = bp_admm_local(op, inst.signal, config);

    write_vector(join(out_dir, "planted.vec"), inst.code.values);
    write_vector(join(out_dir, "signal.vec"), inst.signal);
    write_vector(join(out_dir, "code_final.vec"), result.code.values);

    CsvTable table;
    table.header = {"phase", "iteration", "distance_l2", "support_size",
                    "objective", "residual_norm"};
    // Counting threshold for the reported support.  Planted amplitudes are
    // at least one, and a run that meets the recovery tolerance leaves any
    // spurious entries well below this, so 1e-3 separates the two cleanly.
    const double support_tol = 1e-3;
    auto add_row = [&](const std::string& phase, int it, const Eigen::VectorXd& code) {
        const double dist = (code - inst.code.values).norm();
        const int support = l0_norm(code, support_tol);
        std::string objective, residual;
        if (it >= 1 && it <= static_cast<int>(result.objective.size()))
            objective = fd(result.objective[static_cast<std::size_t>(it) - 1]);
        if (it >= 0 && it < static_cast<int>(result.residual_norms.size()))
            residual = fd(result.residual_norms[static_cast<std::size_t>(it)]);
        table.rows.push_back({phase, std::to_string(it), fd(dist),
                              std::to_string(support), objective, residual});
    };

    std::vector<std::string> plot = {"format=plotspec v1"};
    auto stem_panel = [&](const std::string& file, const std::string& title) {
        plot.push_back("panel x=index y=value xlabel=coefficient index title=" + title);
        plot.push_back("stem file=planted.vec marker=. label=planted");
        plot.push_back("stem file=" + file + " marker=o label=estimate");
    };
    for (const auto& [it, code] : result.snapshots) {
        add_row("checkpoint", it, code);
        const std::string file = "code_" + std::to_string(it) + ".vec";
        write_vector(join(out_dir, file), code);
        stem_panel(file, "estimate after " + std::to_string(it) + " sweeps");
    }
    add_row("final", result.iterations, result.code.values);
    stem_panel("code_final.vec", "final estimate");
    plot.push_back(
        "panel x=iteration y=distance_l2 yscale=log xlabel=sweep "
        "ylabel=distance to planted code title=estimate evolution");
    plot.push_back("series marker=o label=distance at checkpoints");
    table.save(join(out_dir, "results.csv"));
    write_text(join(out_dir, "plot.txt"), plot);

    describe_instance(meta, plan, inst);
    meta.set("rho", plan.rho);
    meta.set("schedule_initial", plan.schedule.initial);
    meta.set("schedule_decay", plan.schedule.decay);
    meta.set("schedule_floor", plan.schedule.floor);
    meta.set("checkpoints", int_list(plan.checkpoints));
    meta.set("solver_tol", plan.solver_tol);
    meta.set("solver_max_iterations", static_cast<long long>(plan.solver_max_iterations));
    meta.set("lambda_final", result.lambda_final);
    meta.set("iterations", static_cast<long long>(result.iterations));
    meta.set("converged", static_cast<long long>(result.converged ? 1 : 0));
    meta.set("final_distance_l2", (result.code.values - inst.code.values).norm());
    meta.set("final_support_size", static_cast<long long>(l0_norm(result.code.values, support_tol)));
    if (!result.objective.empty()) meta.set("final_objective", result.objective.back());
    meta.set("rows", static_cast<long long>(table.rows.size()));
}

void run_convergence(const ConvOperator& op, const ExperimentPlan& plan,
                     const std::string& out_dir, KeyValueFile& meta) {
    const SignalSpec spec = single_instance_spec(plan);
    spec.validate(op);
    const SignalInstance inst = generate_instance(op, spec);
    const double lambda = plan.lambda_factor * inst.eps_local;
    if (lambda <= 0.0)
        throw PlanInvalidError("convergence plan needs noise so the penalty weight is positive");

    BpConfig config = BpConfig::fixed_lambda(lambda);
    config.convergence_tol = plan.solver_tol;
    config.max_iterations = plan.solver_max_iterations;
    config.rho = plan.rho;

    CsvTable table;
    table.header = {"solver", "iteration", "objective", "residual_norm", "wall_time"};
    using Runner = BpResult (*)(const ConvOperator&, const Eigen::VectorXd&,
                                const BpConfig&, const TraceFn&);
    const std::pair<const char*, Runner> solvers[] = {
        {"ista", &bp_global_reference},
        {"ist-local", &bp_ist_local},
        {"admm", &bp_admm_local},
    };
    for (const auto& [tag, solve] : solvers) {
        const TraceFn trace = [&](const TraceRow& row) {
            table.rows.push_back({tag, std::to_string(row.iteration), fd(row.objective),
                                  fd(row.residual_norm), fd(row.wall_time)});
        };
        const BpResult result = solve(op, inst.signal, config, trace);
        const std::string prefix(tag);
        write_vector(join(out_dir, "code_" + prefix + ".vec"), result.code.values);
        meta.set(prefix + "_iterations", static_cast<long long>(result.iterations));
        meta.set(prefix + "_converged", static_cast<long long>(result.converged ? 1 : 0));
        meta.set(prefix + "_wall_time", result.wall_time);
        if (!result.objective.empty()) meta.set(prefix + "_objective", result.objective.back());
    }
    table.save(join(out_dir, "results.csv"));

    const std::vector<std::string> plot = {
        "format=plotspec v1",
        "panel x=wall_time y=objective xscale=log xlabel=seconds "
        "ylabel=penalized objective title=objective versus time",
        "series filter=solver:ista label=global gradient",
        "series filter=solver:ist-local label=patchwise gradient",
        "series filter=solver:admm label=stripe splitting",
        "panel x=iteration y=objective xscale=log xlabel=sweep "
        "ylabel=penalized objective title=objective versus sweeps",
        "series filter=solver:ista label=global gradient",
        "series filter=solver:ist-local label=patchwise gradient",
        "series filter=solver:admm label=stripe splitting",
    };
    write_text(join(out_dir, "plot.txt"), plot);

    describe_instance(meta, plan, inst);
    meta.set("lambda_factor", plan.lambda_factor);
    meta.set("lambda", lambda);
    meta.set("rho", plan.rho);
    meta.set("solver_tol", plan.solver_tol);
    meta.set("solver_max_iterations", static_cast<long long>(plan.solver_max_iterations));
    meta.set("rows", static_cast<long long>(table.rows.size()));
}

}  // namespace

void run_experiment(const ExperimentPlan& plan, const std::string& out_dir,
                    const std::string& plan_dir) {
    plan.validate();
    const auto t0 = std::chrono::steady_clock::now();
    fs::create_directories(out_dir);

    const LocalDictionary dict = plan_dictionary(plan, plan_dir);
    const ConvOperator op(dict, plan.N);

    KeyValueFile meta;
    meta.set("format", "csc-run v1");
    meta.set("plan", plan.name);
    meta.set("kind", plan_kind_name(plan.kind));
    meta.set("tool", "csc 1.0");
    meta.set("rng", "csc-rng v1");
    meta.set("dictionary", plan.dictionary);
    if (plan.dictionary == "design") {
        meta.set("design_seed", static_cast<long long>(plan.design_seed));
        meta.set("coherence_lo", plan.coherence_lo);
        meta.set("coherence_hi", plan.coherence_hi);
    }
    meta.set("n", static_cast<long long>(op.n()));
    meta.set("m", static_cast<long long>(op.m()));
    meta.set("N", static_cast<long long>(op.N()));
    meta.set("atoms", static_cast<long long>(op.atom_count()));
    if (plan.kind == PlanKind::Evolution || plan.kind == PlanKind::Convergence)
        meta.set("mutual_coherence", op.mutual_coherence());

    switch (plan.kind) {
        case PlanKind::OmpBatch: run_omp_batch(op, plan, out_dir, meta); break;
        case PlanKind::BpBatch: run_bp_batch(op, plan, out_dir, meta); break;
        case PlanKind::Evolution: run_evolution(op, plan, out_dir, meta); break;
        case PlanKind::Convergence: run_convergence(op, plan, out_dir, meta); break;
    }

    // Runtime lives only here; result tables stay reproducible byte for byte
    // (the convergence table's wall_time column is the sole exception).
    meta.set("runtime_seconds",
             std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    meta.save(join(out_dir, "metadata.txt"));
}

void VerifyReport::fail(int s, std::string message) {
    status = std::max(status, s);
    messages.push_back(std::move(message));
}

namespace {

// Cell access that distinguishes "absent" from "zero".
std::optional<double> cell(const CsvTable& t, std::size_t row, int col) {
    const std::string& s = t.rows[row][static_cast<std::size_t>(col)];
    if (s.empty()) return std::nullopt;
    return parse_double(s);
}

std::string row_tag(const CsvTable& t, std::size_t row, int trial_col) {
    std::string tag = "row " + std::to_string(row + 1);
    if (trial_col >= 0) tag += " (trial " + t.rows[row][static_cast<std::size_t>(trial_col)] + ")";
    return tag;
}

void verify_omp_results(const CsvTable& t, VerifyReport& rep) {
    const int c_trial = t.column("trial");
    const int c_linf = t.require_column("l0_inf");
    const int c_dist = t.require_column("distance_l2");
    const int c_success = t.require_column("success");
    const int c_coh = t.require_column("coherence_ok");
    const int c_hyp = t.require_column("hypothesis_ok");
    const int c_bound = t.require_column("error_bound");
    const int c_ratio = t.require_column("phase_ratio");
    const int c_line = t.require_column("phase_line");
    const int c_error = t.require_column("error");

    int checked_bound = 0, checked_hyp = 0, violations = 0;
    int transition_rows = 0, transition_failures = 0;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const std::string tag = row_tag(t, r, c_trial);
        const bool errored = !t.rows[r][static_cast<std::size_t>(c_error)].empty();
        const bool coherent = cell(t, r, c_coh).value_or(0.0) != 0.0;
        const bool hypothesis = cell(t, r, c_hyp).value_or(0.0) != 0.0;
        const auto dist = cell(t, r, c_dist);
        const auto bound = cell(t, r, c_bound);
        const bool success = cell(t, r, c_success).value_or(0.0) != 0.0;

        if (coherent) {
            if (errored || !dist) {
                rep.fail(1, tag + ": trial inside the guarantee region raised an error");
                ++violations;
            } else if (bound) {
                ++checked_bound;
                const double d2 = *dist * *dist;
                if (d2 > *bound * (1.0 + 1e-9) + 1e-15) {
                    rep.fail(1, tag + ": squared error " + fd(d2) +
                                    " exceeds its guarantee " + fd(*bound));
                    ++violations;
                }
            }
        }
        if (hypothesis && !errored) {
            ++checked_hyp;
            if (!success) {
                rep.fail(1, tag + ": recovery condition held but the support was missed");
                ++violations;
            }
        }
        const auto ratio = cell(t, r, c_ratio);
        const auto line = cell(t, r, c_line);
        if (!errored && ratio && line && *ratio < *line && !success) {
            rep.fail(1, tag + ": below the recovery threshold but the support was missed");
            ++violations;
        }
        if (cell(t, r, c_linf).value_or(0.0) > 40.0) {
            ++transition_rows;
            if (!success || errored) ++transition_failures;
        }
    }
    // With enough very dense trials the batch must show actual failures;
    // all-green there would mean the experiment never leaves the easy regime.
    if (transition_rows >= 20 &&
        transition_failures * 100 < transition_rows) {
        rep.fail(1, "only " + std::to_string(transition_failures) + " of " +
                        std::to_string(transition_rows) +
                        " dense trials failed; expected at least 1%");
    }
    rep.messages.push_back("greedy batch: " + std::to_string(t.rows.size()) + " trials, " +
                           std::to_string(checked_bound) + " error bounds, " +
                           std::to_string(checked_hyp) + " recovery conditions, " +
                           std::to_string(violations) + " violations");
}

void verify_bp_results(const CsvTable& t, VerifyReport& rep) {
    const int c_trial = t.column("trial");
    const int c_linf = t.require_column("l0_inf");
    const int c_success = t.require_column("success");
    const int c_subset = t.require_column("support_subset");
    const int c_ratio_linf = t.require_column("ratio_linf");
    const int c_dlinf = t.require_column("distance_linf");
    const int c_lbound = t.require_column("linf_bound");
    const int c_full = t.require_column("full_recovery_expected");
    const int c_error = t.require_column("error");

    int gated = 0, violations = 0;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        if (cell(t, r, c_linf).value_or(1e300) > 4.0) continue;
        const std::string tag = row_tag(t, r, c_trial);
        if (!t.rows[r][static_cast<std::size_t>(c_error)].empty()) {
            rep.fail(1, tag + ": sparse trial inside the guarantee region raised an error");
            ++violations;
            continue;
        }
        ++gated;
        if (cell(t, r, c_subset).value_or(0.0) == 0.0) {
            rep.fail(1, tag + ": recovered support leaks outside the planted one");
            ++violations;
        }
        const auto ratio = cell(t, r, c_ratio_linf);
        if (ratio && *ratio >= 7.5) {
            rep.fail(1, tag + ": sup-norm error ratio " + fd(*ratio) + " reached 7.5");
            ++violations;
        }
        const auto dlinf = cell(t, r, c_dlinf);
        const auto lbound = cell(t, r, c_lbound);
        if (dlinf && lbound && *lbound > 0.0 && *dlinf >= *lbound) {
            rep.fail(1, tag + ": sup-norm error " + fd(*dlinf) + " reached its guarantee " +
                            fd(*lbound));
            ++violations;
        }
        if (cell(t, r, c_full).value_or(0.0) != 0.0 &&
            cell(t, r, c_success).value_or(0.0) == 0.0) {
            rep.fail(1, tag + ": full recovery expected but the support was missed");
            ++violations;
        }
    }
    rep.messages.push_back("convex batch: " + std::to_string(t.rows.size()) + " trials, " +
                           std::to_string(gated) + " inside the sparse guarantee region, " +
                           std::to_string(violations) + " violations");
}

void verify_evolution(const std::string& dir, const KeyValueFile& meta, const CsvTable& t,
                      VerifyReport& rep) {
    const int c_phase = t.require_column("phase");
    const int c_iter = t.require_column("iteration");
    const int c_dist = t.require_column("distance_l2");
    if (t.rows.empty()) {
        rep.fail(2, "results.csv has no rows");
        return;
    }
    for (const auto& name : {"planted.vec", "code_final.vec"}) {
        if (!fs::exists(join(dir, name))) rep.fail(2, std::string(name) + " is missing");
    }
    int checkpoints = 0;
    bool saw_final = false;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const std::string& phase = t.rows[r][static_cast<std::size_t>(c_phase)];
        if (phase == "checkpoint") {
            ++checkpoints;
            const std::string file =
                "code_" + t.rows[r][static_cast<std::size_t>(c_iter)] + ".vec";
            if (!fs::exists(join(dir, file))) rep.fail(2, file + " is missing");
        } else if (phase == "final") {
            saw_final = true;
            const auto dist = cell(t, r, c_dist);
            const double sigma = meta.get_double("sigma", 0.0);
            if (!dist) {
                rep.fail(2, "final row has no distance");
            } else if (sigma == 0.0 && *dist >= 1e-4) {
                rep.fail(1, "noiseless final distance " + fd(*dist) + " is not below 1e-4");
            }
        }
    }
    if (!saw_final) rep.fail(2, "results.csv has no final row");
    rep.messages.push_back("evolution: " + std::to_string(checkpoints) +
                           " checkpoints plus the final estimate");
}

void verify_convergence(const std::string& dir, const CsvTable& t, VerifyReport& rep) {
    const int c_solver = t.require_column("solver");
    const int c_objective = t.require_column("objective");
    const char* tags[] = {"ista", "ist-local", "admm"};
    double finals[3] = {0.0, 0.0, 0.0};
    int counts[3] = {0, 0, 0};
    double prev_ista = 0.0;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const std::string& solver = t.rows[r][static_cast<std::size_t>(c_solver)];
        for (int s = 0; s < 3; ++s) {
            if (solver != tags[s]) continue;
            ++counts[s];
            const auto obj = cell(t, r, c_objective);
            if (!obj) continue;
            // The plain gradient iteration descends the objective every sweep.
            if (s == 0 && counts[s] > 1 &&
                *obj > prev_ista + 1e-9 * std::max(std::abs(prev_ista), 1.0)) {
                rep.fail(1, row_tag(t, r, -1) + ": reference objective increased from " +
                                fd(prev_ista) + " to " + fd(*obj));
            }
            if (s == 0) prev_ista = *obj;
            finals[s] = *obj;
        }
    }
    for (int s = 0; s < 3; ++s) {
        if (counts[s] == 0) rep.fail(2, std::string(tags[s]) + " has no trace rows");
    }
    if (rep.status >= 2) return;
    for (int a = 0; a < 3; ++a) {
        for (int b = a + 1; b < 3; ++b) {
            const double scale = std::max({std::abs(finals[a]), std::abs(finals[b]), 1e-300});
            const double gap = std::abs(finals[a] - finals[b]) / scale;
            if (gap > 1e-4) {
                rep.fail(1, std::string(tags[a]) + " and " + tags[b] +
                                " disagree on the final objective by " + fd(gap) +
                                " relative");
            }
        }
    }
    // The solvers must meet in code space, not just in objective value.
    Eigen::VectorXd codes[3];
    bool loaded = true;
    for (int s = 0; s < 3; ++s) {
        const std::string file = "code_" + std::string(tags[s]) + ".vec";
        if (!fs::exists(join(dir, file))) {
            rep.fail(2, file + " is missing");
            loaded = false;
            continue;
        }
        codes[s] = read_vector(join(dir, file));
    }
    if (loaded && (codes[0].size() != codes[1].size() || codes[1].size() != codes[2].size())) {
        rep.fail(2, "final code files disagree on the model size");
        loaded = false;
    }
    if (loaded) {
        for (int a = 0; a < 3; ++a) {
            for (int b = a + 1; b < 3; ++b) {
                const double scale = std::max({codes[a].norm(), codes[b].norm(), 1e-300});
                const double gap = (codes[a] - codes[b]).norm() / scale;
                if (gap > 1e-4) {
                    rep.fail(1, std::string(tags[a]) + " and " + tags[b] +
                                    " disagree on the final code by " + fd(gap) + " relative");
                }
            }
        }
    }
    rep.messages.push_back("convergence: traces of " + std::to_string(counts[0]) + ", " +
                           std::to_string(counts[1]) + " and " + std::to_string(counts[2]) +
                           " sweeps agree on the limit");
}

}  // namespace

VerifyReport verify_run(const std::string& dir) {
    VerifyReport rep;
    const std::string meta_path = join(dir, "metadata.txt");
    if (!fs::exists(meta_path)) {
        rep.fail(2, "metadata.txt is missing");
        return rep;
    }
    try {
        const KeyValueFile meta = KeyValueFile::load(meta_path);
        const std::string format = meta.get_string("format", "");
        if (format != "csc-run v1") {
            rep.fail(2, "unrecognized run format '" + format + "'");
            return rep;
        }
        const std::string kind = meta.require("kind");
        const std::string results_path = join(dir, "results.csv");
        if (!fs::exists(results_path)) {
            rep.fail(2, "results.csv is missing");
            return rep;
        }
        const CsvTable results = CsvTable::load(results_path);
        if (kind == "omp-batch") {
            verify_omp_results(results, rep);
        } else if (kind == "bp-batch") {
            verify_bp_results(results, rep);
        } else if (kind == "evolution") {
            verify_evolution(dir, meta, results, rep);
        } else if (kind == "convergence") {
            verify_convergence(dir, results, rep);
        } else {
            rep.fail(2, "unrecognized run kind '" + kind + "'");
        }
    } catch (const Error& e) {
        rep.fail(2, std::string("malformed artifacts: ") + e.what());
    }
    if (rep.status == 0) rep.messages.push_back("all recorded guarantees hold");
    return rep;
}

}  // namespace csc
