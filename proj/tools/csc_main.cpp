// Command line front end: run experiment plans, verify finished runs,
// design dictionaries, and sparse-code single signals.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "csc/bp.hpp"
#include "csc/errors.hpp"
#include "csc/metrics.hpp"
#include "csc/omp.hpp"
#include "csc/plan.hpp"
#include "csc/runner.hpp"
#include "csc/signal_lab.hpp"
#include "csc/text_io.hpp"

namespace fs = std::filesystem;
using namespace csc;

namespace {

int cmd_run(const std::string& plan_arg, std::string out_dir) {
    ExperimentPlan plan;
    std::string plan_dir;
    if (fs::exists(plan_arg) && fs::is_regular_file(plan_arg)) {
        plan = load_plan(plan_arg);
        plan_dir = fs::path(plan_arg).parent_path().string();
    } else {
        plan = plan_defaults(plan_arg);
        plan.validate();
    }
    if (out_dir.empty()) out_dir = plan.name;
    run_experiment(plan, out_dir, plan_dir);
    const auto meta = KeyValueFile::load((fs::path(out_dir) / "metadata.txt").string());
    std::printf("wrote %s (%s, rows=%s, %.1fs)\n", out_dir.c_str(),
                meta.require("kind").c_str(), meta.require("rows").c_str(),
                meta.require_double("runtime_seconds"));
    return 0;
}

int cmd_verify(const std::string& dir) {
    const VerifyReport report = verify_run(dir);
    for (const auto& message : report.messages) std::printf("%s\n", message.c_str());
    const char* verdict = report.status == 0   ? "pass"
                          : report.status == 1 ? "guarantee violation"
                                               : "missing or malformed artifacts";
    std::printf("%s: %s\n", dir.c_str(), verdict);
    return report.status;
}

int cmd_gen_dict(std::uint64_t seed, const DictionaryDesignConfig& config,
                 const std::string& out) {
    const LocalDictionary local = low_coherence_dictionary(seed, config);
    write_dictionary(out, local);
    const ConvOperator op(local, 4 * config.n);
    std::printf("wrote %s (n=%d m=%d, coherence %.9f in [%g, %g])\n", out.c_str(),
                config.n, config.m, op.mutual_coherence(), config.coherence_lo,
                config.coherence_hi);
    return 0;
}

struct SolveArgs {
    std::string solver;
    std::string signal_path;
    std::string dict_path;
    std::string out_path;
    std::string trace_path;
    std::string mode = "l1";
    std::optional<double> lambda;
    std::optional<double> schedule_decay;
    std::optional<int> omp_iterations;
    std::optional<double> omp_residual;
    double rho = 1.0;
    double tol = 1e-8;
    int max_iters = 100000;
};

int cmd_solve(const SolveArgs& args) {
    const LocalDictionary local = read_dictionary(args.dict_path);
    const Eigen::VectorXd y = read_vector(args.signal_path);
    const ConvOperator op(local, static_cast<int>(y.size()));

    std::ofstream trace_out;
    if (!args.trace_path.empty()) {
        trace_out.open(args.trace_path);
        if (!trace_out) throw IoError("cannot open trace file: " + args.trace_path);
        trace_out << "iter,objective,primal_res,dual_res,wall_time\n";
        trace_out.precision(17);
    }

    Eigen::VectorXd code;
    int iterations = 0;
    bool converged = false;
    double residual = 0.0;
    double wall = 0.0;
    int support = 0;

    if (args.solver == "omp") {
        if (args.omp_iterations.has_value() == args.omp_residual.has_value())
            throw SpecInvalidError(
                "the greedy solver needs exactly one stopping rule: --iters or --residual");
        const OmpConfig cfg = args.omp_iterations ? OmpConfig::fixed(*args.omp_iterations)
                                                  : OmpConfig::residual(*args.omp_residual);
        const PursuitResult result = omp(op, y, cfg);
        if (trace_out.is_open())
            for (std::size_t t = 0; t < result.residual_norms.size(); ++t) {
                const double r = result.residual_norms[t];
                trace_out << t << ',' << 0.5 * r * r << ",0,0,\n";
            }
        code = result.code.values;
        iterations = result.iterations;
        converged = result.converged;
        residual = result.residual_norms.back();
        wall = result.wall_time;
        support = static_cast<int>(result.support.size());
    } else {
        BpConfig cfg;
        if (args.lambda && args.schedule_decay)
            throw SpecInvalidError("--lambda and --lambda-schedule are mutually exclusive");
        if (args.lambda) {
            cfg = BpConfig::fixed_lambda(*args.lambda);
        } else {
            LambdaSchedule schedule;
            if (args.schedule_decay) schedule.decay = *args.schedule_decay;
            cfg = BpConfig::annealed(schedule);
        }
        cfg.rho = args.rho;
        cfg.convergence_tol = args.tol;
        cfg.max_iterations = args.max_iters;
        cfg.mode = args.mode == "l0" ? PenaltyMode::L0 : PenaltyMode::L1;
        cfg.validate();

        TraceFn trace;
        if (trace_out.is_open())
            trace = [&](const TraceRow& row) {
                trace_out << row.iteration << ',' << row.objective << ','
                          << std::max(row.primal_center, row.primal_stripe) << ','
                          << row.code_change << ',' << row.wall_time << '\n';
            };

        BpResult result;
        if (args.solver == "ista")
            result = bp_global_reference(op, y, cfg, trace);
        else if (args.solver == "ist-local")
            result = bp_ist_local(op, y, cfg, trace);
        else
            result = bp_admm_local(op, y, cfg, trace);
        code = result.code.values;
        iterations = result.iterations;
        converged = result.converged;
        residual = result.residual_norms.back();
        wall = result.wall_time;
        support = l0_norm(code, 1e-10);
    }

    write_vector(args.out_path, code);
    std::printf("%s: iterations=%d converged=%d residual=%.6e support=%d wall=%.2fs\n",
                args.solver.c_str(), iterations, converged ? 1 : 0, residual, support, wall);
    std::printf("wrote %s\n", args.out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"convolutional sparse coding toolkit"};
    app.require_subcommand(1);

    std::string run_plan, run_out;
    auto* run = app.add_subcommand("run", "run an experiment plan into a directory");
    run->add_option("plan", run_plan, "plan name or plan file path")->required();
    run->add_option("--out", run_out, "output directory (default: the plan name)");

    std::string verify_dir;
    auto* verify = app.add_subcommand("verify", "check the guarantees of a finished run");
    verify->add_option("dir", verify_dir, "run directory")->required();

    std::uint64_t gd_seed = 2024;
    DictionaryDesignConfig gd_config;
    std::string gd_out = "dictionary.txt";
    auto* gen = app.add_subcommand("gen-dict", "design a low-coherence local dictionary");
    gen->add_option("--seed", gd_seed, "design seed");
    gen->add_option("--n", gd_config.n, "filter length");
    gen->add_option("--m", gd_config.m, "filters per position");
    gen->add_option("--lo", gd_config.coherence_lo, "coherence band lower edge");
    gen->add_option("--hi", gd_config.coherence_hi, "coherence band upper edge");
    gen->add_option("--out", gd_out, "output dictionary file");

    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "sparse-code one signal");
    solve->add_option("--solver", sa.solver, "omp, ista, admm, or ist-local")
        ->required()
        ->check(CLI::IsMember({"omp", "ista", "admm", "ist-local"}));
    solve->add_option("--in", sa.signal_path, "signal vector file")->required();
    solve->add_option("--dict", sa.dict_path, "local dictionary file")->required();
    solve->add_option("--out", sa.out_path, "output code vector file")->required();
    solve->add_option("--lambda", sa.lambda, "fixed penalty weight");
    solve->add_option("--lambda-schedule", sa.schedule_decay,
                      "per-iteration decay of an annealed penalty weight");
    solve->add_option("--rho", sa.rho, "consensus weight of the splitting solver");
    solve->add_option("--tol", sa.tol, "relative code-change convergence threshold");
    solve->add_option("--max-iters", sa.max_iters, "iteration cap");
    solve->add_option("--mode", sa.mode, "penalty mode")
        ->check(CLI::IsMember({"l1", "l0"}));
    solve->add_option("--trace", sa.trace_path, "per-iteration trace CSV file");
    solve->add_option("--iters", sa.omp_iterations, "greedy stop: number of selections");
    solve->add_option("--residual", sa.omp_residual, "greedy stop: residual threshold");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(run_plan, run_out);
        if (*verify) return cmd_verify(verify_dir);
        if (*gen) return cmd_gen_dict(gd_seed, gd_config, gd_out);
        return cmd_solve(sa);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
