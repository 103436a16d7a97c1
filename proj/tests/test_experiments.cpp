#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "csc/errors.hpp"
#include "csc/experiments.hpp"
#include "csc/metrics.hpp"
#include "csc/plan.hpp"
#include "csc/runner.hpp"
#include "csc/signal_lab.hpp"
#include "csc/text_io.hpp"
#include "doctest.h"

using namespace csc;
namespace fs = std::filesystem;

namespace {

// Small low-coherence operator shared by the batch tests: mu lands in
// [0.2, 0.3], so one or two active positions stay inside the greedy guarantee
// region while the problem remains cheap.
LocalDictionary tiny_design() {
    DictionaryDesignConfig config;
    config.n = 16;
    config.m = 1;
    config.coherence_lo = 0.2;
    config.coherence_hi = 0.3;
    return low_coherence_dictionary(11, config);
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "csc_experiment_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string file_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

// Metadata comparison that ignores the measured runtimes.
std::vector<std::pair<std::string, std::string>> timeless_entries(const fs::path& path) {
    std::vector<std::pair<std::string, std::string>> kept;
    const KeyValueFile kv = KeyValueFile::load(path.string());
    for (const auto& [key, value] : kv.entries()) {
        if (key == "runtime_seconds") continue;
        if (key.size() > 10 && key.substr(key.size() - 10) == "_wall_time") continue;
        kept.emplace_back(key, value);
    }
    return kept;
}

CsvTable without_column(CsvTable t, const std::string& name) {
    const int col = t.column(name);
    if (col < 0) return t;
    t.header.erase(t.header.begin() + col);
    for (auto& row : t.rows) row.erase(row.begin() + col);
    return t;
}

void write_fake_run(const fs::path& dir, const std::string& kind, const CsvTable& results) {
    KeyValueFile meta;
    meta.set("format", "csc-run v1");
    meta.set("plan", "fake");
    meta.set("kind", kind);
    meta.save((dir / "metadata.txt").string());
    results.save((dir / "results.csv").string());
}

}  // namespace

TEST_CASE("batch result schemas are frozen") {
    const std::vector<std::string> omp_cols = {
        "trial", "l0", "l0_inf", "gamma_min", "eps_L", "distance_l2", "success",
        "seed", "amplitude_scale", "eps_global", "coherence_ok", "hypothesis_ok",
        "error_bound", "phase_ratio", "phase_line", "reselection_warnings", "error"};
    const std::vector<std::string> bp_cols = {
        "trial", "l0", "l0_inf", "gamma_min", "eps_L", "distance_l2", "success",
        "seed", "amplitude_scale", "eps_global", "lambda", "distance_linf",
        "ratio_linf", "support_subset", "hypothesis_ok", "phase_ratio",
        "full_recovery_expected", "linf_bound", "converged", "iterations", "error"};
    CHECK(omp_batch_header() == omp_cols);
    CHECK(bp_batch_header() == bp_cols);

    // The leading columns agree so shared tooling can read either stream.
    for (int i = 0; i < 10; ++i) CHECK(omp_cols[i] == bp_cols[i]);
}

TEST_CASE("failed trials leave their distance cells empty") {
    OmpTrialRecord omp_rec;
    omp_rec.trial = 3;
    omp_rec.distance_l2 = std::numeric_limits<double>::quiet_NaN();
    omp_rec.error = "bad,\nthing";
    const auto omp_row = omp_batch_row(omp_rec);
    REQUIRE(omp_row.size() == omp_batch_header().size());
    CHECK(omp_row[5].empty());             // distance cell
    CHECK(omp_row.back() == "bad;;thing"); // structural characters replaced

    BpTrialRecord bp_rec;
    bp_rec.trial = 4;
    bp_rec.distance_l2 = std::numeric_limits<double>::quiet_NaN();
    bp_rec.distance_linf = std::numeric_limits<double>::quiet_NaN();
    bp_rec.error = "solver gave up";
    const auto bp_row = bp_batch_row(bp_rec);
    REQUIRE(bp_row.size() == bp_batch_header().size());
    CHECK(bp_row[5].empty());
    CHECK(bp_row[11].empty());
    CHECK(bp_row.back() == "solver gave up");

    // Clean records keep every cell parseable.
    OmpTrialRecord good;
    good.distance_l2 = 0.25;
    good.gamma_min = 1.5;
    good.error_bound = 0.04;
    const auto row = omp_batch_row(good);
    CHECK(row[5] == "0.25");
    CHECK(row[3] == "1.5");
    CHECK(row[12] == "0.04");
}

TEST_CASE("greedy batch is reproducible and its flags mirror the metric layer") {
    const ConvOperator op(tiny_design(), 48);
    const double mu = op.mutual_coherence();
    REQUIRE(mu >= 0.2);
    REQUIRE(mu <= 0.3);

    OmpBatchConfig config;
    config.base.master_seed = 21;
    config.base.trials = 30;
    config.base.cardinality_lo = 1;
    config.base.cardinality_hi = 2;
    const auto records = omp_batch(op, config);
    const auto again = omp_batch(op, config);
    REQUIRE(records.size() == 30);

    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(omp_batch_row(records[i]) == omp_batch_row(again[i]));
        const auto& rec = records[i];
        CHECK(rec.error.empty());
        CHECK(rec.l0 >= 1);
        CHECK(rec.l0 <= 2);
        CHECK(rec.l0_inf <= rec.l0);
        CHECK(rec.coherence_ok == erc_coherence_condition(mu, rec.l0_inf));
        CHECK(rec.coherence_ok);  // both cardinalities sit inside the region
        CHECK(rec.phase_line == omp_phase_line(mu, rec.l0_inf));
        REQUIRE(rec.gamma_min.has_value());
        CHECK(rec.hypothesis_ok ==
              omp_hypothesis(mu, rec.l0_inf, rec.eps_local, *rec.gamma_min));
        const auto bound = omp_error_bound(rec.eps_global, mu, rec.l0_inf);
        REQUIRE(rec.error_bound.has_value());
        CHECK(*rec.error_bound == *bound);

        // Noiseless trials inside the guarantee region recover exactly.
        CHECK(rec.eps_global == 0.0);
        CHECK(rec.success);
        CHECK(rec.distance_l2 <= 1e-8);
    }

    // Each trial draws from its own substream.
    CHECK(records[0].instance_seed != records[1].instance_seed);
    CHECK(records[0].amplitude_scale != records[1].amplitude_scale);
}

TEST_CASE("greedy batch records the noise split faithfully") {
    const ConvOperator op(tiny_design(), 48);
    OmpBatchConfig config;
    config.base.master_seed = 33;
    config.base.trials = 20;
    config.base.cardinality_lo = 1;
    config.base.cardinality_hi = 2;
    config.base.noise = NoiseLaw::global_norm(0.05);
    const auto records = omp_batch(op, config);

    for (const auto& rec : records) {
        CHECK(rec.eps_global == doctest::Approx(0.05).epsilon(1e-12));
        CHECK(rec.eps_local <= rec.eps_global * (1.0 + 1e-12));
        CHECK(rec.eps_local > 0.0);
        CHECK(rec.amplitude_scale >= 1.0);
        CHECK(rec.amplitude_scale <= 10.0);
        REQUIRE(rec.phase_ratio.has_value());
        CHECK(*rec.phase_ratio == rec.eps_local / *rec.gamma_min);
    }
}

TEST_CASE("convex batch ties every record to the relaxation guarantees") {
    const ConvOperator op(tiny_design(), 48);
    const double mu = op.mutual_coherence();

    BpBatchConfig config;
    config.base.master_seed = 5;
    config.base.trials = 10;
    config.base.cardinality_lo = 1;
    config.base.cardinality_hi = 2;
    config.base.noise = NoiseLaw::global_norm(0.01);
    config.convergence_tol = 1e-10;
    config.max_iterations = 200000;
    const auto records = bp_batch(op, config);
    const auto again = bp_batch(op, config);
    REQUIRE(records.size() == 10);

    int in_region = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(bp_batch_row(records[i]) == bp_batch_row(again[i]));
        const auto& rec = records[i];
        REQUIRE(rec.error.empty());
        CHECK(rec.lambda == 4.0 * rec.eps_local);
        CHECK(rec.linf_bound == bp_linf_bound(rec.eps_local));
        CHECK(rec.hypothesis_ok == bp_hypothesis(mu, rec.l0_inf));
        CHECK(rec.converged);
        REQUIRE(rec.phase_ratio.has_value());
        CHECK(rec.full_recovery_expected == (*rec.phase_ratio < 2.0 / 15.0));
        if (rec.hypothesis_ok) {
            ++in_region;
            CHECK(rec.support_subset);
            REQUIRE(rec.ratio_linf.has_value());
            CHECK(*rec.ratio_linf < 7.5);
            CHECK(rec.distance_linf < rec.linf_bound);
            if (rec.full_recovery_expected) CHECK(rec.success);
        }
    }
    CHECK(in_region > 0);
}

TEST_CASE("plan names carry their experiment defaults") {
    const auto fig2 = plan_defaults("fig2-omp-distance");
    CHECK(fig2.kind == PlanKind::OmpBatch);
    CHECK(fig2.dictionary == "design");
    CHECK(fig2.n == 64);
    CHECK(fig2.m == 1);
    CHECK(fig2.N == 640);
    CHECK(fig2.batch.trials == 500);
    CHECK(fig2.batch.cardinality_hi == 500);
    CHECK(fig2.batch.noise.kind == NoiseLaw::Kind::GlobalNorm);
    CHECK(fig2.batch.noise.value == 0.1);

    const auto fig3a = plan_defaults("fig3a-omp-phase");
    CHECK(fig3a.kind == PlanKind::OmpBatch);
    CHECK(fig3a.batch.master_seed != fig2.batch.master_seed);

    const auto fig3b = plan_defaults("fig3b-bp-phase");
    CHECK(fig3b.kind == PlanKind::BpBatch);
    CHECK(fig3b.batch.cardinality_hi == 30);
    CHECK(fig3b.lambda_factor == 4.0);

    const auto fig4 = plan_defaults("fig4-bp-linf");
    CHECK(fig4.kind == PlanKind::BpBatch);
    CHECK(fig4.batch.cardinality_hi == 8);

    const auto fig5 = plan_defaults("fig5-admm-evolution");
    CHECK(fig5.kind == PlanKind::Evolution);
    CHECK(fig5.dictionary == "dct");
    CHECK(fig5.n == 25);
    CHECK(fig5.m == 5);
    CHECK(fig5.N == 300);
    CHECK(fig5.cardinality == 50);
    CHECK(fig5.amplitude_lo == 1.0);
    CHECK(fig5.amplitude_hi == 2.0);
    CHECK(fig5.sigma == 0.0);
    CHECK(fig5.checkpoints == std::vector<int>{20, 200, 1000});

    const auto fig6 = plan_defaults("fig6-convergence-time");
    CHECK(fig6.kind == PlanKind::Convergence);
    CHECK(fig6.dictionary == "dct");
    CHECK(fig6.sigma == 0.04);

    CHECK_THROWS_AS(plan_defaults("fig7-unknown"), PlanInvalidError);

    auto broken = fig2;
    broken.batch.trials = 0;
    CHECK_THROWS_AS(broken.validate(), PlanInvalidError);
    broken = fig5;
    broken.N = 10;  // shorter than the filter
    CHECK_THROWS_AS(broken.validate(), PlanInvalidError);
}

TEST_CASE("plan files override defaults and reject unknown keys") {
    const fs::path dir = scratch_dir("plans");
    const fs::path path = dir / "small.plan";

    KeyValueFile kv;
    kv.set("name", "fig2-omp-distance");
    kv.set("n", static_cast<long long>(16));
    kv.set("coherence_lo", 0.2);
    kv.set("coherence_hi", 0.3);
    kv.set("design_seed", static_cast<long long>(11));
    kv.set("N", static_cast<long long>(48));
    kv.set("trials", static_cast<long long>(10));
    kv.set("cardinality_hi", static_cast<long long>(2));
    kv.set("noise_kind", "none");
    kv.save(path.string());

    const auto plan = load_plan(path.string());
    CHECK(plan.name == "fig2-omp-distance");
    CHECK(plan.n == 16);
    CHECK(plan.N == 48);
    CHECK(plan.batch.trials == 10);
    CHECK(plan.batch.cardinality_lo == 1);  // untouched default
    CHECK(plan.batch.cardinality_hi == 2);
    CHECK(plan.batch.noise.kind == NoiseLaw::Kind::None);
    CHECK(plan.design_seed == 11);

    KeyValueFile bad = kv;
    bad.set("banana", "yes");
    bad.save(path.string());
    CHECK_THROWS_AS(load_plan(path.string()), PlanInvalidError);

    KeyValueFile nameless;
    nameless.set("trials", static_cast<long long>(3));
    nameless.save(path.string());
    CHECK_THROWS(load_plan(path.string()));
}

TEST_CASE("plans resolve dictionary files relative to their own directory") {
    const fs::path dir = scratch_dir("plan_dict");
    const LocalDictionary dict = tiny_design();
    write_dictionary((dir / "filters.dict").string(), dict);

    auto plan = plan_defaults("fig2-omp-distance");
    plan.dictionary = "filters.dict";
    plan.n = dict.atoms.rows();
    plan.m = dict.atoms.cols();
    plan.N = 48;

    const LocalDictionary loaded = plan_dictionary(plan, dir.string());
    CHECK((loaded.atoms - dict.atoms).lpNorm<Eigen::Infinity>() == 0.0);

    plan.dictionary = "missing.dict";
    CHECK_THROWS(plan_dictionary(plan, dir.string()));
}

TEST_CASE("a noiseless greedy run reproduces itself and passes verification") {
    const fs::path dir = scratch_dir("omp_run");
    auto plan = plan_defaults("fig2-omp-distance");
    plan.design_seed = 11;
    plan.n = 16;
    plan.coherence_lo = 0.2;
    plan.coherence_hi = 0.3;
    plan.N = 48;
    plan.batch.trials = 10;
    plan.batch.cardinality_hi = 2;
    plan.batch.noise = NoiseLaw::none();

    run_experiment(plan, (dir / "a").string());
    run_experiment(plan, (dir / "b").string());

    CHECK(file_bytes(dir / "a" / "results.csv") == file_bytes(dir / "b" / "results.csv"));
    CHECK(timeless_entries(dir / "a" / "metadata.txt") ==
          timeless_entries(dir / "b" / "metadata.txt"));
    CHECK_FALSE(fs::exists(dir / "a" / "bound.csv"));  // no shared noise level

    const auto results = CsvTable::load((dir / "a" / "results.csv").string());
    REQUIRE(results.rows.size() == 10);
    const int c_dist = results.require_column("distance_l2");
    const int c_success = results.require_column("success");
    for (std::size_t r = 0; r < results.rows.size(); ++r) {
        CHECK(results.value(r, c_dist) <= 1e-8);
        CHECK(results.value(r, c_success) == 1.0);
    }

    const auto meta = KeyValueFile::load((dir / "a" / "metadata.txt").string());
    CHECK(meta.require("format") == "csc-run v1");
    CHECK(meta.require("kind") == "omp-batch");
    CHECK(meta.require_int("rows") == 10);
    CHECK(meta.require_int("trial_errors") == 0);
    CHECK(meta.require("cardinality_law") == "uniform-integer");

    std::ifstream plot(dir / "a" / "plot.txt");
    std::string first;
    std::getline(plot, first);
    CHECK(first == "format=plotspec v1");

    const auto report = verify_run((dir / "a").string());
    CHECK(report.status == 0);
    CHECK_FALSE(report.messages.empty());
}

TEST_CASE("a noisy greedy run ships its guarantee curves") {
    const fs::path dir = scratch_dir("omp_noisy_run");
    auto plan = plan_defaults("fig2-omp-distance");
    plan.design_seed = 11;
    plan.n = 16;
    plan.coherence_lo = 0.2;
    plan.coherence_hi = 0.3;
    plan.N = 48;
    plan.batch.trials = 8;
    plan.batch.cardinality_hi = 2;
    plan.batch.noise = NoiseLaw::global_norm(0.05);

    run_experiment(plan, dir.string());

    const auto bounds = CsvTable::load((dir / "bound.csv").string());
    const int c_k = bounds.require_column("l0_inf");
    const int c_sq = bounds.require_column("distance_bound_sq");
    const int c_b = bounds.require_column("distance_bound");
    bounds.require_column("phase_line");
    REQUIRE(!bounds.rows.empty());
    CHECK(bounds.value(0, c_k) == 1.0);
    CHECK(bounds.value(0, c_sq) == 0.05 * 0.05);
    CHECK(bounds.value(0, c_b) == 0.05);

    const auto meta = KeyValueFile::load((dir / "metadata.txt").string());
    const double mu = meta.require_double("mutual_coherence");
    const auto expected = omp_error_bound(0.05, mu, 2);
    REQUIRE(expected.has_value());
    CHECK(bounds.value(1, c_sq) == doctest::Approx(*expected).epsilon(1e-12));

    CHECK(verify_run(dir.string()).status == 0);
}

TEST_CASE("a convex run reproduces itself and passes verification") {
    const fs::path dir = scratch_dir("bp_run");
    auto plan = plan_defaults("fig3b-bp-phase");
    plan.design_seed = 11;
    plan.n = 16;
    plan.coherence_lo = 0.2;
    plan.coherence_hi = 0.3;
    plan.N = 48;
    plan.batch.trials = 6;
    plan.batch.cardinality_lo = 1;
    plan.batch.cardinality_hi = 1;
    plan.batch.noise = NoiseLaw::global_norm(0.01);

    run_experiment(plan, (dir / "a").string());
    run_experiment(plan, (dir / "b").string());
    CHECK(file_bytes(dir / "a" / "results.csv") == file_bytes(dir / "b" / "results.csv"));

    const auto meta = KeyValueFile::load((dir / "a" / "metadata.txt").string());
    CHECK(meta.require("kind") == "bp-batch");
    CHECK(meta.require_double("lambda_factor") == 4.0);

    const auto report = verify_run((dir / "a").string());
    CHECK(report.status == 0);
}

TEST_CASE("the verifier flags guarantee violations and broken artifacts") {
    SUBCASE("recovery condition violated") {
        const fs::path dir = scratch_dir("verify_hyp");
        OmpTrialRecord rec;
        rec.trial = 1;
        rec.l0 = 1;
        rec.l0_inf = 1;
        rec.gamma_min = 1.0;
        rec.distance_l2 = 0.5;
        rec.success = false;
        rec.coherence_ok = true;
        rec.hypothesis_ok = true;
        rec.error_bound = 1.0;
        rec.phase_line = 0.5;
        CsvTable t;
        t.header = omp_batch_header();
        t.rows.push_back(omp_batch_row(rec));
        write_fake_run(dir, "omp-batch", t);
        const auto report = verify_run(dir.string());
        CHECK(report.status == 1);
        REQUIRE(!report.messages.empty());
        CHECK(report.messages.front().find("missed") != std::string::npos);
    }

    SUBCASE("error bound exceeded") {
        const fs::path dir = scratch_dir("verify_bound");
        OmpTrialRecord rec;
        rec.trial = 2;
        rec.l0 = 1;
        rec.l0_inf = 1;
        rec.distance_l2 = 1.0;
        rec.success = true;
        rec.coherence_ok = true;
        rec.hypothesis_ok = false;
        rec.error_bound = 1e-6;
        CsvTable t;
        t.header = omp_batch_header();
        t.rows.push_back(omp_batch_row(rec));
        write_fake_run(dir, "omp-batch", t);
        const auto report = verify_run(dir.string());
        CHECK(report.status == 1);
        CHECK(report.messages.front().find("exceeds") != std::string::npos);
    }

    SUBCASE("sparse convex trial leaking support") {
        const fs::path dir = scratch_dir("verify_subset");
        BpTrialRecord rec;
        rec.trial = 1;
        rec.l0 = 3;
        rec.l0_inf = 3;
        rec.distance_l2 = 0.1;
        rec.distance_linf = 0.05;
        rec.support_subset = false;
        rec.linf_bound = 0.5;
        CsvTable t;
        t.header = bp_batch_header();
        t.rows.push_back(bp_batch_row(rec));
        // A dense row outside the guarantee region must not trip anything.
        BpTrialRecord dense = rec;
        dense.trial = 2;
        dense.l0 = 20;
        dense.l0_inf = 20;
        t.rows.push_back(bp_batch_row(dense));
        write_fake_run(dir, "bp-batch", t);
        const auto report = verify_run(dir.string());
        CHECK(report.status == 1);
        int subset_hits = 0;
        for (const auto& msg : report.messages)
            if (msg.find("leaks") != std::string::npos) ++subset_hits;
        CHECK(subset_hits == 1);
    }

    SUBCASE("missing results file") {
        const fs::path dir = scratch_dir("verify_missing");
        CsvTable t;
        t.header = omp_batch_header();
        write_fake_run(dir, "omp-batch", t);
        fs::remove(dir / "results.csv");
        CHECK(verify_run(dir.string()).status == 2);
    }

    SUBCASE("missing metadata") {
        const fs::path dir = scratch_dir("verify_nometa");
        CHECK(verify_run(dir.string()).status == 2);
    }

    SUBCASE("unrecognized format or kind") {
        const fs::path dir = scratch_dir("verify_format");
        CsvTable t;
        t.header = omp_batch_header();
        write_fake_run(dir, "mystery-kind", t);
        CHECK(verify_run(dir.string()).status == 2);

        KeyValueFile meta;
        meta.set("format", "other v9");
        meta.save((dir / "metadata.txt").string());
        CHECK(verify_run(dir.string()).status == 2);
    }
}

TEST_CASE("an evolution run snapshots its estimates and recovers the planted code") {
    const fs::path dir = scratch_dir("evolution_run");
    auto plan = plan_defaults("fig5-admm-evolution");
    // Shrink to a low-coherence design where two active positions satisfy the
    // exact-recovery condition, so the annealed run must land on the planted
    // code quickly.
    plan.dictionary = "design";
    plan.design_seed = 11;
    plan.n = 16;
    plan.m = 1;
    plan.coherence_lo = 0.2;
    plan.coherence_hi = 0.3;
    plan.N = 48;
    plan.instance_seed = 9;
    plan.cardinality = 2;
    plan.checkpoints = {2, 5};
    plan.schedule.initial = 0.01;
    plan.schedule.floor = 1e-8;
    plan.solver_tol = 1e-8;
    plan.solver_max_iterations = 8000;

    run_experiment(plan, (dir / "a").string());
    run_experiment(plan, (dir / "b").string());
    CHECK(file_bytes(dir / "a" / "results.csv") == file_bytes(dir / "b" / "results.csv"));
    CHECK(file_bytes(dir / "a" / "code_final.vec") == file_bytes(dir / "b" / "code_final.vec"));

    for (const char* name : {"planted.vec", "signal.vec", "code_2.vec", "code_5.vec",
                             "code_final.vec"})
        CHECK(fs::exists(dir / "a" / name));
    CHECK(read_vector((dir / "a" / "code_2.vec").string()).size() == 48);
    CHECK(read_vector((dir / "a" / "signal.vec").string()).size() == 48);

    const auto results = CsvTable::load((dir / "a" / "results.csv").string());
    REQUIRE(results.rows.size() == 3);  // two checkpoints plus the final state
    CHECK(results.rows[0][0] == "checkpoint");
    CHECK(results.rows[0][1] == "2");
    CHECK(results.rows[1][1] == "5");
    CHECK(results.rows[2][0] == "final");

    const auto meta = KeyValueFile::load((dir / "a" / "metadata.txt").string());
    CHECK(meta.require("kind") == "evolution");
    CHECK(meta.require_double("final_distance_l2") < 1e-4);
    CHECK(meta.require_int("final_support_size") == meta.require_int("l0"));

    const auto report = verify_run((dir / "a").string());
    CHECK(report.status == 0);

    // Verification notices a vanished snapshot.
    fs::remove(dir / "a" / "code_5.vec");
    CHECK(verify_run((dir / "a").string()).status == 2);
}

TEST_CASE("a convergence run traces all three solvers to one limit") {
    const fs::path dir = scratch_dir("convergence_run");
    auto plan = plan_defaults("fig6-convergence-time");
    plan.n = 8;
    plan.m = 2;
    plan.N = 40;
    plan.instance_seed = 12;
    plan.cardinality = 3;
    plan.sigma = 0.05;
    plan.solver_tol = 1e-9;
    plan.solver_max_iterations = 20000;

    run_experiment(plan, (dir / "a").string());
    run_experiment(plan, (dir / "b").string());

    // Byte-identical modulo the wall-time column.
    const auto ta = without_column(
        CsvTable::load((dir / "a" / "results.csv").string()), "wall_time");
    const auto tb = without_column(
        CsvTable::load((dir / "b" / "results.csv").string()), "wall_time");
    CHECK(ta.header == tb.header);
    CHECK(ta.rows == tb.rows);

    const auto full = CsvTable::load((dir / "a" / "results.csv").string());
    const int c_solver = full.require_column("solver");
    const int c_wall = full.require_column("wall_time");
    int seen[3] = {0, 0, 0};
    for (std::size_t r = 0; r < full.rows.size(); ++r) {
        const std::string& tag = full.rows[r][static_cast<std::size_t>(c_solver)];
        if (tag == "ista") ++seen[0];
        if (tag == "ist-local") ++seen[1];
        if (tag == "admm") ++seen[2];
        CHECK(full.value(r, c_wall) >= 0.0);
    }
    CHECK(seen[0] > 0);
    CHECK(seen[1] > 0);
    CHECK(seen[2] > 0);
    CHECK(seen[0] == seen[1]);  // identical iterations by construction

    for (const char* name : {"code_ista.vec", "code_ist-local.vec", "code_admm.vec"})
        CHECK(fs::exists(dir / "a" / name));
    const auto ista = read_vector((dir / "a" / "code_ista.vec").string());
    const auto admm = read_vector((dir / "a" / "code_admm.vec").string());
    CHECK((ista - admm).norm() <= 1e-4 * std::max(ista.norm(), admm.norm()));

    const auto meta = KeyValueFile::load((dir / "a" / "metadata.txt").string());
    CHECK(meta.require("kind") == "convergence");
    CHECK(meta.require_double("lambda") > 0.0);
    CHECK(meta.require_int("ista_converged") == 1);
    CHECK(meta.require_int("admm_converged") == 1);

    const auto report = verify_run((dir / "a").string());
    CHECK(report.status == 0);
}
