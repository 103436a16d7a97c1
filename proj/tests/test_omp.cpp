#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "csc/exact_metrics.hpp"
#include "csc/metrics.hpp"
#include "csc/omp.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace csc;
using csc::testing::dense_oracle;
using csc::testing::random_operator;
using csc::testing::random_vector;

namespace {

ConvOperator two_tap_operator(double mu, int N) {
    const double t = 0.5 * std::asin(2.0 * mu);
    Eigen::MatrixXd atoms(2, 1);
    atoms << std::cos(t), std::sin(t);
    return ConvOperator(LocalDictionary(atoms), N);
}

}  // namespace

TEST_CASE("a single atom is recovered exactly in one selection") {
    const auto op = random_operator(301, 4, 2, 20);
    const Eigen::VectorXd y = 2.3 * op.column(7, 1);
    const auto res = omp(op, y, OmpConfig::fixed(1));
    REQUIRE(res.support.indices == std::vector<int>{7 * 2 + 1});
    CHECK(res.code.values[7 * 2 + 1] == doctest::Approx(2.3).epsilon(1e-12));
    CHECK(res.residual_norms.back() <= 1e-12);
    CHECK(res.converged);
    CHECK(res.reselection_warnings == 0);
}

TEST_CASE("two disjoint atoms match the exhaustive best pair") {
    const auto op = random_operator(302, 3, 2, 16);
    const int ia = 2 * 2 + 0, ib = 9 * 2 + 1;  // shifts 2 and 9, disjoint for n=3
    const Eigen::VectorXd y = 1.0 * op.column(2, 0) + 2.0 * op.column(9, 1);

    // Exhaustive oracle: least squares over every atom pair.
    const Eigen::MatrixXd D = dense_oracle(op);
    double best_res = std::numeric_limits<double>::infinity();
    std::pair<int, int> best_pair{-1, -1};
    Eigen::Vector2d best_x;
    for (int a = 0; a < D.cols(); ++a)
        for (int b = a + 1; b < D.cols(); ++b) {
            Eigen::MatrixXd DT(D.rows(), 2);
            DT.col(0) = D.col(a);
            DT.col(1) = D.col(b);
            const Eigen::Vector2d x = DT.colPivHouseholderQr().solve(y);
            const double rn = (y - DT * x).norm();
            if (rn < best_res - 1e-12) {
                best_res = rn;
                best_pair = {a, b};
                best_x = x;
            }
        }
    REQUIRE(best_pair == std::make_pair(ia, ib));

    const auto res = omp(op, y, OmpConfig::fixed(2));
    CHECK(res.support.indices == std::vector<int>{ia, ib});
    CHECK(res.code.values[ia] == doctest::Approx(best_x[0]).epsilon(1e-10));
    CHECK(res.code.values[ib] == doctest::Approx(best_x[1]).epsilon(1e-10));
    CHECK(res.residual_norms.back() <= 1e-12);
}

TEST_CASE("ties break to the lowest atom index") {
    const auto op = random_operator(303, 2, 1, 12);
    const Eigen::VectorXd y = op.column(3, 0) + op.column(8, 0);
    const auto res = omp(op, y, OmpConfig::fixed(1));
    CHECK(res.support.indices == std::vector<int>{3});
}

TEST_CASE("residual stays orthogonal to every selected atom") {
    const auto op = random_operator(304, 5, 2, 24);
    const Eigen::VectorXd y = random_vector(42, op.N());
    for (int k = 1; k <= 6; ++k) {
        const auto res = omp(op, y, OmpConfig::fixed(k));
        const Eigen::VectorXd fit = op.apply(res.code.values);
        const Eigen::VectorXd corr = op.adjoint(y - fit);
        for (int idx : res.support.indices) CHECK(std::abs(corr[idx]) < 1e-8);
    }
}

TEST_CASE("residual norms never increase") {
    const auto op = random_operator(305, 4, 3, 30);
    const Eigen::VectorXd y = random_vector(43, op.N());
    const auto res = omp(op, y, OmpConfig::fixed(10));
    for (size_t i = 1; i < res.residual_norms.size(); ++i)
        CHECK(res.residual_norms[i] <= res.residual_norms[i - 1] + 1e-12);
    CHECK(res.reselection_warnings == 0);
}

TEST_CASE("residual-threshold rule stops as soon as it is met") {
    const auto op = random_operator(306, 4, 2, 30);
    const Eigen::VectorXd y = random_vector(44, op.N());
    const double eps = 0.5 * y.norm();
    const auto res = omp(op, y, OmpConfig::residual(eps));
    CHECK(res.converged);
    CHECK(res.residual_norms.back() <= eps);
    // One selection fewer must still be above the threshold.
    REQUIRE(res.iterations >= 1);
    CHECK(res.residual_norms[res.iterations - 1] > eps);
}

TEST_CASE("zero signal stops immediately under a zero threshold") {
    const auto op = random_operator(307, 3, 1, 12);
    const auto res = omp(op, Eigen::VectorXd::Zero(12), OmpConfig::residual(0.0));
    CHECK(res.converged);
    CHECK(res.iterations == 0);
    CHECK(res.support.indices.empty());
    CHECK(res.code.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("hitting the cap without meeting the rule is flagged") {
    const auto op = random_operator(308, 4, 2, 30);
    const Eigen::VectorXd y = random_vector(45, op.N());
    auto cfg = OmpConfig::residual(1e-12);
    cfg.max_iterations = 2;
    const auto res = omp(op, y, cfg);
    CHECK_FALSE(res.converged);
    CHECK(res.iterations == 2);
}

TEST_CASE("an ill-conditioned support raises a rank error at the pivot tolerance") {
    // Two neighboring shifts of this filter have inner product 0.48, so the
    // second selection leaves a Cholesky pivot of 1 - 0.48^2 = 0.7696. With
    // the tolerance raised above that, the update must refuse the atom.
    Eigen::MatrixXd atoms(2, 1);
    atoms << 0.8, 0.6;
    ConvOperator op(LocalDictionary(atoms), 8);
    const Eigen::VectorXd y = op.column(0, 0) + op.column(1, 0);
    auto strict = OmpConfig::fixed(2);
    strict.ls_tolerance = 0.8;
    CHECK_THROWS_AS(omp(op, y, strict), RankDeficientError);
    CHECK_NOTHROW(omp(op, y, OmpConfig::fixed(2)));
}

TEST_CASE("invalid configurations are rejected") {
    const auto op = random_operator(309, 3, 1, 9);
    CHECK_THROWS_AS(OmpConfig::fixed(-1), SpecInvalidError);
    CHECK_THROWS_AS(OmpConfig::residual(-0.5), SpecInvalidError);
    CHECK_THROWS_AS(omp(op, Eigen::VectorXd::Zero(9), OmpConfig::fixed(10)), SpecInvalidError);
    CHECK_THROWS_AS(omp(op, Eigen::VectorXd::Zero(5), OmpConfig::fixed(1)), DimensionMismatchError);
}

TEST_CASE("planted supports are recovered whenever the guarantee applies") {
    const auto op = two_tap_operator(0.15, 64);
    const double mu = op.mutual_coherence();
    int tested = 0;
    for (int trial = 0; trial < 600; ++trial) {
        CounterRng rng(CounterRng::substream_seed(0xF00D, trial));

        // Plant up to five atoms while keeping every stripe at three or less.
        Eigen::VectorXd code = Eigen::VectorXd::Zero(op.atom_count());
        const int want = 1 + static_cast<int>(rng.uniform_int(5));
        for (int tries = 0; tries < 200 && l0_norm(code) < want; ++tries) {
            const int pos = static_cast<int>(rng.uniform_int(op.atom_count()));
            const double save = code[pos];
            code[pos] = rng.uniform(1.0, 2.0) * (rng.uniform01() < 0.5 ? -1.0 : 1.0);
            if (l0_inf_norm(op, code) > 3) code[pos] = save;
        }

        Eigen::VectorXd noise(op.N());
        for (int i = 0; i < op.N(); ++i) noise[i] = 0.002 * rng.gaussian();

        const Eigen::VectorXd y = op.apply(code) + noise;
        const double eps_l = local_noise_level(op, noise);
        double gmin = std::numeric_limits<double>::infinity();
        for (int i = 0; i < code.size(); ++i)
            if (code[i] != 0.0) gmin = std::min(gmin, std::abs(code[i]));
        const int k_inf = l0_inf_norm(op, code);
        if (!omp_hypothesis(mu, k_inf, eps_l, gmin)) continue;

        const auto res = omp(op, y, OmpConfig::fixed(l0_norm(code)));
        ++tested;
        REQUIRE(res.support.indices == support_set(op, code).indices);
        const auto bound = omp_error_bound(noise.norm(), mu, k_inf);
        REQUIRE(bound.has_value());
        CHECK((res.code.values - code).squaredNorm() <= *bound + 1e-12);
    }
    CHECK(tested >= 500);
}
