#include "fsb/estimator.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "fsb/model.hpp"
#include "support/oracles.hpp"

namespace {

using fsb::BregmanDivergence;
using fsb::EstimateResult;
using fsb::EstimatorConfig;
using fsb::GeneratorFunction;
using fsb::ISModel;
using fsb::WeightFunction;

TEST(Objective, HandValue) {
    // linear f, squared divergence, data {0, 2}, theta = 1 -> (1 + 1)/2
    const auto sq = BregmanDivergence::squared_euclidean(1);
    const auto lin = WeightFunction::linear();
    EXPECT_DOUBLE_EQ(fsb::objective_eval({0.0, 2.0}, sq, lin, 1.0), 1.0);
}

TEST(Objective, ZeroAtExactFit) {
    const auto is = BregmanDivergence::itakura_saito();
    const auto lse = WeightFunction::log_sum_exp(1.0);
    EXPECT_DOUBLE_EQ(fsb::objective_eval({1.0}, is, lse, 1.0), 0.0);
}

TEST(Objective, NamesOffendingRow) {
    const auto is = BregmanDivergence::itakura_saito();
    const auto lin = WeightFunction::linear();
    try {
        fsb::objective_eval({1.0, 2.0, -3.0}, is, lin, 1.0);
        FAIL() << "expected DomainError";
    } catch (const fsb::DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos);
    }
}

TEST(Estimate, LinearWeightGivesSampleMeanInOneIteration) {
    const auto sq = BregmanDivergence::squared_euclidean(1);
    const auto is = BregmanDivergence::itakura_saito();
    const auto lin = WeightFunction::linear();
    const std::vector<double> data{0.5, 1.5, 2.0, 4.0};
    const double mean = 2.0;
    for (const auto* d : {&sq, &is}) {
        const EstimateResult r = fsb::estimate(data, *d, lin);
        EXPECT_TRUE(r.converged);
        EXPECT_EQ(r.iterations, 1);
        EXPECT_NEAR(r.theta_hat[0], mean, 1e-12);
    }
}

TEST(Estimate, SinglePointIsFixedPoint) {
    const auto is = BregmanDivergence::itakura_saito();
    const auto lse = WeightFunction::log_sum_exp(1.0);
    const EstimateResult r = fsb::estimate({5.0}, is, lse);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.theta_hat[0], 5.0, 1e-10);
}

TEST(Estimate, MatchesGridSearchOracleOnSeededExponentialData) {
    // 200 points from exponential(theta* = 1), LSE alpha = 1, IS divergence
    const ISModel model(GeneratorFunction::exponential(1.0));
    const auto data = model.sample(1.0, 200, fsb::RngSeed{42});
    const auto is = BregmanDivergence::itakura_saito();
    const auto lse = WeightFunction::log_sum_exp(1.0);

    const EstimateResult r = fsb::estimate(data, is, lse);
    ASSERT_TRUE(r.converged);

    const double oracle = fsb::test::grid_minimize(
        [&](double t) { return fsb::objective_eval(data, is, lse, t); }, 0.01,
        5.0);
    EXPECT_NEAR(r.theta_hat[0], oracle, 1e-4);
}

TEST(Estimate, FixedPointIdentityHolds) {
    const ISModel model(GeneratorFunction::exponential(1.0));
    const auto is = BregmanDivergence::itakura_saito();
    const auto lse = WeightFunction::log_sum_exp(0.7);
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const auto data = model.sample(2.0, 500, fsb::RngSeed{seed});
        const EstimateResult r = fsb::estimate(data, is, lse);
        ASSERT_TRUE(r.converged);
        double wsum = 0.0, wx = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            wsum += r.weights[i];
            wx += r.weights[i] * data[i];
        }
        EXPECT_LE(std::abs(r.theta_hat[0] - wx / wsum),
                  1e-10 * (1.0 + std::abs(r.theta_hat[0])));
    }
}

TEST(Estimate, MahalanobisShiftEquivariance) {
    Eigen::MatrixXd A(2, 2);
    A << 1.5, 0.2, 0.2, 0.8;
    const auto d = BregmanDivergence::mahalanobis(A);
    const auto lse = WeightFunction::log_sum_exp(0.5);

    fsb::Rng rng(fsb::RngSeed{55});
    Eigen::MatrixXd data(60, 2);
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        data(i, 0) = rng.normal();
        data(i, 1) = 0.5 * rng.normal() + 1.0;
    }
    Eigen::VectorXd b(2);
    b << 3.0, -7.0;
    const EstimateResult r0 = fsb::estimate(data, d, lse);
    const EstimateResult r1 =
        fsb::estimate(data.rowwise() + b.transpose(), d, lse);
    ASSERT_TRUE(r0.converged);
    ASSERT_TRUE(r1.converged);
    EXPECT_LT((r1.theta_hat - (r0.theta_hat + b)).norm(), 1e-8);
}

TEST(Estimate, ItakuraSaitoScaleEquivariance) {
    const ISModel model(GeneratorFunction::exponential(1.0));
    const auto data = model.sample(1.0, 300, fsb::RngSeed{77});
    const auto is = BregmanDivergence::itakura_saito();
    const auto lse = WeightFunction::log_sum_exp(1.0);

    const double c = 3.7;
    std::vector<double> scaled(data);
    for (double& x : scaled) x *= c;

    const EstimateResult r0 = fsb::estimate(data, is, lse);
    const EstimateResult r1 = fsb::estimate(scaled, is, lse);
    ASSERT_TRUE(r0.converged && r1.converged);
    EXPECT_NEAR(r1.theta_hat[0], c * r0.theta_hat[0],
                1e-8 * (1.0 + c * std::abs(r0.theta_hat[0])));
}

TEST(Estimate, StationarityOfObjective) {
    const ISModel model(GeneratorFunction::exponential(1.0));
    const auto data = model.sample(1.0, 250, fsb::RngSeed{91});
    const auto is = BregmanDivergence::itakura_saito();
    const auto lse = WeightFunction::log_sum_exp(1.0);
    const EstimateResult r = fsb::estimate(data, is, lse);
    ASSERT_TRUE(r.converged);
    const double g = fsb::test::central_diff(
        [&](double t) { return fsb::objective_eval(data, is, lse, t); },
        r.theta_hat[0], 1e-6);
    EXPECT_LE(std::abs(g), 1e-6);
}

TEST(Estimate, ZeroDataPointUnderISIsDomainError) {
    const auto is = BregmanDivergence::itakura_saito();
    const auto lse = WeightFunction::log_sum_exp(1.0);
    const std::vector<double> data{1.0, 0.0, 2.0};
    EXPECT_THROW(fsb::estimate(data, is, lse), fsb::DomainError);
}

TEST(Estimate, AllWeightsVanishingIsDegenerate) {
    // a start so far from every observation that exp(-d) underflows
    const auto sq = BregmanDivergence::squared_euclidean(1);
    const auto lse = WeightFunction::log_sum_exp(1.0);
    const std::vector<double> data{0.0, 1.0};
    fsb::EstimatorConfig cfg;
    cfg.init_strategy = fsb::InitStrategy::Provided;
    cfg.provided_start = Eigen::VectorXd::Constant(1, 1e9);
    cfg.n_starts = 1;
    EXPECT_THROW(fsb::estimate(data, sq, lse, cfg),
                 fsb::DegenerateWeightsError);
}

TEST(Estimate, EmptyDatasetThrows) {
    const auto is = BregmanDivergence::itakura_saito();
    EXPECT_THROW(fsb::estimate(std::vector<double>{}, is,
                               WeightFunction::linear()),
                 fsb::DomainError);
}

TEST(Estimate, DampingAndStartStrategiesAgree) {
    const ISModel model(GeneratorFunction::exponential(1.0));
    const auto data = model.sample(1.5, 400, fsb::RngSeed{140});
    const auto is = BregmanDivergence::itakura_saito();
    const auto lse = WeightFunction::log_sum_exp(1.0);

    const EstimateResult base = fsb::estimate(data, is, lse);

    fsb::EstimatorConfig damped;
    damped.damping = 0.5;
    damped.max_iter = 2000;
    const EstimateResult r_damped = fsb::estimate(data, is, lse, damped);
    EXPECT_NEAR(r_damped.theta_hat[0], base.theta_hat[0], 1e-8);

    fsb::EstimatorConfig median_start;
    median_start.init_strategy = fsb::InitStrategy::CoordinateMedian;
    const EstimateResult r_median = fsb::estimate(data, is, lse, median_start);
    EXPECT_NEAR(r_median.theta_hat[0], base.theta_hat[0], 1e-8);

    fsb::EstimatorConfig provided;
    provided.init_strategy = fsb::InitStrategy::Provided;
    provided.provided_start = Eigen::VectorXd::Constant(1, 0.7);
    const EstimateResult r_prov = fsb::estimate(data, is, lse, provided);
    EXPECT_NEAR(r_prov.theta_hat[0], base.theta_hat[0], 1e-8);
}

TEST(Estimate, DeterministicAcrossRuns) {
    const ISModel model(GeneratorFunction::exponential(1.0));
    const auto data = model.sample(1.0, 100, fsb::RngSeed{5});
    const auto is = BregmanDivergence::itakura_saito();
    const auto lse = WeightFunction::log_sum_exp(2.0);
    const EstimateResult a = fsb::estimate(data, is, lse);
    const EstimateResult b = fsb::estimate(data, is, lse);
    EXPECT_EQ(a.theta_hat[0], b.theta_hat[0]);
    EXPECT_EQ(a.objective, b.objective);
}

TEST(Estimate, OracleAgreementOnSmallScalarInstances) {
    const auto is = BregmanDivergence::itakura_saito();
    const auto sq = BregmanDivergence::squared_euclidean(1);
    fsb::Rng rng(fsb::RngSeed{2024});
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> data;
        const int n = 3 + static_cast<int>(rng.next_u64() % 8);
        for (int i = 0; i < n; ++i) data.push_back(0.2 + 4.0 * rng.uniform01());
        const double alpha = 0.25 + 1.5 * rng.uniform01();
        const auto lse = WeightFunction::log_sum_exp(alpha);
        for (const auto* d : {&is, &sq}) {
            const EstimateResult r = fsb::estimate(data, *d, lse);
            ASSERT_TRUE(r.converged);
            const double oracle = fsb::test::grid_minimize(
                [&](double t) { return fsb::objective_eval(data, *d, lse, t); },
                0.01, 6.0);
            EXPECT_NEAR(r.theta_hat[0], oracle, 1e-4)
                << "trial " << trial << " " << (*d).kind_name();
        }
    }
}

}  // namespace
