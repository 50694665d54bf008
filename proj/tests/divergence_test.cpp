#include "fsb/divergence.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "fsb/errors.hpp"
#include "fsb/rng.hpp"
#include "support/oracles.hpp"

namespace {

using fsb::BregmanDivergence;

TEST(ItakuraSaito, IdentityAndHandValue) {
    const auto is = BregmanDivergence::itakura_saito();
    EXPECT_DOUBLE_EQ(is.eval(1.0, 1.0), 0.0);
    // d(2, 1) = 2 - ln 2 - 1
    EXPECT_NEAR(is.eval(2.0, 1.0), 1.0 - std::log(2.0), 1e-15);
}

TEST(ItakuraSaito, DomainViolationsThrow) {
    const auto is = BregmanDivergence::itakura_saito();
    EXPECT_THROW(is.eval(0.0, 1.0), fsb::DomainError);
    EXPECT_THROW(is.eval(-1.0, 1.0), fsb::DomainError);
    EXPECT_THROW(is.eval(1.0, 0.0), fsb::DomainError);
}

TEST(ItakuraSaito, ScaleInvariance) {
    const auto is = BregmanDivergence::itakura_saito();
    fsb::Rng rng(fsb::RngSeed{21});
    for (int i = 0; i < 200; ++i) {
        const double x = 0.1 + 5.0 * rng.uniform01();
        const double t = 0.1 + 5.0 * rng.uniform01();
        const double c = 0.01 + 10.0 * rng.uniform01();
        EXPECT_NEAR(is.eval(c * x, c * t), is.eval(x, t),
                    1e-12 * (1.0 + is.eval(x, t)));
    }
}

TEST(ItakuraSaito, GradTheta) {
    const auto is = BregmanDivergence::itakura_saito();
    EXPECT_NEAR(is.grad_theta(2.0, 1.0), -1.0, 1e-15);
    EXPECT_DOUBLE_EQ(is.grad_theta(3.0, 3.0), 0.0);
}

TEST(Mahalanobis, IdentityMatrixIsSquaredDistance) {
    const auto d2 = BregmanDivergence::mahalanobis(Eigen::MatrixXd::Identity(2, 2));
    Eigen::VectorXd x(2), t(2);
    x << 1.0, 2.0;
    t << 0.0, 0.0;
    EXPECT_DOUBLE_EQ(d2.eval(x, t), 5.0);
}

TEST(Mahalanobis, TranslationInvariance) {
    Eigen::MatrixXd A(2, 2);
    A << 2.0, 0.3, 0.3, 1.0;
    const auto d = BregmanDivergence::mahalanobis(A);
    fsb::Rng rng(fsb::RngSeed{22});
    for (int i = 0; i < 100; ++i) {
        Eigen::VectorXd x(2), t(2), b(2);
        for (int j = 0; j < 2; ++j) {
            x[j] = rng.normal();
            t[j] = rng.normal();
            b[j] = rng.normal();
        }
        EXPECT_NEAR(d.eval(x + b, t + b), d.eval(x, t),
                    1e-10 * (1.0 + d.eval(x, t)));
    }
}

TEST(Mahalanobis, RejectsNonPositiveDefinite) {
    Eigen::MatrixXd A(2, 2);
    A << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3, -1
    EXPECT_THROW(BregmanDivergence::mahalanobis(A), fsb::DomainError);
}

TEST(Bregman, NonnegativityAndIdentityOfIndiscernibles) {
    const auto is = BregmanDivergence::itakura_saito();
    const auto sq = BregmanDivergence::squared_euclidean(1);
    fsb::Rng rng(fsb::RngSeed{23});
    for (int i = 0; i < 300; ++i) {
        const double x = 0.05 + 4.0 * rng.uniform01();
        const double t = 0.05 + 4.0 * rng.uniform01();
        EXPECT_GE(is.eval(x, t), 0.0);
        EXPECT_GE(sq.eval(x, t), 0.0);
        if (x != t) {
            EXPECT_GT(is.eval(x, t), 0.0);
            EXPECT_GT(sq.eval(x, t), 0.0);
        }
        EXPECT_DOUBLE_EQ(is.eval(x, x), 0.0);
    }
}

TEST(Bregman, GradThetaMatchesFiniteDifferences) {
    const auto is = BregmanDivergence::itakura_saito();
    const auto custom = BregmanDivergence::custom_scalar(
        [](double v) { return v * v * v * v; },
        [](double v) { return 4.0 * v * v * v; },
        [](double v) { return 12.0 * v * v; },
        fsb::Interval{0.0, std::numeric_limits<double>::infinity()});
    fsb::Rng rng(fsb::RngSeed{24});
    for (int i = 0; i < 100; ++i) {
        const double x = 0.2 + 3.0 * rng.uniform01();
        const double t = 0.2 + 3.0 * rng.uniform01();
        for (const auto* d : {&is, &custom}) {
            const double g = d->grad_theta(x, t);
            const double fd = fsb::test::central_diff(
                [&](double tt) { return d->eval(x, tt); }, t, 1e-6);
            EXPECT_NEAR(g, fd, 1e-6 * std::max(1.0, std::abs(g)));
        }
    }
}

TEST(Bregman, HessianPositiveAtSampledPoints) {
    const auto is = BregmanDivergence::itakura_saito();
    const auto sq = BregmanDivergence::squared_euclidean(1);
    fsb::Rng rng(fsb::RngSeed{29});
    for (int i = 0; i < 100; ++i) {
        const double t = 0.05 + 6.0 * rng.uniform01();
        EXPECT_GT(is.hess_scalar(t), 0.0);
        EXPECT_GT(sq.hess_scalar(t), 0.0);
    }
}

TEST(Bregman, CustomScalarMatchesItakuraSaito) {
    const auto is = BregmanDivergence::itakura_saito();
    const auto custom = BregmanDivergence::custom_scalar(
        [](double v) { return -std::log(v); },
        [](double v) { return -1.0 / v; },
        [](double v) { return 1.0 / (v * v); },
        fsb::Interval{0.0, std::numeric_limits<double>::infinity()});
    for (double x : {0.5, 1.0, 2.0, 7.0}) {
        for (double t : {0.25, 1.0, 3.0}) {
            EXPECT_NEAR(custom.eval(x, t), is.eval(x, t), 1e-14);
        }
    }
}

}  // namespace
