#include "fsb/asymptotics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "fsb/errors.hpp"
#include "fsb/estimator.hpp"

namespace {

using fsb::BaselineKind;
using fsb::BregmanDivergence;
using fsb::EllipticalModel;
using fsb::GeneratorFunction;
using fsb::ISModel;
using fsb::SandwichResult;
using fsb::WeightFunction;

TEST(ClosedForm, MleAnchor) {
    // alpha = 0 reduces to theta^2 / k
    EXPECT_NEAR(fsb::gamma_variance_closed_form(0.0, 1.0, 1.0), 1.0, 1e-12);
    EXPECT_NEAR(fsb::gamma_variance_closed_form(0.0, 2.0, 3.0), 4.5, 4.5e-12);
}

TEST(ClosedForm, AlphaOneAnchor) {
    EXPECT_NEAR(fsb::gamma_variance_closed_form(1.0, 1.0, 1.0), 128.0 / 81.0,
                1e-12 * 128.0 / 81.0);
}

TEST(ClosedForm, DomainBoundary) {
    EXPECT_THROW(fsb::gamma_variance_closed_form(-0.5, 1.0, 1.0),
                 fsb::DomainError);
    EXPECT_NO_THROW(fsb::gamma_variance_closed_form(-0.49, 1.0, 1.0));
}

TEST(Sandwich, GammaMleCollapsesToFisher) {
    const ISModel gamma(GeneratorFunction::exponential(1.0));
    const SandwichResult s = fsb::sandwich_variance(
        gamma, WeightFunction::log_sum_exp(0.0),
        BregmanDivergence::itakura_saito(), 1.0);
    EXPECT_NEAR(s.Sigma(0, 0), 1.0, 1e-8);
}

TEST(Sandwich, GammaAlphaOneMatchesClosedForm) {
    const ISModel gamma(GeneratorFunction::exponential(1.0));
    const SandwichResult s = fsb::sandwich_variance(
        gamma, WeightFunction::log_sum_exp(1.0),
        BregmanDivergence::itakura_saito(), 1.0);
    EXPECT_NEAR(s.Sigma(0, 0), 128.0 / 81.0, 1e-6 * 128.0 / 81.0);
}

TEST(Sandwich, ClosedFormAgreesOverGrid) {
    for (double k : {0.5, 1.0, 2.0}) {
        const ISModel gamma(GeneratorFunction::exponential(k));
        for (double alpha : {0.0, 0.5, 1.0, 2.0}) {
            if (!(alpha > -0.5 * k)) continue;
            const SandwichResult s = fsb::sandwich_variance(
                gamma, WeightFunction::log_sum_exp(alpha),
                BregmanDivergence::itakura_saito(), 1.0);
            const double want = fsb::gamma_variance_closed_form(alpha, k, 1.0);
            EXPECT_NEAR(s.Sigma(0, 0), want, 1e-6 * want)
                << "k=" << k << " alpha=" << alpha;
        }
    }
}

TEST(Sandwich, ScaleLawInTheta) {
    const ISModel gamma(GeneratorFunction::exponential(1.0));
    const auto is = BregmanDivergence::itakura_saito();
    const auto lse = WeightFunction::log_sum_exp(1.0);
    const double v1 = fsb::sandwich_variance(gamma, lse, is, 1.0).Sigma(0, 0);
    const double v4 = fsb::sandwich_variance(gamma, lse, is, 4.0).Sigma(0, 0);
    EXPECT_NEAR(v4, 16.0 * v1, 1e-6 * v4);
}

TEST(Sandwich, GaussianSampleMean) {
    const EllipticalModel gauss(GeneratorFunction::gaussian_shape(),
                                Eigen::MatrixXd::Identity(1, 1));
    const SandwichResult s = fsb::sandwich_variance(
        gauss.scalar_view(), WeightFunction::linear(),
        BregmanDivergence::squared_euclidean(1), 0.0);
    EXPECT_NEAR(s.Sigma(0, 0), 1.0, 1e-8);
}

TEST(Sandwich, AnalyticJMatchesFiniteDifferences) {
    const ISModel gamma(GeneratorFunction::exponential(1.0));
    const auto view = gamma.scalar_view();
    const auto is = BregmanDivergence::itakura_saito();
    for (double alpha : {0.0, 0.5, 1.0}) {
        const auto lse = WeightFunction::log_sum_exp(alpha);
        const SandwichResult s = fsb::sandwich_variance(view, lse, is, 1.5);
        const double j_fd = fsb::sandwich_j_finite_difference(view, lse, is, 1.5);
        EXPECT_NEAR(s.J(0, 0), j_fd, 1e-6 * std::abs(j_fd)) << "alpha=" << alpha;
    }
}

TEST(Sandwich, MultivariateGaussianLinearWeight) {
    // sample-mean estimator on a 2-D Gaussian: Sigma is the covariance A^-1
    Eigen::MatrixXd A(2, 2);
    A << 2.0, 0.0, 0.0, 0.5;
    const EllipticalModel gauss(GeneratorFunction::gaussian_shape(), A);
    Eigen::VectorXd theta(2);
    theta << 0.3, -0.2;
    const SandwichResult s = fsb::sandwich_variance(
        gauss, WeightFunction::linear(), BregmanDivergence::mahalanobis(A),
        theta);
    const Eigen::MatrixXd want = A.inverse();
    EXPECT_LT((s.Sigma - want).norm(), 1e-6 * want.norm());
}

TEST(Are, Anchors) {
    EXPECT_NEAR(fsb::are(0.0, 1.0), 1.0, 1e-12);
    EXPECT_NEAR(fsb::are(0.0, 2.0), 1.0, 1e-12);
    EXPECT_NEAR(fsb::are(1.0, 1.0), 81.0 / 128.0, 1e-12);
}

TEST(Baselines, MleLimits) {
    // tuning -> 0 recovers the MLE variance theta^2
    for (auto kind : {BaselineKind::BetaDiv, BaselineKind::GammaDiv}) {
        const double v = fsb::baseline_variance(kind, 0.01, 1.0);
        EXPECT_NEAR(v, 1.0, 0.01);
        const double v0 = fsb::baseline_variance(kind, 0.0, 1.0);
        EXPECT_NEAR(v0, 1.0, 1e-6);
    }
}

TEST(Baselines, BetaHalfMonteCarloValidation) {
    // simulation oracle: M-estimate with the beta = 0.5 estimating function
    // on exponential(1) data; n * empirical variance within 10%
    const double beta = 0.5;
    const double v_quad = fsb::baseline_variance(BaselineKind::BetaDiv, beta, 1.0);

    const ISModel expo(GeneratorFunction::exponential(1.0));
    const int reps = 1000;
    const std::size_t n = 4000;
    std::vector<double> ests;
    ests.reserve(reps);
    const double c_beta = beta / std::pow(1.0 + beta, 2.0);  // E[p^(1+b) s] at theta=1 scale
    for (int r = 0; r < reps; ++r) {
        const auto xs = expo.sample(1.0, n, fsb::RngSeed{9000 + static_cast<std::uint64_t>(r)});
        // solve sum psi(x_i, t) = 0 by bisection in t
        auto psi_sum = [&](double t) {
            double s = 0.0;
            for (double x : xs) {
                const double p = std::exp(-x / t) / t;
                const double sc = 1.0 / t - x / (t * t);
                s += std::pow(p, beta) * sc -
                     c_beta * std::pow(t, -(1.0 + beta));
            }
            return s;
        };
        double lo = 0.3, hi = 3.0;
        double flo = psi_sum(lo);
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = psi_sum(mid);
            if ((fm > 0) == (flo > 0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        ests.push_back(0.5 * (lo + hi));
    }
    double mean = 0.0;
    for (double e : ests) mean += e;
    mean /= reps;
    double var = 0.0;
    for (double e : ests) var += (e - mean) * (e - mean);
    var /= (reps - 1);
    EXPECT_NEAR(static_cast<double>(n) * var, v_quad, 0.10 * v_quad);
}

TEST(AreCurve, RowsAndOrderings) {
    std::vector<double> grid;
    for (double a = 0.5; a <= 3.0 + 1e-12; a += 0.5) grid.push_back(a);
    const auto rows = fsb::are_curve(1.0, grid, true);
    ASSERT_EQ(rows.size(), 6u);
    for (const auto& r : rows) {
        ASSERT_TRUE(r.are_beta.has_value());
        ASSERT_TRUE(r.are_gamma.has_value());
        EXPECT_GT(r.are_fsep, *r.are_gamma);
        if (r.alpha < 2.0) {
            EXPECT_GT(r.are_fsep, *r.are_beta);
        }
    }
}

TEST(AreCurve, CsvFormat) {
    const auto rows = fsb::are_curve(2.0, {0.0, 1.0}, false);
    std::ostringstream os;
    fsb::write_are_csv(os, rows);
    const std::string s = os.str();
    EXPECT_NE(s.find("alpha,are_fsep,are_beta,are_gamma\n"), std::string::npos);
    // baselines absent -> empty trailing fields
    EXPECT_NE(s.find(",,\n"), std::string::npos);
}

TEST(AreCurve, BaselinesRequireUnitShape) {
    EXPECT_THROW(fsb::are_curve(2.0, {0.5}, true), fsb::UnsupportedError);
}

}  // namespace
