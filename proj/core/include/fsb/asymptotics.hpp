#pragma once

#include <Eigen/Dense>
#include <optional>
#include <ostream>
#include <vector>

#include "fsb/divergence.hpp"
#include "fsb/model.hpp"
#include "fsb/quadrature.hpp"
#include "fsb/weight.hpp"

namespace fsb {

/// Sandwich pieces of the asymptotic covariance: Sigma = J^-1 I J^-1 with
///   I = E[ f'(d)^2 (x-theta)(x-theta)' ]
///   J = E[ d/dtheta f'(d) (x-theta) ].
struct SandwichResult {
    Eigen::MatrixXd I;
    Eigen::MatrixXd J;
    Eigen::MatrixXd Sigma;
};

SandwichResult sandwich_variance(const ScalarModelView& model,
                                 const WeightFunction& w,
                                 const BregmanDivergence& div, double theta,
                                 const QuadratureConfig& cfg = {});

SandwichResult sandwich_variance(const ISModel& model, const WeightFunction& w,
                                 const BregmanDivergence& div, double theta,
                                 const QuadratureConfig& cfg = {});

SandwichResult sandwich_variance(const ContinuousBregmanModel& model,
                                 const WeightFunction& w,
                                 const BregmanDivergence& div, double theta,
                                 const QuadratureConfig& cfg = {});

SandwichResult sandwich_variance(const EllipticalModel& model,
                                 const WeightFunction& w,
                                 const BregmanDivergence& div,
                                 const Eigen::VectorXd& theta,
                                 const QuadratureConfig& cfg = {});

/// J recomputed by central finite differences of the population score
/// A(t) = E_theta[ f'(d(x, t)) (x - t) ]; cross-check for the analytic J.
double sandwich_j_finite_difference(const ScalarModelView& model,
                                    const WeightFunction& w,
                                    const BregmanDivergence& div, double theta,
                                    const QuadratureConfig& cfg = {});

/// Asymptotic variance of the log-sum-exp scale estimator on the gamma
/// model with shape k and mean theta_star:
///   V = Gamma(2a+k) Gamma(k) / Gamma(a+k)^2
///       * (a+k)^(2(a+1+k)) / (2a+k)^(2a+1+k) * theta_star^2 / k^(2+k),
/// valid for a > -k/2.
double gamma_variance_closed_form(double alpha, double k, double theta_star);

/// (theta^2/k) / V, the efficiency relative to the MLE; theta-free.
double are(double alpha, double k);

enum class BaselineKind { BetaDiv, GammaDiv };

/// Numerical sandwich variance of the power-divergence baselines on the
/// exponential model (k = 1). BetaDiv uses the unnormalized estimating
/// function p^b s - E[p^(1+b) s]; GammaDiv the normalized
/// p^g s - p^g E[p^(1+g) s] / E[p^(1+g)], with s the negative score of the
/// exponential density in its mean parameterization.
double baseline_variance(BaselineKind kind, double tuning, double theta,
                         const QuadratureConfig& cfg = {});

struct AreRow {
    double alpha = 0.0;
    double are_fsep = 0.0;
    std::optional<double> are_beta;
    std::optional<double> are_gamma;
};

/// Efficiency table over an alpha grid; baselines are available for k = 1
/// only (the published comparison sets alpha = beta = gamma).
std::vector<AreRow> are_curve(double k, const std::vector<double>& alpha_grid,
                              bool include_baselines,
                              const QuadratureConfig& cfg = {});

/// CSV with header "alpha,are_fsep,are_beta,are_gamma"; absent baselines
/// are emitted as empty fields.
void write_are_csv(std::ostream& os, const std::vector<AreRow>& rows);

}  // namespace fsb
