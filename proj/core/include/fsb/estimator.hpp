#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "fsb/divergence.hpp"
#include "fsb/errors.hpp"
#include "fsb/weight.hpp"

namespace fsb {

enum class InitStrategy { SampleMean, CoordinateMedian, Provided };

struct EstimatorConfig {
    double tol = 1e-10;
    int max_iter = 500;
    int n_starts = 5;
    InitStrategy init_strategy = InitStrategy::SampleMean;
    Eigen::VectorXd provided_start;  // used when init_strategy == Provided
    /// Step fraction toward the reweighted mean; 1 is the pure fixed point.
    double damping = 1.0;
    /// Seed for the deterministic choice of extra data-point starts.
    std::uint64_t start_seed = 0x5eedULL;
};

struct EstimateResult {
    Eigen::VectorXd theta_hat;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
    /// || sum w_i (x_i - theta) || / sum w_i at the returned point.
    double residual = 0.0;
    std::vector<double> weights;  // final f'(d(x_i, theta_hat))
};

/// All weights underflowed to zero; no reweighted mean exists.
class DegenerateWeightsError : public Error {
public:
    using Error::Error;
};

/// No start reached the fixed point within max_iter. Carries the best
/// (lowest-residual) iterate so callers can still report it.
class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& what, EstimateResult best)
        : Error(what), best_(std::move(best)) {}
    const EstimateResult& best() const { return best_; }

private:
    EstimateResult best_;
};

/// L_f(theta) = (1/n) sum f(d(x_i, theta)). Rows of `data` are observations.
double objective_eval(const Eigen::MatrixXd& data,
                      const BregmanDivergence& div, const WeightFunction& w,
                      const Eigen::VectorXd& theta);

/// Minimize L_f by damped reweighted-mean fixed-point iteration
///   theta <- (1 - damping) theta + damping (sum w_i x_i / sum w_i),
///   w_i = f'(d(x_i, theta)),
/// run from several starts; the converged point with the lowest objective
/// wins (ties: smaller norm, then lexicographic). A fixed point solves the
/// estimation equation because the positive-definite Hessian factor of
/// grad_theta d cancels from both sides.
EstimateResult estimate(const Eigen::MatrixXd& data,
                        const BregmanDivergence& div, const WeightFunction& w,
                        const EstimatorConfig& cfg = {});

/// Scalar data conveniences.
double objective_eval(const std::vector<double>& data,
                      const BregmanDivergence& div, const WeightFunction& w,
                      double theta);
EstimateResult estimate(const std::vector<double>& data,
                        const BregmanDivergence& div, const WeightFunction& w,
                        const EstimatorConfig& cfg = {});

}  // namespace fsb
