#pragma once

#include <functional>
#include <string>

namespace fsb {

/// The monotone increasing function f applied to divergence values, and its
/// derivative f' (the weight each observation receives in the estimation
/// equation).
///
/// Families:
///   log_sum_exp(alpha):  f(z) = (1 - exp(-alpha z)) / alpha, f'(z) = exp(-alpha z)
///   power_mean(beta, a): f(z) = ((z + a)^beta - 1) / beta,   f'(z) = (z + a)^(beta - 1)
///   linear():            f(z) = z, f'(z) = 1
///
/// alpha = 0 and beta = 0 are the linear and logarithmic limits; both are
/// evaluated with expm1-stable forms so the limits are continuous. Tuning
/// parameters are not clamped here: whether a given (alpha, beta) yields an
/// unbiased estimation equation is decided per model by the condition
/// checkers in analysis.hpp.
class WeightFunction {
public:
    enum class Kind { LogSumExp, PowerMean, Linear };

    static WeightFunction log_sum_exp(double alpha);
    static WeightFunction power_mean(double beta, double a = 0.0);
    static WeightFunction linear();

    Kind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double shift_a() const { return a_; }

    /// The tuning parameter shown in sweep tables (alpha or beta; 0 for linear).
    double tuning() const;

    double f(double z) const;
    double f_prime(double z) const;
    double f_second(double z) const;

    /// The constant-shifted version ftilde with ftilde(z) -> 0 as z -> inf
    /// and ftilde' = f'. Only log_sum_exp with alpha > 0 has a bounded,
    /// vanishing shift; anything else throws UnsupportedError.
    std::function<double(double)> shifted_vanishing() const;
    bool has_vanishing_shift() const;

    std::string describe() const;

private:
    WeightFunction(Kind k, double alpha, double beta, double a)
        : kind_(k), alpha_(alpha), beta_(beta), a_(a) {}

    void check_arg(double z) const;

    Kind kind_;
    double alpha_ = 0.0;
    double beta_ = 1.0;
    double a_ = 0.0;
};

}  // namespace fsb
