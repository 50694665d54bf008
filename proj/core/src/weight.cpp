#include "fsb/weight.hpp"

#include <cmath>

#include "fsb/errors.hpp"

namespace fsb {

WeightFunction WeightFunction::log_sum_exp(double alpha) {
    return WeightFunction(Kind::LogSumExp, alpha, 1.0, 0.0);
}

WeightFunction WeightFunction::power_mean(double beta, double a) {
    if (a < 0.0) throw DomainError("power_mean: a must be nonnegative");
    return WeightFunction(Kind::PowerMean, 0.0, beta, a);
}

WeightFunction WeightFunction::linear() {
    return WeightFunction(Kind::Linear, 0.0, 1.0, 0.0);
}

double WeightFunction::tuning() const {
    switch (kind_) {
        case Kind::LogSumExp: return alpha_;
        case Kind::PowerMean: return beta_;
        case Kind::Linear: return 0.0;
    }
    return 0.0;
}

void WeightFunction::check_arg(double z) const {
    if (z < 0.0 || std::isnan(z)) {
        throw DomainError("weight function argument must be >= 0, got " +
                          std::to_string(z));
    }
}

double WeightFunction::f(double z) const {
    check_arg(z);
    switch (kind_) {
        case Kind::Linear:
            return z;
        case Kind::LogSumExp:
            if (alpha_ == 0.0) return z;
            return -std::expm1(-alpha_ * z) / alpha_;
        case Kind::PowerMean: {
            const double base = z + a_;
            if (base == 0.0 && beta_ <= 0.0) {
                throw SingularityError("power_mean f at z = 0 with a = 0 and beta <= 0");
            }
            if (beta_ == 0.0) return std::log(base);
            return std::expm1(beta_ * std::log(base)) / beta_;
        }
    }
    return 0.0;
}

double WeightFunction::f_prime(double z) const {
    check_arg(z);
    switch (kind_) {
        case Kind::Linear:
            return 1.0;
        case Kind::LogSumExp:
            return std::exp(-alpha_ * z);
        case Kind::PowerMean: {
            const double base = z + a_;
            if (base == 0.0 && beta_ < 1.0) {
                throw SingularityError("power_mean f' at z = 0 with a = 0 and beta < 1");
            }
            return std::pow(base, beta_ - 1.0);
        }
    }
    return 0.0;
}

double WeightFunction::f_second(double z) const {
    check_arg(z);
    switch (kind_) {
        case Kind::Linear:
            return 0.0;
        case Kind::LogSumExp:
            return -alpha_ * std::exp(-alpha_ * z);
        case Kind::PowerMean: {
            if (beta_ == 1.0) return 0.0;
            const double base = z + a_;
            if (base == 0.0 && beta_ < 2.0) {
                throw SingularityError("power_mean f'' at z = 0 with a = 0 and beta < 2");
            }
            return (beta_ - 1.0) * std::pow(base, beta_ - 2.0);
        }
    }
    return 0.0;
}

bool WeightFunction::has_vanishing_shift() const {
    return kind_ == Kind::LogSumExp && alpha_ > 0.0;
}

std::function<double(double)> WeightFunction::shifted_vanishing() const {
    if (!has_vanishing_shift()) {
        throw UnsupportedError(
            "shifted_vanishing: f is unbounded for " + describe() +
            "; only log_sum_exp with alpha > 0 admits a vanishing shift");
    }
    const double alpha = alpha_;
    return [alpha](double z) { return -std::exp(-alpha * z) / alpha; };
}

std::string WeightFunction::describe() const {
    switch (kind_) {
        case Kind::Linear:
            return "linear";
        case Kind::LogSumExp:
            return "lse(alpha=" + std::to_string(alpha_) + ")";
        case Kind::PowerMean:
            return "pow(beta=" + std::to_string(beta_) +
                   ", a=" + std::to_string(a_) + ")";
    }
    return "?";
}

}  // namespace fsb
