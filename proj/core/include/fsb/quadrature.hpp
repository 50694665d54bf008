#pragma once

#include <functional>

namespace fsb {

struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    /// Budget of panel splits for one adaptive pass.
    int max_subdivisions = 2000;
    /// A partial value whose magnitude passes this bound is declared divergent.
    double truncation_growth_threshold = 1e6;
};

/// Outcome of an adaptive integration. Divergence (or failure to
/// stabilize) is reported through `converged`, never thrown, so condition
/// checkers can turn it into a verdict.
struct IntegralResult {
    double value = 0.0;
    bool converged = false;
};

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod 15 on a finite interval. Endpoints are never
/// evaluated, so integrable endpoint singularities are handled by
/// subdivision. Non-finite values at interior abscissae throw
/// EvaluationError.
IntegralResult integrate_finite(const Integrand& f, double a, double b,
                                const QuadratureConfig& cfg = {});

/// Integral over (origin, infinity), evaluated over nested geometric
/// truncations [origin, origin + 2^m]. The value is declared convergent
/// once two consecutive tail blocks fall below tolerance; unbounded
/// partial sums or a never-stabilizing tail give converged = false.
IntegralResult integrate_semi_infinite(const Integrand& f,
                                       const QuadratureConfig& cfg = {},
                                       double origin = 0.0);

/// Integral over an arbitrary interval; either endpoint may be infinite.
IntegralResult integrate_interval(const Integrand& f, double lo, double hi,
                                  const QuadratureConfig& cfg = {});

}  // namespace fsb
