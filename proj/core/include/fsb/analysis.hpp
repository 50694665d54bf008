#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "fsb/divergence.hpp"
#include "fsb/generator.hpp"
#include "fsb/model.hpp"
#include "fsb/quadrature.hpp"
#include "fsb/weight.hpp"

namespace fsb {

enum class TheoremKind { Mahalanobis, ItakuraSaito, ContinuousBregman };

/// Numerical verdict on a vanishing-bias condition integral. `finite`
/// follows the nested-truncation divergence contract of the quadrature
/// module; known closed-form cases calibrate it, but near the convergence
/// boundary the verdict is best effort.
struct ConditionVerdict {
    TheoremKind theorem = TheoremKind::ItakuraSaito;
    int dim = 1;  // Mahalanobis condition only
    bool finite = false;
    std::optional<double> integral_value;  // present iff finite
    std::string params;
    std::string diagnostics;

    /// Flat JSON record {theorem, params, finite, value, diagnostics}.
    std::string to_json() const;
};

/// Location-family condition: finite iff the integral of
/// g(t) f'(t) t^((d-1)/2) over (0, inf) converges.
ConditionVerdict check_theorem1(const GeneratorFunction& g,
                                const WeightFunction& w, int d,
                                const QuadratureConfig& cfg = {});

/// Scale-family condition: finite iff the integral of g(t) f'(t) converges.
ConditionVerdict check_theorem2(const GeneratorFunction& g,
                                const WeightFunction& w,
                                const QuadratureConfig& cfg = {});

/// Continuous-Bregman condition: same integral as the scale-family case,
/// but requires the model's endpoint-limit condition to hold first; a
/// violated limit condition throws DomainError naming the endpoints.
ConditionVerdict check_theorem4(const ContinuousBregmanModel& model,
                                const WeightFunction& w,
                                const QuadratureConfig& cfg = {});

struct BiasResidual {
    Eigen::VectorXd value;
    /// Standard errors when the Monte Carlo path (d > 3) was used.
    std::optional<Eigen::VectorXd> std_error;
};

/// E_p [ f'(d(x, theta)) (x - theta) ] componentwise. The integration
/// region is the intersection of the model support and the divergence
/// domain, so deliberately mismatched pairs (e.g. a Gaussian model probed
/// with the IS divergence) evaluate the truncated integral.
BiasResidual bias_residual(const ScalarModelView& model,
                           const WeightFunction& w,
                           const BregmanDivergence& div, double theta,
                           const QuadratureConfig& cfg = {});

BiasResidual bias_residual(const EllipticalModel& model,
                           const WeightFunction& w,
                           const BregmanDivergence& div,
                           const Eigen::VectorXd& theta,
                           const QuadratureConfig& cfg = {});

BiasResidual bias_residual(const ISModel& model, const WeightFunction& w,
                           const BregmanDivergence& div, double theta,
                           const QuadratureConfig& cfg = {});

BiasResidual bias_residual(const ContinuousBregmanModel& model,
                           const WeightFunction& w,
                           const BregmanDivergence& div, double theta,
                           const QuadratureConfig& cfg = {});

}  // namespace fsb
