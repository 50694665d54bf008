#pragma once

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "fsb/divergence.hpp"
#include "fsb/generator.hpp"
#include "fsb/quadrature.hpp"
#include "fsb/rng.hpp"
#include "fsb/sampling.hpp"

namespace fsb {

/// Result of the expectation/integrability equivalence check: g integrable
/// on R+ if and only if the model's expectation exists and equals theta.
struct ExpectationIdentity {
    bool g_in_l1 = false;
    bool expectation_equals_theta = false;
    double expectation = 0.0;  // valid when the integral converged
};

/// Uniform scalar-model interface used by the analysis, asymptotics, and
/// experiment layers. Wraps any of the concrete families below.
/// make_sampler(theta) prepares whatever tables the family needs and
/// returns a deterministic draw functor.
struct ScalarModelView {
    Interval support;
    std::function<double(double x, double theta)> density;
    std::function<std::function<double(Rng&)>(double theta)> make_sampler;
    std::string label;
};

/// Location family on R^d with density (1/C) g((x-theta)' A (x-theta)).
class EllipticalModel {
public:
    EllipticalModel(GeneratorFunction g, Eigen::MatrixXd A,
                    QuadratureConfig cfg = {});

    int dim() const { return dim_; }
    const GeneratorFunction& generator() const { return g_; }
    const Eigen::MatrixXd& A() const { return A_; }
    double normalization() const { return C_; }

    double density(const Eigen::VectorXd& x, const Eigen::VectorXd& theta) const;
    /// d = 1 convenience.
    double density(double x, double theta) const;

    /// x = theta + R A^{-1/2} U with U uniform on the sphere and R from the
    /// radial density proportional to g(r^2) r^(d-1).
    std::vector<Eigen::VectorXd> sample(const Eigen::VectorXd& theta,
                                        std::size_t n, RngSeed seed) const;

    /// Scalar view (d = 1 only).
    ScalarModelView scalar_view() const;

private:
    GeneratorFunction g_;
    Eigen::MatrixXd A_;
    Eigen::MatrixXd A_inv_sqrt_;
    int dim_;
    double C_;
    QuadratureConfig cfg_;
    std::shared_ptr<const ScalarInverseCdfSampler> radial_;
};

/// Scale family on (0, inf) with density (1/C) (1/x) g(d_IS(x, theta)).
/// g(z) = exp(-k z) recovers the gamma distribution with shape k and mean
/// theta. The normalization constant does not depend on theta.
class ISModel {
public:
    explicit ISModel(GeneratorFunction g, QuadratureConfig cfg = {});

    const GeneratorFunction& generator() const { return g_; }
    double normalization() const { return C_; }
    /// The alternative form of the constant, valid when g is integrable:
    /// the integral of g(d_IS(x, 1)) dx over (0, inf).
    IntegralResult normalization_alt() const;

    double density(double x, double theta) const;
    std::vector<double> sample(double theta, std::size_t n, RngSeed seed) const;
    ExpectationIdentity check_expectation_identity(double theta) const;

    ScalarModelView scalar_view() const;

private:
    GeneratorFunction g_;
    double C_;
    QuadratureConfig cfg_;
    std::shared_ptr<const ScalarInverseCdfSampler> unit_sampler_;  // theta = 1
};

/// Scalar family on (a, b) with density
///   (1/C(theta)) [(phi'(x) - phi'(theta)) / (x - theta)] g(d_phi(x, theta)).
/// Requires the divergence to approach a common limit zeta at both
/// endpoints; that condition is probed numerically at construction and its
/// verdict is available through limit_condition_*.
class ContinuousBregmanModel {
public:
    ContinuousBregmanModel(BregmanDivergence phi, GeneratorFunction g,
                           Interval domain, QuadratureConfig cfg = {});

    ContinuousBregmanModel(const ContinuousBregmanModel& other);
    ContinuousBregmanModel& operator=(const ContinuousBregmanModel& other);

    const BregmanDivergence& divergence() const { return phi_; }
    const GeneratorFunction& generator() const { return g_; }
    const Interval& domain() const { return domain_; }

    bool limit_condition_ok() const { return limit_ok_; }
    /// Common endpoint limit of d_phi (infinity allowed); meaningful when
    /// the condition holds.
    double zeta() const { return zeta_; }
    const std::string& limit_condition_message() const { return limit_msg_; }

    double normalization(double theta) const;
    double density(double x, double theta) const;
    /// The positive factor (phi'(x) - phi'(theta)) / (x - theta).
    double slope_factor(double x, double theta) const;

    std::vector<double> sample(double theta, std::size_t n, RngSeed seed) const;
    ExpectationIdentity check_expectation_identity(double theta) const;

    ScalarModelView scalar_view() const;

private:
    BregmanDivergence phi_;
    GeneratorFunction g_;
    Interval domain_;
    QuadratureConfig cfg_;
    bool limit_ok_ = false;
    double zeta_ = 0.0;
    std::string limit_msg_;

    mutable std::mutex cache_mutex_;
    mutable std::map<double, double> norm_cache_;

    void probe_limit_condition();
};

}  // namespace fsb
