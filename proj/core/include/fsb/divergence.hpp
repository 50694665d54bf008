#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <string>
#include <variant>

namespace fsb {

/// Open interval, endpoints possibly infinite.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool contains(double x) const { return x > lo && x < hi; }
};

using ScalarFn = std::function<double(double)>;

/// Bregman divergence d(x, t) = phi(x) - phi(t) - <x - t, grad phi(t)> for a
/// strictly convex phi. Value type; construct through the factories.
///
/// Built-in kinds:
///   squared_euclidean(d)   phi(x) = x'x
///   mahalanobis(A)         phi(x) = x'Ax, A positive definite
///   itakura_saito()        phi(x) = -log x on (0, inf)
///   custom_scalar(...)     user-supplied phi, phi', phi'' on an interval
class BregmanDivergence {
public:
    enum class Kind { SquaredEuclidean, Mahalanobis, ItakuraSaito, CustomScalar };

    static BregmanDivergence squared_euclidean(int dim);
    static BregmanDivergence mahalanobis(const Eigen::MatrixXd& A);
    static BregmanDivergence itakura_saito();
    static BregmanDivergence custom_scalar(ScalarFn phi, ScalarFn dphi,
                                           ScalarFn ddphi, Interval domain);

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    bool is_scalar() const { return dim_ == 1; }

    /// Domain of valid points (per coordinate for the scalar kinds;
    /// all of R^d for the quadratic kinds).
    const Interval& domain() const { return domain_; }
    bool in_domain(const Eigen::VectorXd& p) const;
    bool in_domain(double p) const { return domain_.contains(p); }

    /// d(x, theta); throws DomainError if either point is outside the domain.
    double eval(const Eigen::VectorXd& x, const Eigen::VectorXd& theta) const;
    double eval(double x, double theta) const;

    /// Gradient of d(x, theta) in theta: -hess_phi(theta) (x - theta).
    Eigen::VectorXd grad_theta(const Eigen::VectorXd& x,
                               const Eigen::VectorXd& theta) const;
    double grad_theta(double x, double theta) const;

    /// phi'(x) for the scalar kinds (used by the continuous Bregman density).
    double grad_scalar(double x) const;
    /// phi''(theta) for the scalar kinds.
    double hess_scalar(double theta) const;
    /// Hessian of phi at theta (constant 2A for the quadratic kinds).
    Eigen::MatrixXd hess(const Eigen::VectorXd& theta) const;

    /// The A matrix of the quadratic kinds (identity for squared Euclidean).
    const Eigen::MatrixXd& quadratic_matrix() const;

    std::string kind_name() const;

private:
    BregmanDivergence() = default;

    Kind kind_ = Kind::SquaredEuclidean;
    int dim_ = 1;
    Interval domain_;
    Eigen::MatrixXd A_;  // quadratic kinds
    ScalarFn phi_, dphi_, ddphi_;  // custom scalar

    void check_point(const Eigen::VectorXd& p, const char* role) const;
    void check_point(double p, const char* role) const;
};

}  // namespace fsb
