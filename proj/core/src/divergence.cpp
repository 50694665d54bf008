#include "fsb/divergence.hpp"

#include <cmath>

#include "fsb/errors.hpp"

namespace fsb {

BregmanDivergence BregmanDivergence::squared_euclidean(int dim) {
    if (dim < 1) throw DomainError("squared_euclidean: dimension must be >= 1");
    BregmanDivergence d;
    d.kind_ = Kind::SquaredEuclidean;
    d.dim_ = dim;
    d.A_ = Eigen::MatrixXd::Identity(dim, dim);
    return d;
}

BregmanDivergence BregmanDivergence::mahalanobis(const Eigen::MatrixXd& A) {
    if (A.rows() != A.cols() || A.rows() < 1) {
        throw DomainError("mahalanobis: A must be square");
    }
    if (!A.isApprox(A.transpose(), 1e-12)) {
        throw DomainError("mahalanobis: A must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    if (es.eigenvalues().minCoeff() <= 0.0) {
        throw DomainError("mahalanobis: A must be positive definite");
    }
    BregmanDivergence d;
    d.kind_ = Kind::Mahalanobis;
    d.dim_ = static_cast<int>(A.rows());
    d.A_ = A;
    return d;
}

BregmanDivergence BregmanDivergence::itakura_saito() {
    BregmanDivergence d;
    d.kind_ = Kind::ItakuraSaito;
    d.dim_ = 1;
    d.domain_ = Interval{0.0, std::numeric_limits<double>::infinity()};
    return d;
}

BregmanDivergence BregmanDivergence::custom_scalar(ScalarFn phi, ScalarFn dphi,
                                                   ScalarFn ddphi,
                                                   Interval domain) {
    BregmanDivergence d;
    d.kind_ = Kind::CustomScalar;
    d.dim_ = 1;
    d.domain_ = domain;
    d.phi_ = std::move(phi);
    d.dphi_ = std::move(dphi);
    d.ddphi_ = std::move(ddphi);
    return d;
}

bool BregmanDivergence::in_domain(const Eigen::VectorXd& p) const {
    if (p.size() != dim_) return false;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (!domain_.contains(p[i])) return false;
    }
    return true;
}

void BregmanDivergence::check_point(const Eigen::VectorXd& p,
                                    const char* role) const {
    if (p.size() != dim_) {
        throw DomainError(std::string(role) + ": expected dimension " +
                          std::to_string(dim_) + ", got " +
                          std::to_string(p.size()));
    }
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (!domain_.contains(p[i])) {
            throw DomainError(std::string(role) + " component " +
                              std::to_string(i) + " = " + std::to_string(p[i]) +
                              " outside the " + kind_name() + " domain");
        }
    }
}

void BregmanDivergence::check_point(double p, const char* role) const {
    if (!domain_.contains(p)) {
        throw DomainError(std::string(role) + " = " + std::to_string(p) +
                          " outside the " + kind_name() + " domain");
    }
}

double BregmanDivergence::eval(const Eigen::VectorXd& x,
                               const Eigen::VectorXd& theta) const {
    if (kind_ == Kind::ItakuraSaito || kind_ == Kind::CustomScalar) {
        if (x.size() != 1 || theta.size() != 1) {
            throw DomainError(kind_name() + " is scalar; got vector points");
        }
        return eval(x[0], theta[0]);
    }
    check_point(x, "x");
    check_point(theta, "theta");
    const Eigen::VectorXd r = x - theta;
    return r.dot(A_ * r);
}

double BregmanDivergence::eval(double x, double theta) const {
    check_point(x, "x");
    check_point(theta, "theta");
    switch (kind_) {
        case Kind::SquaredEuclidean:
            return (x - theta) * (x - theta);
        case Kind::Mahalanobis:
            return A_(0, 0) * (x - theta) * (x - theta);
        case Kind::ItakuraSaito: {
            const double r = x / theta;
            return r - std::log(r) - 1.0;
        }
        case Kind::CustomScalar:
            return phi_(x) - phi_(theta) - (x - theta) * dphi_(theta);
    }
    return 0.0;
}

Eigen::VectorXd BregmanDivergence::grad_theta(
    const Eigen::VectorXd& x, const Eigen::VectorXd& theta) const {
    if (kind_ == Kind::ItakuraSaito || kind_ == Kind::CustomScalar) {
        if (x.size() != 1 || theta.size() != 1) {
            throw DomainError(kind_name() + " is scalar; got vector points");
        }
        Eigen::VectorXd g(1);
        g[0] = grad_theta(x[0], theta[0]);
        return g;
    }
    check_point(x, "x");
    check_point(theta, "theta");
    return -2.0 * (A_ * (x - theta));
}

double BregmanDivergence::grad_theta(double x, double theta) const {
    check_point(x, "x");
    check_point(theta, "theta");
    switch (kind_) {
        case Kind::SquaredEuclidean:
            return -2.0 * (x - theta);
        case Kind::Mahalanobis:
            return -2.0 * A_(0, 0) * (x - theta);
        case Kind::ItakuraSaito:
            return (theta - x) / (theta * theta);
        case Kind::CustomScalar:
            return -ddphi_(theta) * (x - theta);
    }
    return 0.0;
}

double BregmanDivergence::grad_scalar(double x) const {
    check_point(x, "x");
    switch (kind_) {
        case Kind::SquaredEuclidean:
            return 2.0 * x;
        case Kind::Mahalanobis:
            if (dim_ != 1) {
                throw UnsupportedError("grad_scalar: divergence is not scalar");
            }
            return 2.0 * A_(0, 0) * x;
        case Kind::ItakuraSaito:
            return -1.0 / x;
        case Kind::CustomScalar:
            return dphi_(x);
    }
    return 0.0;
}

double BregmanDivergence::hess_scalar(double theta) const {
    check_point(theta, "theta");
    switch (kind_) {
        case Kind::SquaredEuclidean:
            return 2.0;
        case Kind::Mahalanobis:
            return 2.0 * A_(0, 0);
        case Kind::ItakuraSaito:
            return 1.0 / (theta * theta);
        case Kind::CustomScalar:
            return ddphi_(theta);
    }
    return 0.0;
}

Eigen::MatrixXd BregmanDivergence::hess(const Eigen::VectorXd& theta) const {
    if (kind_ == Kind::SquaredEuclidean || kind_ == Kind::Mahalanobis) {
        return 2.0 * A_;
    }
    Eigen::MatrixXd h(1, 1);
    h(0, 0) = hess_scalar(theta[0]);
    return h;
}

const Eigen::MatrixXd& BregmanDivergence::quadratic_matrix() const {
    if (kind_ != Kind::SquaredEuclidean && kind_ != Kind::Mahalanobis) {
        throw UnsupportedError("quadratic_matrix: not a quadratic divergence");
    }
    return A_;
}

std::string BregmanDivergence::kind_name() const {
    switch (kind_) {
        case Kind::SquaredEuclidean: return "squared-euclidean";
        case Kind::Mahalanobis: return "mahalanobis";
        case Kind::ItakuraSaito: return "itakura-saito";
        case Kind::CustomScalar: return "custom-scalar";
    }
    return "?";
}

}  // namespace fsb
