#include <cmath>
#include <numbers>

#include "fsb/errors.hpp"
#include "fsb/model.hpp"

namespace fsb {

namespace {
double sphere_surface(int d) {
    // 2 pi^{d/2} / Gamma(d/2)
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}
}  // namespace

EllipticalModel::EllipticalModel(GeneratorFunction g, Eigen::MatrixXd A,
                                 QuadratureConfig cfg)
    : g_(std::move(g)), A_(std::move(A)),
      dim_(static_cast<int>(A_.rows())), C_(0.0), cfg_(cfg) {
    if (A_.rows() != A_.cols() || dim_ < 1) {
        throw DomainError("elliptical model: A must be square");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A_);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0.0)) {
        throw DomainError("elliptical model: A must be positive definite");
    }
    if (hi / lo > 1e12) {
        throw DomainError("elliptical model: condition number of A exceeds 1e12");
    }
    A_inv_sqrt_ = es.eigenvectors() *
                  es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                  es.eigenvectors().transpose();
    const double det_sqrt =
        std::sqrt(es.eigenvalues().prod());

    // C = |A|^{-1/2} S_{d-1} (1/2) Int g(t) t^{d/2 - 1} dt
    const double half_d = 0.5 * dim_;
    IntegralResult shape = integrate_semi_infinite(
        [this, half_d](double t) { return g_(t) * std::pow(t, half_d - 1.0); },
        cfg_);
    if (!shape.converged || !(shape.value > 0.0)) {
        throw NonIntegrableError(
            "elliptical model: g(t) t^{d/2-1} does not integrate; "
            "the density cannot be normalized");
    }
    C_ = sphere_surface(dim_) * 0.5 * shape.value / det_sqrt;

    // radial density for sampling
    const int d = dim_;
    const GeneratorFunction gg = g_;
    radial_ = std::make_shared<ScalarInverseCdfSampler>(
        [gg, d](double r) {
            return gg(r * r) * std::pow(r, static_cast<double>(d - 1));
        },
        0.0, std::numeric_limits<double>::infinity(), cfg_);
}

double EllipticalModel::density(const Eigen::VectorXd& x,
                                const Eigen::VectorXd& theta) const {
    if (x.size() != dim_ || theta.size() != dim_) {
        throw DomainError("elliptical density: dimension mismatch");
    }
    const Eigen::VectorXd r = x - theta;
    return g_(r.dot(A_ * r)) / C_;
}

double EllipticalModel::density(double x, double theta) const {
    if (dim_ != 1) throw DomainError("scalar density on a d > 1 model");
    const double r = x - theta;
    return g_(A_(0, 0) * r * r) / C_;
}

std::vector<Eigen::VectorXd> EllipticalModel::sample(
    const Eigen::VectorXd& theta, std::size_t n, RngSeed seed) const {
    if (theta.size() != dim_) {
        throw DomainError("elliptical sample: dimension mismatch");
    }
    Rng rng(seed);
    std::vector<Eigen::VectorXd> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = radial_->draw(rng);
        const Eigen::VectorXd u = unit_sphere_draw(dim_, rng);
        out.push_back(theta + r * (A_inv_sqrt_ * u));
    }
    return out;
}

ScalarModelView EllipticalModel::scalar_view() const {
    if (dim_ != 1) {
        throw UnsupportedError("scalar_view requires a one-dimensional model");
    }
    EllipticalModel copy(*this);
    ScalarModelView v;
    v.support = Interval{};  // all of R
    v.density = [copy](double x, double t) { return copy.density(x, t); };
    v.make_sampler = [copy](double t) -> std::function<double(Rng&)> {
        // same draw path as sample(): radius then sign
        return [copy, t](Rng& rng) {
            const double r = copy.radial_->draw(rng);
            const Eigen::VectorXd u = unit_sphere_draw(1, rng);
            return t + r * copy.A_inv_sqrt_(0, 0) * u[0];
        };
    };
    v.label = "elliptical(" + g_.describe() + ")";
    return v;
}

}  // namespace fsb
