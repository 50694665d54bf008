#include "fsb/asymptotics.hpp"

#include <cmath>
#include <cstdio>

#include "fsb/errors.hpp"

namespace fsb {

namespace {

struct Region {
    double lo, hi;
};

Region integration_region(const ScalarModelView& model,
                          const BregmanDivergence& div) {
    const double lo = std::max(model.support.lo, div.domain().lo);
    const double hi = std::min(model.support.hi, div.domain().hi);
    if (!(lo < hi)) {
        throw DomainError("sandwich: empty integration region");
    }
    return {lo, hi};
}

double expect(const ScalarModelView& model, double theta, const Region& r,
              const std::function<double(double)>& h,
              const QuadratureConfig& cfg, const char* what) {
    IntegralResult res = integrate_interval(
        [&](double x) { return model.density(x, theta) * h(x); }, r.lo, r.hi,
        cfg);
    if (!res.converged) {
        throw NonIntegrableError(std::string("sandwich: expectation of ") +
                                 what + " did not converge");
    }
    return res.value;
}

}  // namespace

SandwichResult sandwich_variance(const ScalarModelView& model,
                                 const WeightFunction& w,
                                 const BregmanDivergence& div, double theta,
                                 const QuadratureConfig& cfg) {
    if (!div.is_scalar()) {
        throw DomainError("sandwich_variance: divergence must be scalar here");
    }
    const Region r = integration_region(model, div);

    const double I = expect(
        model, theta, r,
        [&](double x) {
            const double fp = w.f_prime(div.eval(x, theta));
            const double e = x - theta;
            return fp * fp * e * e;
        },
        cfg, "f'^2 (x-theta)^2");

    // d/dtheta [f'(d) (x - theta)] = f''(d) dd/dtheta (x-theta) - f'(d)
    const double J = expect(
        model, theta, r,
        [&](double x) {
            const double d = div.eval(x, theta);
            const double e = x - theta;
            return w.f_second(d) * div.grad_theta(x, theta) * e -
                   w.f_prime(d);
        },
        cfg, "dpsi/dtheta");

    if (std::abs(J) < 1e-12) {
        throw Error("sandwich_variance: singular J (smallest singular value " +
                    std::to_string(std::abs(J)) + ")");
    }

    SandwichResult out;
    out.I = Eigen::MatrixXd::Constant(1, 1, I);
    out.J = Eigen::MatrixXd::Constant(1, 1, J);
    out.Sigma = Eigen::MatrixXd::Constant(1, 1, I / (J * J));
    return out;
}

SandwichResult sandwich_variance(const ISModel& model, const WeightFunction& w,
                                 const BregmanDivergence& div, double theta,
                                 const QuadratureConfig& cfg) {
    return sandwich_variance(model.scalar_view(), w, div, theta, cfg);
}

SandwichResult sandwich_variance(const ContinuousBregmanModel& model,
                                 const WeightFunction& w,
                                 const BregmanDivergence& div, double theta,
                                 const QuadratureConfig& cfg) {
    return sandwich_variance(model.scalar_view(), w, div, theta, cfg);
}

double sandwich_j_finite_difference(const ScalarModelView& model,
                                    const WeightFunction& w,
                                    const BregmanDivergence& div, double theta,
                                    const QuadratureConfig& cfg) {
    const Region r = integration_region(model, div);
    const double h = 1e-5 * std::max(1.0, std::abs(theta));
    auto score = [&](double t) {
        return expect(
            model, theta, r,
            [&](double x) { return w.f_prime(div.eval(x, t)) * (x - t); }, cfg,
            "f'(d)(x-t)");
    };
    return (score(theta + h) - score(theta - h)) / (2.0 * h);
}

SandwichResult sandwich_variance(const EllipticalModel& model,
                                 const WeightFunction& w,
                                 const BregmanDivergence& div,
                                 const Eigen::VectorXd& theta,
                                 const QuadratureConfig& cfg) {
    const int d = model.dim();
    if (d == 1) {
        return sandwich_variance(model.scalar_view(), w, div, theta[0], cfg);
    }
    if (d > 3) {
        throw UnsupportedError(
            "sandwich_variance: multivariate path implemented for d <= 3");
    }
    if (div.kind() != BregmanDivergence::Kind::Mahalanobis &&
        div.kind() != BregmanDivergence::Kind::SquaredEuclidean) {
        throw UnsupportedError(
            "sandwich_variance: multivariate path requires a quadratic "
            "divergence");
    }

    // tensor composite Gauss-Legendre box rule (see analysis.cpp)
    static constexpr double kGlX[5] = {
        0.148874338981631211, 0.433395394129247191, 0.679409568299024406,
        0.865063366688984511, 0.973906528517171720};
    static constexpr double kGlW[5] = {
        0.295524224714752870, 0.269266719309996355, 0.219086362515982044,
        0.149451349150580593, 0.066671344308688138};

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(model.A());
    const double lmin = es.eigenvalues().minCoeff();
    double cut = 1.0;
    for (int i = 0; i < 60 && model.generator()(cut) >
                                  1e-18 * model.generator()(0.0);
         ++i) {
        cut *= 2.0;
    }
    const double half = std::sqrt(cut / lmin);
    const int panels = 48;
    const double pw = 2.0 * half / panels;
    std::vector<double> nodes, wts;
    for (int p = 0; p < panels; ++p) {
        const double center = -half + (p + 0.5) * pw;
        for (int q = 0; q < 5; ++q) {
            nodes.push_back(center - 0.5 * pw * kGlX[q]);
            wts.push_back(0.5 * pw * kGlW[q]);
            nodes.push_back(center + 0.5 * pw * kGlX[q]);
            wts.push_back(0.5 * pw * kGlW[q]);
        }
    }

    const Eigen::MatrixXd A = div.quadratic_matrix();
    Eigen::MatrixXd I = Eigen::MatrixXd::Zero(d, d);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(d, d);
    Eigen::VectorXd x(d);
    const std::size_t m = nodes.size();

    auto accumulate = [&](double weight, const Eigen::VectorXd& xx) {
        const double p = model.density(xx, theta);
        if (p <= 0.0) return;
        const Eigen::VectorXd e = xx - theta;
        const double dv = div.eval(xx, theta);
        const double fp = w.f_prime(dv);
        const double fpp = w.f_second(dv);
        I += (weight * p * fp * fp) * (e * e.transpose());
        J += weight * p *
             (-2.0 * fpp * (e * (e.transpose() * A)) -
              fp * Eigen::MatrixXd::Identity(d, d));
    };

    if (d == 2) {
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                x[0] = theta[0] + nodes[i];
                x[1] = theta[1] + nodes[j];
                accumulate(wts[i] * wts[j], x);
            }
        }
    } else {
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                for (std::size_t k = 0; k < m; ++k) {
                    x[0] = theta[0] + nodes[i];
                    x[1] = theta[1] + nodes[j];
                    x[2] = theta[2] + nodes[k];
                    accumulate(wts[i] * wts[j] * wts[k], x);
                }
            }
        }
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        J, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smin = svd.singularValues().minCoeff();
    if (smin < 1e-12 * svd.singularValues().maxCoeff() || smin == 0.0) {
        throw Error("sandwich_variance: singular J (smallest singular value " +
                    std::to_string(smin) + ")");
    }
    SandwichResult out;
    out.I = I;
    out.J = J;
    const Eigen::MatrixXd Jinv = J.inverse();
    out.Sigma = Jinv * I * Jinv.transpose();
    return out;
}

double gamma_variance_closed_form(double alpha, double k, double theta_star) {
    if (!(k > 0.0)) throw DomainError("gamma_variance_closed_form: k must be > 0");
    if (!(theta_star > 0.0)) {
        throw DomainError("gamma_variance_closed_form: theta_star must be > 0");
    }
    if (!(alpha > -0.5 * k)) {
        throw DomainError(
            "gamma_variance_closed_form: requires alpha > -k/2 (alpha = " +
            std::to_string(alpha) + ", k = " + std::to_string(k) + ")");
    }
    const double log_v = std::lgamma(2.0 * alpha + k) + std::lgamma(k) -
                         2.0 * std::lgamma(alpha + k) +
                         2.0 * (alpha + 1.0 + k) * std::log(alpha + k) -
                         (2.0 * alpha + 1.0 + k) * std::log(2.0 * alpha + k) -
                         (2.0 + k) * std::log(k);
    return std::exp(log_v) * theta_star * theta_star;
}

double are(double alpha, double k) {
    return (1.0 / k) / gamma_variance_closed_form(alpha, k, 1.0);
}

namespace {

// exponential model in its mean parameterization
double exp_density(double x, double theta) {
    return std::exp(-x / theta) / theta;
}
// negative score s = d/dtheta (-log p)
double exp_score(double x, double theta) {
    return 1.0 / theta - x / (theta * theta);
}

double quad_exp(const std::function<double(double)>& f,
                const QuadratureConfig& cfg, const char* what) {
    IntegralResult r = integrate_semi_infinite(f, cfg);
    if (!r.converged) {
        throw NonIntegrableError(std::string("baseline_variance: ") + what +
                                 " did not converge");
    }
    return r.value;
}

}  // namespace

double baseline_variance(BaselineKind kind, double tuning, double theta,
                         const QuadratureConfig& cfg) {
    if (tuning < 0.0) {
        throw DomainError("baseline_variance: tuning must be >= 0");
    }
    if (!(theta > 0.0)) {
        throw DomainError("baseline_variance: theta must be > 0");
    }
    const double b = tuning;

    // psi(x, t) with the bias-correction terms evaluated at t
    std::function<double(double, double)> psi;
    if (kind == BaselineKind::BetaDiv) {
        auto corr = [&, b](double t) {
            return quad_exp(
                [&, t](double x) {
                    return std::pow(exp_density(x, t), 1.0 + b) *
                           exp_score(x, t);
                },
                cfg, "E[p^(1+b) s]");
        };
        psi = [corr, b](double x, double t) {
            return std::pow(exp_density(x, t), b) * exp_score(x, t) - corr(t);
        };
    } else {
        auto corr = [&, b](double t) {
            const double num = quad_exp(
                [&, t](double x) {
                    return std::pow(exp_density(x, t), 1.0 + b) *
                           exp_score(x, t);
                },
                cfg, "E[p^(1+g) s]");
            const double den = quad_exp(
                [&, t](double x) {
                    return std::pow(exp_density(x, t), 1.0 + b);
                },
                cfg, "E[p^(1+g)]");
            return num / den;
        };
        psi = [corr, b](double x, double t) {
            return std::pow(exp_density(x, t), b) *
                   (exp_score(x, t) - corr(t));
        };
    }

    const double I = quad_exp(
        [&](double x) {
            const double v = psi(x, theta);
            return exp_density(x, theta) * v * v;
        },
        cfg, "E[psi^2]");

    const double h = 1e-5 * theta;
    auto population_score = [&](double t) {
        return quad_exp(
            [&](double x) { return exp_density(x, theta) * psi(x, t); }, cfg,
            "E[psi(x, t)]");
    };
    const double J =
        (population_score(theta + h) - population_score(theta - h)) / (2.0 * h);
    if (std::abs(J) < 1e-12) {
        throw Error("baseline_variance: singular J");
    }
    return I / (J * J);
}

std::vector<AreRow> are_curve(double k, const std::vector<double>& alpha_grid,
                              bool include_baselines,
                              const QuadratureConfig& cfg) {
    if (include_baselines && k != 1.0) {
        throw UnsupportedError(
            "are_curve: baselines are defined on the exponential model (k = 1)");
    }
    const double mle = 1.0 / k;
    std::vector<AreRow> rows;
    rows.reserve(alpha_grid.size());
    for (double a : alpha_grid) {
        AreRow row;
        row.alpha = a;
        row.are_fsep = are(a, k);
        if (include_baselines) {
            row.are_beta = mle / baseline_variance(BaselineKind::BetaDiv, a,
                                                   1.0, cfg);
            row.are_gamma = mle / baseline_variance(BaselineKind::GammaDiv, a,
                                                    1.0, cfg);
        }
        rows.push_back(row);
    }
    return rows;
}

void write_are_csv(std::ostream& os, const std::vector<AreRow>& rows) {
    os << "alpha,are_fsep,are_beta,are_gamma\n";
    char buf[128];
    for (const AreRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,", r.alpha, r.are_fsep);
        os << buf;
        if (r.are_beta) {
            std::snprintf(buf, sizeof(buf), "%.17g", *r.are_beta);
            os << buf;
        }
        os << ',';
        if (r.are_gamma) {
            std::snprintf(buf, sizeof(buf), "%.17g", *r.are_gamma);
            os << buf;
        }
        os << '\n';
    }
}

}  // namespace fsb
