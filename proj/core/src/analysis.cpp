#include "fsb/analysis.hpp"

#include <cmath>
#include <cstdio>

#include "fsb/errors.hpp"
#include "fsb/sampling.hpp"

namespace fsb {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out.push_back(c);
    }
    return out;
}

const char* theorem_name(TheoremKind k) {
    switch (k) {
        case TheoremKind::Mahalanobis: return "mahalanobis";
        case TheoremKind::ItakuraSaito: return "itakura-saito";
        case TheoremKind::ContinuousBregman: return "continuous-bregman";
    }
    return "?";
}

ConditionVerdict condition_from_integral(TheoremKind kind, int d,
                                         const GeneratorFunction& g,
                                         const WeightFunction& w,
                                         const QuadratureConfig& cfg) {
    ConditionVerdict v;
    v.theorem = kind;
    v.dim = d;
    v.params = "g=" + g.describe() + ", f=" + w.describe();

    const double power = 0.5 * (d - 1);
    IntegralResult r;
    try {
        r = integrate_semi_infinite(
            [&g, &w, power](double t) {
                const double base = g(t) * w.f_prime(t);
                return power == 0.0 ? base : base * std::pow(t, power);
            },
            cfg);
    } catch (const EvaluationError& e) {
        // g f' overflowed before the tail stabilized (e.g. the weight grows
        // faster than g decays); numerically intractable, so not finite.
        v.finite = false;
        v.diagnostics = "integrand evaluation blew up at t = " +
                        fmt_double(e.abscissa()) +
                        "; treated as a violated condition";
        return v;
    }
    v.finite = r.converged;
    if (r.converged) {
        v.integral_value = r.value;
        v.diagnostics = "nested truncations stabilized";
    } else {
        v.diagnostics =
            "condition integral diverged or failed to stabilize "
            "(last partial value " + fmt_double(r.value) + ")";
    }
    return v;
}

}  // namespace

std::string ConditionVerdict::to_json() const {
    std::string s = "{\"theorem\":\"";
    s += theorem_name(theorem);
    s += "\",\"params\":\"" + json_escape(params) + "\"";
    if (theorem == TheoremKind::Mahalanobis) {
        s += ",\"dim\":" + std::to_string(dim);
    }
    s += std::string(",\"finite\":") + (finite ? "true" : "false");
    s += ",\"value\":";
    s += integral_value ? fmt_double(*integral_value) : "null";
    s += ",\"diagnostics\":\"" + json_escape(diagnostics) + "\"}";
    return s;
}

ConditionVerdict check_theorem1(const GeneratorFunction& g,
                                const WeightFunction& w, int d,
                                const QuadratureConfig& cfg) {
    if (d < 1) throw DomainError("check_theorem1: dimension must be >= 1");
    return condition_from_integral(TheoremKind::Mahalanobis, d, g, w, cfg);
}

ConditionVerdict check_theorem2(const GeneratorFunction& g,
                                const WeightFunction& w,
                                const QuadratureConfig& cfg) {
    return condition_from_integral(TheoremKind::ItakuraSaito, 1, g, w, cfg);
}

ConditionVerdict check_theorem4(const ContinuousBregmanModel& model,
                                const WeightFunction& w,
                                const QuadratureConfig& cfg) {
    if (!model.limit_condition_ok()) {
        throw DomainError("check_theorem4: endpoint limit condition violated: " +
                          model.limit_condition_message());
    }
    ConditionVerdict v = condition_from_integral(
        TheoremKind::ContinuousBregman, 1, model.generator(), w, cfg);
    v.diagnostics += "; endpoint limit condition holds (zeta = " +
                     fmt_double(model.zeta()) + ")";
    return v;
}

BiasResidual bias_residual(const ScalarModelView& model,
                           const WeightFunction& w,
                           const BregmanDivergence& div, double theta,
                           const QuadratureConfig& cfg) {
    if (!div.is_scalar()) {
        throw DomainError("bias_residual: divergence must be scalar here");
    }
    const double lo = std::max(model.support.lo, div.domain().lo);
    const double hi = std::min(model.support.hi, div.domain().hi);
    if (!(lo < hi)) {
        throw DomainError("bias_residual: empty integration region");
    }
    auto integrand = [&](double x) {
        return model.density(x, theta) * w.f_prime(div.eval(x, theta)) *
               (x - theta);
    };

    IntegralResult r;
    if (std::isinf(lo) && std::isinf(hi)) {
        // center the fold on theta so symmetric integrands cancel per node
        r = integrate_interval([&](double s) { return integrand(theta + s); },
                               lo, hi, cfg);
    } else {
        r = integrate_interval(integrand, lo, hi, cfg);
    }
    if (!r.converged) {
        throw NonIntegrableError(
            "bias_residual: expectation integral did not converge");
    }
    BiasResidual out;
    out.value = Eigen::VectorXd::Constant(1, r.value);
    return out;
}

BiasResidual bias_residual(const ISModel& model, const WeightFunction& w,
                           const BregmanDivergence& div, double theta,
                           const QuadratureConfig& cfg) {
    return bias_residual(model.scalar_view(), w, div, theta, cfg);
}

BiasResidual bias_residual(const ContinuousBregmanModel& model,
                           const WeightFunction& w,
                           const BregmanDivergence& div, double theta,
                           const QuadratureConfig& cfg) {
    return bias_residual(model.scalar_view(), w, div, theta, cfg);
}

namespace {

// Composite Gauss-Legendre (10 point) weights/nodes on [-1, 1].
constexpr double kGlX[5] = {0.148874338981631211, 0.433395394129247191,
                            0.679409568299024406, 0.865063366688984511,
                            0.973906528517171720};
constexpr double kGlW[5] = {0.295524224714752870, 0.269266719309996355,
                            0.219086362515982044, 0.149451349150580593,
                            0.066671344308688138};

// Half-width in the metric of A so that g((x-theta)'A(x-theta)) is
// negligible outside the box.
double shape_cutoff(const GeneratorFunction& g) {
    double t = 1.0;
    const double ref = std::max(g(0.0), 1e-300);
    for (int i = 0; i < 60 && g(t) > 1e-18 * ref; ++i) t *= 2.0;
    return std::sqrt(t);
}

}  // namespace

BiasResidual bias_residual(const EllipticalModel& model,
                           const WeightFunction& w,
                           const BregmanDivergence& div,
                           const Eigen::VectorXd& theta,
                           const QuadratureConfig& cfg) {
    const int d = model.dim();
    if (theta.size() != d) {
        throw DomainError("bias_residual: theta dimension mismatch");
    }
    if (d == 1) {
        return bias_residual(model.scalar_view(), w, div, theta[0], cfg);
    }

    auto integrand = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        return model.density(x, theta) * w.f_prime(div.eval(x, theta)) *
               (x - theta);
    };

    if (d <= 3) {
        // tensor composite Gauss-Legendre over a box covering the mass
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(model.A());
        const double lmin = es.eigenvalues().minCoeff();
        const double half = shape_cutoff(model.generator()) / std::sqrt(lmin);
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

        Eigen::VectorXd acc = Eigen::VectorXd::Zero(d);
        Eigen::VectorXd x(d);
        const std::size_t m = nodes.size();
        if (d == 2) {
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = 0; j < m; ++j) {
                    x[0] = theta[0] + nodes[i];
                    x[1] = theta[1] + nodes[j];
                    acc += wts[i] * wts[j] * integrand(x);
                }
            }
        } else {
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = 0; j < m; ++j) {
                    for (std::size_t k = 0; k < m; ++k) {
                        x[0] = theta[0] + nodes[i];
                        x[1] = theta[1] + nodes[j];
                        x[2] = theta[2] + nodes[k];
                        acc += wts[i] * wts[j] * wts[k] * integrand(x);
                    }
                }
            }
        }
        BiasResidual out;
        out.value = acc;
        return out;
    }

    // Monte Carlo with reported standard error
    const std::size_t n = 200000;
    const auto xs = model.sample(theta, n, RngSeed{0x9a5euLL});
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd sumsq = Eigen::VectorXd::Zero(d);
    for (const auto& x : xs) {
        const Eigen::VectorXd v = w.f_prime(div.eval(x, theta)) * (x - theta);
        sum += v;
        sumsq += v.cwiseProduct(v);
    }
    BiasResidual out;
    out.value = sum / static_cast<double>(n);
    Eigen::VectorXd var =
        (sumsq / static_cast<double>(n)) - out.value.cwiseProduct(out.value);
    out.std_error = (var / static_cast<double>(n)).cwiseSqrt();
    return out;
}

}  // namespace fsb
