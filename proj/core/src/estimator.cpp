#include "fsb/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fsb/rng.hpp"

namespace fsb {

namespace {

Eigen::VectorXd coordinate_median(const Eigen::MatrixXd& data) {
    const Eigen::Index n = data.rows(), d = data.cols();
    Eigen::VectorXd med(d);
    std::vector<double> col(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] = data(i, j);
        const std::size_t mid = col.size() / 2;
        std::nth_element(col.begin(), col.begin() + mid, col.end());
        double m = col[mid];
        if (col.size() % 2 == 0) {
            std::nth_element(col.begin(), col.begin() + mid - 1, col.end());
            m = 0.5 * (m + col[mid - 1]);
        }
        med[j] = m;
    }
    return med;
}

struct IterationOutcome {
    Eigen::VectorXd theta;
    int iterations = 0;
    bool converged = false;
    double residual = std::numeric_limits<double>::infinity();
};

IterationOutcome run_fixed_point(const Eigen::MatrixXd& data,
                                 const BregmanDivergence& div,
                                 const WeightFunction& w,
                                 const EstimatorConfig& cfg,
                                 Eigen::VectorXd theta) {
    const Eigen::Index n = data.rows();
    IterationOutcome out;
    Eigen::VectorXd weighted(theta.size());
    for (int it = 1; it <= cfg.max_iter; ++it) {
        double wsum = 0.0;
        weighted.setZero();
        for (Eigen::Index i = 0; i < n; ++i) {
            const double wi = w.f_prime(div.eval(data.row(i).transpose(), theta));
            wsum += wi;
            weighted += wi * data.row(i).transpose();
        }
        if (wsum <= 0.0 || !std::isfinite(wsum)) {
            throw DegenerateWeightsError(
                "estimate: all observation weights vanished (sum f' = " +
                std::to_string(wsum) + ")");
        }
        const Eigen::VectorXd mean = weighted / wsum;
        const double residual = (mean - theta).norm();
        out.iterations = it;
        out.residual = residual;
        if (residual < cfg.tol) {
            // theta itself satisfies the fixed-point identity; return it
            // unstepped so the reported residual holds at theta_hat.
            out.theta = theta;
            out.converged = true;
            return out;
        }
        theta = (1.0 - cfg.damping) * theta + cfg.damping * mean;
    }
    out.theta = theta;
    return out;
}

std::vector<double> final_weights(const Eigen::MatrixXd& data,
                                  const BregmanDivergence& div,
                                  const WeightFunction& w,
                                  const Eigen::VectorXd& theta) {
    std::vector<double> ws(static_cast<std::size_t>(data.rows()));
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        ws[static_cast<std::size_t>(i)] =
            w.f_prime(div.eval(data.row(i).transpose(), theta));
    }
    return ws;
}

// theta-order for deterministic tie-breaking: smaller norm first, then
// lexicographic.
bool theta_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const double na = a.norm(), nb = b.norm();
    if (na != nb) return na < nb;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

}  // namespace

double objective_eval(const Eigen::MatrixXd& data, const BregmanDivergence& div,
                      const WeightFunction& w, const Eigen::VectorXd& theta) {
    if (data.rows() == 0) {
        throw DomainError("objective_eval: empty dataset");
    }
    double sum = 0.0;
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        try {
            sum += w.f(div.eval(data.row(i).transpose(), theta));
        } catch (const DomainError& e) {
            throw DomainError("data row " + std::to_string(i) + ": " + e.what());
        }
    }
    return sum / static_cast<double>(data.rows());
}

EstimateResult estimate(const Eigen::MatrixXd& data,
                        const BregmanDivergence& div, const WeightFunction& w,
                        const EstimatorConfig& cfg) {
    const Eigen::Index n = data.rows();
    if (n < 1) throw DomainError("estimate: empty dataset");
    if (data.cols() != div.dim()) {
        throw DomainError("estimate: data dimension " +
                          std::to_string(data.cols()) +
                          " does not match divergence dimension " +
                          std::to_string(div.dim()));
    }
    if (!(cfg.tol > 0.0) || cfg.max_iter < 1 || cfg.n_starts < 1 ||
        !(cfg.damping > 0.0 && cfg.damping <= 1.0)) {
        throw DomainError("estimate: invalid EstimatorConfig");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!div.in_domain(data.row(i).transpose())) {
            throw DomainError("data row " + std::to_string(i) +
                              " lies outside the " + div.kind_name() +
                              " domain");
        }
    }

    // Start list: primary strategy first, then the complementary central
    // point, then deterministic data-point picks.
    std::vector<Eigen::VectorXd> starts;
    const Eigen::VectorXd mean = data.colwise().mean();
    const Eigen::VectorXd median = coordinate_median(data);
    switch (cfg.init_strategy) {
        case InitStrategy::SampleMean:
            starts.push_back(mean);
            starts.push_back(median);
            break;
        case InitStrategy::CoordinateMedian:
            starts.push_back(median);
            starts.push_back(mean);
            break;
        case InitStrategy::Provided:
            if (cfg.provided_start.size() != data.cols()) {
                throw DomainError("estimate: provided start has wrong dimension");
            }
            starts.push_back(cfg.provided_start);
            starts.push_back(median);
            break;
    }
    Rng pick(RngSeed{cfg.start_seed});
    while (starts.size() < static_cast<std::size_t>(cfg.n_starts)) {
        const auto idx = static_cast<Eigen::Index>(pick.next_u64() %
                                                   static_cast<std::uint64_t>(n));
        starts.push_back(data.row(idx).transpose());
    }
    starts.resize(static_cast<std::size_t>(cfg.n_starts), mean);

    bool any_converged = false;
    EstimateResult best;
    IterationOutcome best_failed;
    int started = 0, degenerate = 0;
    std::string degenerate_msg;
    for (const Eigen::VectorXd& s : starts) {
        Eigen::VectorXd s_valid = s;
        if (!div.in_domain(s_valid)) continue;  // e.g. median 0 under IS
        ++started;
        IterationOutcome r;
        try {
            r = run_fixed_point(data, div, w, cfg, s_valid);
        } catch (const DegenerateWeightsError& e) {
            ++degenerate;
            degenerate_msg = e.what();
            continue;
        }
        if (!r.converged) {
            if (r.residual < best_failed.residual) best_failed = r;
            continue;
        }
        const double obj = objective_eval(data, div, w, r.theta);
        bool take = !any_converged;
        if (any_converged) {
            if (obj < best.objective - 1e-12) {
                take = true;
            } else if (std::abs(obj - best.objective) <= 1e-12 &&
                       theta_less(r.theta, best.theta_hat)) {
                take = true;
            }
        }
        if (take) {
            best.theta_hat = r.theta;
            best.objective = obj;
            best.iterations = r.iterations;
            best.converged = true;
            best.residual = r.residual;
            any_converged = true;
        }
    }

    if (!any_converged) {
        if (degenerate > 0 && degenerate == started) {
            throw DegenerateWeightsError(degenerate_msg);
        }
        EstimateResult carried;
        carried.theta_hat = best_failed.theta;
        carried.converged = false;
        carried.residual = best_failed.residual;
        carried.iterations = best_failed.iterations;
        if (best_failed.theta.size() > 0) {
            carried.objective = objective_eval(data, div, w, best_failed.theta);
            carried.weights = final_weights(data, div, w, best_failed.theta);
        }
        throw NonConvergenceError(
            "estimate: no start converged within max_iter = " +
                std::to_string(cfg.max_iter) + "; best residual " +
                std::to_string(best_failed.residual),
            std::move(carried));
    }

    best.weights = final_weights(data, div, w, best.theta_hat);
    return best;
}

double objective_eval(const std::vector<double>& data,
                      const BregmanDivergence& div, const WeightFunction& w,
                      double theta) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(data.size()), 1);
    for (std::size_t i = 0; i < data.size(); ++i) {
        m(static_cast<Eigen::Index>(i), 0) = data[i];
    }
    Eigen::VectorXd t(1);
    t[0] = theta;
    return objective_eval(m, div, w, t);
}

EstimateResult estimate(const std::vector<double>& data,
                        const BregmanDivergence& div, const WeightFunction& w,
                        const EstimatorConfig& cfg) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(data.size()), 1);
    for (std::size_t i = 0; i < data.size(); ++i) {
        m(static_cast<Eigen::Index>(i), 0) = data[i];
    }
    return estimate(m, div, w, cfg);
}

}  // namespace fsb
