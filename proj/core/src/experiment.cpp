#include "fsb/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <thread>

#include "fsb/analysis.hpp"
#include "fsb/errors.hpp"
#include "fsb/estimator.hpp"

namespace fsb {

void ContaminationSpec::validate() const {
    if (!(epsilon >= 0.0 && epsilon < 1.0)) {
        throw DomainError("contamination: epsilon must lie in [0, 1)");
    }
    if (!target.support.contains(theta_star)) {
        // location targets on all of R pass trivially
        if (!(std::isinf(target.support.lo) && std::isinf(target.support.hi))) {
            throw DomainError("contamination: theta_star outside target support");
        }
    }
    if (const auto* pm = std::get_if<PointMass>(&contaminant)) {
        if (!target.support.contains(pm->location)) {
            throw DomainError(
                "contamination: point-mass location " +
                std::to_string(pm->location) +
                " lies outside the estimation domain of the target");
        }
    } else {
        const auto& cm = std::get<ContaminantModel>(contaminant);
        if (cm.model.support.lo < target.support.lo ||
            cm.model.support.hi > target.support.hi) {
            throw DomainError(
                "contamination: contaminant support exceeds the estimation "
                "domain of the target");
        }
    }
}

std::vector<double> sample_contaminated(const ContaminationSpec& spec,
                                        std::size_t n, RngSeed seed) {
    spec.validate();
    Rng rng(seed);
    std::vector<double> out;
    out.reserve(n);

    auto target_draw = spec.target.make_sampler(spec.theta_star);
    if (spec.epsilon == 0.0) {
        // identical stream to plain target sampling under the same seed
        for (std::size_t i = 0; i < n; ++i) out.push_back(target_draw(rng));
        return out;
    }

    std::function<double(Rng&)> contaminant_draw;
    if (const auto* pm = std::get_if<PointMass>(&spec.contaminant)) {
        const double loc = pm->location;
        contaminant_draw = [loc](Rng&) { return loc; };
    } else {
        const auto& cm = std::get<ContaminantModel>(spec.contaminant);
        contaminant_draw = cm.model.make_sampler(cm.theta);
    }

    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        out.push_back(u < spec.epsilon ? contaminant_draw(rng)
                                       : target_draw(rng));
    }
    return out;
}

double nu_f(const ContaminationSpec& spec, const WeightFunction& w,
            const BregmanDivergence& div, const QuadratureConfig& cfg) {
    spec.validate();
    auto ftilde = w.shifted_vanishing();  // throws if unsupported
    const double ts = spec.theta_star;
    if (const auto* pm = std::get_if<PointMass>(&spec.contaminant)) {
        return ftilde(div.eval(pm->location, ts));
    }
    const auto& cm = std::get<ContaminantModel>(spec.contaminant);
    IntegralResult r = integrate_interval(
        [&](double x) {
            return cm.model.density(x, cm.theta) * ftilde(div.eval(x, ts));
        },
        cm.model.support.lo, cm.model.support.hi, cfg);
    if (!r.converged) {
        throw NonIntegrableError("nu_f: contaminant expectation did not converge");
    }
    return r.value;
}

double nu_p(const ContaminationSpec& spec, double gamma0,
            const QuadratureConfig& cfg) {
    spec.validate();
    if (!(gamma0 > 0.0)) throw DomainError("nu_p: gamma0 must be > 0");
    const double ts = spec.theta_star;
    if (const auto* pm = std::get_if<PointMass>(&spec.contaminant)) {
        // the gamma0 power cancels exactly for a point mass
        return spec.target.density(pm->location, ts);
    }
    const auto& cm = std::get<ContaminantModel>(spec.contaminant);
    IntegralResult r = integrate_interval(
        [&](double x) {
            return cm.model.density(x, cm.theta) *
                   std::pow(spec.target.density(x, ts), gamma0);
        },
        cm.model.support.lo, cm.model.support.hi, cfg);
    if (!r.converged) {
        throw NonIntegrableError("nu_p: contaminant expectation did not converge");
    }
    return std::pow(r.value, 1.0 / gamma0);
}

namespace {

// Run body(r) for r in [0, count) across a small thread pool. Each
// replication derives its own seed, so results are independent of the
// scheduling; slots are written by index and aggregated in order. The
// first exception raised by any replication is rethrown after the join.
void parallel_replications(int count, const std::function<void(int)>& body) {
    const unsigned threads = std::min<unsigned>(
        8, std::max(1u, std::thread::hardware_concurrency()));
    if (threads <= 1 || count < 4) {
        for (int r = 0; r < count; ++r) body(r);
        return;
    }
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            for (int r = next.fetch_add(1); r < count && !failed.load();
                 r = next.fetch_add(1)) {
                try {
                    body(r);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    failed.store(true);
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

std::vector<SweepRow> latent_bias_sweep(const ContaminationSpec& spec,
                                        const BregmanDivergence& div,
                                        const std::vector<WeightFunction>& ws,
                                        std::size_t n, int replications,
                                        RngSeed seed,
                                        const QuadratureConfig& cfg) {
    spec.validate();
    if (replications < 1) {
        throw DomainError("latent_bias_sweep: replications must be >= 1");
    }
    for (const WeightFunction& w : ws) {
        ConditionVerdict v = check_theorem2(spec.target_g, w, cfg);
        if (!v.finite) {
            throw DomainError(
                "latent_bias_sweep: weight family " + w.describe() +
                " fails the unbiasedness condition for the target model");
        }
    }

    // estimates[wi][r]; NaN marks a failed replication
    std::vector<std::vector<double>> estimates(
        ws.size(), std::vector<double>(static_cast<std::size_t>(replications),
                                       std::numeric_limits<double>::quiet_NaN()));
    parallel_replications(replications, [&](int r) {
        const std::vector<double> data = sample_contaminated(
            spec, n, Rng::derive(seed, static_cast<std::uint64_t>(r)));
        for (std::size_t wi = 0; wi < ws.size(); ++wi) {
            try {
                EstimateResult res = estimate(data, div, ws[wi]);
                estimates[wi][static_cast<std::size_t>(r)] = res.theta_hat[0];
            } catch (const Error&) {
                // leave NaN; counted below
            }
        }
    });

    std::vector<SweepRow> rows;
    rows.reserve(ws.size());
    for (std::size_t wi = 0; wi < ws.size(); ++wi) {
        SweepRow row;
        row.alpha = ws[wi].tuning();
        double mean = 0.0;
        std::size_t ok = 0;
        for (double v : estimates[wi]) {
            if (std::isnan(v)) continue;
            mean += v;
            ++ok;
        }
        row.failures = replications - static_cast<int>(ok);
        if (ok > 0) {
            mean /= static_cast<double>(ok);
            double ss = 0.0;
            for (double v : estimates[wi]) {
                if (!std::isnan(v)) ss += (v - mean) * (v - mean);
            }
            row.mean_bias = mean - spec.theta_star;
            row.sd_bias =
                ok > 1 ? std::sqrt(ss / static_cast<double>(ok - 1)) : 0.0;
        }
        if (ws[wi].has_vanishing_shift()) {
            row.nu_f = nu_f(spec, ws[wi], div, cfg);
        }
        rows.push_back(row);
    }
    return rows;
}

double population_fixed_point(const ContaminationSpec& spec,
                              const BregmanDivergence& div,
                              const WeightFunction& w,
                              const QuadratureConfig& cfg) {
    spec.validate();
    const double eps = spec.epsilon;
    const double ts = spec.theta_star;

    // E-tilde[h(x, theta)] under the mixture
    auto mix_expect = [&](const std::function<double(double)>& h) {
        IntegralResult t = integrate_interval(
            [&](double x) { return spec.target.density(x, ts) * h(x); },
            spec.target.support.lo, spec.target.support.hi, cfg);
        if (!t.converged) {
            throw NonIntegrableError(
                "population_fixed_point: target expectation did not converge");
        }
        double c_part = 0.0;
        if (eps > 0.0) {
            if (const auto* pm = std::get_if<PointMass>(&spec.contaminant)) {
                c_part = h(pm->location);
            } else {
                const auto& cm = std::get<ContaminantModel>(spec.contaminant);
                IntegralResult c = integrate_interval(
                    [&](double x) { return cm.model.density(x, cm.theta) * h(x); },
                    cm.model.support.lo, cm.model.support.hi, cfg);
                if (!c.converged) {
                    throw NonIntegrableError(
                        "population_fixed_point: contaminant expectation did "
                        "not converge");
                }
                c_part = c.value;
            }
        }
        return (1.0 - eps) * t.value + eps * c_part;
    };

    double theta = ts;
    for (int it = 0; it < 500; ++it) {
        auto weight = [&](double x) { return w.f_prime(div.eval(x, theta)); };
        const double num = mix_expect([&](double x) { return weight(x) * x; });
        const double den = mix_expect(weight);
        if (!(den > 0.0)) {
            throw DegenerateWeightsError(
                "population_fixed_point: weight mass vanished");
        }
        const double next = num / den;
        if (std::abs(next - theta) < 1e-10 * std::max(1.0, std::abs(theta))) {
            return next;
        }
        theta = next;
    }
    return theta;
}

SmallInlierResult small_inlier_experiment(double theta_star,
                                          double inlier_location, double eps,
                                          double alpha, std::size_t n,
                                          int replications, RngSeed seed) {
    if (!(inlier_location > 0.0 && inlier_location < theta_star)) {
        throw DomainError(
            "small_inlier_experiment: inlier must lie in (0, theta_star)");
    }
    ISModel target(GeneratorFunction::exponential(1.0));
    ContaminationSpec spec;
    spec.epsilon = eps;
    spec.target = target.scalar_view();
    spec.target_g = GeneratorFunction::exponential(1.0);
    spec.theta_star = theta_star;
    spec.contaminant = PointMass{inlier_location};
    spec.validate();

    const BregmanDivergence is = BregmanDivergence::itakura_saito();
    const WeightFunction w_fsep = WeightFunction::log_sum_exp(alpha);
    const WeightFunction w_mle = WeightFunction::linear();

    std::vector<double> fsep(static_cast<std::size_t>(replications));
    std::vector<double> mle(static_cast<std::size_t>(replications));
    parallel_replications(replications, [&](int r) {
        const std::vector<double> data = sample_contaminated(
            spec, n, Rng::derive(seed, static_cast<std::uint64_t>(r)));
        fsep[static_cast<std::size_t>(r)] = estimate(data, is, w_fsep).theta_hat[0];
        mle[static_cast<std::size_t>(r)] = estimate(data, is, w_mle).theta_hat[0];
    });
    double sum_fsep = 0.0, sum_mle = 0.0;
    for (int r = 0; r < replications; ++r) {
        sum_fsep += fsep[static_cast<std::size_t>(r)];
        sum_mle += mle[static_cast<std::size_t>(r)];
    }
    SmallInlierResult out;
    out.bias_fsep = sum_fsep / replications - theta_star;
    out.bias_mle = sum_mle / replications - theta_star;
    return out;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "alpha,mean_bias,sd_bias,nu_f,failures\n";
    char buf[160];
    for (const SweepRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,", r.alpha,
                      r.mean_bias, r.sd_bias);
        os << buf;
        if (r.nu_f) {
            std::snprintf(buf, sizeof(buf), "%.17g", *r.nu_f);
            os << buf;
        }
        os << ',' << r.failures << '\n';
    }
}

}  // namespace fsb
