#include <cmath>
#include <sstream>

#include "fsb/errors.hpp"
#include "fsb/model.hpp"

namespace fsb {

namespace {

enum class LimitClass { Infinite, Finite, Unresolved };

struct LimitProbe {
    LimitClass cls = LimitClass::Unresolved;
    double value = 0.0;
};

// Classify lim d_phi(x_j, theta) along a geometric sequence approaching an
// endpoint: escape past a large probe or a sustained increasing trend is
// "infinite"; consecutive agreement is a finite limit.
LimitProbe probe_endpoint(const BregmanDivergence& phi, double theta,
                          double endpoint, bool from_above) {
    std::vector<double> seq;
    for (int j = 1; j <= 48; ++j) {
        double x;
        if (std::isinf(endpoint)) {
            x = theta + (from_above ? -1.0 : 1.0) * std::ldexp(1.0, j);
        } else {
            const double gap = std::abs(theta - endpoint) * std::ldexp(1.0, -j);
            x = endpoint + (from_above ? gap : -gap);
        }
        if (!phi.in_domain(x)) continue;
        const double d = phi.eval(x, theta);
        if (d > 1e10) return {LimitClass::Infinite, 0.0};
        seq.push_back(d);
        if (seq.size() >= 2 && j > 20) {
            const double prev = seq[seq.size() - 2];
            if (std::abs(d - prev) <= 1e-6 * std::max(1.0, std::abs(d))) {
                return {LimitClass::Finite, d};
            }
        }
    }
    if (seq.size() >= 10) {
        bool increasing = true;
        for (std::size_t i = seq.size() - 9; i < seq.size(); ++i) {
            if (seq[i] <= seq[i - 1]) increasing = false;
        }
        if (increasing) return {LimitClass::Infinite, 0.0};
    }
    return {LimitClass::Unresolved, seq.empty() ? 0.0 : seq.back()};
}

}  // namespace

ContinuousBregmanModel::ContinuousBregmanModel(BregmanDivergence phi,
                                               GeneratorFunction g,
                                               Interval domain,
                                               QuadratureConfig cfg)
    : phi_(std::move(phi)), g_(std::move(g)), domain_(domain), cfg_(cfg) {
    if (!phi_.is_scalar()) {
        throw DomainError("continuous Bregman model: phi must be scalar");
    }
    if (!(domain_.lo < domain_.hi)) {
        throw DomainError("continuous Bregman model: empty domain");
    }
    probe_limit_condition();
}

ContinuousBregmanModel::ContinuousBregmanModel(
    const ContinuousBregmanModel& other)
    : phi_(other.phi_), g_(other.g_), domain_(other.domain_), cfg_(other.cfg_),
      limit_ok_(other.limit_ok_), zeta_(other.zeta_),
      limit_msg_(other.limit_msg_) {
    std::lock_guard<std::mutex> lock(other.cache_mutex_);
    norm_cache_ = other.norm_cache_;
}

ContinuousBregmanModel& ContinuousBregmanModel::operator=(
    const ContinuousBregmanModel& other) {
    if (this != &other) {
        std::scoped_lock lock(cache_mutex_, other.cache_mutex_);
        phi_ = other.phi_;
        g_ = other.g_;
        domain_ = other.domain_;
        cfg_ = other.cfg_;
        limit_ok_ = other.limit_ok_;
        zeta_ = other.zeta_;
        limit_msg_ = other.limit_msg_;
        norm_cache_ = other.norm_cache_;
    }
    return *this;
}

void ContinuousBregmanModel::probe_limit_condition() {
    std::vector<double> thetas;
    const bool lo_f = !std::isinf(domain_.lo);
    const bool hi_f = !std::isinf(domain_.hi);
    if (lo_f && hi_f) {
        const double w = domain_.hi - domain_.lo;
        thetas = {domain_.lo + 0.25 * w, domain_.lo + 0.5 * w,
                  domain_.lo + 0.75 * w};
    } else if (lo_f) {
        thetas = {domain_.lo + 0.5, domain_.lo + 1.0, domain_.lo + 2.0};
    } else if (hi_f) {
        thetas = {domain_.hi - 2.0, domain_.hi - 1.0, domain_.hi - 0.5};
    } else {
        thetas = {-1.0, 0.5, 2.0};
    }

    bool have_zeta = false;
    for (double theta : thetas) {
        if (!phi_.in_domain(theta)) continue;
        const LimitProbe at_lo = probe_endpoint(phi_, theta, domain_.lo, true);
        const LimitProbe at_hi = probe_endpoint(phi_, theta, domain_.hi, false);
        std::ostringstream msg;
        auto side = [&](const LimitProbe& p) -> std::string {
            switch (p.cls) {
                case LimitClass::Infinite: return "infinite";
                case LimitClass::Finite: return std::to_string(p.value);
                default: return "unresolved";
            }
        };
        if (at_lo.cls == LimitClass::Unresolved ||
            at_hi.cls == LimitClass::Unresolved) {
            msg << "endpoint limit of the divergence could not be classified "
                   "(theta = " << theta << "): " << side(at_lo) << " at lower, "
                << side(at_hi) << " at upper endpoint";
            limit_ok_ = false;
            limit_msg_ = msg.str();
            return;
        }
        if (at_lo.cls != at_hi.cls) {
            msg << "divergence limits differ at the endpoints for theta = "
                << theta << ": " << side(at_lo) << " at " << domain_.lo
                << ", " << side(at_hi) << " at " << domain_.hi;
            limit_ok_ = false;
            limit_msg_ = msg.str();
            return;
        }
        double zeta_here;
        if (at_lo.cls == LimitClass::Infinite) {
            zeta_here = std::numeric_limits<double>::infinity();
        } else {
            if (std::abs(at_lo.value - at_hi.value) >
                1e-6 * std::max({1.0, std::abs(at_lo.value),
                                 std::abs(at_hi.value)})) {
                msg << "divergence limits differ at the endpoints for theta = "
                    << theta << ": " << at_lo.value << " at " << domain_.lo
                    << " vs " << at_hi.value << " at " << domain_.hi;
                limit_ok_ = false;
                limit_msg_ = msg.str();
                return;
            }
            zeta_here = at_lo.value;
        }
        if (have_zeta && std::isfinite(zeta_) != std::isfinite(zeta_here)) {
            limit_ok_ = false;
            limit_msg_ = "endpoint limit depends on theta";
            return;
        }
        zeta_ = zeta_here;
        have_zeta = true;
    }
    limit_ok_ = have_zeta;
    limit_msg_ = have_zeta ? "endpoint limits agree"
                           : "no valid reference parameters in the domain";
}

double ContinuousBregmanModel::slope_factor(double x, double theta) const {
    const double h = x - theta;
    if (std::abs(h) <= 1e-8 * (1.0 + std::abs(theta))) {
        return phi_.hess_scalar(theta);
    }
    return (phi_.grad_scalar(x) - phi_.grad_scalar(theta)) / h;
}

double ContinuousBregmanModel::normalization(double theta) const {
    if (!domain_.contains(theta)) {
        throw DomainError("continuous Bregman model: theta outside the domain");
    }
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = norm_cache_.find(theta);
        if (it != norm_cache_.end()) return it->second;
    }
    IntegralResult c = integrate_interval(
        [this, theta](double x) {
            return slope_factor(x, theta) * g_(phi_.eval(x, theta));
        },
        domain_.lo, domain_.hi, cfg_);
    if (!c.converged || !(c.value > 0.0) || !std::isfinite(c.value)) {
        throw NonIntegrableError(
            "continuous Bregman model: normalization integral diverges");
    }
    std::lock_guard<std::mutex> lock(cache_mutex_);
    norm_cache_.emplace(theta, c.value);
    return c.value;
}

double ContinuousBregmanModel::density(double x, double theta) const {
    const double c = normalization(theta);  // validates theta
    if (!domain_.contains(x)) return 0.0;
    return slope_factor(x, theta) * g_(phi_.eval(x, theta)) / c;
}

std::vector<double> ContinuousBregmanModel::sample(double theta, std::size_t n,
                                                   RngSeed seed) const {
    if (!domain_.contains(theta)) {
        throw DomainError("continuous Bregman sample: theta outside the domain");
    }
    std::vector<double> out;
    out.reserve(n);
    if (n == 0) return out;
    Rng rng(seed);
    ScalarInverseCdfSampler sampler(
        [this, theta](double x) {
            return slope_factor(x, theta) * g_(phi_.eval(x, theta));
        },
        domain_.lo, domain_.hi, cfg_, theta);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(sampler.draw(rng));
    }
    return out;
}

ExpectationIdentity ContinuousBregmanModel::check_expectation_identity(
    double theta) const {
    ExpectationIdentity r;
    const GeneratorFunction gg = g_;
    r.g_in_l1 = integrate_semi_infinite([gg](double t) { return gg(t); }, cfg_)
                    .converged;
    IntegralResult e = integrate_interval(
        [this, theta](double x) { return x * density(x, theta); }, domain_.lo,
        domain_.hi, cfg_);
    r.expectation = e.value;
    r.expectation_equals_theta =
        e.converged &&
        std::abs(e.value - theta) <= std::max(1e-9, 1e-6 * std::abs(theta));
    return r;
}

ScalarModelView ContinuousBregmanModel::scalar_view() const {
    auto self = std::make_shared<ContinuousBregmanModel>(*this);
    ScalarModelView v;
    v.support = domain_;
    v.density = [self](double x, double t) { return self->density(x, t); };
    v.make_sampler = [self](double t) -> std::function<double(Rng&)> {
        auto sampler = std::make_shared<ScalarInverseCdfSampler>(
            [self, t](double x) {
                return self->slope_factor(x, t) * self->g_(self->phi_.eval(x, t));
            },
            self->domain_.lo, self->domain_.hi, self->cfg_, t);
        return [sampler](Rng& rng) { return sampler->draw(rng); };
    };
    v.label = "cbregman(" + phi_.kind_name() + "," + g_.describe() + ")";
    return v;
}

}  // namespace fsb
