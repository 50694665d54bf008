#include <cmath>

#include "fsb/errors.hpp"
#include "fsb/model.hpp"

namespace fsb {

namespace {
double d_is(double x, double theta) {
    const double r = x / theta;
    return r - std::log(r) - 1.0;
}
}  // namespace

ISModel::ISModel(GeneratorFunction g, QuadratureConfig cfg)
    : g_(std::move(g)), C_(0.0), cfg_(cfg) {
    const GeneratorFunction gg = g_;
    auto unit_density = [gg](double t) { return gg(d_is(t, 1.0)) / t; };
    IntegralResult c = integrate_semi_infinite(unit_density, cfg_);
    if (!c.converged || !(c.value > 0.0) || !std::isfinite(c.value)) {
        throw NonIntegrableError(
            "IS model: normalization integral of (1/t) g(d_IS(t,1)) diverges");
    }
    C_ = c.value;
    unit_sampler_ = std::make_shared<ScalarInverseCdfSampler>(
        unit_density, 0.0, std::numeric_limits<double>::infinity(), cfg_);
}

IntegralResult ISModel::normalization_alt() const {
    const GeneratorFunction gg = g_;
    return integrate_semi_infinite([gg](double x) { return gg(d_is(x, 1.0)); },
                                   cfg_);
}

double ISModel::density(double x, double theta) const {
    if (!(theta > 0.0)) {
        throw DomainError("IS density: theta must be positive");
    }
    if (!(x > 0.0)) return 0.0;  // outside the support
    return g_(d_is(x, theta)) / (C_ * x);
}

std::vector<double> ISModel::sample(double theta, std::size_t n,
                                    RngSeed seed) const {
    if (!(theta > 0.0)) {
        throw DomainError("IS sample: theta must be positive");
    }
    Rng rng(seed);
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(theta * unit_sampler_->draw(rng));
    }
    return out;
}

ExpectationIdentity ISModel::check_expectation_identity(double theta) const {
    ExpectationIdentity r;
    const GeneratorFunction gg = g_;
    r.g_in_l1 = integrate_semi_infinite([gg](double t) { return gg(t); }, cfg_)
                    .converged;
    IntegralResult e = integrate_semi_infinite(
        [this, theta](double x) { return x * density(x, theta); }, cfg_);
    r.expectation = e.value;
    r.expectation_equals_theta =
        e.converged && std::abs(e.value - theta) <= 1e-6 * std::abs(theta);
    return r;
}

ScalarModelView ISModel::scalar_view() const {
    ISModel copy(*this);
    ScalarModelView v;
    v.support = Interval{0.0, std::numeric_limits<double>::infinity()};
    v.density = [copy](double x, double t) { return copy.density(x, t); };
    v.make_sampler = [copy](double t) -> std::function<double(Rng&)> {
        if (!(t > 0.0)) {
            throw DomainError("IS sampler: theta must be positive");
        }
        return [copy, t](Rng& rng) { return t * copy.unit_sampler_->draw(rng); };
    };
    v.label = "is(" + g_.describe() + ")";
    return v;
}

}  // namespace fsb
