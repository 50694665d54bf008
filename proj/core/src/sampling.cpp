#include "fsb/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fsb/errors.hpp"

namespace fsb {

namespace {

// Smallest geometric truncation from `origin` upward that holds all but
// ~1e-12 of `side_mass` (the mass of (origin, hi)).
double upper_cutoff(const Integrand& f, double origin, double side_mass,
                    double total, const QuadratureConfig& cfg) {
    double partial = integrate_finite(f, origin, origin + 1.0, cfg).value;
    double prev = 1.0;
    for (int m = 1; m <= 60; ++m) {
        if (side_mass - partial <= 1e-12 * total) {
            return origin + prev;
        }
        const double next = std::ldexp(1.0, m);
        partial += integrate_finite(f, origin + prev, origin + next, cfg).value;
        prev = next;
    }
    return origin + prev;
}

}  // namespace

ScalarInverseCdfSampler::ScalarInverseCdfSampler(const Integrand& density,
                                                 double lo, double hi,
                                                 const QuadratureConfig& cfg,
                                                 std::optional<double> center) {
    IntegralResult total = integrate_interval(density, lo, hi, cfg);
    if (!total.converged || !(total.value > 0.0) ||
        !std::isfinite(total.value)) {
        throw NonIntegrableError(
            "inverse-CDF sampler: density does not integrate on the interval");
    }
    total_mass_ = total.value;

    double origin;
    if (center) {
        origin = *center;
    } else if (!std::isinf(lo)) {
        origin = lo;
    } else if (!std::isinf(hi)) {
        origin = hi;
    } else {
        origin = 0.0;
    }

    double upper = hi;
    if (std::isinf(hi)) {
        const double up_mass =
            integrate_interval(density, origin, hi, cfg).value;
        upper = upper_cutoff(density, origin, up_mass, total_mass_, cfg);
    }
    double lower = lo;
    if (std::isinf(lo)) {
        const double down_mass =
            integrate_interval(density, lo, origin, cfg).value;
        auto reflected = [&](double s) { return density(origin - s); };
        lower = origin - (upper_cutoff(reflected, 0.0, down_mass, total_mass_,
                                       cfg) -
                          0.0);
    }

    // Knots: uniform base grid plus geometric refinement toward both
    // endpoints (handles integrable singularities and thin tails).
    const int kBase = 1024;
    const double width = upper - lower;
    std::vector<double> knots;
    knots.reserve(kBase + 100);
    for (int i = 0; i <= kBase; ++i) {
        knots.push_back(lower + width * static_cast<double>(i) / kBase);
    }
    for (int j = 1; j <= 46; ++j) {
        const double off = width * std::ldexp(1.0, -j);
        knots.push_back(lower + off);
        knots.push_back(upper - off);
    }
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    // Per-panel masses; tolerances chosen so the accumulated CDF error is
    // below 1e-8 of the total mass.
    QuadratureConfig panel_cfg = cfg;
    panel_cfg.rel_tol = std::min(cfg.rel_tol, 1e-9);
    panel_cfg.abs_tol = 1e-14 * total_mass_;
    panel_cfg.max_subdivisions = 200;

    x_.push_back(knots.front());
    cdf_.push_back(0.0);
    double running = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double m =
            integrate_finite(density, knots[i], knots[i + 1], panel_cfg).value;
        running += std::max(m, 0.0);
        if (running > cdf_.back()) {  // drop flat segments
            x_.push_back(knots[i + 1]);
            cdf_.push_back(running);
        }
    }
    if (cdf_.size() < 2) {
        throw NonIntegrableError("inverse-CDF sampler: degenerate CDF table");
    }
    if (std::abs(running - total_mass_) > 1e-8 * total_mass_) {
        throw NonIntegrableError(
            "inverse-CDF sampler: CDF tabulation failed to reproduce the "
            "normalization integral");
    }
    for (double& c : cdf_) c /= running;
    cdf_.back() = 1.0;

    // Fritsch-Carlson monotone slopes for the inverse map u -> x.
    const std::size_t n = x_.size();
    std::vector<double> secant(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        secant[i] = (x_[i + 1] - x_[i]) / (cdf_[i + 1] - cdf_[i]);
    }
    slope_.assign(n, 0.0);
    slope_.front() = secant.front();
    slope_.back() = secant.back();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double s = 0.5 * (secant[i - 1] + secant[i]);
        slope_[i] = std::min(s, 3.0 * std::min(secant[i - 1], secant[i]));
    }
}

double ScalarInverseCdfSampler::quantile(double u) const {
    u = std::clamp(u, 0.0, 1.0);
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    std::size_t i = static_cast<std::size_t>(
        std::max<std::ptrdiff_t>(1, it - cdf_.begin()));
    i = std::min(i, cdf_.size() - 1);

    const double h = cdf_[i] - cdf_[i - 1];
    const double t = (u - cdf_[i - 1]) / h;
    const double x0 = x_[i - 1], x1 = x_[i];
    const double m0 = slope_[i - 1] * h, m1 = slope_[i] * h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * x0 + (t3 - 2 * t2 + t) * m0 +
           (-2 * t3 + 3 * t2) * x1 + (t3 - t2) * m1;
}

double ScalarInverseCdfSampler::draw(Rng& rng) const {
    return quantile(rng.uniform01());
}

std::vector<double> inverse_cdf_sample(const Integrand& density, double lo,
                                       double hi, std::size_t n, RngSeed seed,
                                       const QuadratureConfig& cfg) {
    if (n == 0) return {};
    ScalarInverseCdfSampler sampler(density, lo, hi, cfg);
    Rng rng(seed);
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(sampler.draw(rng));
    }
    return out;
}

Eigen::VectorXd unit_sphere_draw(int d, Rng& rng) {
    Eigen::VectorXd v(d);
    double norm2 = 0.0;
    do {
        for (int i = 0; i < d; ++i) v[i] = rng.normal();
        norm2 = v.squaredNorm();
    } while (norm2 < 1e-290);
    return v / std::sqrt(norm2);
}

std::vector<Eigen::VectorXd> sample_unit_sphere(int d, std::size_t n,
                                                RngSeed seed) {
    if (d < 1) throw DomainError("sample_unit_sphere: dimension must be >= 1");
    Rng rng(seed);
    std::vector<Eigen::VectorXd> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(unit_sphere_draw(d, rng));
    }
    return out;
}

}  // namespace fsb
