#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "fsb/quadrature.hpp"
#include "fsb/rng.hpp"

namespace fsb {

/// Tabulated inverse-CDF sampler for an unnormalized density on (lo, hi),
/// hi possibly infinite. The CDF table is refined until self-consistent to
/// 1e-8 and inverted with a monotone cubic. Building the table costs one
/// normalization integral plus a few thousand density evaluations; draws
/// are O(log n_knots).
class ScalarInverseCdfSampler {
public:
    /// Endpoints may be infinite; the tabulation window is then found by
    /// scanning geometric blocks outward from `center` (defaults to a
    /// finite endpoint, or 0) until the excluded tail mass is negligible.
    ScalarInverseCdfSampler(const Integrand& unnormalized_density, double lo,
                            double hi, const QuadratureConfig& cfg = {},
                            std::optional<double> center = std::nullopt);

    double draw(Rng& rng) const;

    /// Normalizing constant of the density over (lo, hi).
    double total_mass() const { return total_mass_; }

    /// Quantile of the tabulated distribution, u in [0, 1].
    double quantile(double u) const;

private:
    std::vector<double> x_;    // knots
    std::vector<double> cdf_;  // normalized CDF at knots
    std::vector<double> slope_;  // dx/dcdf monotone Hermite slopes
    double total_mass_ = 0.0;
};

/// Draw n samples from an unnormalized density via the tabulated inverse CDF.
/// Deterministic given the seed. Throws NonIntegrableError if the density
/// does not integrate.
std::vector<double> inverse_cdf_sample(const Integrand& unnormalized_density,
                                       double lo, double hi, std::size_t n,
                                       RngSeed seed,
                                       const QuadratureConfig& cfg = {});

/// n points uniform on the unit sphere in R^d (d = 1 gives {-1, +1}).
std::vector<Eigen::VectorXd> sample_unit_sphere(int d, std::size_t n,
                                                RngSeed seed);

/// Single sphere draw from a live stream.
Eigen::VectorXd unit_sphere_draw(int d, Rng& rng);

}  // namespace fsb
