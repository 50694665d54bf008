#pragma once

#include <optional>
#include <ostream>
#include <variant>
#include <vector>

#include "fsb/divergence.hpp"
#include "fsb/model.hpp"
#include "fsb/quadrature.hpp"
#include "fsb/rng.hpp"
#include "fsb/weight.hpp"

namespace fsb {

struct PointMass {
    double location = 0.0;
};

/// A scalar model frozen at a parameter, used as an outlier generator.
struct ContaminantModel {
    ScalarModelView model;
    double theta = 0.0;
};

using Contaminant = std::variant<PointMass, ContaminantModel>;

/// Mixture (1 - eps) p(x | theta_star) + eps c(x). The target's generator
/// function is kept alongside the view so sweeps can run the unbiasedness
/// condition check for each weight family.
struct ContaminationSpec {
    double epsilon = 0.0;
    ScalarModelView target;
    GeneratorFunction target_g = GeneratorFunction::exponential(1.0);
    double theta_star = 1.0;
    Contaminant contaminant = PointMass{};

    /// Validates epsilon and that contaminant output stays inside the
    /// target support (outliers must be estimable points).
    void validate() const;
};

/// Each point is drawn from the contaminant with probability eps, else from
/// the target. With eps = 0 the stream is identical to plain target
/// sampling under the same seed.
std::vector<double> sample_contaminated(const ContaminationSpec& spec,
                                        std::size_t n, RngSeed seed);

/// nu_f = E_c[ ftilde(d(x, theta_star)) ] with ftilde the vanishing shift
/// of f; requires a weight family admitting one.
double nu_f(const ContaminationSpec& spec, const WeightFunction& w,
            const BregmanDivergence& div, const QuadratureConfig& cfg = {});

/// nu_p = ( E_c[ p(x | theta_star)^gamma0 ] )^(1/gamma0); for a point mass
/// this is exactly the target density at the point.
double nu_p(const ContaminationSpec& spec, double gamma0,
            const QuadratureConfig& cfg = {});

struct SweepRow {
    double alpha = 0.0;       // tuning parameter of the weight family
    double mean_bias = 0.0;   // mean(theta_hat) - theta_star
    double sd_bias = 0.0;     // sd of theta_hat across replications
    std::optional<double> nu_f;  // absent when f admits no vanishing shift
    int failures = 0;         // replications whose estimate failed
};

/// Monte Carlo latent-bias sweep: for each weight family, estimate on
/// `replications` contaminated datasets of size n (dataset r is shared by
/// every family, seeded from (seed, r)). Every family must pass the
/// scale-family unbiasedness condition for the target generator.
std::vector<SweepRow> latent_bias_sweep(const ContaminationSpec& spec,
                                        const BregmanDivergence& div,
                                        const std::vector<WeightFunction>& ws,
                                        std::size_t n, int replications,
                                        RngSeed seed,
                                        const QuadratureConfig& cfg = {});

/// Population-level fixed point of the estimation equation under the
/// contaminated mixture, by quadrature; the asymptotic counterpart of the
/// replication average.
double population_fixed_point(const ContaminationSpec& spec,
                              const BregmanDivergence& div,
                              const WeightFunction& w,
                              const QuadratureConfig& cfg = {});

struct SmallInlierResult {
    double bias_fsep = 0.0;
    double bias_mle = 0.0;
};

/// Exponential target contaminated with a point mass near zero: compares
/// the log-sum-exp IS estimator against the MLE (sample mean).
SmallInlierResult small_inlier_experiment(double theta_star,
                                          double inlier_location, double eps,
                                          double alpha, std::size_t n,
                                          int replications, RngSeed seed);

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace fsb
