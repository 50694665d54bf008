#pragma once

#include <functional>
#include <string>

namespace fsb {

/// The density shape g: R+ -> R+ from which the elliptical, IS, and
/// continuous Bregman families are built.
class GeneratorFunction {
public:
    enum class Kind { Exponential, GaussianShape, StudentShape, Custom };

    /// g(z) = exp(-k z), k > 0. Yields the gamma family under the IS model.
    static GeneratorFunction exponential(double k);
    /// g(z) = exp(-z / 2). Yields the Gaussian under the elliptical model.
    static GeneratorFunction gaussian_shape();
    /// g(z) = (1 + z / nu)^(-(nu + d) / 2); Student t radial shape.
    static GeneratorFunction student_shape(double nu, int dim);
    static GeneratorFunction custom(std::function<double(double)> g,
                                    std::string label = "custom");

    double operator()(double z) const;

    Kind kind() const { return kind_; }
    double shape_k() const { return k_; }
    double nu() const { return nu_; }
    const std::string& describe() const { return label_; }

private:
    GeneratorFunction() = default;

    Kind kind_ = Kind::Custom;
    double k_ = 0.0;
    double nu_ = 0.0;
    double exponent_ = 0.0;  // student
    std::function<double(double)> fn_;
    std::string label_;
};

}  // namespace fsb
