#include "fsb/generator.hpp"

#include <cmath>

#include "fsb/errors.hpp"

namespace fsb {

GeneratorFunction GeneratorFunction::exponential(double k) {
    if (!(k > 0.0)) throw DomainError("exponential generator: k must be > 0");
    GeneratorFunction g;
    g.kind_ = Kind::Exponential;
    g.k_ = k;
    g.label_ = "exp(k=" + std::to_string(k) + ")";
    return g;
}

GeneratorFunction GeneratorFunction::gaussian_shape() {
    GeneratorFunction g;
    g.kind_ = Kind::GaussianShape;
    g.label_ = "gauss";
    return g;
}

GeneratorFunction GeneratorFunction::student_shape(double nu, int dim) {
    if (!(nu > 0.0)) throw DomainError("student generator: nu must be > 0");
    if (dim < 1) throw DomainError("student generator: dim must be >= 1");
    GeneratorFunction g;
    g.kind_ = Kind::StudentShape;
    g.nu_ = nu;
    g.exponent_ = -(nu + dim) / 2.0;
    g.label_ = "student(nu=" + std::to_string(nu) + ",d=" + std::to_string(dim) + ")";
    return g;
}

GeneratorFunction GeneratorFunction::custom(std::function<double(double)> fn,
                                            std::string label) {
    GeneratorFunction g;
    g.kind_ = Kind::Custom;
    g.fn_ = std::move(fn);
    g.label_ = std::move(label);
    return g;
}

double GeneratorFunction::operator()(double z) const {
    switch (kind_) {
        case Kind::Exponential:
            return std::exp(-k_ * z);
        case Kind::GaussianShape:
            return std::exp(-0.5 * z);
        case Kind::StudentShape:
            return std::pow(1.0 + z / nu_, exponent_);
        case Kind::Custom:
            return fn_(z);
    }
    return 0.0;
}

}  // namespace fsb
