#pragma once

// Test-only oracles, independent of the library's solver paths: brute-force
// grid minimization with golden-section refinement, and central finite
// differences. Frozen expected values in the tests were produced by these.

#include <cmath>
#include <functional>
#include <stdexcept>

namespace fsb::test {

// Coarse grid scan followed by golden-section refinement of a scalar
// function on [lo, hi].
inline double grid_minimize(const std::function<double(double)>& f, double lo,
                            double hi, double step = 1e-4) {
    double best_x = lo, best_v = f(lo);
    for (double x = lo; x <= hi; x += step) {
        const double v = f(x);
        if (v < best_v) {
            best_v = v;
            best_x = x;
        }
    }
    double a = std::max(lo, best_x - 2.0 * step);
    double b = std::min(hi, best_x + 2.0 * step);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && (b - a) > 1e-12; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

inline double central_diff(const std::function<double(double)>& f, double x,
                           double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace fsb::test
