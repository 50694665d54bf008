#include "fsb/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "fsb/errors.hpp"

namespace fsb {
namespace {

// Gauss-Kronrod 7-15 abscissae and weights on [-1, 1] (QUADPACK qk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value;
    double error;
    bool stuck = false;  // too narrow to split further
};

// One GK15 evaluation on [a, b]; throws on non-finite integrand values.
Panel evaluate_panel(const Integrand& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fv[15];
    auto eval = [&](double x) {
        const double y = f(x);
        if (!std::isfinite(y)) {
            throw EvaluationError(
                "integrand returned a non-finite value at x = " +
                    std::to_string(x),
                x);
        }
        return y;
    };

    fv[7] = eval(center);
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        fv[i] = eval(center - dx);
        fv[14 - i] = eval(center + dx);
    }

    double kronrod = kWgk[7] * fv[7];
    for (int i = 0; i < 7; ++i) {
        kronrod += kWgk[i] * (fv[i] + fv[14 - i]);
    }
    double gauss = kWg[3] * fv[7];
    for (int i = 0; i < 3; ++i) {
        gauss += kWg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    }

    Panel p;
    p.a = a;
    p.b = b;
    p.value = kronrod * half;
    p.error = std::abs((kronrod - gauss) * half);
    return p;
}

// Panels narrower than this are never split again; a panel this small that
// still carries error indicates an endpoint the integrand cannot resolve.
constexpr double kWidthFloor = 1e-300;

}  // namespace

IntegralResult integrate_finite(const Integrand& f, double a, double b,
                                const QuadratureConfig& cfg) {
    if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0) ||
        cfg.max_subdivisions < 1) {
        throw DomainError(
            "QuadratureConfig: tolerances must be positive and "
            "max_subdivisions >= 1");
    }
    if (!(a < b)) {
        return {0.0, true};
    }

    std::vector<Panel> panels;
    panels.reserve(64);
    panels.push_back(evaluate_panel(f, a, b));

    double total_value = panels[0].value;
    double total_error = panels[0].error;

    for (int splits = 0; splits < cfg.max_subdivisions; ++splits) {
        if (std::abs(total_value) > cfg.truncation_growth_threshold) {
            return {total_value, false};
        }
        const double tol =
            std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total_value));
        if (total_error <= tol) {
            return {total_value, true};
        }

        // split the splittable panel with the largest error estimate
        std::size_t worst = panels.size();
        double worst_err = -1.0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            if (!panels[i].stuck && panels[i].error > worst_err) {
                worst_err = panels[i].error;
                worst = i;
            }
        }
        if (worst == panels.size()) {
            return {total_value, false};  // everything stuck, tolerance unmet
        }

        Panel& p = panels[worst];
        const double mid = 0.5 * (p.a + p.b);
        if (p.b - p.a < kWidthFloor || mid <= p.a || mid >= p.b) {
            p.stuck = true;
            continue;
        }

        const Panel left = evaluate_panel(f, p.a, mid);
        const Panel right = evaluate_panel(f, mid, p.b);
        total_value += left.value + right.value - p.value;
        total_error += left.error + right.error - p.error;
        p = left;
        panels.push_back(right);
    }

    const double tol =
        std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total_value));
    return {total_value, total_error <= tol};
}

IntegralResult integrate_semi_infinite(const Integrand& f,
                                       const QuadratureConfig& cfg,
                                       double origin) {
    // Head block handles a possible singularity at the origin.
    IntegralResult head = integrate_finite(f, origin, origin + 1.0, cfg);
    double total = head.value;
    if (!head.converged) {
        return {total, false};
    }

    // Geometric tail blocks [origin + 2^{m-1}, origin + 2^m]. The integral
    // is accepted once two consecutive blocks are negligible; this is the
    // Cauchy-style stabilization of the truncation sequence. A block that
    // stops being evaluable (overflow in the integrand) after the tail has
    // already dropped below tolerance is treated as a sub-tolerance
    // remainder rather than an error.
    constexpr int kMaxLevels = 60;
    int stable = 0;
    double prev = 1.0;
    for (int m = 1; m <= kMaxLevels; ++m) {
        const double next = std::ldexp(1.0, m);  // 2^m
        IntegralResult block;
        try {
            block = integrate_finite(f, origin + prev, origin + next, cfg);
        } catch (const EvaluationError&) {
            if (stable >= 1) {
                return {total, true};
            }
            throw;
        }
        total += block.value;
        if (!block.converged) {
            return {total, false};
        }
        if (std::abs(total) > cfg.truncation_growth_threshold) {
            return {total, false};
        }
        const double tol =
            0.25 * std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
        if (std::abs(block.value) <= tol) {
            if (++stable >= 2) {
                return {total, true};
            }
        } else {
            stable = 0;
        }
        prev = next;
    }
    return {total, false};
}

IntegralResult integrate_interval(const Integrand& f, double lo, double hi,
                                  const QuadratureConfig& cfg) {
    const bool lo_inf = std::isinf(lo);
    const bool hi_inf = std::isinf(hi);
    if (!lo_inf && !hi_inf) {
        return integrate_finite(f, lo, hi, cfg);
    }
    if (!lo_inf && hi_inf) {
        return integrate_semi_infinite(f, cfg, lo);
    }
    if (lo_inf && !hi_inf) {
        return integrate_semi_infinite([&](double s) { return f(hi - s); },
                                       cfg, 0.0);
    }
    // Full line: fold around zero so symmetric integrands cancel per node.
    return integrate_semi_infinite([&](double s) { return f(s) + f(-s); },
                                   cfg, 0.0);
}

}  // namespace fsb
