#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

namespace kirchhoff::quadrature {

struct Result {
    double value = 0.0;
    double error_estimate = 0.0;
    bool used_fallback = false;
};

/// Fixed composite Gauss-Legendre: `panels` panels of 8 points each.
template <class F>
double composite_gauss(F&& f, double a, double b, int panels = 8) {
    const double w = (b - a) / panels;
    double sum = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double lo = a + k * w;
        sum += boost::math::quadrature::gauss<double, 8>::integrate(f, lo, lo + w);
    }
    return sum;
}

/// Adaptive 15-point Gauss-Kronrod on [a, b] to an absolute tolerance.
///
/// Falls back to 64-point composite Gauss when the Kronrod error estimate
/// stays above `abs_tol` at the maximum bisection depth.
template <class F>
Result integrate(F&& f, double a, double b, double abs_tol) {
    Result r;
    if (a == b) return r;
    double l1 = 0.0;
    const double rel = 1e-13;
    r.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, 10, rel, &r.error_estimate, &l1);
    if (!(r.error_estimate <= std::max(abs_tol, rel * l1)) || !std::isfinite(r.value)) {
        r.value = composite_gauss(f, a, b, 8);
        r.used_fallback = true;
    }
    return r;
}

}  // namespace kirchhoff::quadrature
