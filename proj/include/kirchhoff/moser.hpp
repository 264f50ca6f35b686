#pragma once

// Moser's scaled and truncated Green's functions G_n and the quantities
// built on them: the unit Dirichlet norm, the exponential integral over
// the supporting ball, and the two thresholds that involve alpha0.

#include "kirchhoff/errors.hpp"
#include "kirchhoff/grid.hpp"
#include "kirchhoff/model.hpp"
#include "kirchhoff/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace kirchhoff {

struct MoserFamily {
    double n = 2.0;
    double d = 1.0;
    Point center{};

    MoserFamily() = default;
    MoserFamily(double n_, double d_, Point c = {}) : n(n_), d(d_), center(c) {
        if (!(n >= 2.0)) throw DomainError("moser: n must be >= 2");
        if (!(d > 0.0)) throw DomainError("moser: d must be > 0");
    }
};

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;  // 1/sqrt(2 pi)

/// Radial profile: sqrt(log n) on r <= d/n, log(d/r)/sqrt(log n) on
/// d/n <= r <= d, zero beyond; all scaled by 1/sqrt(2 pi).
inline double moser_radial(const MoserFamily& fam, double r) {
    if (!(fam.n >= 2.0)) throw DomainError("moser: n must be >= 2");
    const double ln_n = std::log(fam.n);
    if (r <= fam.d / fam.n) return kInvSqrt2Pi * std::sqrt(ln_n);
    if (r >= fam.d) return 0.0;
    return kInvSqrt2Pi * std::log(fam.d / r) / std::sqrt(ln_n);
}

inline double moser_value(const MoserFamily& fam, Point x) {
    return moser_radial(fam, std::hypot(x.x - fam.center.x, x.y - fam.center.y));
}

/// Analytic Dirichlet energy of G_n: only the annulus d/n < r < d carries a
/// gradient, |grad G|^2 = 1/(2 pi r^2 log n), so the energy is
/// (log d - log(d/n)) / log n.
inline double moser_norm_sq(const MoserFamily& fam) {
    if (!(fam.n >= 2.0)) throw DomainError("moser: n must be >= 2");
    const double radial = std::log(fam.d) - std::log(fam.d / fam.n);
    return 2.0 * std::numbers::pi * radial / (2.0 * std::numbers::pi * std::log(fam.n));
}

/// Q(n) = int_0^1 n^(2 s^2 - 2 s) ds.
///
/// The integrand is symmetric about 1/2 and decays like n^(-2s) off the
/// ends, so [0, 1/2] is cut into panels doubling from width 1/(4 log n).
inline double moser_q(double n) {
    const double ln_n = std::log(n);
    auto integrand = [ln_n](double s) { return std::exp((2.0 * s * s - 2.0 * s) * ln_n); };
    double sum = 0.0, lo = 0.0, w = 1.0 / (4.0 * ln_n);
    while (lo < 0.5) {
        const double hi = std::min(0.5, lo + w);
        sum += quadrature::integrate(integrand, lo, hi, 1e-13).value;
        lo = hi;
        w *= 2.0;
    }
    return 2.0 * sum;
}

/// int_{B_d} exp(4 pi G_n^2) dx = pi d^2 + 2 pi d^2 log(n) Q(n).
inline double limite_integral(const MoserFamily& fam) {
    if (!(fam.n >= 2.0)) throw DomainError("moser: n must be >= 2");
    const double area = std::numbers::pi * fam.d * fam.d;
    return area + 2.0 * area * std::log(fam.n) * moser_q(fam.n);
}

/// pi d^2 (1 + 2 (1 - 1/n)), which increases to 3 pi d^2.
inline double limite_lower_bound(const MoserFamily& fam) {
    return std::numbers::pi * fam.d * fam.d * (1.0 + 2.0 * (1.0 - 1.0 / fam.n));
}

/// G_n sampled at the nodes of a grid, centred on the grid's inscribed ball.
inline Field moser_field(const GridPtr& grid, double n) {
    const MoserFamily fam(n, grid->inradius(), grid->ball_center());
    return Field::sample(grid, [&](Point x) { return moser_value(fam, x); });
}

}  // namespace kirchhoff
