#pragma once

// Energy functional I(u) = M(||u||^2)/2 - int F(x, u), its Riesz gradient in
// the Dirichlet inner product, and the fibering map h(t) = I(t u) used to
// project onto the Nehari manifold.

#include "kirchhoff/errors.hpp"
#include "kirchhoff/grid.hpp"
#include "kirchhoff/model.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <utility>

namespace kirchhoff {

/// Raised when a model fails one of the hypotheses the energy machinery needs.
class HypothesisError : public Error {
public:
    explicit HypothesisError(HypothesisReport report)
        : Error(describe(report)), report_(std::move(report)) {}
    const HypothesisReport& report() const noexcept { return report_; }

private:
    static std::string describe(const HypothesisReport& r) {
        std::string s = "hypothesis hard failure:";
        for (const auto& e : r.entries)
            if (e.status == HypothesisStatus::fail) {
                s += std::string(" (") + to_string(e.name) + ")";
                if (!e.witness.empty()) s += " witness " + std::to_string(e.witness.front());
            }
        return s;
    }
    HypothesisReport report_;
};

class EnergyContext {
public:
    /// Validates the model on `sampling` (with d taken from the grid) and
    /// throws HypothesisError on a hard failure of (M1), (M3) or (f2).
    EnergyContext(KirchhoffCoefficient coef, Nonlinearity nl, GridPtr grid,
                  const SamplingSpec& sampling = {})
        : coef_(std::move(coef)), nl_(std::move(nl)), grid_(std::move(grid)) {
        report_ = validate_hypotheses(coef_, nl_, grid_->inradius(), sampling);
        if (report_->hard_fail()) throw HypothesisError(*report_);
    }

    /// Skips validation; the fibering root is then not known to be unique.
    static EnergyContext unvalidated(KirchhoffCoefficient coef, Nonlinearity nl, GridPtr grid) {
        return EnergyContext(std::move(coef), std::move(nl), std::move(grid), Unchecked{});
    }

    const KirchhoffCoefficient& coefficient() const noexcept { return coef_; }
    const Nonlinearity& nonlinearity() const noexcept { return nl_; }
    const Grid& grid() const noexcept { return *grid_; }
    const GridPtr& grid_ptr() const noexcept { return grid_; }
    const std::optional<HypothesisReport>& report() const noexcept { return report_; }
    bool unique_fibering_root() const {
        return report_ && report_->passed(Hypothesis::M3) && report_->passed(Hypothesis::f2);
    }

private:
    struct Unchecked {};
    EnergyContext(KirchhoffCoefficient coef, Nonlinearity nl, GridPtr grid, Unchecked)
        : coef_(std::move(coef)), nl_(std::move(nl)), grid_(std::move(grid)) {}

    KirchhoffCoefficient coef_;
    Nonlinearity nl_;
    GridPtr grid_;
    std::optional<HypothesisReport> report_;
};

inline double primitive_integral(const EnergyContext& ctx, const Field& u) {
    const Nonlinearity& nl = ctx.nonlinearity();
    return integrate([&](Point x, double s) { return nl.F(x, s); }, u);
}

inline Field nonlinearity_field(const EnergyContext& ctx, const Field& u) {
    const Nonlinearity& nl = ctx.nonlinearity();
    Field out(u.grid_ptr());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = nl.f(ctx.grid().node(i), u[i]);
    return out;
}

/// I(u) = M(||u||^2)/2 - sum F(x_i, u_i) h^2.
inline double energy(const EnergyContext& ctx, const Field& u) {
    return 0.5 * ctx.coefficient().M(dirichlet_energy(u)) - primitive_integral(ctx, u);
}

/// Riesz representative g = m(||u||^2) u - (-Delta_h)^{-1} f(., u), so that
/// <I'(u), phi> = dirichlet_inner(g, phi) for every discrete phi.
///
/// `warm`, when given, seeds the Poisson solve and receives its solution.
inline Field gradient(const EnergyContext& ctx, const Field& u, double tol = 1e-10,
                      Field* warm = nullptr) {
    const Field load = nonlinearity_field(ctx, u);
    Field w = poisson_solve(load, tol, warm && warm->size() == u.size() ? warm : nullptr);
    Field g = ctx.coefficient().m(dirichlet_energy(u)) * u;
    g -= w;
    if (warm) *warm = std::move(w);
    return g;
}

/// <I'(u), phi> evaluated directly from the weak form.
inline double derivative_pairing(const EnergyContext& ctx, const Field& u, const Field& phi) {
    const Field load = nonlinearity_field(ctx, u);
    return ctx.coefficient().m(dirichlet_energy(u)) * dirichlet_inner(u, phi) - l2_inner(load, phi);
}

/// h(t) = I(t u).
inline double fibering_value(const EnergyContext& ctx, const Field& u, double t) {
    return energy(ctx, t * u);
}

/// h'(t) = m(t^2 E) t E - sum f(x_i, t u_i) u_i h^2 with E = ||u||^2.
inline double fibering_derivative(const EnergyContext& ctx, const Field& u, double t, double E) {
    if (!(t > 0.0)) throw DomainError("fibering_derivative: t must be > 0");
    const Nonlinearity& nl = ctx.nonlinearity();
    const Grid& g = ctx.grid();
    double load = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] > 0.0) load += nl.f(g.node(i), t * u[i]) * u[i];
    const double value = ctx.coefficient().m(t * t * E) * t * E - load * g.cell_area();
    if (!std::isfinite(value))
        throw OverflowError("fibering_derivative: non-finite value at t=" + std::to_string(t));
    return value;
}

inline double fibering_derivative(const EnergyContext& ctx, const Field& u, double t) {
    return fibering_derivative(ctx, u, t, dirichlet_energy(u));
}

struct NehariProjection {
    double t_star = 1.0;
    Field v;
    /// h'(t*) and its scale 1 + m(t*^2 E) t* E.
    double residual = 0.0;
    double scale = 1.0;
    /// The ray has negative entries; the fibering analysis assumes u >= 0.
    bool sign_changing = false;
    /// False when the model was not validated for (M3) and (f2); the root
    /// returned is then the first one bracketed.
    bool unique_root = true;
};

/// Nehari relative tolerance on |h'(t*)|.
inline constexpr double kNehariTol = 1e-10;

/// Finds t* > 0 with h'(t*) = 0 and returns v = t* u on the Nehari manifold.
///
/// Starts from the unit-norm point of the ray, doubles (or halves) t to
/// bracket the sign change of h', then bisects for 60 steps. Overflow while
/// expanding the bracket raises ProjectionError carrying the largest safe t;
/// overflow at the starting point propagates as OverflowError.
inline NehariProjection nehari_project(const EnergyContext& ctx, const Field& u) {
    const double E = dirichlet_energy(u);
    if (!(E > 0.0) || !(u.max() > 0.0))
        throw DomainError("nehari_project: ray direction must have a positive part");
    NehariProjection out;
    out.sign_changing = u.min() < 0.0;
    out.unique_root = ctx.unique_fibering_root();

    auto hp = [&](double t) { return fibering_derivative(ctx, u, t, E); };
    double t = 1.0 / std::sqrt(E);
    double val = hp(t);
    double lo = t, hi = t;
    constexpr int kMaxSteps = 2100;
    if (val > 0.0) {
        for (int k = 0;; ++k) {
            if (k == kMaxSteps) throw ProjectionError("nehari_project: no sign change of h'", lo, 1.0);
            const double next = 2.0 * lo;
            double v;
            try {
                v = hp(next);
            } catch (const OverflowError&) {
                throw ProjectionError("nehari_project: bracket expansion hit the overflow cap at t=" +
                                          std::to_string(next) + "; h' > 0 up to t=" + std::to_string(lo),
                                      lo, 1.0);
            }
            if (v <= 0.0) {
                hi = next;
                if (v == 0.0) lo = next;
                break;
            }
            lo = next;
        }
    } else if (val < 0.0) {
        for (int k = 0;; ++k) {
            if (k == kMaxSteps) throw ProjectionError("nehari_project: h' negative near t=0", hi, -1.0);
            const double next = 0.5 * hi;
            const double v = hp(next);
            if (v >= 0.0) {
                lo = next;
                if (v == 0.0) hi = next;
                break;
            }
            hi = next;
        }
    }
    for (int k = 0; k < 60 && lo < hi; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (hp(mid) > 0.0 ? lo : hi) = mid;
    }
    out.t_star = 0.5 * (lo + hi);
    out.residual = hp(out.t_star);
    out.scale = 1.0 + ctx.coefficient().m(out.t_star * out.t_star * E) * out.t_star * E;
    out.v = out.t_star * u;
    return out;
}

/// max over t > 0 of I(t u), attained at the Nehari point of the ray.
inline double nehari_energy(const EnergyContext& ctx, const Field& u) {
    return energy(ctx, nehari_project(ctx, u).v);
}

}  // namespace kirchhoff
