#pragma once

// Ground states by Nehari-constrained gradient descent, numeric probes of the
// mountain-pass geometry, and the end-to-end check of the level bound
// c* < M(4 pi / alpha0) / 2.

#include "kirchhoff/energy.hpp"
#include "kirchhoff/errors.hpp"
#include "kirchhoff/grid.hpp"
#include "kirchhoff/moser.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace kirchhoff {

enum class InitialGuess { bump, moser, file };

inline const char* to_string(InitialGuess g) {
    switch (g) {
        case InitialGuess::bump: return "bump";
        case InitialGuess::moser: return "moser";
        case InitialGuess::file: return "file";
    }
    return "?";
}

struct SolverOptions {
    int max_iters = 5000;
    double step = 0.5;
    double armijo_c = 1e-4;
    double backtrack = 0.5;
    /// Stop once the Dirichlet norm of the gradient drops below this.
    double grad_tol = 1e-7;
    double poisson_tol = 1e-10;
    /// Smallest trial step before the descent is declared stalled.
    double min_step = 1e-12;
    InitialGuess initial_guess = InitialGuess::bump;
    double moser_n = 8.0;
    /// Used when initial_guess == file.
    std::optional<Field> initial_field;
    std::uint64_t seed = 0;
    /// Extra runs from Moser peaks G_n, n = 2^(4r+3), r = 1..restarts; the
    /// lowest converged energy wins.
    int restarts = 3;
    /// Relative multiplicative noise on each restart's start, drawn from
    /// the restart's seed.
    double restart_noise = 0.0;

    void check() const {
        if (max_iters < 1) throw ConfigError("solver: max_iters must be >= 1");
        if (!(step > 0.0) || !(armijo_c > 0.0) || !(grad_tol > 0.0) || !(poisson_tol > 0.0) ||
            !(min_step > 0.0))
            throw ConfigError("solver: tolerances and steps must be > 0");
        if (!(backtrack > 0.0 && backtrack < 1.0)) throw ConfigError("solver: backtrack must lie in (0, 1)");
        if (restarts < 0) throw ConfigError("solver: restarts must be >= 0");
        if (!(restart_noise >= 0.0 && restart_noise < 1.0))
            throw ConfigError("solver: restart_noise must lie in [0, 1)");
    }
};

enum class SolveStatus { converged, max_iters, stalled, overflow, projection_failed };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::max_iters: return "max_iters";
        case SolveStatus::stalled: return "stalled";
        case SolveStatus::overflow: return "overflow";
        case SolveStatus::projection_failed: return "projection_failed";
    }
    return "?";
}

struct RestartRecord {
    std::string start;
    std::uint64_t seed = 0;
    double energy = 0.0;
    SolveStatus status = SolveStatus::converged;
    int iterations = 0;
};

struct SolveReport {
    SolveStatus status = SolveStatus::converged;
    std::string message;
    Field u;
    std::optional<double> energy;
    /// <I'(u*), u*>.
    std::optional<double> nehari_residual;
    /// Dirichlet norm of the Riesz gradient at u*.
    std::optional<double> grad_residual;
    /// ||m(||u||^2)(-Delta_h u) - f(u)||_2 / ||f(u)||_2.
    std::optional<double> weak_residual;
    int iterations = 0;
    /// (1/2) M(4 pi / alpha0); absent when f has no critical exponent.
    std::optional<double> level_threshold;
    std::optional<double> margin;
    bool positive = false;
    double min_value = 0.0;
    double max_value = 0.0;
    /// Largest |<I'(u_k), u_k>| / scale over the accepted iterates.
    double worst_nehari_violation = 0.0;
    bool descent_monotone = true;
    std::vector<double> energy_trace;
    std::vector<double> gradient_trace;
    std::vector<RestartRecord> restarts;
    double seconds = 0.0;

    bool converged() const { return status == SolveStatus::converged; }
};

/// Thrown when the descent cannot proceed (overflow, no Nehari crossing);
/// carries the statistics of the last safe iterate.
class SolveFailure : public SolverError {
public:
    explicit SolveFailure(SolveReport partial)
        : SolverError("solve_ground_state: " + std::string(to_string(partial.status)) + ": " +
                          partial.message,
                      partial.grad_residual.value_or(std::numeric_limits<double>::quiet_NaN())),
          partial_(std::move(partial)) {}
    const SolveReport& partial() const noexcept { return partial_; }

private:
    SolveReport partial_;
};

namespace detail {

// Uniform [0, 1) from the top 53 bits; the same on every platform.
inline double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// max(0, 1 - |x - x0|^2 / d^2) on the inscribed ball, scaled to unit
/// Dirichlet norm.
inline Field bump_field(const GridPtr& grid) {
    const Point c = grid->ball_center();
    const double d2 = grid->inradius() * grid->inradius();
    Field u = Field::sample(grid, [&](Point x) {
        const double r2 = (x.x - c.x) * (x.x - c.x) + (x.y - c.y) * (x.y - c.y);
        return std::max(0.0, 1.0 - r2 / d2);
    });
    return u * (1.0 / std::sqrt(dirichlet_energy(u)));
}

/// ||m(||u||^2)(-Delta_h u) - f(., u)||_2 relative to ||f(., u)||_2.
inline double weak_residual(const EnergyContext& ctx, const Field& u) {
    const Field load = nonlinearity_field(ctx, u);
    Field r = ctx.coefficient().m(dirichlet_energy(u)) * apply_neg_laplacian(u);
    r -= load;
    const double fn = l2_norm(load);
    return fn > 0.0 ? l2_norm(r) / fn : l2_norm(r);
}

namespace detail {

inline constexpr double kEnergyNoise = 2e-13;

inline void fill_final_stats(const EnergyContext& ctx, SolveReport& rep) {
    rep.min_value = rep.u.min();
    rep.max_value = rep.u.max();
    rep.positive = rep.min_value > 0.0;
    if (auto a = ctx.nonlinearity().alpha0()) {
        rep.level_threshold = level_threshold(ctx.coefficient(), *a);
        if (rep.energy) rep.margin = *rep.level_threshold - *rep.energy;
    }
}

inline SolveReport descend(const EnergyContext& ctx, const SolverOptions& opts, Field start) {
    SolveReport rep;
    rep.u = start;
    if (!(start.max() > 0.0)) throw DomainError("solve_ground_state: initial guess must be nonzero and nonnegative");

    NehariProjection proj;
    try {
        proj = nehari_project(ctx, start);
    } catch (const OverflowError& e) {
        rep.status = SolveStatus::overflow;
        rep.message = e.what();
        fill_final_stats(ctx, rep);
        throw SolveFailure(std::move(rep));
    } catch (const ProjectionError& e) {
        rep.status = SolveStatus::projection_failed;
        rep.message = e.what();
        fill_final_stats(ctx, rep);
        throw SolveFailure(std::move(rep));
    }

    Field u = std::move(proj.v);
    double I = energy(ctx, u);
    Field warm;
    double step = opts.step;
    rep.status = SolveStatus::max_iters;
    double gnorm = 0.0;
    int k = 0;
    for (;; ++k) {
        Field g;
        try {
            g = gradient(ctx, u, opts.poisson_tol, &warm);
        } catch (const OverflowError& e) {
            rep.status = SolveStatus::overflow;
            rep.message = e.what();
            break;
        }
        gnorm = std::sqrt(dirichlet_energy(g));
        rep.energy_trace.push_back(I);
        rep.gradient_trace.push_back(gnorm);
        if (gnorm <= opts.grad_tol) {
            rep.status = SolveStatus::converged;
            break;
        }
        if (k >= opts.max_iters) break;

        // Round-off floor of the energy sums; below it the Armijo test
        // compares noise, so decreases smaller than this are not demanded.
        const double noise = kEnergyNoise * (0.5 * ctx.coefficient().M(dirichlet_energy(u)) +
                                             std::abs(primitive_integral(ctx, u)));
        // Descent in the metric m(||u||^2) <.,.>_D, which keeps the useful
        // step size independent of the Kirchhoff factor.
        const double metric = ctx.coefficient().m(dirichlet_energy(u));
        const double slope = gnorm * gnorm / metric;
        bool accepted = false;
        double s = step;
        std::string last_error;
        for (; s >= opts.min_step; s *= opts.backtrack) {
            Field trial = u;
            trial.axpy(-s / metric, g);
            trial = positive_part(std::move(trial));
            if (!(trial.max() > 0.0)) continue;
            try {
                proj = nehari_project(ctx, trial);
            } catch (const Error& e) {
                last_error = e.what();
                continue;
            }
            double It;
            try {
                It = energy(ctx, proj.v);
            } catch (const OverflowError& e) {
                last_error = e.what();
                continue;
            }
            if (It <= I - opts.armijo_c * s * slope + noise) {
                if (It > I + noise) rep.descent_monotone = false;
                rep.worst_nehari_violation =
                    std::max(rep.worst_nehari_violation, std::abs(proj.residual) / proj.scale);
                u = std::move(proj.v);
                I = It;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            rep.status = SolveStatus::stalled;
            rep.message = last_error.empty() ? "no Armijo step above min_step" : last_error;
            break;
        }
        step = std::min(opts.step, 2.0 * s);
    }
    rep.iterations = k;
    rep.u = u;
    rep.energy = I;
    rep.grad_residual = gnorm;
    try {
        rep.nehari_residual = fibering_derivative(ctx, u, 1.0);
        rep.weak_residual = weak_residual(ctx, u);
    } catch (const OverflowError&) {
        // Left unset; the status already records the overflow.
    }
    fill_final_stats(ctx, rep);
    if (rep.status == SolveStatus::overflow) throw SolveFailure(std::move(rep));
    return rep;
}

}  // namespace detail

/// Nehari projected descent: u <- P_N(max(u - (s / m(||u||^2)) grad I(u), 0))
/// with an Armijo-backtracked step s, until the gradient norm reaches grad_tol or
/// max_iters is exhausted. Restarts run from (optionally perturbed) Moser peaks.
///
/// Throws SolveFailure (with the last safe iterate) on overflow or when the
/// initial ray never crosses the Nehari manifold.
inline SolveReport solve_ground_state(const EnergyContext& ctx, const SolverOptions& opts = {}) {
    opts.check();
    const auto t0 = std::chrono::steady_clock::now();
    const GridPtr& grid = ctx.grid_ptr();

    Field start;
    switch (opts.initial_guess) {
        case InitialGuess::bump: start = bump_field(grid); break;
        case InitialGuess::moser: start = moser_field(grid, opts.moser_n); break;
        case InitialGuess::file:
            if (!opts.initial_field || opts.initial_field->size() != grid->size())
                throw ConfigError("solver: initial field missing or on a different grid");
            start = *opts.initial_field;
            break;
    }
    if (start.min() < 0.0) throw DomainError("solve_ground_state: initial guess must be nonnegative");

    SolveReport best = detail::descend(ctx, opts, start);
    best.restarts.push_back({to_string(opts.initial_guess), opts.seed, *best.energy, best.status, best.iterations});
    for (int r = 1; r <= opts.restarts; ++r) {
        const std::uint64_t seed = opts.seed + static_cast<std::uint64_t>(r);
        std::mt19937_64 rng(seed);
        // Increasingly concentrated starts: the Nehari energy can have several
        // local minima, and the lowest one may be reachable only from a peak.
        const double n = std::ldexp(1.0, 4 * r + 3);
        const std::string start = "moser n=" + std::to_string(static_cast<long long>(n));
        Field perturbed = moser_field(grid, n);
        if (opts.restart_noise > 0.0)
            for (double& x : perturbed.values()) x *= 1.0 + opts.restart_noise * detail::unit_uniform(rng);
        try {
            SolveReport run = detail::descend(ctx, opts, perturbed);
            best.restarts.push_back({start, seed, *run.energy, run.status, run.iterations});
            const bool better = (run.converged() && !best.converged()) ||
                                (run.converged() == best.converged() && *run.energy < *best.energy);
            if (better) {
                run.restarts = std::move(best.restarts);
                best = std::move(run);
            }
        } catch (const SolveFailure& f) {
            best.restarts.push_back({start, seed, f.partial().energy.value_or(NAN), f.partial().status, 0});
        }
    }
    best.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return best;
}

// ---------------------------------------------------------------------------
// Mountain-pass geometry

struct SphereSample {
    double rho = 0.0;
    /// Smallest energy over the sampled directions on ||u|| = rho.
    double tau = 0.0;
    int argmin_direction = 0;
};

struct ProbeReport {
    std::vector<SphereSample> sphere;
    int directions = 0;
    std::uint64_t seed = 0;
    /// e = t u0 / ||u0|| with I(e) < 0.
    double e_norm = 0.0;
    double e_energy = 0.0;
    /// Largest sampled rho with tau > 0, if any.
    std::optional<double> rho_positive;
    bool e_beyond_rho = false;
};

/// Samples min I on spheres ||u|| = rho over `directions` random nonnegative
/// smooth directions plus u0 itself, then doubles t along u0 until
/// I(t u0 / ||u0||) < 0.
inline ProbeReport geometry_probe(const EnergyContext& ctx, const std::vector<double>& rho_grid,
                                  const Field& u0, int directions = 16, std::uint64_t seed = 0) {
    if (rho_grid.empty()) throw ConfigError("geometry_probe: empty rho grid");
    for (double r : rho_grid)
        if (!(r > 0.0)) throw ConfigError("geometry_probe: rho values must be > 0");
    if (u0.min() < 0.0 || !(u0.max() > 0.0))
        throw DomainError("geometry_probe: u0 must be nonnegative and nonzero");
    if (directions < 0) throw ConfigError("geometry_probe: directions must be >= 0");

    const GridPtr& grid = ctx.grid_ptr();
    const Field unit = u0 * (1.0 / std::sqrt(dirichlet_energy(u0)));
    std::vector<Field> dirs{unit};
    std::mt19937_64 rng(seed);
    for (int k = 0; k < directions; ++k) {
        Field w(grid);
        for (double& x : w.values()) x = detail::unit_uniform(rng);
        // A few neighbour-averaging sweeps give smooth nonnegative directions.
        for (int sweep = 0; sweep < 8; ++sweep) {
            Field s(grid);
            for (std::size_t i = 0; i < w.size(); ++i) {
                double acc = w[i];
                for (int n : grid->neighbors(i))
                    if (n != Grid::kOutside) acc += w[static_cast<std::size_t>(n)];
                s[i] = acc / 5.0;
            }
            w = std::move(s);
        }
        dirs.push_back(w * (1.0 / std::sqrt(dirichlet_energy(w))));
    }

    ProbeReport rep;
    rep.directions = directions;
    rep.seed = seed;
    for (double rho : rho_grid) {
        SphereSample s{rho, INFINITY, 0};
        for (std::size_t k = 0; k < dirs.size(); ++k) {
            double I;
            try {
                I = energy(ctx, rho * dirs[k]);
            } catch (const OverflowError&) {
                continue;
            }
            if (I < s.tau) {
                s.tau = I;
                s.argmin_direction = static_cast<int>(k);
            }
        }
        if (!std::isfinite(s.tau))
            throw ProbeError("geometry_probe: every direction overflows at rho=" + std::to_string(rho));
        if (s.tau > 0.0) rep.rho_positive = std::max(rep.rho_positive.value_or(0.0), rho);
        rep.sphere.push_back(s);
    }

    double t = 1.0;
    for (;; t *= 2.0) {
        double I;
        try {
            I = energy(ctx, t * unit);
        } catch (const OverflowError&) {
            throw ProbeError("geometry_probe: no negative-energy point along u0 below the overflow cap (t=" +
                             std::to_string(t) + ")");
        }
        if (!std::isfinite(I) || t > 1e150)
            throw ProbeError("geometry_probe: no negative-energy point along u0");
        if (I < 0.0) {
            rep.e_norm = t;
            rep.e_energy = I;
            break;
        }
    }
    rep.e_beyond_rho = rep.rho_positive ? rep.e_norm > *rep.rho_positive : false;
    return rep;
}

struct RayMaximum {
    double t_max = 0.0;
    double value = 0.0;
};

/// max over t > 0 of I(t u0): the fibering maximum at the Nehari point.
inline RayMaximum minimax_along_ray(const EnergyContext& ctx, const Field& u0) {
    if (u0.min() < 0.0 || !(u0.max() > 0.0))
        throw DomainError("minimax_along_ray: u0 must be nonnegative and nonzero");
    const NehariProjection p = nehari_project(ctx, u0);
    return {p.t_star, energy(ctx, p.v)};
}

// ---------------------------------------------------------------------------
// Level bound

struct MoserRay {
    double n = 0.0;
    std::optional<double> t_max;
    std::optional<double> value;
    std::string error;
};

struct LevelBoundReport {
    double alpha0 = 0.0;
    double threshold = 0.0;
    SolveStatus solve_status = SolveStatus::converged;
    std::optional<double> solve_energy;
    std::optional<double> solve_grad_residual;
    int solve_iterations = 0;
    std::vector<MoserRay> moser;
    double c_estimate = 0.0;
    std::string c_source;
    double margin = 0.0;
    bool pass = false;
};

/// Estimates c* as the smaller of the converged ground-state energy and the
/// best Moser-ray maximum, and compares it with (1/2) M(4 pi / alpha0).
inline LevelBoundReport verify_level_bound(const EnergyContext& ctx, const SolverOptions& opts,
                                           const std::vector<double>& moser_ns = {2, 4, 8, 16},
                                           SolveReport* solve_out = nullptr) {
    const auto alpha0 = ctx.nonlinearity().alpha0();
    if (!alpha0) throw ConfigError("verify_level_bound: nonlinearity has no finite alpha0");
    LevelBoundReport rep;
    rep.alpha0 = *alpha0;
    rep.threshold = level_threshold(ctx.coefficient(), *alpha0);

    double best = INFINITY;
    try {
        SolveReport s = solve_ground_state(ctx, opts);
        rep.solve_status = s.status;
        rep.solve_energy = s.energy;
        rep.solve_grad_residual = s.grad_residual;
        rep.solve_iterations = s.iterations;
        if (s.energy && *s.energy < best) {
            best = *s.energy;
            rep.c_source = "ground_state";
        }
        if (solve_out) *solve_out = std::move(s);
    } catch (const SolveFailure& f) {
        rep.solve_status = f.partial().status;
        if (solve_out) *solve_out = f.partial();
    }
    for (double n : moser_ns) {
        MoserRay ray{n, {}, {}, {}};
        try {
            const RayMaximum r = minimax_along_ray(ctx, moser_field(ctx.grid_ptr(), n));
            ray.t_max = r.t_max;
            ray.value = r.value;
            if (r.value < best) {
                best = r.value;
                rep.c_source = "moser_n=" + std::to_string(static_cast<long long>(n));
            }
        } catch (const Error& e) {
            ray.error = e.what();
        }
        rep.moser.push_back(std::move(ray));
    }
    if (!std::isfinite(best)) throw SolverError("verify_level_bound: no level estimate available", NAN);
    rep.c_estimate = best;
    rep.margin = rep.threshold - best;
    rep.pass = rep.margin > 0.0;
    return rep;
}

}  // namespace kirchhoff
