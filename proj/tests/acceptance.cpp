// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "kirchhoff/cli.hpp"
#include "kirchhoff/solver.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

using namespace kirchhoff;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail << "first failure: " << what << "; ";
            pass = false;
        }
    }
};

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

double sum_u4(const Field& u) {
    double s = 0.0;
    for (double x : u.values()) s += x * x * x * x;
    return s * u.grid().cell_area();
}

EnergyContext lane_emden(double h) {
    return EnergyContext(KirchhoffCoefficient::constant(1), Nonlinearity::power(3), Grid::build(Rectangle{1, 1}, h));
}

void moser_norm(Outcome& o) {
    double worst = 0.0;
    for (double n : {2.0, 10.0, 100.0, 1e4}) {
        const double e = std::abs(moser_norm_sq(MoserFamily(n, 1.0)) - 1.0);
        worst = std::max(worst, e);
        o.require(e <= 1e-12, "norm at n=" + std::to_string(n));
    }
    o.detail << "max |norm^2 - 1| = " << worst;
}

void moser_bound(Outcome& o) {
    double prev = 0.0, min_gap = INFINITY;
    for (long n = 2; n <= (1L << 20); ++n) {
        const MoserFamily fam(static_cast<double>(n), 1.0);
        const double lb = limite_lower_bound(fam);
        const double integral = limite_integral(fam);
        if (!(integral >= lb) || !(lb > prev) || !(lb < 3 * pi)) {
            o.require(false, "bound chain at n=" + std::to_string(n));
            break;
        }
        min_gap = std::min(min_gap, (integral - lb) / lb);
        prev = lb;
    }
    double worst = 0.0;
    for (double n : {2.0, 8.0, 32.0}) {
        const double e = rel_err(limite_integral(MoserFamily(n, 1.0)), oracle::polar_moser_integral(n, 1.0));
        worst = std::max(worst, e);
        o.require(e <= 1e-6, "polar quadrature at n=" + std::to_string(n));
    }
    o.detail << "min relative slack " << min_gap << ", polar rel err " << worst;
}

void gradient_check(Outcome& o) {
    const auto g = Grid::build(Rectangle{1, 1}, 1.0 / 32);
    o.require(g->cols() == 33 && g->rows() == 33 && g->size() == 31 * 31, "33x33 lattice with 31x31 interior");
    const EnergyContext ctxs[] = {
        EnergyContext(KirchhoffCoefficient::constant(1), Nonlinearity::paper_example(1.0), g),
        EnergyContext(KirchhoffCoefficient::affine(1, 1), Nonlinearity::paper_example(1.0), g),
    };
    std::mt19937_64 rng(2024);
    double worst = 0.0;
    for (const auto& ctx : ctxs)
        for (int k = 0; k < 20; ++k) {
            const Field u(g, oracle::random_bumps(*g, rng));
            const Field phi = Field(g, oracle::random_bumps(*g, rng)) - Field(g, oracle::random_bumps(*g, rng));
            const double eps = 1e-5;
            const double fd = (energy(ctx, u + eps * phi) - energy(ctx, u - eps * phi)) / (2 * eps);
            const double pairing = dirichlet_inner(gradient(ctx, u, 1e-12), phi);
            const double e = rel_err(pairing, fd);
            worst = std::max(worst, e);
            o.require(e <= 1e-5, "directional derivative, sample " + std::to_string(k));
        }
    o.detail << "max relative error " << worst;
}

void nehari_closed_form(Outcome& o) {
    const auto g = Grid::build(Rectangle{1, 1}, 1.0 / 32);
    const EnergyContext ctx(KirchhoffCoefficient::constant(1), Nonlinearity::power(3), g);
    std::mt19937_64 rng(77);
    double worst_t = 0.0, worst_idem = 0.0, worst_hom = 0.0;
    for (int k = 0; k < 50; ++k) {
        const Field u(g, oracle::random_bumps(*g, rng));
        const double want = std::sqrt(dirichlet_energy(u) / sum_u4(u));
        const auto p = nehari_project(ctx, u);
        const double e_t = rel_err(p.t_star, want);
        const double e_idem = std::abs(nehari_project(ctx, p.v).t_star - 1.0);
        const double c = 0.25 + 4.0 * k / 50.0;
        const double e_hom = rel_err(nehari_project(ctx, c * u).t_star, p.t_star / c);
        worst_t = std::max(worst_t, e_t);
        worst_idem = std::max(worst_idem, e_idem);
        worst_hom = std::max(worst_hom, e_hom);
        o.require(e_t <= 1e-10, "t* closed form");
        o.require(e_idem <= 1e-8, "idempotence");
        o.require(e_hom <= 1e-8, "homogeneity");
    }
    o.detail << "t* err " << worst_t << ", idempotence " << worst_idem << ", homogeneity " << worst_hom;
}

void oracle_ground_state(Outcome& o) {
    const SolverOptions defaults;
    const SolveReport run = solve_ground_state(lane_emden(1.0 / 64), defaults);
    o.require(run.converged(), "h=1/64 solve converged");

    // The refined runs only supply the oracle number; one descent each.
    SolverOptions single = defaults;
    single.restarts = 0;
    const SolveReport r128 = solve_ground_state(lane_emden(1.0 / 128), single);
    const SolveReport r256 = solve_ground_state(lane_emden(1.0 / 256), single);
    o.require(r128.converged() && r256.converged(), "oracle solves converged");
    if (!run.energy || !r128.energy || !r256.energy) return;

    const double ref = oracle::richardson(*r128.energy, *r256.energy);
    const double e = rel_err(*run.energy, ref);
    o.require(e <= 0.01, "energy within 1% of the extrapolated oracle");
    o.require(run.positive && run.u.min() > 0.0, "positive at every interior node");
    o.require(run.weak_residual && *run.weak_residual <= 10 * defaults.grad_tol, "weak residual");
    o.detail << "I(1/64) = " << *run.energy << ", oracle " << ref << " (I(1/128) = " << *r128.energy
             << ", I(1/256) = " << *r256.energy << "), rel err " << e << ", min u " << run.u.min()
             << ", weak residual " << run.weak_residual.value_or(NAN);
}

void level_bound(Outcome& o) {
    const EnergyContext ctx(KirchhoffCoefficient::affine(1, 1), Nonlinearity::paper_example(1.0),
                            Grid::build(Disk{{0, 0}, 1}, 1.0 / 64));
    const LevelBoundReport r = verify_level_bound(ctx, {});
    o.require(std::abs(r.threshold - (2 * pi + 4 * pi * pi)) <= 1e-12, "threshold (1/2) M(4 pi)");
    o.require(r.pass, "c* estimate below the threshold");
    o.require(r.margin > 0.0, "strictly positive margin");
    o.detail << "c* est " << r.c_estimate << " (" << r.c_source << "), threshold " << r.threshold << ", margin "
             << r.margin;
}

void hypothesis_suite(Outcome& o) {
    for (const auto& coef : {KirchhoffCoefficient::affine(1, 1), KirchhoffCoefficient::logarithmic()}) {
        const auto rep = validate_hypotheses(coef, Nonlinearity::paper_example(1.0), 1.0);
        o.require(rep.all_passed(), std::string(to_string(coef.kind())) + " built-in passes");
    }

    const auto lin = validate_hypotheses(KirchhoffCoefficient::affine(1, 1), Nonlinearity::power(1), 1.0);
    const auto& f2 = lin.at(Hypothesis::f2);
    o.require(f2.status == HypothesisStatus::fail && f2.witness.size() == 2, "f = s fails (f2) with witness");
    if (f2.witness.size() == 2) {
        const double s1 = f2.witness[0], s2 = f2.witness[1];
        o.require(s1 < s2 && 1.0 / (s2 * s2) < 1.0 / (s1 * s1), "(f2) witness is a genuine violation");
    }

    const auto dec = KirchhoffCoefficient::custom([](double t) { return 1.0 + std::exp(-t); }, 1.0,
                                                  [](double t) { return t + 1.0 - std::exp(-t); });
    const auto dec_rep = validate_hypotheses(dec, Nonlinearity::paper_example(1.0), 1.0);
    const auto& m1 = dec_rep.at(Hypothesis::M1);
    o.require(m1.status == HypothesisStatus::fail && m1.witness.size() == 2, "decreasing m fails (M1) with witness");
    if (m1.witness.size() == 2) {
        const double t = m1.witness[0], s = m1.witness[1];
        o.require(dec.M(t + s) < dec.M(t) + dec.M(s), "(M1) witness is a genuine violation");
    }

    // sf - 4F nondecreasing and nonnegative; (1/2) M - (1/4) m t >= 0.
    const auto nl = Nonlinearity::paper_example(1.0);
    double prev = 0.0;
    int monotone_breaks = 0;
    for (int k = 0; k <= 4000; ++k) {
        const double s = 20.0 * k / 4000.0;
        const double v = s * nl.f({}, s) - 4.0 * nl.F({}, s);
        if (v < 0.0 || v < prev) ++monotone_breaks;
        prev = v;
    }
    o.require(monotone_breaks == 0, "sf - 4F monotone and nonnegative");
    int negative = 0;
    for (const auto& coef : {KirchhoffCoefficient::affine(1, 1), KirchhoffCoefficient::logarithmic()})
        for (int k = 0; k <= 4000; ++k) {
            const double t = 100.0 * k / 4000.0;
            if (0.5 * coef.M(t) - 0.25 * coef.m(t) * t < 0.0) ++negative;
        }
    o.require(negative == 0, "(1/2) M - (1/4) m t >= 0");
    o.detail << "built-ins pass, (f2) witness (" << f2.witness.at(0) << ", " << f2.witness.at(1)
             << "), (M1) witness (" << m1.witness.at(0) << ", " << m1.witness.at(1) << ")";
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void determinism(Outcome& o) {
    const fs::path base = fs::temp_directory_path() / "kirchhoff_acceptance_determinism";
    fs::remove_all(base);
    const char* commands[] = {"validate", "moser", "solve", "probe", "bound", "fiber"};
    int compared = 0;
    for (const char* cmd : commands) {
        for (const char* sub : {"a", "b"}) {
            const std::string dir = (base / sub).string();
            const char* argv[] = {"kirchhoff_lab", cmd, "--set", "mesh.h=1/32", "--seed", "11", "--out-dir", dir.c_str()};
            std::ostringstream out, err;
            run(static_cast<int>(std::size(argv)), argv, out, err);
        }
        const std::string name = std::string(cmd) + ".json";
        const std::string a = slurp(base / "a" / name), b = slurp(base / "b" / name);
        o.require(!a.empty(), name + " written");
        o.require(a == b, name + " byte-identical");
        ++compared;
    }
    fs::remove_all(base);
    o.detail << compared << " subcommand reports compared";
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
        {"Moser unit norm", moser_norm},
        {"Moser integral lower bound", moser_bound},
        {"gradient consistency", gradient_check},
        {"Nehari closed form", nehari_closed_form},
        {"oracle ground state", oracle_ground_state},
        {"level bound end-to-end", level_bound},
        {"hypothesis suite", hypothesis_suite},
        {"determinism", determinism},
    };
    int failures = 0, k = 0;
    for (const auto& [name, fn] : criteria) {
        ++k;
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            fn(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failures;
        std::printf("%s %d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", k, name, o.detail.str().c_str(), secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
