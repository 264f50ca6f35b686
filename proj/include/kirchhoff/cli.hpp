#pragma once

// Command-line dispatcher: validate | moser | solve | probe | bound | fiber.
// Exit codes: 0 success, 1 hypothesis failure (or a failed level bound),
// 2 configuration, solver or I/O error.

#include "kirchhoff/config.hpp"
#include "kirchhoff/energy.hpp"
#include "kirchhoff/moser.hpp"
#include "kirchhoff/report.hpp"
#include "kirchhoff/solver.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace kirchhoff {

namespace cli_detail {

inline constexpr int kOk = 0;
inline constexpr int kHypothesisFail = 1;
inline constexpr int kError = 2;

struct Common {
    std::string config_path;
    std::vector<std::string> sets;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
};

inline void add_common(CLI::App& sub, Common& c) {
    sub.add_option("-c,--config", c.config_path, "Config file (key = value text or JSON)");
    sub.add_option("--set", c.sets, "Override one config key, KEY=VALUE (repeatable)");
    sub.add_option("--out-dir", c.out_dir, "Output directory (else $KIRCHHOFF_OUT_DIR, else output.dir)");
    sub.add_option("--seed", c.seed, "Seed for restarts and probe directions");
}

inline RunConfig resolve_config(const Common& c) {
    RunConfig cfg = c.config_path.empty() ? RunConfig{} : load_config(c.config_path);
    for (const auto& s : c.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects KEY=VALUE, got '" + s + "'");
        set_key(cfg, config_detail::trim(std::string_view(s).substr(0, eq)), std::string_view(s).substr(eq + 1));
    }
    if (c.seed) cfg.solver.seed = *c.seed;
    check(cfg);
    return cfg;
}

inline std::filesystem::path out_dir(const Common& c, const RunConfig& cfg) {
    if (!c.out_dir.empty()) return c.out_dir;
    if (const char* env = std::getenv("KIRCHHOFF_OUT_DIR"); env && *env) return env;
    if (!cfg.out_dir.empty()) return cfg.out_dir;
    return ".";
}

/// The envelope without the output block, so the destination does not
/// change the report bytes.
inline Json header(const std::string& command, const RunConfig& cfg) {
    Json j = envelope(command, cfg);
    j["config"].erase("output");
    return j;
}

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline void print_hypotheses(const HypothesisReport& r, std::ostream& out) {
    for (const auto& e : r.entries) {
        out << "  " << to_string(e.name) << ": " << to_string(e.status) << "  margin " << fmt(e.margin);
        if (e.status == HypothesisStatus::fail && !e.witness.empty()) {
            out << "  witness";
            for (double w : e.witness) out << ' ' << fmt(w);
        }
        out << "  (" << e.detail << ")\n";
    }
}

inline EnergyContext make_context(const RunConfig& cfg) {
    return EnergyContext(make_coefficient(cfg), make_nonlinearity(cfg), make_grid(cfg), cfg.sampling);
}

inline SolverOptions solver_options(const RunConfig& cfg, const GridPtr& grid) {
    SolverOptions o = cfg.solver;
    if (o.initial_guess == InitialGuess::file) o.initial_field = read_field(grid, cfg.initial_file);
    return o;
}

inline int cmd_validate(const Common& com, std::ostream& out) {
    const RunConfig cfg = resolve_config(com);
    const GridPtr grid = make_grid(cfg);
    const HypothesisReport rep =
        validate_hypotheses(make_coefficient(cfg), make_nonlinearity(cfg), grid->inradius(), cfg.sampling);
    Json j = header("validate", cfg);
    j["grid"] = grid_json(*grid);
    j["result"] = to_json(rep);
    const auto path = out_dir(com, cfg) / "validate.json";
    write_report(j, path);
    out << "hypotheses (d = " << fmt(rep.d) << "):\n";
    print_hypotheses(rep, out);
    out << (rep.all_passed() ? "all hypotheses pass" : "some hypotheses fail") << "; report " << path.string()
        << "\n";
    return rep.all_passed() ? kOk : kHypothesisFail;
}

inline int cmd_moser(const Common& com, const std::string& n_list, const std::optional<double>& d,
                     std::ostream& out) {
    RunConfig cfg = resolve_config(com);
    if (!n_list.empty()) set_key(cfg, "moser.n", n_list);
    if (d) cfg.moser_d = *d;
    check(cfg);
    const auto rows = moser_table(cfg.moser_n, cfg.moser_d);
    Json j = header("moser", cfg);
    j["result"] = to_json(rows, cfg.moser_d);
    const auto dir = out_dir(com, cfg);
    std::ostringstream csv;
    write_moser_csv(rows, csv);
    write_text_file(dir / "moser.csv", csv.str());
    write_report(j, dir / "moser.json");
    out << csv.str();
    return kOk;
}

/// Runs f on a validated context; a hypothesis failure writes the report
/// with the witnesses and returns 1.
template <class Fn>
int with_context(const std::string& command, const Common& com, std::ostream& out, Fn&& fn) {
    const RunConfig cfg = resolve_config(com);
    const auto dir = out_dir(com, cfg);
    std::optional<EnergyContext> ctx;
    try {
        ctx.emplace(make_context(cfg));
    } catch (const HypothesisError& e) {
        Json j = header(command, cfg);
        j["hypotheses"] = to_json(e.report());
        j["result"] = nullptr;
        write_report(j, dir / (command + ".json"));
        out << e.what() << "\n";
        print_hypotheses(e.report(), out);
        return kHypothesisFail;
    }
    Json j = header(command, cfg);
    j["grid"] = grid_json(ctx->grid());
    j["hypotheses"] = to_json(*ctx->report());
    const int code = fn(cfg, *ctx, j, dir);
    write_report(j, dir / (command + ".json"));
    out << "report " << (dir / (command + ".json")).string() << "\n";
    return code;
}

inline int cmd_solve(const Common& com, std::ostream& out) {
    return with_context("solve", com, out, [&](const RunConfig& cfg, const EnergyContext& ctx, Json& j,
                                               const std::filesystem::path& dir) {
        SolveReport rep;
        try {
            rep = solve_ground_state(ctx, solver_options(cfg, ctx.grid_ptr()));
        } catch (const SolveFailure& f) {
            rep = f.partial();
        }
        j["result"] = to_json(rep);
        if (rep.u.size() == ctx.grid().size()) write_field(rep.u, dir / "solve_field.csv");
        out << "solve: " << to_string(rep.status);
        if (rep.energy) out << "  energy " << fmt(*rep.energy);
        if (rep.grad_residual) out << "  grad " << fmt(*rep.grad_residual);
        out << "  iterations " << rep.iterations;
        if (!rep.message.empty()) out << "  (" << rep.message << ")";
        out << "\n";
        return rep.converged() ? kOk : kError;
    });
}

inline int cmd_probe(const Common& com, std::ostream& out) {
    return with_context("probe", com, out, [&](const RunConfig& cfg, const EnergyContext& ctx, Json& j,
                                               const std::filesystem::path&) {
        const ProbeReport rep =
            geometry_probe(ctx, cfg.probe_rho, bump_field(ctx.grid_ptr()), cfg.probe_directions, cfg.solver.seed);
        j["result"] = to_json(rep);
        for (const auto& s : rep.sphere) out << "  rho " << fmt(s.rho) << "  tau " << fmt(s.tau) << "\n";
        out << "  e: norm " << fmt(rep.e_norm) << "  energy " << fmt(rep.e_energy)
            << (rep.e_beyond_rho ? "  (beyond rho)" : "") << "\n";
        return kOk;
    });
}

inline int cmd_bound(const Common& com, std::ostream& out) {
    return with_context("bound", com, out, [&](const RunConfig& cfg, const EnergyContext& ctx, Json& j,
                                               const std::filesystem::path&) {
        SolveReport solve;
        const LevelBoundReport rep =
            verify_level_bound(ctx, solver_options(cfg, ctx.grid_ptr()), cfg.bound_moser_n, &solve);
        j["result"] = to_json(rep);
        j["solve"] = to_json(solve);
        out << "bound: c_est " << fmt(rep.c_estimate) << " (" << rep.c_source << ")  threshold "
            << fmt(rep.threshold) << "  margin " << fmt(rep.margin) << "  " << (rep.pass ? "pass" : "fail")
            << "\n";
        return rep.pass ? kOk : kHypothesisFail;
    });
}

inline int cmd_fiber(const Common& com, std::ostream& out) {
    return with_context("fiber", com, out, [&](const RunConfig& cfg, const EnergyContext& ctx, Json& j,
                                               const std::filesystem::path& dir) {
        const Field ray = cfg.fiber_ray == InitialGuess::moser ? moser_field(ctx.grid_ptr(), cfg.fiber_moser_n)
                                                               : bump_field(ctx.grid_ptr());
        const double E = dirichlet_energy(ray);
        const NehariProjection p = nehari_project(ctx, ray);
        const double t_max = cfg.fiber_t_max.value_or(2.0 * p.t_star);
        std::ostringstream csv;
        csv << "t,h,h_prime\n";
        std::optional<double> truncated_at;
        char buf[96];
        for (int k = 1; k <= cfg.fiber_count; ++k) {
            const double t = t_max * k / cfg.fiber_count;
            double h, hp;
            try {
                h = fibering_value(ctx, ray, t);
                hp = fibering_derivative(ctx, ray, t, E);
            } catch (const OverflowError&) {
                truncated_at = t;
                break;
            }
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", t, h, hp);
            csv << buf;
        }
        write_text_file(dir / "fiber.csv", csv.str());
        Json r;
        r["ray"] = to_string(cfg.fiber_ray);
        r["ray_norm_sq"] = E;
        r["t_star"] = p.t_star;
        r["h_at_t_star"] = energy(ctx, p.v);
        r["nehari_residual"] = p.residual;
        r["t_max"] = t_max;
        r["count"] = cfg.fiber_count;
        r["truncated_at"] = report_detail::number(truncated_at);
        j["result"] = std::move(r);
        out << "fiber: t* " << fmt(p.t_star) << "  h(t*) " << fmt(energy(ctx, p.v)) << "  table "
            << (dir / "fiber.csv").string() << "\n";
        return kOk;
    });
}

}  // namespace cli_detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    using namespace cli_detail;
    CLI::App app{"Numerical lab for the Kirchhoff problem with critical exponential growth"};
    app.require_subcommand(1);

    Common com;
    std::string n_list;
    std::optional<double> moser_d;
    auto* validate = app.add_subcommand("validate", "Check the structural hypotheses on samples");
    auto* moser = app.add_subcommand("moser", "Tabulate the Moser-function integrals");
    auto* solve = app.add_subcommand("solve", "Compute a ground state by Nehari projected descent");
    auto* probe = app.add_subcommand("probe", "Probe the mountain-pass geometry");
    auto* bound = app.add_subcommand("bound", "Check the level bound c* < M(4 pi / alpha0) / 2");
    auto* fiber = app.add_subcommand("fiber", "Tabulate h(t) = I(t u) along a ray");
    for (auto* s : {validate, moser, solve, probe, bound, fiber}) add_common(*s, com);
    moser->add_option("--n", n_list, "Comma-separated list of n >= 2");
    moser->add_option("--d", moser_d, "Ball radius d");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kError;
    }

    try {
        if (*validate) return cmd_validate(com, out);
        if (*moser) return cmd_moser(com, n_list, moser_d, out);
        if (*solve) return cmd_solve(com, out);
        if (*probe) return cmd_probe(com, out);
        if (*bound) return cmd_bound(com, out);
        if (*fiber) return cmd_fiber(com, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kError;
    }
    return kError;
}

}  // namespace kirchhoff
