#pragma once

// JSON reports and CSV tables. Key order is fixed and no wall-clock data is
// written, so identical inputs give identical bytes.

#include "kirchhoff/config.hpp"
#include "kirchhoff/moser.hpp"
#include "kirchhoff/solver.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>

namespace kirchhoff {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

namespace report_detail {

// nlohmann writes NaN and infinities as null; keep that explicit.
inline Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json number(const std::optional<double>& v) { return v ? number(*v) : Json(nullptr); }

inline Json numbers(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(number(x));
    return a;
}

}  // namespace report_detail

inline Json grid_json(const Grid& g) {
    Json j;
    j["shape"] = shape_name(g.spec());
    j["h"] = g.h();
    j["d"] = g.inradius();
    j["x0"] = {g.ball_center().x, g.ball_center().y};
    j["N"] = g.size();
    return j;
}

inline Json to_json(const HypothesisReport& r) {
    using report_detail::number;
    Json j;
    j["all_passed"] = r.all_passed();
    j["hard_fail"] = r.hard_fail();
    j["d"] = r.d;
    j["theta"] = r.theta;
    j["r_theta"] = number(r.r_theta);
    j["beta0"] = number(r.beta0);
    j["beta0_threshold"] = number(r.beta0_threshold);
    Json entries = Json::array();
    for (const auto& e : r.entries) {
        Json x;
        x["name"] = to_string(e.name);
        x["status"] = to_string(e.status);
        x["margin"] = number(e.margin);
        x["witness"] = report_detail::numbers(e.witness);
        x["detail"] = e.detail;
        entries.push_back(std::move(x));
    }
    j["entries"] = std::move(entries);
    return j;
}

/// Everything but the field itself and the timing.
inline Json to_json(const SolveReport& r) {
    using report_detail::number;
    Json j;
    j["status"] = to_string(r.status);
    j["message"] = r.message;
    j["energy"] = number(r.energy);
    j["nehari_residual"] = number(r.nehari_residual);
    j["grad_residual"] = number(r.grad_residual);
    j["weak_residual"] = number(r.weak_residual);
    j["iterations"] = r.iterations;
    j["level_threshold"] = number(r.level_threshold);
    j["margin"] = number(r.margin);
    j["positive"] = r.positive;
    j["min_value"] = number(r.min_value);
    j["max_value"] = number(r.max_value);
    j["worst_nehari_violation"] = number(r.worst_nehari_violation);
    j["descent_monotone"] = r.descent_monotone;
    Json restarts = Json::array();
    for (const auto& s : r.restarts) {
        Json x;
        x["start"] = s.start;
        x["seed"] = s.seed;
        x["energy"] = number(s.energy);
        x["status"] = to_string(s.status);
        x["iterations"] = s.iterations;
        restarts.push_back(std::move(x));
    }
    j["restarts"] = std::move(restarts);
    j["energy_trace"] = report_detail::numbers(r.energy_trace);
    j["gradient_trace"] = report_detail::numbers(r.gradient_trace);
    return j;
}

inline Json to_json(const ProbeReport& r) {
    using report_detail::number;
    Json j;
    j["directions"] = r.directions;
    j["seed"] = r.seed;
    Json sphere = Json::array();
    for (const auto& s : r.sphere) {
        Json x;
        x["rho"] = s.rho;
        x["tau"] = number(s.tau);
        x["argmin_direction"] = s.argmin_direction;
        sphere.push_back(std::move(x));
    }
    j["sphere"] = std::move(sphere);
    j["rho_positive"] = number(r.rho_positive);
    j["e_norm"] = number(r.e_norm);
    j["e_energy"] = number(r.e_energy);
    j["e_beyond_rho"] = r.e_beyond_rho;
    return j;
}

inline Json to_json(const LevelBoundReport& r) {
    using report_detail::number;
    Json j;
    j["alpha0"] = r.alpha0;
    j["threshold"] = number(r.threshold);
    j["solve_status"] = to_string(r.solve_status);
    j["solve_energy"] = number(r.solve_energy);
    j["solve_grad_residual"] = number(r.solve_grad_residual);
    j["solve_iterations"] = r.solve_iterations;
    Json rays = Json::array();
    for (const auto& m : r.moser) {
        Json x;
        x["n"] = m.n;
        x["t_max"] = number(m.t_max);
        x["value"] = number(m.value);
        if (!m.error.empty()) x["error"] = m.error;
        rays.push_back(std::move(x));
    }
    j["moser"] = std::move(rays);
    j["c_estimate"] = number(r.c_estimate);
    j["c_source"] = r.c_source;
    j["margin"] = number(r.margin);
    j["pass"] = r.pass;
    return j;
}

struct MoserRow {
    double n = 0.0;
    double q = 0.0;
    double integral = 0.0;
    double lower_bound = 0.0;
    double limit = 0.0;
};

inline std::vector<MoserRow> moser_table(const std::vector<double>& ns, double d) {
    std::vector<MoserRow> rows;
    for (double n : ns) {
        const MoserFamily fam(n, d);
        rows.push_back({n, moser_q(n), limite_integral(fam), limite_lower_bound(fam),
                        3.0 * std::numbers::pi * d * d});
    }
    return rows;
}

inline void write_moser_csv(const std::vector<MoserRow>& rows, std::ostream& os) {
    os << "n,Q,limite_integral,lower_bound,3pi_d2\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.n, r.q, r.integral, r.lower_bound,
                      r.limit);
        os << buf;
    }
}

inline Json to_json(const std::vector<MoserRow>& rows, double d) {
    Json j;
    j["d"] = d;
    Json a = Json::array();
    bool bound_holds = true, monotone = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        bound_holds = bound_holds && r.integral >= r.lower_bound;
        if (i > 0 && rows[i - 1].n < r.n) monotone = monotone && rows[i - 1].lower_bound < r.lower_bound;
        Json x;
        x["n"] = r.n;
        x["Q"] = r.q;
        x["limite_integral"] = r.integral;
        x["lower_bound"] = r.lower_bound;
        x["norm_sq"] = moser_norm_sq(MoserFamily(r.n, d));
        a.push_back(std::move(x));
    }
    j["rows"] = std::move(a);
    j["limit_3pi_d2"] = 3.0 * std::numbers::pi * d * d;
    j["bound_holds"] = bound_holds;
    j["lower_bound_increasing"] = monotone;
    return j;
}

/// Top-level envelope shared by every subcommand.
inline Json envelope(const std::string& command, const RunConfig& cfg) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["config"] = to_json(cfg);
    return j;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw Error("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

inline void write_report(const Json& report, const std::filesystem::path& path) {
    write_text_file(path, report.dump(2) + "\n");
}

inline void write_field(const Field& u, const std::filesystem::path& path) {
    std::ostringstream ss;
    write_field_csv(u, ss);
    write_text_file(path, ss.str());
}

/// Reads a CSV written by write_field onto `grid`; rows must match the
/// grid's nodes in order.
inline Field read_field(const GridPtr& grid, const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open field file '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line) || config_detail::trim(line) != "x,y,u")
        throw ConfigError("field file '" + path.string() + "': expected header x,y,u");
    Field u(grid);
    std::size_t i = 0;
    const double tol = 1e-9 * grid->h();
    while (std::getline(in, line)) {
        if (config_detail::trim(line).empty()) continue;
        const std::string where = "field file '" + path.string() + "' row " + std::to_string(i + 1);
        if (i >= u.size()) throw ConfigError(where + ": more rows than grid nodes");
        const auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) throw ConfigError(where + ": expected x,y,u");
        const double x = config_detail::parse_plain(where, std::string_view(line).substr(0, c1));
        const double y = config_detail::parse_plain(where, std::string_view(line).substr(c1 + 1, c2 - c1 - 1));
        const Point p = grid->node(i);
        if (std::abs(x - p.x) > tol || std::abs(y - p.y) > tol)
            throw ConfigError(where + ": node does not match the grid");
        u[i++] = config_detail::parse_plain(where, std::string_view(line).substr(c2 + 1));
    }
    if (i != u.size()) throw ConfigError("field file '" + path.string() + "': fewer rows than grid nodes");
    return u;
}

}  // namespace kirchhoff
