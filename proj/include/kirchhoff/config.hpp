#pragma once

// Run configuration. Text form: one `key = value` per line, keys dotted
// (`solver.step`), or grouped under a `[solver]` header. Lines starting with
// `#` are comments. Numbers may be written as fractions (`1/64`); lists are
// comma-separated. A JSON object with the same keys (flat dotted or nested)
// is accepted as well.

#include "kirchhoff/errors.hpp"
#include "kirchhoff/grid.hpp"
#include "kirchhoff/model.hpp"
#include "kirchhoff/solver.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace kirchhoff {

struct RunConfig {
    std::string shape = "disk";
    Disk disk{};
    Rectangle rectangle{};
    double h = 1.0 / 64.0;

    CoefficientKind kirchhoff_kind = CoefficientKind::affine;
    double m0 = 1.0;
    double a = 1.0;
    std::optional<double> a1, a2, sigma, t0;

    NonlinearityKind nonlinearity_kind = NonlinearityKind::paper_example;
    double alpha0 = 1.0;
    double p = 3.0;
    std::optional<double> s0, K0, beta0;

    SolverOptions solver;
    std::string initial_file;

    SamplingSpec sampling;

    std::vector<double> probe_rho{0.05, 0.1, 0.2, 0.5, 1.0};
    int probe_directions = 16;

    std::vector<double> bound_moser_n{2, 4, 8, 16};

    std::vector<double> moser_n{2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
    double moser_d = 1.0;

    InitialGuess fiber_ray = InitialGuess::bump;
    double fiber_moser_n = 8.0;
    /// Right end of the t range; defaults to twice the Nehari point.
    std::optional<double> fiber_t_max;
    int fiber_count = 200;

    std::string out_dir;

    DomainSpec domain() const {
        if (shape == "disk") return disk;
        return rectangle;
    }

    friend bool operator==(const RunConfig& l, const RunConfig& r) {
        auto solver_tie = [](const SolverOptions& o) {
            return std::tie(o.max_iters, o.step, o.armijo_c, o.backtrack, o.grad_tol, o.poisson_tol,
                            o.min_step, o.initial_guess, o.moser_n, o.seed, o.restarts, o.restart_noise);
        };
        auto tie = [](const RunConfig& c) {
            return std::tie(c.shape, c.disk, c.rectangle, c.h, c.kirchhoff_kind, c.m0, c.a, c.a1, c.a2,
                            c.sigma, c.t0, c.nonlinearity_kind, c.alpha0, c.p, c.s0, c.K0, c.beta0,
                            c.initial_file, c.sampling, c.probe_rho, c.probe_directions, c.bound_moser_n,
                            c.moser_n, c.moser_d, c.fiber_ray, c.fiber_moser_n, c.fiber_t_max,
                            c.fiber_count, c.out_dir);
        };
        return tie(l) == tie(r) && solver_tie(l.solver) == solver_tie(r.solver);
    }
};

namespace config_detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

/// Shortest text that reads back to the same double.
inline std::string format_number(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline double parse_plain(std::string_view key, std::string_view t) {
    t = trim(t);
    double v = 0.0;
    const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || r.ec != std::errc() || r.ptr != t.data() + t.size())
        throw ConfigError("config: " + std::string(key) + ": not a number: '" + std::string(t) + "'");
    return v;
}

inline double parse_number(std::string_view key, std::string_view t) {
    const auto slash = t.find('/');
    double v = slash == std::string_view::npos
                   ? parse_plain(key, t)
                   : parse_plain(key, t.substr(0, slash)) / parse_plain(key, t.substr(slash + 1));
    if (!std::isfinite(v))
        throw ConfigError("config: " + std::string(key) + ": value must be finite");
    return v;
}

template <class Int>
Int parse_integer(std::string_view key, std::string_view t) {
    t = trim(t);
    Int v{};
    const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || r.ec != std::errc() || r.ptr != t.data() + t.size())
        throw ConfigError("config: " + std::string(key) + ": not an integer: '" + std::string(t) + "'");
    return v;
}

inline std::vector<double> parse_list(std::string_view key, std::string_view t) {
    std::vector<double> out;
    t = trim(t);
    if (t.empty()) throw ConfigError("config: " + std::string(key) + ": empty list");
    while (true) {
        const auto comma = t.find(',');
        out.push_back(parse_number(key, t.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        t = t.substr(comma + 1);
    }
    return out;
}

inline std::string format_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v[i]);
    return s;
}

template <class Enum, std::size_t N>
Enum parse_enum(std::string_view key, std::string_view t, const Enum (&values)[N]) {
    t = trim(t);
    std::string allowed;
    for (Enum e : values) {
        if (t == to_string(e)) return e;
        allowed += (allowed.empty() ? "" : "|") + std::string(to_string(e));
    }
    throw ConfigError("config: " + std::string(key) + ": unknown value '" + std::string(t) + "' (expected " +
                      allowed + ")");
}

enum class ValueType { number, integer, text, list };

struct KeySpec {
    std::string name;
    ValueType type;
    std::function<std::optional<std::string>(const RunConfig&)> get;
    std::function<void(RunConfig&, std::string_view)> set;
};

using NumRef = double& (*)(RunConfig&);
using OptRef = std::optional<double>& (*)(RunConfig&);

inline KeySpec number(std::string name, NumRef ref) {
    return {name, ValueType::number,
            [ref](const RunConfig& c) -> std::optional<std::string> {
                return format_number(ref(const_cast<RunConfig&>(c)));
            },
            [ref, name](RunConfig& c, std::string_view t) { ref(c) = parse_number(name, t); }};
}

inline KeySpec optional_number(std::string name, OptRef ref) {
    return {name, ValueType::number,
            [ref](const RunConfig& c) -> std::optional<std::string> {
                const auto& v = ref(const_cast<RunConfig&>(c));
                if (!v) return std::nullopt;
                return format_number(*v);
            },
            [ref, name](RunConfig& c, std::string_view t) { ref(c) = parse_number(name, t); }};
}

template <class Int>
KeySpec integer(std::string name, Int& (*ref)(RunConfig&)) {
    return {name, ValueType::integer,
            [ref](const RunConfig& c) -> std::optional<std::string> {
                return std::to_string(ref(const_cast<RunConfig&>(c)));
            },
            [ref, name](RunConfig& c, std::string_view t) { ref(c) = parse_integer<Int>(name, t); }};
}

inline KeySpec list(std::string name, std::vector<double>& (*ref)(RunConfig&)) {
    return {name, ValueType::list,
            [ref](const RunConfig& c) -> std::optional<std::string> {
                return format_list(ref(const_cast<RunConfig&>(c)));
            },
            [ref, name](RunConfig& c, std::string_view t) { ref(c) = parse_list(name, t); }};
}

inline KeySpec text(std::string name, std::string& (*ref)(RunConfig&)) {
    return {name, ValueType::text,
            [ref](const RunConfig& c) -> std::optional<std::string> { return ref(const_cast<RunConfig&>(c)); },
            [ref](RunConfig& c, std::string_view t) { ref(c) = std::string(trim(t)); }};
}

inline const std::vector<KeySpec>& keys() {
    using C = RunConfig;
    static const std::vector<KeySpec> table = [] {
        constexpr CoefficientKind coef_kinds[] = {CoefficientKind::constant, CoefficientKind::affine,
                                                  CoefficientKind::logarithmic};
        constexpr NonlinearityKind nl_kinds[] = {NonlinearityKind::paper_example, NonlinearityKind::power};
        constexpr InitialGuess guesses[] = {InitialGuess::bump, InitialGuess::moser, InitialGuess::file};
        constexpr InitialGuess rays[] = {InitialGuess::bump, InitialGuess::moser};
        std::vector<KeySpec> t;
        t.push_back(text("domain.shape", [](C& c) -> std::string& { return c.shape; }));
        t.push_back(number("domain.cx", [](C& c) -> double& { return c.disk.center.x; }));
        t.push_back(number("domain.cy", [](C& c) -> double& { return c.disk.center.y; }));
        t.push_back(number("domain.radius", [](C& c) -> double& { return c.disk.radius; }));
        t.push_back(number("domain.width", [](C& c) -> double& { return c.rectangle.width; }));
        t.push_back(number("domain.height", [](C& c) -> double& { return c.rectangle.height; }));
        t.push_back(number("mesh.h", [](C& c) -> double& { return c.h; }));

        t.push_back({"kirchhoff.kind", ValueType::text,
                     [](const C& c) -> std::optional<std::string> { return to_string(c.kirchhoff_kind); },
                     [=](C& c, std::string_view v) {
                         c.kirchhoff_kind = parse_enum("kirchhoff.kind", v, coef_kinds);
                     }});
        t.push_back(number("kirchhoff.m0", [](C& c) -> double& { return c.m0; }));
        t.push_back(number("kirchhoff.a", [](C& c) -> double& { return c.a; }));
        t.push_back(optional_number("kirchhoff.a1", [](C& c) -> std::optional<double>& { return c.a1; }));
        t.push_back(optional_number("kirchhoff.a2", [](C& c) -> std::optional<double>& { return c.a2; }));
        t.push_back(optional_number("kirchhoff.sigma", [](C& c) -> std::optional<double>& { return c.sigma; }));
        t.push_back(optional_number("kirchhoff.t0", [](C& c) -> std::optional<double>& { return c.t0; }));

        t.push_back({"nonlinearity.kind", ValueType::text,
                     [](const C& c) -> std::optional<std::string> { return to_string(c.nonlinearity_kind); },
                     [=](C& c, std::string_view v) {
                         c.nonlinearity_kind = parse_enum("nonlinearity.kind", v, nl_kinds);
                     }});
        t.push_back(number("nonlinearity.alpha0", [](C& c) -> double& { return c.alpha0; }));
        t.push_back(number("nonlinearity.p", [](C& c) -> double& { return c.p; }));
        t.push_back(optional_number("nonlinearity.s0", [](C& c) -> std::optional<double>& { return c.s0; }));
        t.push_back(optional_number("nonlinearity.K0", [](C& c) -> std::optional<double>& { return c.K0; }));
        t.push_back(optional_number("nonlinearity.beta0", [](C& c) -> std::optional<double>& { return c.beta0; }));

        t.push_back(integer<int>("solver.max_iters", [](C& c) -> int& { return c.solver.max_iters; }));
        t.push_back(number("solver.step", [](C& c) -> double& { return c.solver.step; }));
        t.push_back(number("solver.armijo_c", [](C& c) -> double& { return c.solver.armijo_c; }));
        t.push_back(number("solver.backtrack", [](C& c) -> double& { return c.solver.backtrack; }));
        t.push_back(number("solver.grad_tol", [](C& c) -> double& { return c.solver.grad_tol; }));
        t.push_back(number("solver.poisson_tol", [](C& c) -> double& { return c.solver.poisson_tol; }));
        t.push_back(number("solver.min_step", [](C& c) -> double& { return c.solver.min_step; }));
        t.push_back({"solver.initial_guess", ValueType::text,
                     [](const C& c) -> std::optional<std::string> { return to_string(c.solver.initial_guess); },
                     [=](C& c, std::string_view v) {
                         c.solver.initial_guess = parse_enum("solver.initial_guess", v, guesses);
                     }});
        t.push_back(number("solver.moser_n", [](C& c) -> double& { return c.solver.moser_n; }));
        t.push_back(text("solver.initial_file", [](C& c) -> std::string& { return c.initial_file; }));
        t.push_back(integer<std::uint64_t>("solver.seed", [](C& c) -> std::uint64_t& { return c.solver.seed; }));
        t.push_back(integer<int>("solver.restarts", [](C& c) -> int& { return c.solver.restarts; }));
        t.push_back(number("solver.restart_noise", [](C& c) -> double& { return c.solver.restart_noise; }));

        t.push_back(number("validation.t_max", [](C& c) -> double& { return c.sampling.t_max; }));
        t.push_back(integer<std::size_t>("validation.t_count",
                                         [](C& c) -> std::size_t& { return c.sampling.t_count; }));
        t.push_back(number("validation.s_min", [](C& c) -> double& { return c.sampling.s_min; }));
        t.push_back(number("validation.s_max", [](C& c) -> double& { return c.sampling.s_max; }));
        t.push_back(integer<std::size_t>("validation.s_count",
                                         [](C& c) -> std::size_t& { return c.sampling.s_count; }));
        t.push_back(integer<std::size_t>("validation.pair_count",
                                         [](C& c) -> std::size_t& { return c.sampling.pair_count; }));
        t.push_back(number("validation.limit_tol", [](C& c) -> double& { return c.sampling.limit_tol; }));
        t.push_back(
            optional_number("validation.theta", [](C& c) -> std::optional<double>& { return c.sampling.theta; }));

        t.push_back(list("probe.rho", [](C& c) -> std::vector<double>& { return c.probe_rho; }));
        t.push_back(integer<int>("probe.directions", [](C& c) -> int& { return c.probe_directions; }));
        t.push_back(list("bound.moser_n", [](C& c) -> std::vector<double>& { return c.bound_moser_n; }));
        t.push_back(list("moser.n", [](C& c) -> std::vector<double>& { return c.moser_n; }));
        t.push_back(number("moser.d", [](C& c) -> double& { return c.moser_d; }));

        t.push_back({"fiber.ray", ValueType::text,
                     [](const C& c) -> std::optional<std::string> { return to_string(c.fiber_ray); },
                     [=](C& c, std::string_view v) { c.fiber_ray = parse_enum("fiber.ray", v, rays); }});
        t.push_back(number("fiber.moser_n", [](C& c) -> double& { return c.fiber_moser_n; }));
        t.push_back(optional_number("fiber.t_max", [](C& c) -> std::optional<double>& { return c.fiber_t_max; }));
        t.push_back(integer<int>("fiber.count", [](C& c) -> int& { return c.fiber_count; }));

        t.push_back(text("output.dir", [](C& c) -> std::string& { return c.out_dir; }));
        return t;
    }();
    return table;
}

inline const KeySpec* find_key(std::string_view name) {
    for (const auto& k : keys())
        if (k.name == name) return &k;
    return nullptr;
}

inline void flatten(const nlohmann::json& j, const std::string& prefix, std::map<std::string, std::string>& out) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
        return;
    }
    auto scalar = [&](const nlohmann::json& v) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_integer()) return v.dump();
        if (v.is_number()) return format_number(v.get<double>());
        throw ConfigError("config: " + prefix + ": unsupported JSON value " + v.dump());
    };
    if (j.is_array()) {
        std::string s;
        for (const auto& v : j) s += (s.empty() ? "" : ",") + scalar(v);
        out[prefix] = s;
    } else {
        out[prefix] = scalar(j);
    }
}

}  // namespace config_detail

/// Checks the ranges the library factories would reject, with the key name.
inline void check(const RunConfig& c) {
    auto need = [](bool ok, const char* key, const char* what) {
        if (!ok) throw ConfigError(std::string("config: ") + key + ": " + what);
    };
    need(c.shape == "disk" || c.shape == "rectangle", "domain.shape", "expected disk|rectangle");
    need(c.disk.radius > 0.0, "domain.radius", "must be > 0");
    need(c.rectangle.width > 0.0, "domain.width", "must be > 0");
    need(c.rectangle.height > 0.0, "domain.height", "must be > 0");
    need(c.h > 0.0, "mesh.h", "must be > 0");
    need(c.m0 > 0.0, "kirchhoff.m0", "must be > 0");
    need(c.a >= 0.0, "kirchhoff.a", "must be >= 0");
    need(c.alpha0 > 0.0, "nonlinearity.alpha0", "must be > 0");
    need(c.p >= 1.0, "nonlinearity.p", "must be >= 1");
    need(c.solver.max_iters >= 1, "solver.max_iters", "must be >= 1");
    need(c.solver.moser_n >= 2.0, "solver.moser_n", "must be >= 2");
    need(c.solver.initial_guess != InitialGuess::file || !c.initial_file.empty(), "solver.initial_file",
         "required when solver.initial_guess = file");
    need(c.probe_directions >= 0, "probe.directions", "must be >= 0");
    for (double r : c.probe_rho) need(r > 0.0, "probe.rho", "values must be > 0");
    for (double n : c.bound_moser_n) need(n >= 2.0, "bound.moser_n", "values must be >= 2");
    for (double n : c.moser_n) need(n >= 2.0, "moser.n", "values must be >= 2");
    need(c.moser_d > 0.0, "moser.d", "must be > 0");
    need(c.fiber_moser_n >= 2.0, "fiber.moser_n", "must be >= 2");
    need(!c.fiber_t_max || *c.fiber_t_max > 0.0, "fiber.t_max", "must be > 0");
    need(c.fiber_count >= 1, "fiber.count", "must be >= 1");
    try {
        c.solver.check();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

/// Sets one dotted key; unknown keys are rejected.
inline void set_key(RunConfig& c, std::string_view key, std::string_view value) {
    const auto* k = config_detail::find_key(key);
    if (!k) throw ConfigError("config: unknown key '" + std::string(key) + "'");
    k->set(c, value);
}

inline RunConfig parse_config_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: JSON config must be an object");
    std::map<std::string, std::string> flat;
    config_detail::flatten(j, "", flat);
    RunConfig c;
    for (const auto& [k, v] : flat) set_key(c, k, v);
    check(c);
    return c;
}

/// Parses the text or JSON form; the JSON form is recognised by a leading `{`.
inline RunConfig parse_config(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return parse_config_json(text);

    RunConfig c;
    std::istringstream in(text);
    std::string line, section;
    std::map<std::string, int> seen;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        const std::string where = "config:" + std::to_string(lineno) + ": ";
        const std::string_view t = config_detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError(where + "unterminated section header");
            section = std::string(config_detail::trim(t.substr(1, t.size() - 2)));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
        const std::string_view bare = config_detail::trim(t.substr(0, eq));
        const std::string key = section.empty() ? std::string(bare) : section + "." + std::string(bare);
        if (auto [it, fresh] = seen.emplace(key, lineno); !fresh)
            throw ConfigError(where + "duplicate key '" + key + "' (first on line " +
                              std::to_string(it->second) + ")");
        try {
            set_key(c, key, t.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
    check(c);
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

/// Text form with one section per key prefix; unset optional keys are omitted.
inline std::string to_text(const RunConfig& c) {
    std::string out, section;
    for (const auto& k : config_detail::keys()) {
        const auto v = k.get(c);
        if (!v) continue;
        const auto dot = k.name.find('.');
        const std::string sec = k.name.substr(0, dot);
        if (sec != section) {
            out += (out.empty() ? "[" : "\n[") + sec + "]\n";
            section = sec;
        }
        out += k.name.substr(dot + 1) + " = " + *v + "\n";
    }
    return out;
}

/// Nested JSON form with typed values; parse_config reads it back.
inline nlohmann::ordered_json to_json(const RunConfig& c) {
    using config_detail::ValueType;
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& k : config_detail::keys()) {
        const auto v = k.get(c);
        if (!v) continue;
        const auto dot = k.name.find('.');
        auto& slot = j[k.name.substr(0, dot)][k.name.substr(dot + 1)];
        switch (k.type) {
            case ValueType::number: slot = config_detail::parse_plain(k.name, *v); break;
            case ValueType::integer: slot = nlohmann::ordered_json::parse(*v); break;
            case ValueType::text: slot = *v; break;
            case ValueType::list: slot = config_detail::parse_list(k.name, *v); break;
        }
    }
    return j;
}

inline GridPtr make_grid(const RunConfig& c) { return Grid::build(c.domain(), c.h); }

inline KirchhoffCoefficient make_coefficient(const RunConfig& c) {
    KirchhoffCoefficient k = c.kirchhoff_kind == CoefficientKind::constant   ? KirchhoffCoefficient::constant(c.m0)
                             : c.kirchhoff_kind == CoefficientKind::affine ? KirchhoffCoefficient::affine(c.m0, c.a)
                                                                           : KirchhoffCoefficient::logarithmic();
    if (c.a1 || c.a2 || c.sigma || c.t0) {
        GrowthBound g = k.growth();
        g.a1 = c.a1.value_or(g.a1);
        g.a2 = c.a2.value_or(g.a2);
        g.sigma = c.sigma.value_or(g.sigma);
        g.t0 = c.t0.value_or(g.t0);
        k = k.with_growth(g);
    }
    return k;
}

inline Nonlinearity make_nonlinearity(const RunConfig& c) {
    Nonlinearity n = c.nonlinearity_kind == NonlinearityKind::paper_example ? Nonlinearity::paper_example(c.alpha0)
                                                                            : Nonlinearity::power(c.p);
    GrowthParameters g;
    g.s0 = c.s0.value_or(g.s0);
    g.K0 = c.K0.value_or(g.K0);
    g.beta0 = c.beta0;
    return n.with_parameters(g);
}

}  // namespace kirchhoff
