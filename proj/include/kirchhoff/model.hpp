#pragma once

// Kirchhoff coefficient m (with primitive M), the nonlinearity f (with
// primitive F), and sampled checks of the structural hypotheses on both.

#include "kirchhoff/errors.hpp"
#include "kirchhoff/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kirchhoff {

struct Point {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point&) const = default;
};

/// Largest exponential argument evaluated; anything above raises OverflowError.
inline constexpr double kExpArgCap = 700.0;

// ---------------------------------------------------------------------------
// Kirchhoff coefficient

enum class CoefficientKind { constant, affine, logarithmic, custom };

inline const char* to_string(CoefficientKind k) {
    switch (k) {
        case CoefficientKind::constant: return "constant";
        case CoefficientKind::affine: return "affine";
        case CoefficientKind::logarithmic: return "logarithmic";
        case CoefficientKind::custom: return "custom";
    }
    return "?";
}

/// Parameters of the growth bound m(t) <= a1 + a2 t^sigma for t >= t0.
struct GrowthBound {
    double a1 = 1.0;
    double a2 = 1.0;
    double sigma = 1.0;
    double t0 = 1.0;
};

class KirchhoffCoefficient {
public:
    using ScalarFn = std::function<double(double)>;

    static KirchhoffCoefficient constant(double m0) {
        KirchhoffCoefficient c = affine(m0, 0.0);
        c.kind_ = CoefficientKind::constant;
        return c;
    }

    /// m(t) = m0 + a t.
    static KirchhoffCoefficient affine(double m0, double a) {
        if (!(m0 > 0.0)) throw DomainError("kirchhoff: m0 must be > 0");
        if (!(a >= 0.0)) throw DomainError("kirchhoff: affine slope must be >= 0");
        KirchhoffCoefficient c;
        c.kind_ = CoefficientKind::affine;
        c.m0_ = m0;
        c.slope_ = a;
        c.growth_ = a > 0.0 ? GrowthBound{m0, a, 1.0, 1.0} : GrowthBound{m0, 1.0, 0.0, 1.0};
        return c;
    }

    /// m(t) = 1 + ln(1 + t), M(t) = (1 + t) ln(1 + t).
    static KirchhoffCoefficient logarithmic() {
        KirchhoffCoefficient c;
        c.kind_ = CoefficientKind::logarithmic;
        c.m0_ = 1.0;
        c.growth_ = GrowthBound{1.0, 1.0, 1.0, 1.0};
        return c;
    }

    /// User-supplied m. Without a closed-form primitive, M is computed by
    /// adaptive quadrature of m.
    static KirchhoffCoefficient custom(ScalarFn m, double m0, ScalarFn primitive = {},
                                       GrowthBound growth = {}) {
        if (!m) throw DomainError("kirchhoff: custom coefficient needs m");
        if (!(m0 > 0.0)) throw DomainError("kirchhoff: m0 must be > 0");
        KirchhoffCoefficient c;
        c.kind_ = CoefficientKind::custom;
        c.m0_ = m0;
        c.m_ = std::move(m);
        c.primitive_ = std::move(primitive);
        c.growth_ = growth;
        return c;
    }

    KirchhoffCoefficient with_growth(GrowthBound g) const {
        KirchhoffCoefficient c = *this;
        c.growth_ = g;
        return c;
    }

    CoefficientKind kind() const noexcept { return kind_; }
    double m0() const noexcept { return m0_; }
    double slope() const noexcept { return slope_; }
    const GrowthBound& growth() const noexcept { return growth_; }

    double m(double t) const {
        check_t(t);
        switch (kind_) {
            case CoefficientKind::constant:
            case CoefficientKind::affine: return m0_ + slope_ * t;
            case CoefficientKind::logarithmic: return 1.0 + std::log1p(t);
            case CoefficientKind::custom: return m_(t);
        }
        return 0.0;
    }

    double M(double t) const {
        check_t(t);
        switch (kind_) {
            case CoefficientKind::constant:
            case CoefficientKind::affine: return m0_ * t + 0.5 * slope_ * t * t;
            case CoefficientKind::logarithmic: return (1.0 + t) * std::log1p(t);
            case CoefficientKind::custom:
                if (primitive_) return primitive_(t);
                return quadrature::integrate(m_, 0.0, t, 1e-12).value;
        }
        return 0.0;
    }

private:
    static void check_t(double t) {
        if (!(t >= 0.0)) throw DomainError("kirchhoff: argument t must be >= 0, got " + std::to_string(t));
    }

    CoefficientKind kind_ = CoefficientKind::affine;
    double m0_ = 1.0;
    double slope_ = 0.0;
    GrowthBound growth_{};
    ScalarFn m_;
    ScalarFn primitive_;
};

inline double eval_m(const KirchhoffCoefficient& c, double t) { return c.m(t); }
inline double eval_M(const KirchhoffCoefficient& c, double t) { return c.M(t); }

// ---------------------------------------------------------------------------
// Nonlinearity

enum class NonlinearityKind { paper_example, power, custom };

inline const char* to_string(NonlinearityKind k) {
    switch (k) {
        case NonlinearityKind::paper_example: return "paper_example";
        case NonlinearityKind::power: return "power";
        case NonlinearityKind::custom: return "custom";
    }
    return "?";
}

/// Parameters of the large-s hypotheses: F <= K0 f for s >= s0, and the
/// lower bound beta0 on lim s f(s) exp(-alpha0 s^2).
struct GrowthParameters {
    double s0 = 1.0;
    double K0 = 1.0;
    std::optional<double> beta0;
};

class Nonlinearity {
public:
    using PointFn = std::function<double(Point, double)>;

    /// F(s) = s^4/4 + s^2 (exp(alpha0 s^2) - 1) for s > 0, zero otherwise.
    static Nonlinearity paper_example(double alpha0) {
        if (!(alpha0 > 0.0)) throw DomainError("nonlinearity: alpha0 must be > 0");
        Nonlinearity n;
        n.kind_ = NonlinearityKind::paper_example;
        n.alpha0_ = alpha0;
        return n;
    }

    /// f(s) = s^p, F(s) = s^(p+1)/(p+1) for s > 0. No critical exponent.
    static Nonlinearity power(double p) {
        if (!(p >= 1.0)) throw DomainError("nonlinearity: power exponent must be >= 1");
        Nonlinearity n;
        n.kind_ = NonlinearityKind::power;
        n.p_ = p;
        return n;
    }

    /// x-dependent user nonlinearity; both f and its primitive F are supplied.
    /// The sign convention f = F = 0 for s <= 0 is enforced by the wrapper.
    static Nonlinearity custom(PointFn f, PointFn F, std::optional<double> alpha0 = {}) {
        if (!f || !F) throw DomainError("nonlinearity: custom needs f and F");
        Nonlinearity n;
        n.kind_ = NonlinearityKind::custom;
        n.f_ = std::move(f);
        n.F_ = std::move(F);
        n.alpha0_ = alpha0;
        return n;
    }

    Nonlinearity with_parameters(GrowthParameters g) const {
        Nonlinearity n = *this;
        n.params_ = g;
        return n;
    }

    NonlinearityKind kind() const noexcept { return kind_; }
    std::optional<double> alpha0() const noexcept { return alpha0_; }
    double exponent() const noexcept { return p_; }
    const GrowthParameters& parameters() const noexcept { return params_; }

    double f(Point x, double s) const {
        if (!(s > 0.0)) return 0.0;
        switch (kind_) {
            case NonlinearityKind::paper_example: {
                const double a = *alpha0_;
                const double s2 = s * s;
                const double e = guarded_exp_arg(a * s2, s);
                return finite(s2 * s + 2.0 * s * std::expm1(e) + 2.0 * a * s2 * s * std::exp(e), s);
            }
            case NonlinearityKind::power: return finite(std::pow(s, p_), s);
            case NonlinearityKind::custom: return finite(f_(x, s), s);
        }
        return 0.0;
    }

    double F(Point x, double s) const {
        if (!(s > 0.0)) return 0.0;
        switch (kind_) {
            case NonlinearityKind::paper_example: {
                const double s2 = s * s;
                const double e = guarded_exp_arg(*alpha0_ * s2, s);
                return finite(0.25 * s2 * s2 + s2 * std::expm1(e), s);
            }
            case NonlinearityKind::power: return finite(std::pow(s, p_ + 1.0) / (p_ + 1.0), s);
            case NonlinearityKind::custom: return finite(F_(x, s), s);
        }
        return 0.0;
    }

private:
    static double guarded_exp_arg(double arg, double s) {
        if (arg > kExpArgCap)
            throw OverflowError("nonlinearity: exponential argument " + std::to_string(arg) +
                                " exceeds cap at s=" + std::to_string(s));
        return arg;
    }
    static double finite(double v, double s) {
        if (!std::isfinite(v))
            throw OverflowError("nonlinearity: non-finite value at s=" + std::to_string(s));
        return v;
    }

    NonlinearityKind kind_ = NonlinearityKind::paper_example;
    std::optional<double> alpha0_;
    double p_ = 3.0;
    GrowthParameters params_{};
    PointFn f_;
    PointFn F_;
};

inline double eval_f(const Nonlinearity& n, Point x, double s) { return n.f(x, s); }
inline double eval_F(const Nonlinearity& n, Point x, double s) { return n.F(x, s); }

/// beta0 must exceed (2 / (alpha0 d^2)) m(4 pi / alpha0).
inline double f3_threshold(const KirchhoffCoefficient& coef, double alpha0, double d) {
    if (!(alpha0 > 0.0) || !(d > 0.0)) throw DomainError("f3_threshold: alpha0 and d must be > 0");
    return 2.0 / (alpha0 * d * d) * coef.m(4.0 * std::numbers::pi / alpha0);
}

/// Half the primitive at the critical Dirichlet energy: (1/2) M(4 pi / alpha0).
inline double level_threshold(const KirchhoffCoefficient& coef, double alpha0) {
    if (!(alpha0 > 0.0)) throw DomainError("level_threshold: alpha0 must be > 0");
    return 0.5 * coef.M(4.0 * std::numbers::pi / alpha0);
}

// ---------------------------------------------------------------------------
// Hypothesis validation

enum class Hypothesis { M1, M2, M3, M3hat, f1, f2, f3, ar_theta, origin_limit };

inline const char* to_string(Hypothesis h) {
    switch (h) {
        case Hypothesis::M1: return "M1";
        case Hypothesis::M2: return "M2";
        case Hypothesis::M3: return "M3";
        case Hypothesis::M3hat: return "M3hat";
        case Hypothesis::f1: return "f1";
        case Hypothesis::f2: return "f2";
        case Hypothesis::f3: return "f3";
        case Hypothesis::ar_theta: return "AR-theta";
        case Hypothesis::origin_limit: return "origin-limit";
    }
    return "?";
}

enum class HypothesisStatus { pass, fail, heuristic_pass };

inline const char* to_string(HypothesisStatus s) {
    switch (s) {
        case HypothesisStatus::pass: return "pass";
        case HypothesisStatus::fail: return "fail";
        case HypothesisStatus::heuristic_pass: return "heuristic-pass";
    }
    return "?";
}

/// Sample grids for the hypothesis checks: t uniform on [0, t_max], s
/// geometric on [s_min, s_max] (clipped so alpha0 s^2 stays below the cap).
struct SamplingSpec {
    double t_max = 100.0;
    std::size_t t_count = 401;
    double s_min = 1e-3;
    double s_max = 20.0;
    std::size_t s_count = 400;
    /// Points per axis for the superadditivity pair grid.
    std::size_t pair_count = 64;
    /// Relative slack for the limit-type (heuristic) checks.
    double limit_tol = 0.05;
    std::optional<double> theta;

    bool operator==(const SamplingSpec&) const = default;
};

struct HypothesisEntry {
    Hypothesis name;
    HypothesisStatus status;
    /// Sample point(s) where the check failed: t, (t, s) or s.
    std::vector<double> witness;
    /// Smallest normalized slack over the samples; negative on failure.
    double margin = 0.0;
    std::string detail;

    bool operator==(const HypothesisEntry&) const = default;
};

struct HypothesisReport {
    std::vector<HypothesisEntry> entries;
    SamplingSpec sampling;
    double d = 0.0;
    double theta = 0.0;
    std::optional<double> r_theta;
    std::optional<double> beta0;
    std::optional<double> beta0_threshold;

    const HypothesisEntry& at(Hypothesis h) const {
        for (const auto& e : entries)
            if (e.name == h) return e;
        throw ConfigError(std::string("hypothesis report has no entry ") + to_string(h));
    }
    bool passed(Hypothesis h) const { return at(h).status != HypothesisStatus::fail; }
    bool all_passed() const {
        return std::all_of(entries.begin(), entries.end(),
                           [](const auto& e) { return e.status != HypothesisStatus::fail; });
    }
    /// The energy machinery needs (M1), (M3) and (f2); failing any of them
    /// is a hard failure.
    bool hard_fail() const {
        return !passed(Hypothesis::M1) || !passed(Hypothesis::M3) || !passed(Hypothesis::f2);
    }

    bool operator==(const HypothesisReport&) const = default;
};

namespace detail {

inline std::vector<double> uniform_samples(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t k = 0; k < n; ++k)
        v[k] = k + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    return v;
}

inline std::vector<double> geometric_samples(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    const double r = std::log(hi / lo);
    for (std::size_t k = 0; k < n; ++k)
        v[k] = k + 1 == n ? hi : lo * std::exp(r * static_cast<double>(k) / static_cast<double>(n - 1));
    return v;
}

// Tracks the worst slack and its location for one check.
struct Worst {
    double margin = std::numeric_limits<double>::infinity();
    std::vector<double> where;
    void offer(double slack, std::vector<double> at) {
        if (slack < margin) {
            margin = slack;
            where = std::move(at);
        }
    }
};

inline HypothesisEntry make_entry(Hypothesis h, bool ok, const Worst& w, std::string detail,
                                  bool heuristic = false) {
    HypothesisEntry e;
    e.name = h;
    e.status = ok ? (heuristic ? HypothesisStatus::heuristic_pass : HypothesisStatus::pass)
                  : HypothesisStatus::fail;
    e.margin = std::isfinite(w.margin) ? w.margin : 0.0;
    if (!ok) e.witness = w.where;
    e.detail = std::move(detail);
    return e;
}

}  // namespace detail

/// Checks every structural hypothesis on a finite sample.
///
/// Monotonicity and pointwise bounds are checked with a relative round-off
/// slack of 1e-10; limit-type statements ((f3) and the origin limit) can only
/// be supported by sampling and are reported as heuristic-pass. The x argument
/// of f is fixed at the origin point; built-ins are autonomous.
inline HypothesisReport validate_hypotheses(const KirchhoffCoefficient& coef, const Nonlinearity& nl,
                                            double d, const SamplingSpec& spec = {}) {
    using detail::Worst;
    if (spec.t_count < 2 || spec.s_count < 2 || spec.pair_count < 2)
        throw ConfigError("sampling: every sample count must be >= 2");
    if (!(spec.t_max > 0.0) || !(spec.s_min > 0.0) || !(spec.s_max > spec.s_min))
        throw ConfigError("sampling: need t_max > 0 and 0 < s_min < s_max");
    if (!(spec.limit_tol >= 0.0 && spec.limit_tol < 1.0))
        throw ConfigError("sampling: limit_tol must lie in [0, 1)");
    if (!(d > 0.0)) throw ConfigError("sampling: inradius d must be > 0");

    constexpr double rtol = 1e-10;
    const Point x0{};
    HypothesisReport rep;
    rep.sampling = spec;
    rep.d = d;
    const GrowthBound& gb = coef.growth();
    rep.theta = spec.theta.value_or(std::max(5.0, 2.0 * gb.sigma + 3.0));

    const auto ts = detail::uniform_samples(0.0, spec.t_max, spec.t_count);
    std::vector<double> ms(ts.size()), Ms(ts.size());
    for (std::size_t k = 0; k < ts.size(); ++k) {
        ms[k] = coef.m(ts[k]);
        Ms[k] = coef.M(ts[k]);
    }

    // (M1): pointwise lower bound and superadditivity of M.
    {
        Worst point, pair;
        for (std::size_t k = 0; k < ts.size(); ++k)
            point.offer((ms[k] - coef.m0()) / coef.m0(), {ts[k]});
        const auto ps = detail::uniform_samples(0.0, spec.t_max, spec.pair_count);
        std::vector<double> Mp(ps.size());
        for (std::size_t k = 0; k < ps.size(); ++k) Mp[k] = coef.M(ps[k]);
        for (std::size_t i = 1; i < ps.size(); ++i)
            for (std::size_t j = i; j < ps.size(); ++j) {
                const double sum = Mp[i] + Mp[j];
                const double slack = (coef.M(ps[i] + ps[j]) - sum) / std::max(std::abs(sum), 1e-300);
                pair.offer(slack, {ps[i], ps[j]});
            }
        const bool point_ok = point.margin >= -rtol;
        const bool pair_ok = pair.margin >= -rtol;
        Worst w = point_ok ? pair : point;
        if (point_ok && pair_ok) w.margin = std::min(point.margin, pair.margin);
        std::string det = !point_ok ? "m(t) < m0 at witness t"
                          : !pair_ok ? "M(t+s) < M(t)+M(s) at witness (t, s)"
                                     : "m >= m0 and M superadditive on samples";
        rep.entries.push_back(detail::make_entry(Hypothesis::M1, point_ok && pair_ok, w, det));
    }

    // (M2): m(t) <= a1 + a2 t^sigma for t >= t0.
    {
        Worst w;
        const bool params_ok = gb.a1 > 0.0 && gb.a2 > 0.0 && gb.t0 > 0.0;
        for (std::size_t k = 0; k < ts.size(); ++k) {
            if (ts[k] < gb.t0) continue;
            const double bound = gb.a1 + gb.a2 * std::pow(ts[k], gb.sigma);
            w.offer((bound - ms[k]) / bound, {ts[k]});
        }
        if (!params_ok) w.offer(-1.0, {gb.t0});
        rep.entries.push_back(detail::make_entry(Hypothesis::M2, params_ok && w.margin >= -rtol, w,
                                                 params_ok ? "m(t) <= a1 + a2 t^sigma for t >= t0"
                                                           : "a1, a2, t0 must be positive"));
    }

    // (M3): m(t)/t nonincreasing for t > 0.
    {
        Worst w;
        for (std::size_t k = 2; k < ts.size(); ++k) {
            const double prev = ms[k - 1] / ts[k - 1];
            const double cur = ms[k] / ts[k];
            w.offer((prev - cur) / std::abs(prev), {ts[k]});
        }
        rep.entries.push_back(detail::make_entry(Hypothesis::M3, w.margin >= -rtol, w,
                                                 "m(t)/t nonincreasing on consecutive samples"));
    }

    // (M^3): M/2 - m t/4 nondecreasing, and therefore nonnegative.
    {
        Worst w;
        double prev = 0.0;
        for (std::size_t k = 0; k < ts.size(); ++k) {
            const double g = 0.5 * Ms[k] - 0.25 * ms[k] * ts[k];
            const double scale = 0.5 * std::abs(Ms[k]) + 0.25 * std::abs(ms[k] * ts[k]) + 1e-300;
            w.offer(g / scale, {ts[k]});
            if (k > 0) w.offer((g - prev) / scale, {ts[k]});
            prev = g;
        }
        rep.entries.push_back(detail::make_entry(Hypothesis::M3hat, w.margin >= -rtol, w,
                                                 "M/2 - m t/4 nondecreasing and nonnegative"));
    }

    // s samples, clipped so that alpha0 s^2 stays below the exponential cap.
    double s_hi = spec.s_max;
    if (nl.alpha0()) s_hi = std::min(s_hi, std::sqrt(0.985 * kExpArgCap / *nl.alpha0()));
    if (!(s_hi > spec.s_min)) throw ConfigError("sampling: s range empty after overflow clipping");
    const auto ss = detail::geometric_samples(spec.s_min, s_hi, spec.s_count);
    std::vector<double> fs(ss.size()), Fs(ss.size());
    for (std::size_t k = 0; k < ss.size(); ++k) {
        fs[k] = nl.f(x0, ss[k]);
        Fs[k] = nl.F(x0, ss[k]);
    }
    const GrowthParameters& np = nl.parameters();

    // (f1): F <= K0 f for s >= s0; falls back to the top sample when s0 is
    // beyond the sampled range.
    {
        Worst w;
        const double s0 = std::min(np.s0, ss.back());
        for (std::size_t k = 0; k < ss.size(); ++k) {
            if (ss[k] < s0) continue;
            const double bound = np.K0 * fs[k];
            w.offer((bound - Fs[k]) / std::max(std::abs(bound), 1e-300), {ss[k]});
        }
        rep.entries.push_back(detail::make_entry(
            Hypothesis::f1, np.K0 > 0.0 && w.margin >= -rtol, w,
            "F(s) <= K0 f(s) for sampled s >= " + std::to_string(s0)));
    }

    // (f2): f(s)/s^3 increasing for s > 0 (checked as nondecreasing).
    {
        Worst w;
        double prev = fs[0] / (ss[0] * ss[0] * ss[0]);
        for (std::size_t k = 1; k < ss.size(); ++k) {
            const double cur = fs[k] / (ss[k] * ss[k] * ss[k]);
            w.offer((cur - prev) / std::max(std::abs(prev), 1e-300), {ss[k - 1], ss[k]});
            prev = cur;
        }
        rep.entries.push_back(detail::make_entry(Hypothesis::f2, w.margin >= -rtol, w,
                                                 "f(s)/s^3 nondecreasing on consecutive samples"));
    }

    // (f3): s f(s) exp(-alpha0 s^2) >= beta0 at the top sample, and beta0
    // above the threshold (2 / (alpha0 d^2)) m(4 pi / alpha0).
    {
        Worst w;
        if (!nl.alpha0()) {
            w.offer(-1.0, {ss.back()});
            rep.entries.push_back(detail::make_entry(Hypothesis::f3, false, w,
                                                     "nonlinearity has no critical exponent alpha0"));
        } else {
            const double a = *nl.alpha0();
            const double thr = f3_threshold(coef, a, d);
            const double beta0 = np.beta0.value_or(10.0 * thr);
            rep.beta0 = beta0;
            rep.beta0_threshold = thr;
            const double s = ss.back();
            const double ratio = s * fs.back() / std::exp(a * s * s);
            const double limit_slack = ratio / (beta0 * (1.0 - spec.limit_tol)) - 1.0;
            const double beta_slack = (beta0 - thr) / thr;
            w.offer(limit_slack, {s});
            if (beta_slack <= 0.0) w.offer(beta_slack, {s});
            const bool ok = limit_slack >= 0.0 && beta_slack > 0.0;
            rep.entries.push_back(detail::make_entry(
                Hypothesis::f3, ok, w,
                "s f(s) exp(-alpha0 s^2) = " + std::to_string(ratio) + " at s=" + std::to_string(s) +
                    "; beta0=" + std::to_string(beta0) + " vs threshold " + std::to_string(thr),
                true));
        }
    }

    // (AR-theta): theta F <= s f beyond some R_theta.
    {
        Worst w;
        std::optional<std::size_t> first_good;
        for (std::size_t k = ss.size(); k-- > 0;) {
            const double lhs = rep.theta * Fs[k];
            const double rhs = ss[k] * fs[k];
            if (lhs <= rhs * (1.0 + rtol)) {
                first_good = k;
                w.offer((rhs - lhs) / std::max(rhs, 1e-300), {ss[k]});
            } else {
                if (!first_good) w.offer((rhs - lhs) / std::max(lhs, 1e-300), {ss[k]});
                break;
            }
        }
        const bool ok = first_good.has_value();
        if (ok) rep.r_theta = ss[*first_good];
        rep.entries.push_back(detail::make_entry(
            Hypothesis::ar_theta, ok, w,
            ok ? "theta F <= s f for sampled s >= R_theta = " + std::to_string(ss[*first_good])
               : "theta F > s f at the largest sample"));
    }

    // (origin-limit): f(s)/s^mu -> 0 for mu < 3, read off the local exponent
    // of f at the two smallest samples.
    {
        Worst w;
        bool ok;
        if (fs[0] == 0.0) {
            ok = true;
            w.offer(0.0, {ss[0]});
        } else {
            const double kappa = std::log(fs[1] / fs[0]) / std::log(ss[1] / ss[0]);
            w.offer(kappa / (3.0 * (1.0 - spec.limit_tol)) - 1.0, {ss[0]});
            ok = kappa >= 3.0 * (1.0 - spec.limit_tol);
        }
        rep.entries.push_back(detail::make_entry(Hypothesis::origin_limit, ok, w,
                                                 "local exponent of f near 0 at least 3", true));
    }
    return rep;
}

}  // namespace kirchhoff
