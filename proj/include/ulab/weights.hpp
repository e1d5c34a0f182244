#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "ulab/errors.hpp"
#include "ulab/quadrature.hpp"
#include "ulab/reduce.hpp"

namespace ulab {

enum class Monotonicity { decreasing, nondecreasing, none };

// Radial weight profile r >= 0 -> value >= 0, with monotonicity metadata and
// (for presets / tabulated-with-envelope weights) analytic upper bounds for
// the two tail integrals the classifiers need. A bound returns +inf when it
// cannot close.
struct WeightFunction {
    std::string name;
    std::function<double(double)> eval;
    Monotonicity monotonicity = Monotonicity::none;
    bool decays_to_zero = false;
    std::function<double(double)> tail_log_weighted; // bound for integral_T^inf w(t)/t dt
    std::function<double(double)> tail_sq_weighted;  // bound for integral_T^inf w(t)/(1+t^2) dt

    double operator()(double r) const { return eval(r); }
};

enum class IntegralVerdict { convergent, divergent };

struct Classification {
    IntegralVerdict verdict = IntegralVerdict::convergent;
    double value_or_rate = 0.0; // finite value, or measured growth rate
    double error_bound = 0.0;
    std::string evidence;

    bool convergent() const { return verdict == IntegralVerdict::convergent; }
};

// Surface area of the unit sphere S^{m-1} in R^m (2 for m=1, 2*pi for m=2).
inline double sphere_area(int m) {
    if (m < 1) throw ConfigError("sphere_area: dimension must be >= 1");
    constexpr double kPi = 3.14159265358979323846;
    return 2.0 * std::pow(kPi, 0.5 * m) / std::tgamma(0.5 * m);
}

namespace weight_presets {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline WeightFunction zero() {
    WeightFunction w;
    w.name = "zero";
    w.eval = [](double) { return 0.0; };
    w.monotonicity = Monotonicity::decreasing;
    w.decays_to_zero = true;
    w.tail_log_weighted = [](double) { return 0.0; };
    w.tail_sq_weighted = [](double) { return 0.0; };
    return w;
}

inline WeightFunction constant(double c) {
    if (c < 0.0) throw ConfigError("constant weight must be nonnegative");
    WeightFunction w;
    w.name = "const:" + std::to_string(c);
    w.eval = [c](double) { return c; };
    w.monotonicity = Monotonicity::decreasing; // nonincreasing
    w.decays_to_zero = (c == 0.0);
    w.tail_log_weighted = [c](double) { return c > 0.0 ? kInf : 0.0; };
    w.tail_sq_weighted = [c](double T) { return c * 2.0 / T; }; // c*int_T 1/t^2 < c*pi/2-arctan..
    return w;
}

// (log(e + r))^(-alpha)
inline WeightFunction log_pow(double alpha) {
    if (!(alpha > 0.0)) throw ConfigError("log_pow: alpha must be positive");
    WeightFunction w;
    w.name = "log_pow:" + std::to_string(alpha);
    w.eval = [alpha](double r) { return std::pow(std::log(std::exp(1.0) + r), -alpha); };
    w.monotonicity = Monotonicity::decreasing;
    w.decays_to_zero = true;
    w.tail_log_weighted = [alpha](double T) {
        // w(t) <= (log t)^(-alpha) for t >= 1, so the tail is bounded by
        // (log T)^(1-alpha)/(alpha-1) when alpha > 1.
        if (alpha <= 1.0) return kInf;
        return std::pow(std::log(T), 1.0 - alpha) / (alpha - 1.0);
    };
    w.tail_sq_weighted = [](double T) { return 2.0 / std::sqrt(T); }; // w <= 1, crude but closes
    return w;
}

// [log(e+r) * (log log(e^e + r))^beta]^(-1)
inline WeightFunction log_loglog_pow(double beta) {
    WeightFunction w;
    w.name = "log_loglog_pow:" + std::to_string(beta);
    w.eval = [beta](double r) {
        const double l = std::log(std::exp(1.0) + r);
        const double ll = std::log(std::log(std::exp(std::exp(1.0)) + r));
        return 1.0 / (l * std::pow(ll, beta));
    };
    w.monotonicity = Monotonicity::decreasing;
    w.decays_to_zero = true;
    w.tail_log_weighted = [beta](double T) {
        if (beta <= 1.0) return kInf;
        const double llT = std::log(std::log(T));
        return std::pow(llT, 1.0 - beta) / (beta - 1.0);
    };
    w.tail_sq_weighted = [](double T) { return 2.0 / std::sqrt(T); };
    return w;
}

// (1 + r)^(-alpha)
inline WeightFunction inv_pow(double alpha) {
    if (!(alpha > 0.0)) throw ConfigError("inv_pow: alpha must be positive");
    WeightFunction w;
    w.name = "inv_pow:" + std::to_string(alpha);
    w.eval = [alpha](double r) { return std::pow(1.0 + r, -alpha); };
    w.monotonicity = Monotonicity::decreasing;
    w.decays_to_zero = true;
    w.tail_log_weighted = [alpha](double T) { return std::pow(T, -alpha) / alpha; };
    w.tail_sq_weighted = [](double T) { return 1.0 / T; };
    return w;
}

// 4 / sqrt(r + 1): auxiliary square-root profile with a finite log-weighted
// integral.
inline WeightFunction aux_inv_sqrt() {
    WeightFunction w = inv_pow(0.5);
    w.name = "aux_inv_sqrt";
    w.eval = [](double r) { return 4.0 / std::sqrt(r + 1.0); };
    w.tail_log_weighted = [](double T) { return 8.0 / std::sqrt(T); };
    w.tail_sq_weighted = [](double T) { return 8.0 / std::pow(T, 1.5) * 2.0; };
    return w;
}

// sqrt(r), the square-root growth profile
inline WeightFunction sqrt_growth() {
    WeightFunction w;
    w.name = "sqrt";
    w.eval = [](double r) { return std::sqrt(r); };
    w.monotonicity = Monotonicity::nondecreasing;
    w.decays_to_zero = false;
    w.tail_log_weighted = [](double) { return kInf; };
    w.tail_sq_weighted = [](double T) { return 2.0 / std::sqrt(T); };
    return w;
}

inline WeightFunction linear_growth() {
    WeightFunction w;
    w.name = "linear";
    w.eval = [](double r) { return r; };
    w.monotonicity = Monotonicity::nondecreasing;
    w.decays_to_zero = false;
    w.tail_log_weighted = [](double) { return kInf; };
    w.tail_sq_weighted = [](double) { return kInf; };
    return w;
}

// 0.5 * log(1 + r^2), the modulus profile of a simple pole
inline WeightFunction half_log_sq() {
    WeightFunction w;
    w.name = "pw_log";
    w.eval = [](double r) { return 0.5 * std::log(1.0 + r * r); };
    w.monotonicity = Monotonicity::nondecreasing;
    w.decays_to_zero = false;
    w.tail_log_weighted = [](double) { return kInf; };
    w.tail_sq_weighted = [](double T) {
        // exact: int_T^inf log(1+t^2)/t^2 dt = log(1+T^2)/T + 2(pi/2 - atan T)
        return 0.5 * (std::log(1.0 + T * T) / T + 2.0 * (0.5 * 3.14159265358979323846 - std::atan(T)));
    };
    return w;
}

// sqrt(r) + 2*pi*r: the non-radial counterexample profile radialized along
// the coordinate directions (divergent).
inline WeightFunction sqrt_plus_linear() {
    WeightFunction w;
    w.name = "sqrt_plus_linear";
    w.eval = [](double r) { return std::sqrt(r) + 2.0 * 3.14159265358979323846 * r; };
    w.monotonicity = Monotonicity::nondecreasing;
    w.decays_to_zero = false;
    w.tail_log_weighted = [](double) { return kInf; };
    w.tail_sq_weighted = [](double) { return kInf; };
    return w;
}

} // namespace weight_presets

// Parse preset names of the CLI form "log_pow:2", "const:0.5", "theta1",
// "sqrt", "linear", "pw_log", "zero", "inv_pow:0.5", "log_loglog_pow:1".
inline WeightFunction parse_weight(const std::string& s) {
    const auto colon = s.find(':');
    const std::string kind = colon == std::string::npos ? s : s.substr(0, colon);
    const double arg = colon == std::string::npos ? 0.0 : std::stod(s.substr(colon + 1));
    if (kind == "zero") return weight_presets::zero();
    if (kind == "const") return weight_presets::constant(colon == std::string::npos ? 1.0 : arg);
    if (kind == "log_pow") return weight_presets::log_pow(arg);
    if (kind == "log_loglog_pow") return weight_presets::log_loglog_pow(arg);
    if (kind == "inv_pow") return weight_presets::inv_pow(arg);
    if (kind == "aux_inv_sqrt") return weight_presets::aux_inv_sqrt();
    if (kind == "sqrt") return weight_presets::sqrt_growth();
    if (kind == "linear") return weight_presets::linear_growth();
    if (kind == "pw_log") return weight_presets::half_log_sq();
    if (kind == "sqrt_plus_linear") return weight_presets::sqrt_plus_linear();
    throw ConfigError("unknown weight preset: " + s);
}

// Spot-check of the declared monotonicity on a log-spaced grid.
inline void check_decreasing(const WeightFunction& w, double r_max = 1e12) {
    if (w.monotonicity != Monotonicity::decreasing)
        throw PreconditionError("weight '" + w.name + "' is not declared decreasing");
    double prev = w.eval(0.0);
    if (prev < 0.0) throw PreconditionError("weight is negative at r=0");
    for (double r = 1.0; r <= r_max; r *= 4.0) {
        const double v = w.eval(r);
        if (v < 0.0) throw PreconditionError("weight is negative at r=" + std::to_string(r));
        if (v > prev * (1.0 + 1e-12) + 1e-300)
            throw PreconditionError("weight '" + w.name + "' increases on its log grid");
        prev = v;
    }
}

struct IntegralTestOptions {
    double t_max = 1e12;
    double quad_tol = 1e-9;
};

// Dichotomy for integral_1^inf theta(t)/t dt (equivalently the radial
// integral over |y| >= 1 of theta(y)/|y|^n, up to the sphere-area factor).
// Convergence is certified by quadrature to t_max plus the weight's declared
// monotone tail bound; divergence is declared when the bound cannot close,
// with the growth of partial integrals fitted over the top decades and
// reported as the rate. This is a documented heuristic: a decreasing weight
// with an over-pessimistic declared envelope is classified divergent.
inline Classification ingham_integral_test(const WeightFunction& theta, int n,
                                           const IntegralTestOptions& opt = {}) {
    check_decreasing(theta);
    if (!theta.tail_log_weighted)
        throw ConfigError("ingham_integral_test: weight lacks a declared tail envelope");

    TailEnvelope env;
    env.bound = [&theta](double t) { return theta.eval(t) / t; };
    env.integral_from = theta.tail_log_weighted;
    env.valid_from = 2.0;
    auto integrand = [&theta](double t) { return theta.eval(t) / t; };
    auto r = integrate_improper(integrand, 1.0, opt.quad_tol, env, opt.t_max);

    const double area = sphere_area(n);
    Classification c;
    std::ostringstream ev;
    if (r.converged) {
        c.verdict = IntegralVerdict::convergent;
        c.value_or_rate = r.value;
        c.error_bound = r.error;
        ev << "quadrature " << r.value << " +/- " << r.error << " (" << r.note << "); R^" << n
           << " radial value = sphere_area(" << n << ") * value = " << area * r.value;
    } else {
        c.verdict = IntegralVerdict::divergent;
        c.value_or_rate = r.growth_rate_logt;
        c.error_bound = std::numeric_limits<double>::infinity();
        ev << "partial integral " << r.value << " at T=" << r.probed_to
           << "; growth vs log T = " << r.growth_rate_logt
           << ", vs log log T = " << r.growth_rate_loglogt << " (" << r.note << ")";
    }
    c.evidence = ev.str();
    return c;
}

// Dichotomy for integral_R psi(t)/(1+t^2) dt (psi even, so twice the
// half-line integral). Same convergence/divergence mechanism with the
// quadratic-weight tail bound.
inline Classification pw_integral_test(const WeightFunction& psi,
                                       const IntegralTestOptions& opt = {}) {
    if (!psi.tail_sq_weighted)
        throw ConfigError("pw_integral_test: weight lacks a declared tail envelope");
    // local integrability probe
    for (double r = 0.0; r <= 4.0; r += 0.5) {
        const double v = psi.eval(r);
        if (!std::isfinite(v) || v < 0.0)
            throw PreconditionError("pw_integral_test: weight not finite/nonnegative at r=" +
                                    std::to_string(r));
    }

    auto head = integrate_adaptive([&psi](double t) { return psi.eval(t) / (1.0 + t * t); }, 0.0,
                                   1.0, opt.quad_tol);
    TailEnvelope env;
    env.bound = [&psi](double t) { return psi.eval(t) / (1.0 + t * t); };
    env.integral_from = psi.tail_sq_weighted;
    env.valid_from = 2.0;
    auto tail = integrate_improper(
        [&psi](double t) { return psi.eval(t) / (1.0 + t * t); }, 1.0, opt.quad_tol, env,
        opt.t_max);

    Classification c;
    std::ostringstream ev;
    if (tail.converged) {
        c.verdict = IntegralVerdict::convergent;
        c.value_or_rate = 2.0 * (head.value + tail.value);
        c.error_bound = 2.0 * (head.error + tail.error);
        ev << "even integral 2*(int_0^inf) = " << c.value_or_rate << " +/- " << c.error_bound
           << " (" << tail.note << ")";
    } else {
        c.verdict = IntegralVerdict::divergent;
        c.value_or_rate = 2.0 * tail.growth_rate_logt;
        c.error_bound = std::numeric_limits<double>::infinity();
        ev << "partial " << 2.0 * (head.value + tail.value) << " at T=" << tail.probed_to
           << "; growth vs log T = " << 2.0 * tail.growth_rate_logt << " (" << tail.note << ")";
    }
    c.evidence = ev.str();
    return c;
}

// Dichotomy for the quartic-argument harmonic sum: sum_k theta(k^4)/k,
// with partial sums to K_max plus integral-test bracketing through the
// substitution t = u^4 (for decreasing theta the sum and
// (1/4) * integral theta(t)/t dt over [K^4, inf) converge together). The
// verdict is cross-checked against ingham_integral_test; a mismatch is
// surfaced in the evidence as an internal-consistency failure.
inline Classification carleman_divergence(const WeightFunction& theta, int k_max,
                                          const IntegralTestOptions& opt = {}) {
    if (k_max < 16) throw ConfigError("carleman_divergence: K_max must be at least 16");
    check_decreasing(theta);
    if (!theta.tail_log_weighted)
        throw ConfigError("carleman_divergence: weight lacks a declared tail envelope");

    const double partial = pairwise_sum<double>(static_cast<std::size_t>(k_max), [&](std::size_t i) {
        const double k = static_cast<double>(i + 1);
        return theta.eval(k * k * k * k) / k;
    });
    const double k4 = std::pow(static_cast<double>(k_max), 4.0);
    const double tail = 0.25 * theta.tail_log_weighted(k4);

    Classification integral = ingham_integral_test(theta, 1, opt);

    Classification c;
    std::ostringstream ev;
    if (std::isfinite(tail)) {
        c.verdict = IntegralVerdict::convergent;
        c.value_or_rate = partial;
        c.error_bound = tail;
        ev << "partial sum to K=" << k_max << " is " << partial << ", tail bracket <= " << tail;
    } else {
        c.verdict = IntegralVerdict::divergent;
        // growth of partial sums against log K over the top octaves
        const int half = k_max / 2;
        const double partial_half =
            pairwise_sum<double>(static_cast<std::size_t>(half), [&](std::size_t i) {
                const double k = static_cast<double>(i + 1);
                return theta.eval(k * k * k * k) / k;
            });
        const double rate =
            (partial - partial_half) / (std::log((double)k_max) - std::log((double)half));
        c.value_or_rate = rate;
        c.error_bound = std::numeric_limits<double>::infinity();
        ev << "partial sum " << partial << " at K=" << k_max << "; growth vs log K = " << rate;
    }
    const bool agrees = (c.verdict == integral.verdict);
    ev << "; integral-test verdict "
       << (integral.convergent() ? "convergent" : "divergent")
       << (agrees ? " (agrees)" : " -- INTERNAL-CONSISTENCY FAILURE");
    c.evidence = ev.str();
    if (!agrees)
        throw InternalError("carleman_divergence: sum and integral verdicts disagree for " +
                            theta.name);
    return c;
}

} // namespace ulab
