#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "ulab/errors.hpp"

namespace ulab {

using RealFn = std::function<double(double)>;

namespace detail {

// 15-point Kronrod / 7-point Gauss pair on [-1, 1].
inline constexpr double gk15_x[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr double gk15_wk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double gk15_wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct PanelResult {
    double value = 0.0;
    double error = 0.0;
};

template <class Fn>
PanelResult gk15_panel(const Fn& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    if (!std::isfinite(fc)) throw DataError("quadrature: integrand returned non-finite value");
    double resk = gk15_wk[7] * fc;
    double resg = gk15_wg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = h * gk15_x[i];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        if (!std::isfinite(f1) || !std::isfinite(f2))
            throw DataError("quadrature: integrand returned non-finite value");
        resk += gk15_wk[i] * (f1 + f2);
        if (i % 2 == 1) resg += gk15_wg[i / 2] * (f1 + f2);
    }
    PanelResult r;
    r.value = resk * h;
    const double diff = std::abs(resk - resg) * std::abs(h);
    // classic rescaled Gauss-Kronrod error heuristic
    r.error = diff > 0.0 ? std::pow(200.0 * diff, 1.5) : 0.0;
    if (r.error < diff) r.error = diff;
    return r;
}

struct IntervalRec {
    double a, b, value, error;
    bool operator<(const IntervalRec& o) const { return error < o.error; }
};

} // namespace detail

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t panels = 0;
};

// Adaptive Gauss-Kronrod integration over a finite interval. Splits the
// worst panel until the summed error estimate is within tolerance; throws
// PrecisionError carrying the partial value when the panel budget runs out.
inline QuadResult integrate_adaptive(const RealFn& f, double a, double b, double tol,
                                     std::size_t max_panels = 4000) {
    if (!(tol > 0.0)) throw ConfigError("integrate_adaptive: tol must be positive");
    if (!std::isfinite(a) || !std::isfinite(b))
        throw ConfigError("integrate_adaptive: endpoints must be finite; declare a tail envelope "
                          "for improper integrals");
    if (a == b) return {0.0, 0.0, 0};

    std::priority_queue<detail::IntervalRec> heap;
    auto first = detail::gk15_panel(f, a, b);
    heap.push({a, b, first.value, first.error});
    double total_value = first.value;
    double total_error = first.error;
    std::size_t panels = 1;

    while (total_error > std::max(tol, 1e-15 * std::abs(total_value)) && panels < max_panels) {
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval exhausted at machine resolution
            heap.push(worst);
            break;
        }
        auto left = detail::gk15_panel(f, worst.a, mid);
        auto right = detail::gk15_panel(f, mid, worst.b);
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push({worst.a, mid, left.value, left.error});
        heap.push({mid, worst.b, right.value, right.error});
        ++panels;
    }

    if (total_error > std::max(tol, 1e-12 * std::abs(total_value)))
        throw PrecisionError("integrate_adaptive: refinement did not converge", total_value,
                             total_error);
    return {total_value, total_error, panels};
}

// Declared monotone tail envelope for improper integrals: bound(t) >= |f(t)|
// for t >= valid_from, and integral_from(T) an upper bound for
// integral_T^inf bound (may return +inf when it cannot close).
struct TailEnvelope {
    RealFn bound;
    RealFn integral_from;
    double valid_from = 1.0;
};

struct ImproperResult {
    double value = 0.0;          // converged: integral estimate; else partial integral
    double error = 0.0;          // quadrature error + tail bound when converged
    bool converged = false;
    double growth_rate_logt = 0.0;    // fitted slope of I(T) against log T (top two decades)
    double growth_rate_loglogt = 0.0; // fitted slope against log log T
    double probed_to = 0.0;
    std::string note;
};

namespace detail {

// Integrate f over [a, b] with the substitution t = e^s, robust for slowly
// decaying integrands over many decades.
inline double log_segment(const RealFn& f, double a, double b, double tol) {
    auto g = [&](double s) {
        const double t = std::exp(s);
        return f(t) * t;
    };
    return integrate_adaptive(g, std::log(a), std::log(b), tol).value;
}

inline std::pair<double, double> fit_slope(const std::vector<double>& x,
                                           const std::vector<double>& y) {
    // least squares y = a + b x; returns (b, a)
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return {0.0, sy / n};
    const double b = (n * sxy - sx * sy) / denom;
    const double a = (sy - b * sx) / n;
    return {b, a};
}

} // namespace detail

// Improper integral over [a, inf). Requires a declared monotone tail
// envelope: with one, the integration range is cut where the envelope bound
// closes under tol; without a closing bound the partial integrals I(T) are
// probed on a log-spaced ladder up to t_max and their growth against log T
// (and log log T) is fitted and reported with converged = false.
inline ImproperResult integrate_improper(const RealFn& f, double a, double tol,
                                         const TailEnvelope& tail, double t_max = 1e12) {
    if (!(tol > 0.0)) throw ConfigError("integrate_improper: tol must be positive");
    if (!(a > 0.0)) throw ConfigError("integrate_improper: requires a > 0");
    if (!tail.bound || !tail.integral_from)
        throw ConfigError("integrate_improper: a monotone tail envelope must be declared");

    // try to close the tail bound
    double cut = std::max(a, tail.valid_from);
    double bound = tail.integral_from(cut);
    while (std::isfinite(bound) && bound > 0.5 * tol && cut < t_max) {
        cut = std::min(cut * 4.0, t_max);
        bound = tail.integral_from(cut);
    }

    if (std::isfinite(bound)) {
        // bound is finite: integral converges under the declared envelope,
        // even when the bound is still larger than tol at t_max (slowly
        // closing tails); the residual enters the reported error.
        double value = 0.0, err = 0.0;
        const double b0 = std::min(cut, std::max(a * 2.0, 2.0));
        auto head = integrate_adaptive(f, a, b0, tol * 0.25);
        value += head.value;
        err += head.error;
        if (cut > b0) {
            value += detail::log_segment(f, b0, cut, tol * 0.25);
            err += tol * 0.25;
        }
        ImproperResult r;
        r.value = value;
        r.error = err + bound;
        r.converged = true;
        r.probed_to = cut;
        r.note = "tail bound closed at T=" + std::to_string(cut);
        return r;
    }

    // bound cannot close: probe partial integrals on a decade ladder
    std::vector<double> logT, loglogT, partials;
    double total = integrate_adaptive(f, a, std::max(2.0 * a, 2.0), tol).value;
    double lo = std::max(2.0 * a, 2.0);
    for (double hi = 10.0 * lo; hi <= t_max * 1.0000001; hi *= 10.0) {
        total += detail::log_segment(f, lo, hi, tol);
        logT.push_back(std::log(hi));
        loglogT.push_back(std::log(std::log(hi)));
        partials.push_back(total);
        lo = hi;
    }
    // fit over the top two decades
    std::size_t take = std::min<std::size_t>(3, partials.size());
    std::vector<double> xs(logT.end() - take, logT.end());
    std::vector<double> xs2(loglogT.end() - take, loglogT.end());
    std::vector<double> ys(partials.end() - take, partials.end());
    ImproperResult r;
    r.value = total;
    r.error = std::numeric_limits<double>::infinity();
    r.converged = false;
    r.growth_rate_logt = detail::fit_slope(xs, ys).first;
    r.growth_rate_loglogt = detail::fit_slope(xs2, ys).first;
    r.probed_to = lo;
    r.note = "tail bound did not close by T=" + std::to_string(lo);
    return r;
}

} // namespace ulab
