#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "ulab/fft.hpp"
#include "ulab/weights.hpp"

namespace ulab {

inline double sinc(double z) {
    if (std::abs(z) < 1e-6) {
        const double z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sin(z) / z;
}

// Plan for a compactly supported function with prescribed spectral decay:
// widths of the indicator factors, nonincreasing and summing to the total
// support radius.
struct InghamPlan {
    std::vector<double> widths; // a_k
    double total_support = 0.0; // l
    WeightFunction weight;
    double tail_slack = 0.0; // dyadic tail beyond K in the same normalization
};

// Dyadic width scheme a_k = l * theta(2^k) / S_K with S_K = sum_{j<=K} theta(2^j).
// For decreasing theta the log-weighted integral converges iff the dyadic sum
// does, so a convergent weight yields widths that are summable at every K with
// a quantifiable tail; the tail beyond K is reported as support slack.
inline InghamPlan ingham_widths(const WeightFunction& theta, double l, int K) {
    if (!(l > 0.0)) throw ConfigError("ingham_widths: l must be positive");
    if (K < 1) throw ConfigError("ingham_widths: K must be at least 1");
    auto cls = ingham_integral_test(theta, 1);
    if (!cls.convergent())
        throw PreconditionError(
            "ingham_widths: weight '" + theta.name +
            "' fails the log-weighted integral test; no compactly supported function with that "
            "spectral decay exists, so the construction refuses");

    InghamPlan plan;
    plan.total_support = l;
    plan.weight = theta;
    plan.widths.resize(static_cast<std::size_t>(K));
    double s = 0.0;
    for (int k = 1; k <= K; ++k) {
        const double w = theta.eval(std::pow(2.0, k));
        plan.widths[static_cast<std::size_t>(k - 1)] = w;
        s += w;
    }
    if (!(s > 0.0)) throw PreconditionError("ingham_widths: weight vanishes on the dyadic grid");
    for (auto& a : plan.widths) a *= l / s;

    double tail = 0.0;
    for (int k = K + 1; k <= K + 512; ++k) {
        const double w = theta.eval(std::pow(2.0, k));
        tail += w;
        if (w < 1e-18 * s) break;
    }
    plan.tail_slack = l * tail / s;
    return plan;
}

// Constructs the normalized-indicator convolution product by sampling its
// exact spectrum, the product of sinc factors, on the dual grid and
// transforming back. The measured spectrum of the output therefore matches
// the sinc product to FFT roundoff, and the spatial aliasing is governed by
// the spectrum's decay beyond the band (superpolynomial for K factors).
inline SampledFunction1D ingham_construct(const InghamPlan& plan, const Grid1D& grid) {
    if (!grid.pow2_count()) throw ConfigError("ingham_construct: grid count must be a power of two");
    if (!grid.centered()) throw ConfigError("ingham_construct: grid must be centered");
    const double a_min = plan.widths.back();
    if (grid.step > a_min / 8.0)
        throw ConfigError("ingham_construct: grid under-resolves the smallest width (need step <= a_K/8)");
    if (grid.extent() < 2.0 * plan.total_support)
        throw ConfigError("ingham_construct: grid extent must be at least 2l");

    const Grid1D dual = dual_grid(grid);
    SampledFunction1D spectrum;
    spectrum.grid = dual;
    spectrum.values.resize(dual.count);
    for (std::size_t m = 0; m < dual.count; ++m) {
        const double xi = dual.point(m);
        double prod = 1.0;
        for (double a : plan.widths) prod *= sinc(2.0 * pi * a * xi);
        spectrum.values[m] = prod;
    }

    SampledFunction1D f = fourier_1d(spectrum, FourierSign::inverse);
    double peak = sup_abs(f.values);
    double imag_max = 0.0;
    for (const auto& v : f.values) imag_max = std::max(imag_max, std::abs(v.imag()));
    if (imag_max > 1e-12 * peak)
        throw InternalError("ingham_construct: output not real to tolerance");
    for (auto& v : f.values) v = cplx(v.real(), 0.0);

    const double support = std::accumulate(plan.widths.begin(), plan.widths.end(), 0.0);
    f.support_hint = Interval{-support, support};
    return f;
}

namespace detail {

// Embed a sampled function into the centered power-of-two grid with the same
// step by an exact integer index shift.
inline SampledFunction1D recenter(const SampledFunction1D& f) {
    const std::size_t n = f.grid.count;
    Grid1D target;
    target.count = n;
    target.step = f.grid.step;
    target.origin = -0.5 * static_cast<double>(n) * f.grid.step;
    const double shift_cells = (f.grid.origin - target.origin) / f.grid.step;
    const long s = std::lround(shift_cells);
    if (std::abs(shift_cells - static_cast<double>(s)) > 1e-6)
        throw ConfigError("recenter: grid origin is not commensurate with the step");
    SampledFunction1D out;
    out.grid = target;
    out.values.assign(n, cplx(0.0));
    for (std::size_t i = 0; i < n; ++i) {
        const long j = static_cast<long>(i) + s;
        if (j >= 0 && j < static_cast<long>(n)) out.values[static_cast<std::size_t>(j)] = f.values[i];
    }
    out.support_hint = f.support_hint;
    return out;
}

} // namespace detail

// Convolve with a smooth factor and symmetrize about the origin:
// (g(x) + g(-x)) / 2 on a centered grid. Supports must each fit inside
// [-l/4, l/4] so the output sits strictly inside (-l, l).
inline SampledFunction1D smooth_and_symmetrize(const SampledFunction1D& g1,
                                               const SampledFunction1D& phi, double l) {
    auto check_support = [l](const SampledFunction1D& h, const char* who) {
        Interval s = h.support_hint ? *h.support_hint : measured_support(h);
        if (s.lo < -l / 4.0 - 1e-12 || s.hi > l / 4.0 + 1e-12)
            throw PreconditionError(std::string("smooth_and_symmetrize: support of ") + who +
                                    " exceeds [-l/4, l/4]");
    };
    check_support(g1, "g1");
    check_support(phi, "phi");

    SampledFunction1D conv = detail::recenter(convolve(g1, phi));
    const std::size_t n = conv.grid.count;
    SampledFunction1D out;
    out.grid = conv.grid;
    out.values.resize(n);
    out.values[0] = 0.5 * conv.values[0];
    for (std::size_t i = 1; i < n; ++i)
        out.values[i] = 0.5 * (conv.values[i] + conv.values[n - i]);
    out.support_hint = Interval{-l / 2.0, l / 2.0};

    const double g1n = l2_norm(g1), phin = l2_norm(phi);
    if (l2_norm(out) < 1e-6 * g1n * phin)
        throw ConfigError("smooth_and_symmetrize: symmetrization annihilated the input; translate "
                          "the factors first");
    return out;
}

struct PwConstructResult {
    SampledFunction1D f;
    double forbidden_mass = 0.0; // relative L2 mass on x > x0 after translation
    double boundary = 0.0;       // measured 1e-3 mass boundary before translation
    double taper_fraction = 0.0;
    double interior_cut = 0.0;   // |xi| <= interior_cut has |spectrum| = e^-psi exactly
};

// Half-line construction with prescribed spectral modulus e^{-psi}: the
// spectrum is exp(-psi + i H[-psi]) with the Hilbert phase realized by the
// one-sided discrete analytic signal, so the inverse transform concentrates
// on x <= 0 up to discretization leakage. The log-modulus is eased to a
// constant over the outer taper fraction of the band (cosine blend), which
// keeps the periodized sequence smooth at the band edge without touching the
// modulus on the interior.
inline PwConstructResult pw_halfline_construct(const WeightFunction& psi, const Grid1D& grid,
                                               double x0 = 0.0, double taper = 0.05) {
    if (!grid.pow2_count() || grid.count < 16)
        throw ConfigError("pw_halfline_construct: grid count must be a power of two (>= 16)");
    if (!grid.centered()) throw ConfigError("pw_halfline_construct: grid must be centered");
    if (!(taper > 0.0 && taper < 0.5)) throw ConfigError("pw_halfline_construct: bad taper");
    auto cls = pw_integral_test(psi);
    if (!cls.convergent())
        throw PreconditionError(
            "pw_halfline_construct: weight '" + psi.name +
            "' fails the quadratic-weight integral test; no nonzero half-line supported function "
            "with that spectral decay exists, so the construction refuses");

    const std::size_t n = grid.count;
    const Grid1D dual = dual_grid(grid);
    const double xi_max = -dual.origin; // band half-width
    const double xi_ts = (1.0 - taper) * xi_max;
    if (psi.eval(xi_ts) > 700.0)
        throw ConfigError("pw_halfline_construct: psi exceeds the Nyquist decay budget "
                          "(e^-psi underflows inside the band)");

    // log-modulus with the edge blend
    std::vector<cplx> u(n);
    const double psi_ts = psi.eval(xi_ts);
    for (std::size_t m = 0; m < n; ++m) {
        const double axi = std::abs(dual.point(m));
        double val;
        if (axi <= xi_ts) {
            val = -psi.eval(axi);
        } else {
            const double w = 0.5 * (1.0 + std::cos(pi * (axi - xi_ts) / (xi_max - xi_ts)));
            val = -(psi_ts + (psi.eval(axi) - psi_ts) * w);
        }
        u[m] = val;
    }

    // one-sided analytic signal over the frequency index
    std::vector<cplx> uh = u;
    fft_pow2(uh, -1);
    for (std::size_t k = 0; k < n; ++k) {
        double h;
        if (k == 0 || k == n / 2)
            h = 1.0;
        else if (k < n / 2)
            h = 2.0;
        else
            h = 0.0;
        uh[k] *= h / static_cast<double>(n);
    }
    fft_pow2(uh, +1);

    SampledFunction1D spectrum;
    spectrum.grid = dual;
    spectrum.values.resize(n);
    for (std::size_t m = 0; m < n; ++m) spectrum.values[m] = std::exp(uh[m]);

    SampledFunction1D f = fourier_1d(spectrum, FourierSign::inverse);

    // measured 1e-3 mass boundary, scanned from the right
    double total = 0.0;
    for (const auto& v : f.values) total += std::norm(v);
    double acc = 0.0;
    std::size_t b_idx = n - 1;
    for (std::size_t i = n; i-- > 0;) {
        acc += std::norm(f.values[i]);
        if (acc > 1e-3 * total) {
            b_idx = i;
            break;
        }
    }
    const double boundary = f.grid.point(b_idx);

    // translate so the measured boundary sits at (or just left of) x0. The
    // shift is cyclic: a circular shift multiplies the spectrum by a unit
    // phase, so the modulus guarantee survives exactly, and the wrapped far
    // tail stays part of the periodized function instead of being clipped.
    const long s = static_cast<long>(std::floor((x0 - boundary) / f.grid.step));
    SampledFunction1D shifted;
    shifted.grid = f.grid;
    shifted.values.assign(n, cplx(0.0));
    for (std::size_t i = 0; i < n; ++i) {
        const long j = (static_cast<long>(i) + s % static_cast<long>(n) +
                        static_cast<long>(n)) % static_cast<long>(n);
        shifted.values[static_cast<std::size_t>(j)] = f.values[i];
    }
    shifted.support_hint = Interval{shifted.grid.origin, x0};

    double fm = 0.0, tot2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double m2 = std::norm(shifted.values[i]);
        tot2 += m2;
        if (shifted.grid.point(i) > x0) fm += m2;
    }

    PwConstructResult r;
    r.f = std::move(shifted);
    r.forbidden_mass = tot2 > 0.0 ? fm / tot2 : 0.0;
    r.boundary = boundary;
    r.taper_fraction = taper;
    r.interior_cut = xi_ts;
    return r;
}

struct PoissonCounterexampleResult {
    SampledFunctionND F;            // F(x,y) = f(x) p(y)
    SampledFunction1D half_line;    // the x factor
    SampledFunction1D kernel;       // the periodized Poisson kernel factor
    double kernel_truncation = 0.0; // wrapped kernel tail mass = 1 - (2/pi) atan(Y)
    double kernel_mass = 0.0;       // grid integral of the kernel factor
};

// Separable half-plane-supported function with spectral envelope
// exp(-(sqrt|u| + 2 pi |v|)): square-root factor in x from the half-line
// construction, Poisson kernel factor in y built spectrally so its measured
// spectrum is exp(-2 pi |v|) to roundoff. The envelope profile is not radial
// and its quadratic-weight radial integral diverges, yet the function is
// nonzero: the audit side must report exactly that combination.
inline PoissonCounterexampleResult poisson_counterexample(double x0, const Grid1D& gx,
                                                          const Grid1D& gy,
                                                          double truncation_budget = 0.02) {
    const double half_extent = 0.5 * gy.extent();
    const double trunc = 1.0 - (2.0 / pi) * std::atan(half_extent);
    if (trunc > truncation_budget)
        throw ConfigError("poisson_counterexample: y-grid does not resolve the kernel tail to the "
                          "declared truncation budget");

    auto pw = pw_halfline_construct(weight_presets::sqrt_growth(), gx, x0);

    const Grid1D dualy = dual_grid(gy);
    SampledFunction1D kernel_spec;
    kernel_spec.grid = dualy;
    kernel_spec.values.resize(dualy.count);
    for (std::size_t m = 0; m < dualy.count; ++m)
        kernel_spec.values[m] = std::exp(-2.0 * pi * std::abs(dualy.point(m)));
    SampledFunction1D p = fourier_1d(kernel_spec, FourierSign::inverse);
    for (auto& v : p.values) v = cplx(v.real(), 0.0);

    PoissonCounterexampleResult r;
    r.kernel_truncation = trunc;
    r.half_line = pw.f;
    double km = 0.0;
    for (const auto& v : p.values) km += v.real();
    r.kernel_mass = km * p.grid.step;
    r.kernel = p;

    r.F.axes = {gx, gy};
    r.F.values.resize(gx.count * gy.count);
    for (std::size_t i = 0; i < gx.count; ++i)
        for (std::size_t j = 0; j < gy.count; ++j)
            r.F.values[i * gy.count + j] = pw.f.values[i] * p.values[j];
    r.F.support_box = std::vector<Interval>{Interval{gx.origin, x0},
                                            Interval{gy.origin, gy.point(gy.count - 1)}};
    return r;
}

} // namespace ulab
