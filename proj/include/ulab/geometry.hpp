#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ulab/bessel.hpp"
#include "ulab/fft.hpp"
#include "ulab/parallel.hpp"
#include "ulab/quadrature.hpp"
#include "ulab/weights.hpp"

namespace ulab {

// Radial function on R^n represented by its real profile on [0, r_max];
// evaluation at x is profile(|x|).
struct RadialFunctionND {
    int n = 1;
    SampledFunction1D profile; // grid origin 0
    double support_radius = 0.0;
    double leakage = 0.0; // relative radial L2 mass beyond support_radius

    double r_max() const { return profile.grid.point(profile.grid.count - 1); }
};

namespace detail {

// 6-point Lagrange interpolation on the uniform profile grid, zero beyond
// the last node.
inline double profile_at(const SampledFunction1D& prof, double r) {
    const double h = prof.grid.step;
    const std::size_t n = prof.grid.count;
    if (r < 0.0) r = -r;
    const double u = (r - prof.grid.origin) / h;
    if (u >= static_cast<double>(n - 1)) return 0.0;
    long base = static_cast<long>(std::floor(u)) - 2;
    base = std::max<long>(0, std::min<long>(base, static_cast<long>(n) - 6));
    double result = 0.0;
    for (int a = 0; a < 6; ++a) {
        const long ia = base + a;
        double w = 1.0;
        for (int b = 0; b < 6; ++b) {
            if (a == b) continue;
            w *= (u - static_cast<double>(base + b)) / static_cast<double>(a - b);
        }
        result += w * prof.values[static_cast<std::size_t>(ia)].real();
    }
    return result;
}

// Half-line Bessel-kernel integral int_0^smax g(s) J_nu(2 pi q s) s^{n/2} ds
// over uniform samples of g. The trapezoid sum is spectrally accurate for
// these integrands (their spectrum stays inside the band when the grid
// extent covers support + evaluation radius); the only surviving
// Euler-Maclaurin boundary term is the s=0 slope, nonzero exactly when
// n = 2, and is added analytically.
inline double bessel_moment(const std::vector<double>& g, double h, int n, double q,
                            double g0) {
    const std::size_t m = g.size();
    const double nu = 0.5 * n - 1.0;
    double acc = 0.0;
    if (q == 0.0) {
        for (std::size_t i = 1; i < m; ++i) {
            const double s = static_cast<double>(i) * h;
            acc += g[i] * std::pow(s, n - 1);
        }
        acc *= h;
    } else {
        for (std::size_t i = 1; i < m; ++i) {
            const double s = static_cast<double>(i) * h;
            acc += g[i] * bessel_j(nu, 2.0 * pi * q * s) * std::pow(s, 0.5 * n);
        }
        acc *= h;
    }
    if (n == 2) acc += h * h / 12.0 * g0; // slope of g(s) J_0 s at s = 0
    return acc;
}

} // namespace detail

// Forward transform of a radial profile: the radial profile of the
// n-dimensional Fourier transform, via the Bessel-kernel integral
//   F(lambda) = 2 pi lambda^{(2-n)/2} int_0^inf f(rho) J_{n/2-1}(2 pi lambda rho) rho^{n/2} drho,
// with the lambda = 0 limit handled by the plain sphere-weighted moment.
inline double hankel_forward(const SampledFunction1D& prof, int n, double lambda) {
    const double h = prof.grid.step;
    const std::size_t m = prof.grid.count;
    std::vector<double> g(m);
    for (std::size_t i = 0; i < m; ++i) g[i] = prof.values[i].real();
    if (lambda == 0.0) return sphere_area(n) * detail::bessel_moment(g, h, n, 0.0, g[0]);
    return 2.0 * pi * std::pow(lambda, 1.0 - 0.5 * n) *
           detail::bessel_moment(g, h, n, lambda, g[0]);
}

// Lift an even compactly supported 1D function to the radial function on R^n
// whose n-dimensional Fourier transform has radial profile equal to the 1D
// spectrum of g. For n = 1 this is the identity. The profile is computed by
// the inverse Bessel-kernel integral over the dual band of g's grid.
inline RadialFunctionND radial_extend(const SampledFunction1D& g, int n) {
    g.check_consistent();
    if (n < 1) throw ConfigError("radial_extend: dimension must be >= 1");
    if (!g.grid.pow2_count() || !g.grid.centered())
        throw ConfigError("radial_extend: centered power-of-two grid required");
    const std::size_t N = g.grid.count;
    const double peak = sup_abs(g.values);
    for (std::size_t i = 1; i < N; ++i) {
        if (std::abs(g.values[i] - g.values[N - i]) > 1e-10 * peak)
            throw PreconditionError("radial_extend: input is not even to tolerance");
    }

    Interval supp = g.support_hint ? *g.support_hint : measured_support(g);
    const double declared_r = std::max(std::abs(supp.lo), std::abs(supp.hi));

    // the profile stops a margin beyond the support: the trapezoid sums stay
    // spectrally accurate while grid extent >= support + evaluation radius
    const double r_cap =
        std::min(0.5 * g.grid.extent(), declared_r + std::max(0.25 * declared_r, 16.0 * g.grid.step));
    std::size_t prof_count = static_cast<std::size_t>(std::ceil(r_cap / g.grid.step)) + 1;
    prof_count = std::min(prof_count, N / 2);

    RadialFunctionND out;
    out.n = n;
    out.profile.grid = Grid1D{0.0, g.grid.step, prof_count};
    out.profile.values.resize(prof_count);

    if (n == 1) {
        for (std::size_t j = 0; j < prof_count; ++j) out.profile.values[j] = g.values[N / 2 + j];
    } else {
        // For even n the boundary-correction ladder of the half-line
        // trapezoid sum runs in powers of (2 pi rho * ds); zero-pad the
        // compactly supported input so the dual spacing ds keeps that
        // parameter small across the whole profile range.
        SampledFunction1D padded = g;
        if (n % 2 == 0) {
            std::size_t pad = 1;
            while (2.0 * pi * r_cap * (1.0 / (g.grid.extent() * pad)) > 0.15 && pad < 16)
                pad <<= 1;
            if (pad > 1) {
                padded.grid = Grid1D{-0.5 * g.grid.extent() * pad, g.grid.step, N * pad};
                padded.values.assign(N * pad, cplx(0.0));
                const std::size_t off = (N * pad - N) / 2;
                for (std::size_t i = 0; i < N; ++i) padded.values[off + i] = g.values[i];
            }
        }
        auto G = fourier_1d(padded, FourierSign::forward);
        // spectrum of a real even function is real even; keep the real part
        const std::size_t half = G.grid.count / 2;
        std::vector<double> spec(half);
        const double ds = G.grid.step;
        for (std::size_t i = 0; i < half; ++i) spec[i] = G.values[half + i].real();
        parallel_for(prof_count, [&](std::size_t j) {
            const double rho = out.profile.grid.point(j);
            const double moment = detail::bessel_moment(spec, ds, n, rho, spec[0]);
            out.profile.values[j] = rho == 0.0
                                        ? sphere_area(n) * moment
                                        : 2.0 * pi * std::pow(rho, 1.0 - 0.5 * n) * moment;
        });
    }

    // measured support radius and leakage in the n-dimensional L2 sense
    double total = 0.0, outside = 0.0;
    for (std::size_t j = 0; j < out.profile.values.size(); ++j) {
        const double rho = out.profile.grid.point(j);
        const double m2 = std::norm(out.profile.values[j]) * std::pow(rho, n - 1);
        total += m2;
        if (rho > declared_r + 2.0 * g.grid.step) outside += m2;
    }
    out.leakage = total > 0.0 ? outside / total : 0.0;
    out.support_radius = declared_r + 2.0 * g.grid.step;
    return out;
}

// Hyperplane integral of a radial function at signed distance t: the
// hyperplane {x . omega = t} meets the radial level sets in (n-2)-spheres,
// which reduces the integral to
//   sphere_area(n-1) * int_0^smax f(sqrt(t^2 + s^2)) s^{n-2} ds.
// Even in t by construction; exactly 0 beyond the profile range.
inline double radon_radial(const RadialFunctionND& f, double t) {
    const double at = std::abs(t);
    const double rmax = f.r_max();
    if (at >= rmax) return 0.0;
    if (f.n == 1) return detail::profile_at(f.profile, at);
    const double smax = std::sqrt(rmax * rmax - at * at);
    const double area = sphere_area(f.n - 1);
    auto integrand = [&](double s) {
        const double r = std::hypot(at, s);
        const double v = detail::profile_at(f.profile, r);
        return f.n == 2 ? v : v * std::pow(s, f.n - 2);
    };
    auto q = integrate_adaptive(integrand, 0.0, smax, 1e-11, 6000);
    return area * q.value;
}

struct SliceProjectionReport {
    std::vector<double> lambdas;
    std::vector<double> lhs; // n-dimensional spectrum along a ray
    std::vector<double> rhs; // 1D spectrum of the hyperplane-integral profile
    double max_rel_error = 0.0; // sup-normalized over the sample set
};

// Both sides of the slice projection identity computed independently: the
// left by the Bessel-kernel transform of the radial profile, the right by a
// direct cosine transform of the hyperplane integrals. The reported error is
// sup-normalized over the lambda samples (the spectra decay below roundoff
// within the band, where pointwise relative error is meaningless).
inline SliceProjectionReport slice_projection_check(const RadialFunctionND& f,
                                                    const std::vector<double>& lambdas) {
    SliceProjectionReport rep;
    rep.lambdas = lambdas;
    rep.lhs.resize(lambdas.size());
    rep.rhs.resize(lambdas.size());

    // hyperplane-integral profile on a symmetric grid
    const double rmax = f.r_max();
    const std::size_t m = f.profile.grid.count;
    const double h = f.profile.grid.step;
    std::vector<double> radon(2 * m, 0.0);
    parallel_for(m, [&](std::size_t j) {
        const double val = radon_radial(f, f.profile.grid.point(j));
        radon[m + j] = val;
        if (j > 0) radon[m - j] = val; // even in t
    });

    parallel_for(lambdas.size(), [&](std::size_t q) {
        const double lam = lambdas[q];
        rep.lhs[q] = hankel_forward(f.profile, f.n, lam);
        double acc = 0.0;
        for (std::size_t i = 0; i < 2 * m; ++i) {
            const double t = (static_cast<double>(i) - static_cast<double>(m)) * h;
            acc += radon[i] * std::cos(2.0 * pi * t * lam);
        }
        rep.rhs[q] = acc * h;
    });

    double sup = 0.0, diff = 0.0;
    for (std::size_t q = 0; q < lambdas.size(); ++q) {
        sup = std::max({sup, std::abs(rep.lhs[q]), std::abs(rep.rhs[q])});
        diff = std::max(diff, std::abs(rep.lhs[q] - rep.rhs[q]));
    }
    rep.max_rel_error = sup > 0.0 ? diff / sup : 0.0;
    return rep;
}

} // namespace ulab
