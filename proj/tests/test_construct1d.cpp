#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include "ulab/construct1d.hpp"

using namespace ulab;

namespace {

// indicator (1/(2a)) 1_[-a,a] sampled with half-weight endpoints (trapezoid
// exact when a is a multiple of the step)
SampledFunction1D normalized_indicator(const Grid1D& g, double a) {
    SampledFunction1D f;
    f.grid = g;
    f.values.resize(g.count);
    for (std::size_t i = 0; i < g.count; ++i) {
        const double x = g.point(i);
        double v = 0.0;
        if (std::abs(x) < a - 1e-12)
            v = 1.0;
        else if (std::abs(std::abs(x) - a) <= 1e-12)
            v = 0.5;
        f.values[i] = v / (2.0 * a);
    }
    f.support_hint = Interval{-a, a};
    return f;
}

} // namespace

TEST_CASE("ingham_widths: dyadic scheme, normalization, refusal") {
    auto theta = weight_presets::log_pow(2.0);
    auto plan = ingham_widths(theta, 1.0, 4);
    REQUIRE(plan.widths.size() == 4);
    double s = std::accumulate(plan.widths.begin(), plan.widths.end(), 0.0);
    REQUIRE(s == Catch::Approx(1.0).epsilon(1e-14));
    // proportional to theta(2^k)
    const double ratio = plan.widths[0] / theta.eval(2.0);
    for (int k = 1; k <= 4; ++k)
        REQUIRE(plan.widths[k - 1] == Catch::Approx(ratio * theta.eval(std::pow(2.0, k))));
    // nonincreasing
    for (std::size_t k = 1; k < plan.widths.size(); ++k)
        REQUIRE(plan.widths[k] <= plan.widths[k - 1] + 1e-15);

    auto single = ingham_widths(theta, 0.7, 1);
    REQUIRE(single.widths[0] == Catch::Approx(0.7));

    REQUIRE_THROWS_AS(ingham_widths(weight_presets::constant(1.0), 1.0, 4), PreconditionError);
}

TEST_CASE("ingham_construct: single factor is the normalized indicator with sinc spectrum") {
    InghamPlan plan;
    plan.widths = {0.5};
    plan.total_support = 0.5;
    plan.weight = weight_presets::log_pow(2.0);
    Grid1D g = centered_grid(4.0, 4096);
    auto f = ingham_construct(plan, g);

    // measured spectrum equals the sinc factor at every dual node (sup-normalized)
    auto F = fourier_1d(f, FourierSign::forward);
    double worst = 0.0;
    for (std::size_t m = 0; m < F.values.size(); ++m) {
        const double xi = F.grid.point(m);
        worst = std::max(worst, std::abs(F.values[m] - cplx(sinc(2.0 * pi * 0.5 * xi))));
    }
    REQUIRE(worst <= 1e-8);

    // total mass 1
    cplx mass(0.0);
    for (const auto& v : f.values) mass += v;
    REQUIRE(std::abs(mass * g.step - cplx(1.0)) <= 1e-10);
}

TEST_CASE("ingham_construct: two factors against the direct convolution oracle") {
    InghamPlan plan;
    plan.widths = {0.5, 0.25};
    plan.total_support = 0.75;
    plan.weight = weight_presets::log_pow(2.0);
    Grid1D g = centered_grid(4.0, 8192);
    auto f = ingham_construct(plan, g);

    auto oracle = convolve_direct(normalized_indicator(centered_grid(2.0, 4096), 0.5),
                                  normalized_indicator(centered_grid(2.0, 4096), 0.25));
    // value at x = 0 equals 1 for these widths; compare at 32 nodes. The
    // spectral construction band-limits a xi^-2 spectrum, so agreement is at
    // the truncation level, not roundoff.
    for (int p = 0; p < 32; ++p) {
        const double x = -0.9 + p * 0.05;
        const std::size_t i =
            static_cast<std::size_t>(std::llround((x - g.origin) / g.step));
        const std::size_t j = static_cast<std::size_t>(
            std::llround((x - oracle.grid.origin) / oracle.grid.step));
        REQUIRE(std::abs(f.values[i] - oracle.values[j]) <= 2e-3);
    }
    const std::size_t mid = static_cast<std::size_t>(std::llround((0.0 - g.origin) / g.step));
    REQUIRE(f.values[mid].real() == Catch::Approx(1.0).margin(2e-3));
}

TEST_CASE("ingham_construct: real, even, nonnegative, supported, resolved") {
    auto plan = ingham_widths(weight_presets::log_pow(2.0), 1.0, 8);
    Grid1D g = centered_grid(4.0, 16384);
    auto f = ingham_construct(plan, g);

    const double peak = sup_abs(f.values);
    const std::size_t n = g.count;
    double asym = 0.0, neg = 0.0;
    for (std::size_t i = 1; i < n; ++i)
        asym = std::max(asym, std::abs(f.values[i] - f.values[n - i]));
    for (const auto& v : f.values) neg = std::min(neg, v.real());
    REQUIRE(asym <= 1e-12 * peak);
    REQUIRE(neg >= -1e-12 * peak);

    const double support =
        std::accumulate(plan.widths.begin(), plan.widths.end(), 0.0);
    REQUIRE(support == Catch::Approx(1.0).epsilon(1e-12));
    REQUIRE(mass_outside(f, -support - 2.0 * g.step, support + 2.0 * g.step) <= 1e-12);

    // spectrum matches the full sinc product
    auto F = fourier_1d(f, FourierSign::forward);
    double worst = 0.0;
    for (std::size_t m = 0; m < F.values.size(); ++m) {
        const double xi = F.grid.point(m);
        double prod = 1.0;
        for (double a : plan.widths) prod *= sinc(2.0 * pi * a * xi);
        worst = std::max(worst, std::abs(F.values[m] - cplx(prod)));
    }
    REQUIRE(worst <= 1e-8);

    Grid1D coarse = centered_grid(4.0, 256); // step far above a_K/8
    REQUIRE_THROWS_AS(ingham_construct(plan, coarse), ConfigError);
}

TEST_CASE("smooth_and_symmetrize: even inputs, support arithmetic, spectral product") {
    Grid1D g = centered_grid(2.0, 1024);
    auto g1 = normalized_indicator(g, 0.25);
    SampledFunction1D phi;
    phi.grid = g;
    phi.values.resize(g.count);
    for (std::size_t i = 0; i < g.count; ++i) {
        const double x = g.point(i);
        phi.values[i] = std::abs(x) < 0.25 ? std::exp(-0.0625 / (0.0625 - x * x)) : 0.0;
    }
    phi.support_hint = Interval{-0.25, 0.25};

    auto out = smooth_and_symmetrize(g1, phi, 1.0);

    // evenness is exact by construction
    const std::size_t n = out.grid.count;
    for (std::size_t i = 1; i < n; ++i)
        REQUIRE(std::abs(out.values[i] - out.values[n - i]) == 0.0);

    // support within (-l, l), Minkowski sum [-1/2, 1/2]
    REQUIRE(mass_outside(out, -0.5 - 2.0 * out.grid.step, 0.5 + 2.0 * out.grid.step) <= 1e-12);

    // even inputs: symmetrization leaves the convolution unchanged
    auto conv = convolve(g1, phi);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < conv.values.size(); ++i) {
        const double x = conv.grid.point(i);
        if (std::abs(x) > 0.6) continue;
        const std::size_t j =
            static_cast<std::size_t>(std::llround((x - out.grid.origin) / out.grid.step));
        worst = std::max(worst, std::abs(conv.values[i] - out.values[j]));
        scale = std::max(scale, std::abs(conv.values[i]));
    }
    REQUIRE(worst <= 1e-10 * scale);

    // spectrum of the convolution is the product of the input spectra
    auto Fo = fourier_1d(detail::recenter(conv), FourierSign::forward);
    double worst2 = 0.0, scale2 = 0.0;
    for (std::size_t m = 0; m < Fo.values.size(); m += 8) {
        const double xi = Fo.grid.point(m);
        const cplx prod = spectrum_at(g1, xi) * spectrum_at(phi, xi);
        worst2 = std::max(worst2, std::abs(Fo.values[m] - prod));
        scale2 = std::max(scale2, std::abs(prod));
    }
    REQUIRE(worst2 <= 1e-9 * std::max(1.0, scale2));

    // support violation
    SampledFunction1D wide = normalized_indicator(g, 0.6);
    REQUIRE_THROWS_AS(smooth_and_symmetrize(wide, phi, 1.0), PreconditionError);
}

TEST_CASE("pw_halfline_construct: pole-modulus profile matches the closed form") {
    Grid1D g = centered_grid(32.0, 1 << 17);
    auto r = pw_halfline_construct(weight_presets::half_log_sq(), g, 0.0);

    // |f| should follow 2 pi e^{2 pi x} on x < 0 away from the jump at 0
    double sup = 0.0;
    for (const auto& v : r.f.values) sup = std::max(sup, std::abs(v));
    double worst = 0.0;
    for (std::size_t i = 0; i < g.count; ++i) {
        const double x = r.f.grid.point(i);
        if (x < -3.0 || x > -0.5) continue;
        const double target = 2.0 * pi * std::exp(2.0 * pi * x);
        worst = std::max(worst, std::abs(std::abs(r.f.values[i]) - target));
    }
    REQUIRE(worst / sup <= 1e-4);
    REQUIRE(r.forbidden_mass <= 1e-3);
}

TEST_CASE("pw_halfline_construct: modulus guarantee and half-line mass for sqrt growth") {
    Grid1D g = centered_grid(32.0, 1 << 17);
    auto psi = weight_presets::sqrt_growth();
    auto r = pw_halfline_construct(psi, g, 0.0);

    // Per-point relative match where the target modulus sits above the FFT
    // noise floor; sup-normalized absolute match across the whole interior.
    auto F = fourier_1d(r.f, FourierSign::forward);
    double worst_rel = 0.0, worst_abs = 0.0;
    for (std::size_t m = 0; m < F.values.size(); ++m) {
        const double xi = F.grid.point(m);
        if (std::abs(xi) > 0.9 * r.interior_cut) continue;
        const double want = std::exp(-psi.eval(std::abs(xi)));
        const double got = std::abs(F.values[m]);
        worst_abs = std::max(worst_abs, std::abs(got - want));
        if (want >= 1e-5) worst_rel = std::max(worst_rel, std::abs(got - want) / want);
    }
    REQUIRE(worst_rel <= 1e-6);
    REQUIRE(worst_abs <= 1e-9);
    REQUIRE(r.forbidden_mass <= 1e-3);

    // divergent weight refuses
    REQUIRE_THROWS_AS(pw_halfline_construct(weight_presets::linear_growth(), g, 0.0),
                      PreconditionError);
}

TEST_CASE("pw_halfline_construct: zero weight yields the discrete delta") {
    Grid1D g = centered_grid(8.0, 1024);
    auto r = pw_halfline_construct(weight_presets::zero(), g, 0.0);
    // all spectrum values are 1, so the function is a one-cell spike
    double peak = 0.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < r.f.values.size(); ++i)
        if (std::abs(r.f.values[i]) > peak) {
            peak = std::abs(r.f.values[i]);
            arg = i;
        }
    REQUIRE(peak == Catch::Approx(1.0 / g.step).epsilon(1e-9));
    REQUIRE(std::abs(r.f.grid.point(arg)) <= g.step + 1e-12);
    REQUIRE(r.forbidden_mass <= 1e-3);
}

TEST_CASE("poisson_counterexample: kernel normalization, spectral factor, divergent profile") {
    Grid1D gx = centered_grid(32.0, 1 << 15);
    Grid1D gy = centered_grid(128.0, 1 << 12);
    auto r = poisson_counterexample(0.0, gx, gy);

    REQUIRE(std::abs(r.kernel_mass - 1.0) <= 1e-8);

    auto K = fourier_1d(r.kernel, FourierSign::forward);
    double worst = 0.0;
    for (std::size_t m = 0; m < K.values.size(); ++m) {
        const double v = K.grid.point(m);
        worst = std::max(worst, std::abs(K.values[m] - cplx(std::exp(-2.0 * pi * std::abs(v)))));
    }
    REQUIRE(worst <= 1e-6);

    // the radialized envelope profile fails the quadratic-weight test
    auto cls = pw_integral_test(weight_presets::sqrt_plus_linear());
    REQUIRE_FALSE(cls.convergent());

    // and the function itself is nonzero with its mass on the left half-plane
    double total = 0.0, right = 0.0;
    for (std::size_t i = 0; i < gx.count; ++i) {
        const double x = gx.point(i);
        for (std::size_t j = 0; j < gy.count; ++j) {
            const double m2 = std::norm(r.F.values[i * gy.count + j]);
            total += m2;
            if (x > 0.0) right += m2;
        }
    }
    REQUIRE(total > 0.0);
    REQUIRE(right / total <= 1e-3);

    Grid1D tiny = centered_grid(4.0, 64);
    REQUIRE_THROWS_AS(poisson_counterexample(0.0, gx, tiny), ConfigError);
}
