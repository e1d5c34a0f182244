#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "ulab/grid.hpp"

namespace ulab {

enum class FourierSign { forward, inverse };

// In-place radix-2 complex DFT: a[m] <- sum_i a[i] exp(sign * 2*pi*i*m/N).
// sign = -1 is the forward DFT; no normalization applied.
inline void fft_pow2(std::span<cplx> a, int sign) {
    const std::size_t n = a.size();
    if (n < 2) return;
    if (n & (n - 1)) throw ConfigError("fft_pow2: length must be a power of two");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    std::vector<cplx> w(n / 2);
    const double ang = static_cast<double>(sign) * 2.0 * pi / static_cast<double>(n);
    for (std::size_t k = 0; k < n / 2; ++k) w[k] = std::polar(1.0, ang * static_cast<double>(k));

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const cplx u = a[i + k];
                const cplx v = a[i + k + half] * w[k * stride];
                a[i + k] = u + v;
                a[i + k + half] = u - v;
            }
        }
    }
}

namespace detail {

// Phase tables realizing the continuous transform on centered dual grids.
//
// Forward, f on grid G with dual D:
//   F(xi_m) = G.step * exp(-2*pi*i*G.origin*xi_m) * sum_i [(-1)^i f_i] w^(im)
// Inverse, F on grid D with dual T:
//   f(x_i) = D.step * (-1)^i * sum_m [F_m * exp(+2*pi*i*T.origin*xi_m)] w^(-im)
// Both follow from xi_m = D.origin + m*D.step with D.origin = -N/2 * D.step.

struct LinePlan {
    Grid1D out_grid;
    std::vector<cplx> phase; // applied on the frequency side, includes the step factor
    int fft_sign = -1;
    bool phase_after_fft = true; // forward: phase after; inverse: phase before
};

inline LinePlan make_line_plan(const Grid1D& g, FourierSign sign) {
    if (!g.pow2_count()) throw ConfigError("fourier: grid count must be a power of two");
    LinePlan plan;
    plan.out_grid = dual_grid(g);
    plan.phase.resize(g.count);
    if (sign == FourierSign::forward) {
        plan.fft_sign = -1;
        plan.phase_after_fft = true;
        const Grid1D& d = plan.out_grid;
        for (std::size_t m = 0; m < g.count; ++m)
            plan.phase[m] = g.step * std::polar(1.0, -2.0 * pi * g.origin * d.point(m));
    } else {
        plan.fft_sign = +1;
        plan.phase_after_fft = false;
        const Grid1D& t = plan.out_grid; // dual of the spectrum grid = target grid
        for (std::size_t m = 0; m < g.count; ++m)
            plan.phase[m] = g.step * std::polar(1.0, +2.0 * pi * t.origin * g.point(m));
    }
    return plan;
}

inline void apply_line_plan(const LinePlan& plan, std::span<cplx> buf) {
    const std::size_t n = buf.size();
    if (plan.phase_after_fft) {
        for (std::size_t i = 1; i < n; i += 2) buf[i] = -buf[i];
        fft_pow2(buf, plan.fft_sign);
        for (std::size_t m = 0; m < n; ++m) buf[m] *= plan.phase[m];
    } else {
        for (std::size_t m = 0; m < n; ++m) buf[m] *= plan.phase[m];
        fft_pow2(buf, plan.fft_sign);
        for (std::size_t i = 1; i < n; i += 2) buf[i] = -buf[i];
    }
}

} // namespace detail

// Continuous-normalized Fourier transform on the centered dual grid,
// convention F(xi) = integral f(x) exp(-2*pi*i*x*xi) dx. The inverse maps a
// spectrum back onto the dual of its own grid, so inverse(forward(f))
// reproduces f on a centered grid.
inline SampledFunction1D fourier_1d(const SampledFunction1D& f, FourierSign sign) {
    f.check_consistent();
    if (!all_finite(f.values)) throw DataError("fourier_1d: non-finite input sample");
    auto plan = detail::make_line_plan(f.grid, sign);
    SampledFunction1D out;
    out.grid = plan.out_grid;
    out.values = f.values;
    detail::apply_line_plan(plan, out.values);
    return out;
}

// Separable n-dimensional transform: the 1D transform applied along each
// axis in order. Bit-identical to looping fourier_1d over extracted lines.
inline SampledFunctionND fourier_nd(const SampledFunctionND& f, FourierSign sign) {
    f.check_consistent();
    if (!all_finite(f.values)) throw DataError("fourier_nd: non-finite input sample");
    SampledFunctionND out = f;
    out.support_box.reset();
    out.support_radius.reset();
    const std::size_t total = out.size();
    for (std::size_t axis = 0; axis < out.axes.size(); ++axis) {
        auto plan = detail::make_line_plan(out.axes[axis], sign);
        const std::size_t n = out.axes[axis].count;
        const std::size_t stride = out.stride(axis);
        const std::size_t lines = total / n;
        std::vector<cplx> buf(n);
        for (std::size_t line = 0; line < lines; ++line) {
            // base index of this line: split flat line index around the axis
            const std::size_t inner = line % stride;
            const std::size_t outer = line / stride;
            const std::size_t base = outer * stride * n + inner;
            for (std::size_t i = 0; i < n; ++i) buf[i] = out.values[base + i * stride];
            detail::apply_line_plan(plan, buf);
            for (std::size_t i = 0; i < n; ++i) out.values[base + i * stride] = buf[i];
        }
        out.axes[axis] = plan.out_grid;
    }
    return out;
}

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Zero-padded linear convolution with the Riemann weight:
// (f*g)(x_k) ~ step * sum_j f_j g_{k-j}. Output grid starts at the sum of
// the input origins and is padded to a power of two, so the result is never
// circularly wrapped.
inline SampledFunction1D convolve(const SampledFunction1D& f, const SampledFunction1D& g) {
    f.check_consistent();
    g.check_consistent();
    if (!same_step(f.grid, g.grid)) throw ConfigError("convolve: grid steps differ");
    if (!all_finite(f.values) || !all_finite(g.values))
        throw DataError("convolve: non-finite input sample");

    const std::size_t full = f.grid.count + g.grid.count - 1;
    const std::size_t n = next_pow2(full);
    std::vector<cplx> a(n, cplx(0.0)), b(n, cplx(0.0));
    std::copy(f.values.begin(), f.values.end(), a.begin());
    std::copy(g.values.begin(), g.values.end(), b.begin());
    fft_pow2(a, -1);
    fft_pow2(b, -1);
    const double scale = f.grid.step / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) a[i] *= b[i] * scale;
    fft_pow2(a, +1);

    SampledFunction1D out;
    out.grid.origin = f.grid.origin + g.grid.origin;
    out.grid.step = f.grid.step;
    out.grid.count = n;
    out.values = std::move(a);
    if (f.support_hint && g.support_hint)
        out.support_hint = Interval{f.support_hint->lo + g.support_hint->lo,
                                    f.support_hint->hi + g.support_hint->hi};
    return out;
}

// Direct O(N*M) linear convolution; the reference the FFT route is tested
// against.
inline SampledFunction1D convolve_direct(const SampledFunction1D& f, const SampledFunction1D& g) {
    if (!same_step(f.grid, g.grid)) throw ConfigError("convolve_direct: grid steps differ");
    const std::size_t full = f.grid.count + g.grid.count - 1;
    SampledFunction1D out;
    out.grid.origin = f.grid.origin + g.grid.origin;
    out.grid.step = f.grid.step;
    out.grid.count = next_pow2(full);
    out.values.assign(out.grid.count, cplx(0.0));
    for (std::size_t k = 0; k < full; ++k) {
        cplx acc(0.0);
        const std::size_t jlo = k >= g.grid.count - 1 ? k - (g.grid.count - 1) : 0;
        const std::size_t jhi = std::min<std::size_t>(k, f.grid.count - 1);
        for (std::size_t j = jlo; j <= jhi; ++j) acc += f.values[j] * g.values[k - j];
        out.values[k] = acc * f.grid.step;
    }
    return out;
}

// Band-limited decimation: keep the central new_count dual nodes and
// transform back onto the coarser grid with the same extent. The error is
// exactly the discarded spectral mass, returned as a relative L2 diagnostic.
inline std::pair<SampledFunction1D, double> resample_band_limited(const SampledFunction1D& f,
                                                                  std::size_t new_count) {
    f.check_consistent();
    if (new_count == 0 || (new_count & (new_count - 1)) || new_count > f.grid.count)
        throw ConfigError("resample_band_limited: target count must be a smaller power of two");
    auto F = fourier_1d(f, FourierSign::forward);
    const std::size_t n = f.grid.count;
    const std::size_t lo = n / 2 - new_count / 2;
    double total = 0.0, kept = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        const double w = std::norm(F.values[m]);
        total += w;
        if (m >= lo && m < lo + new_count) kept += w;
    }
    SampledFunction1D cropped;
    cropped.grid = Grid1D{F.grid.point(lo) + 0.0, F.grid.step, new_count};
    cropped.grid.origin = -0.5 * static_cast<double>(new_count) * F.grid.step;
    cropped.values.assign(F.values.begin() + static_cast<long>(lo),
                          F.values.begin() + static_cast<long>(lo + new_count));
    auto out = fourier_1d(cropped, FourierSign::inverse);
    out.support_hint = f.support_hint;
    const double discarded = total > 0.0 ? 1.0 - kept / total : 0.0;
    return {out, discarded};
}

// Evaluate the continuous-normalized spectrum of f at an arbitrary
// frequency (exact trigonometric sum over the samples).
inline cplx spectrum_at(const SampledFunction1D& f, double xi) {
    cplx acc = pairwise_sum<cplx>(f.values.size(), [&](std::size_t i) {
        return f.values[i] * std::polar(1.0, -2.0 * pi * f.grid.point(i) * xi);
    });
    return acc * f.grid.step;
}

// Evaluate the inverse transform of a spectrum at an arbitrary point.
inline cplx inverse_at(const SampledFunction1D& spectrum, double x) {
    cplx acc = pairwise_sum<cplx>(spectrum.values.size(), [&](std::size_t i) {
        return spectrum.values[i] * std::polar(1.0, 2.0 * pi * spectrum.grid.point(i) * x);
    });
    return acc * spectrum.grid.step;
}

} // namespace ulab
