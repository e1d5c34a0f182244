#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "ulab/fft.hpp"

namespace ulab {

// Function on the n-torus [0,1)^n sampled on a dyadic lattice. Periodic
// extension is implied; coefficients live on the integer lattice inside the
// resolved band.
struct TorusFunction {
    std::vector<std::size_t> counts; // samples per axis, powers of two
    std::vector<cplx> values;        // row major, axis 0 slowest

    std::size_t dim() const { return counts.size(); }
    std::size_t size() const {
        std::size_t s = 1;
        for (auto c : counts) s *= c;
        return s;
    }
    double point(std::size_t axis, std::size_t idx) const {
        return static_cast<double>(idx) / static_cast<double>(counts[axis]);
    }
};

// Coefficient window |m_a| <= band per axis, packed row-major with
// m_a in [-band, band].
struct TorusCoefficients {
    int band = 0;
    std::size_t n = 0;
    std::vector<cplx> values;

    std::size_t side() const { return static_cast<std::size_t>(2 * band + 1); }
    const cplx& at(const std::vector<int>& m) const {
        std::size_t f = 0;
        for (std::size_t a = 0; a < n; ++a) {
            if (std::abs(m[a]) > band) throw ConfigError("coefficient outside band");
            f = f * side() + static_cast<std::size_t>(m[a] + band);
        }
        return values[f];
    }
};

// Wrap a compactly supported function into [0,1)^n by exact index folding
// after translating by shift. Grid steps must be dyadic fractions of the
// period so folding is pure index arithmetic.
inline TorusFunction periodize(const SampledFunctionND& g, const std::vector<double>& shift) {
    g.check_consistent();
    if (shift.size() != g.dim()) throw ConfigError("periodize: shift dimension mismatch");
    TorusFunction f;
    f.counts.resize(g.dim());
    for (std::size_t a = 0; a < g.dim(); ++a) {
        const double inv = 1.0 / g.axes[a].step;
        const double rounded = std::round(inv);
        if (std::abs(inv - rounded) > 1e-9 * inv ||
            (static_cast<std::size_t>(rounded) & (static_cast<std::size_t>(rounded) - 1)) != 0)
            throw ConfigError("periodize: step must be 1/2^j");
        f.counts[a] = static_cast<std::size_t>(rounded);
    }
    f.values.assign(f.size(), cplx(0.0));

    const std::size_t total = g.size();
    std::vector<std::size_t> idx(g.dim(), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t out = 0;
        for (std::size_t a = 0; a < g.dim(); ++a) {
            const double pos = (g.axes[a].point(idx[a]) + shift[a]) / g.axes[a].step;
            const long cell = std::lround(pos);
            if (std::abs(pos - static_cast<double>(cell)) > 1e-6)
                throw ConfigError("periodize: grid origin incommensurate with the step");
            const long n = static_cast<long>(f.counts[a]);
            const long folded = ((cell % n) + n) % n;
            out = out * f.counts[a] + static_cast<std::size_t>(folded);
        }
        f.values[out] += g.values[flat];
        // advance the multi-index
        for (std::size_t a = g.dim(); a-- > 0;) {
            if (++idx[a] < g.axes[a].count) break;
            idx[a] = 0;
        }
    }
    return f;
}

// FFT coefficients f_hat(m) = (1/N^n) sum f(x) e^{-2 pi i m.x}; exact for
// band-limited inputs.
inline TorusCoefficients torus_coefficients(const TorusFunction& f, int band) {
    if (band < 0) throw ConfigError("torus_coefficients: negative band");
    for (auto c : f.counts)
        if (static_cast<std::size_t>(2 * band) >= c)
            throw ConfigError("torus_coefficients: band exceeds the Nyquist limit");

    // per-axis forward DFT, no centering phases needed on [0,1)
    std::vector<cplx> work = f.values;
    std::size_t stride_total = f.size();
    for (std::size_t axis = 0; axis < f.dim(); ++axis) {
        const std::size_t n = f.counts[axis];
        std::size_t stride = 1;
        for (std::size_t a = axis + 1; a < f.dim(); ++a) stride *= f.counts[a];
        const std::size_t lines = stride_total / n;
        std::vector<cplx> buf(n);
        for (std::size_t line = 0; line < lines; ++line) {
            const std::size_t inner = line % stride;
            const std::size_t outer = line / stride;
            const std::size_t base = outer * stride * n + inner;
            for (std::size_t i = 0; i < n; ++i) buf[i] = work[base + i * stride];
            fft_pow2(buf, -1);
            const double scale = 1.0 / static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i) work[base + i * stride] = buf[i] * scale;
        }
    }

    TorusCoefficients out;
    out.band = band;
    out.n = f.dim();
    out.values.resize(static_cast<std::size_t>(std::pow(2 * band + 1, f.dim())));
    std::vector<int> m(f.dim(), -band);
    for (std::size_t flat = 0; flat < out.values.size(); ++flat) {
        std::size_t src = 0;
        for (std::size_t a = 0; a < f.dim(); ++a) {
            const long n = static_cast<long>(f.counts[a]);
            const long folded = ((m[a] % n) + n) % n;
            src = src * f.counts[a] + static_cast<std::size_t>(folded);
        }
        out.values[flat] = work[src];
        for (std::size_t a = f.dim(); a-- > 0;) {
            if (++m[a] <= band) break;
            m[a] = -band;
        }
    }
    return out;
}

// Modulation g_m(x) = e^{2 pi i (m - m0).x} g(x): shifts the coefficient
// lattice exactly at FFT resolution and is unitary on the torus.
inline TorusFunction modulate(const TorusFunction& g, const std::vector<int>& m,
                              const std::vector<int>& m0) {
    if (m.size() != g.dim() || m0.size() != g.dim())
        throw ConfigError("modulate: lattice vector dimension mismatch");
    TorusFunction out = g;
    const std::size_t total = g.size();
    std::vector<std::size_t> idx(g.dim(), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        double phase = 0.0;
        for (std::size_t a = 0; a < g.dim(); ++a)
            phase += (m[a] - m0[a]) * g.point(a, idx[a]);
        out.values[flat] = g.values[flat] * std::polar(1.0, 2.0 * pi * phase);
        for (std::size_t a = g.dim(); a-- > 0;) {
            if (++idx[a] < g.counts[a]) break;
            idx[a] = 0;
        }
    }
    return out;
}

inline double torus_l2_norm(const TorusFunction& f) {
    double s = pairwise_sum<double>(f.values.size(),
                                    [&](std::size_t i) { return std::norm(f.values[i]); });
    return std::sqrt(s / static_cast<double>(f.size()));
}

} // namespace ulab
