#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "ulab/errors.hpp"
#include "ulab/reduce.hpp"

namespace ulab {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

// Uniform 1D grid: sample i sits at origin + i*step.
struct Grid1D {
    double origin = 0.0;
    double step = 1.0;
    std::size_t count = 0;

    double point(std::size_t i) const { return origin + static_cast<double>(i) * step; }
    double extent() const { return step * static_cast<double>(count); }
    bool pow2_count() const { return count > 0 && (count & (count - 1)) == 0; }
    // True when origin == -extent/2 up to roundoff.
    bool centered(double rel = 1e-9) const {
        return std::abs(origin + 0.5 * extent()) <= rel * extent();
    }
};

inline bool same_step(const Grid1D& a, const Grid1D& b, double rel = 1e-12) {
    return std::abs(a.step - b.step) <= rel * std::max(std::abs(a.step), std::abs(b.step));
}

inline bool same_grid(const Grid1D& a, const Grid1D& b, double rel = 1e-9) {
    return a.count == b.count && same_step(a, b) &&
           std::abs(a.origin - b.origin) <= rel * std::max(a.extent(), b.extent());
}

// Centered dual grid of a power-of-two grid (step 1/extent, band
// [-1/(2 step), 1/(2 step))). Involutive on centered grids.
inline Grid1D dual_grid(const Grid1D& g) {
    if (!g.pow2_count()) throw ConfigError("dual_grid: count must be a power of two");
    Grid1D d;
    d.count = g.count;
    d.step = 1.0 / g.extent();
    d.origin = -0.5 * static_cast<double>(g.count) * d.step;
    return d;
}

inline Grid1D centered_grid(double extent, std::size_t count) {
    Grid1D g;
    g.count = count;
    g.step = extent / static_cast<double>(count);
    g.origin = -0.5 * extent;
    return g;
}

struct SampledFunction1D {
    Grid1D grid;
    std::vector<cplx> values;
    std::optional<Interval> support_hint;

    void check_consistent() const {
        if (values.size() != grid.count)
            throw ConfigError("SampledFunction1D: value count does not match grid");
    }
};

struct SampledFunctionND {
    std::vector<Grid1D> axes;
    std::vector<cplx> values; // row major, axis 0 slowest
    std::optional<std::vector<Interval>> support_box;
    std::optional<double> support_radius;

    std::size_t dim() const { return axes.size(); }

    std::size_t size() const {
        std::size_t s = 1;
        for (const auto& a : axes) s *= a.count;
        return s;
    }

    std::size_t stride(std::size_t axis) const {
        std::size_t s = 1;
        for (std::size_t a = axis + 1; a < axes.size(); ++a) s *= axes[a].count;
        return s;
    }

    std::size_t flat_index(const std::vector<std::size_t>& idx) const {
        std::size_t f = 0;
        for (std::size_t a = 0; a < axes.size(); ++a) f = f * axes[a].count + idx[a];
        return f;
    }

    std::vector<std::size_t> multi_index(std::size_t flat) const {
        std::vector<std::size_t> idx(axes.size());
        for (std::size_t a = axes.size(); a-- > 0;) {
            idx[a] = flat % axes[a].count;
            flat /= axes[a].count;
        }
        return idx;
    }

    std::vector<double> point(const std::vector<std::size_t>& idx) const {
        std::vector<double> p(axes.size());
        for (std::size_t a = 0; a < axes.size(); ++a) p[a] = axes[a].point(idx[a]);
        return p;
    }

    double cell_volume() const {
        double v = 1.0;
        for (const auto& a : axes) v *= a.step;
        return v;
    }

    void check_consistent() const {
        if (values.size() != size())
            throw ConfigError("SampledFunctionND: value count does not match axes");
    }
};

inline bool all_finite(const std::vector<cplx>& v) {
    for (const auto& z : v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

// Grid L2 norm with the Riemann cell weight: sqrt(sum |f|^2 * step).
inline double l2_norm(const SampledFunction1D& f) {
    double s = pairwise_sum<double>(f.values.size(),
                                    [&](std::size_t i) { return std::norm(f.values[i]); });
    return std::sqrt(s * f.grid.step);
}

inline double l2_norm(const SampledFunctionND& f) {
    double s = pairwise_sum<double>(f.values.size(),
                                    [&](std::size_t i) { return std::norm(f.values[i]); });
    return std::sqrt(s * f.cell_volume());
}

inline double sup_abs(const std::vector<cplx>& v) {
    double m = 0.0;
    for (const auto& z : v) m = std::max(m, std::abs(z));
    return m;
}

// Relative L2 mass of f outside [lo, hi]; 0/0 reported as 0.
inline double mass_outside(const SampledFunction1D& f, double lo, double hi) {
    double total = 0.0, outside = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double m = std::norm(f.values[i]);
        total += m;
        const double x = f.grid.point(i);
        if (x < lo || x > hi) outside += m;
    }
    return total > 0.0 ? outside / total : 0.0;
}

// Smallest interval of grid points holding all but mass_tol of the L2 mass.
inline Interval measured_support(const SampledFunction1D& f, double mass_tol = 1e-12) {
    double total = 0.0;
    for (const auto& v : f.values) total += std::norm(v);
    if (total == 0.0) return {0.0, 0.0};
    double acc = 0.0;
    std::size_t lo = 0, hi = f.values.size() - 1;
    while (lo < hi && (acc + std::norm(f.values[lo])) <= mass_tol * total)
        acc += std::norm(f.values[lo++]);
    acc = 0.0;
    while (hi > lo && (acc + std::norm(f.values[hi])) <= mass_tol * total)
        acc += std::norm(f.values[hi--]);
    return {f.grid.point(lo), f.grid.point(hi)};
}

inline SampledFunctionND as_nd(const SampledFunction1D& f) {
    SampledFunctionND g;
    g.axes = {f.grid};
    g.values = f.values;
    if (f.support_hint) g.support_box = std::vector<Interval>{*f.support_hint};
    return g;
}

inline SampledFunction1D as_1d(const SampledFunctionND& f) {
    if (f.dim() != 1) throw ConfigError("as_1d: function is not one dimensional");
    SampledFunction1D g;
    g.grid = f.axes[0];
    g.values = f.values;
    if (f.support_box) g.support_hint = (*f.support_box)[0];
    return g;
}

} // namespace ulab
