#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ulab/fft.hpp"
#include "ulab/reduce.hpp"
#include "ulab/weights.hpp"

namespace ulab {

struct BigCount {
    bool fits64 = true;
    std::uint64_t value = 0;
    std::string decimal; // exact decimal, always populated
};

namespace detail {

inline std::string digits_to_string(const std::vector<std::uint32_t>& d) {
    std::string s;
    for (auto it = d.rbegin(); it != d.rend(); ++it) s += static_cast<char>('0' + *it);
    return s.empty() ? "0" : s;
}

// little-endian decimal digit arithmetic for the exact fallback
inline void digits_mul(std::vector<std::uint32_t>& d, std::uint64_t f) {
    std::uint64_t carry = 0;
    for (auto& x : d) {
        const std::uint64_t t = static_cast<std::uint64_t>(x) * f + carry;
        x = static_cast<std::uint32_t>(t % 10);
        carry = t / 10;
    }
    while (carry) {
        d.push_back(static_cast<std::uint32_t>(carry % 10));
        carry /= 10;
    }
}

inline void digits_div(std::vector<std::uint32_t>& d, std::uint64_t f) {
    std::uint64_t rem = 0;
    for (auto it = d.rbegin(); it != d.rend(); ++it) {
        const std::uint64_t cur = rem * 10 + *it;
        *it = static_cast<std::uint32_t>(cur / f);
        rem = cur % f;
    }
    while (d.size() > 1 && d.back() == 0) d.pop_back();
}

} // namespace detail

// Number of multi-indices alpha with |alpha| = k in n variables:
// binomial(k + n - 1, k), exact. When the value overflows 64 bits the exact
// decimal is still produced through digit arithmetic.
inline BigCount multiindex_count(int k, int n) {
    if (k < 0 || n < 1) throw ConfigError("multiindex_count: k >= 0 and n >= 1 required");
    BigCount out;
    // binomial(k+n-1, n-1) via the multiplicative formula; each prefix is an
    // exact binomial so the division is exact at every step
    unsigned __int128 acc = 1;
    bool overflow = false;
    for (int i = 1; i <= n - 1; ++i) {
        acc = acc * static_cast<unsigned __int128>(k + i);
        acc /= static_cast<unsigned __int128>(i);
        if (acc > std::numeric_limits<std::uint64_t>::max()) {
            overflow = true;
            break;
        }
    }
    if (!overflow) {
        out.fits64 = true;
        out.value = static_cast<std::uint64_t>(acc);
        out.decimal = std::to_string(out.value);
        return out;
    }
    std::vector<std::uint32_t> digits = {1};
    for (int i = 1; i <= n - 1; ++i) {
        detail::digits_mul(digits, static_cast<std::uint64_t>(k + i));
        detail::digits_div(digits, static_cast<std::uint64_t>(i));
    }
    out.fits64 = false;
    out.value = 0;
    out.decimal = detail::digits_to_string(digits);
    return out;
}

namespace detail {

// lexicographic enumeration of multi-indices with |alpha| = k
inline void for_each_multiindex(int k, int n, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> alpha(static_cast<std::size_t>(n), 0);
    std::function<void(int, int)> rec = [&](int pos, int rem) {
        if (pos == n - 1) {
            alpha[static_cast<std::size_t>(pos)] = rem;
            fn(alpha);
            return;
        }
        for (int a = rem; a >= 0; --a) {
            alpha[static_cast<std::size_t>(pos)] = a;
            rec(pos + 1, rem - a);
        }
    };
    rec(0, k);
}

inline void moment_budget_check(const SampledFunctionND& spec, int k, const char* who) {
    // The k-th moment integrand |xi|^k |f_hat| must have died out by the
    // band edge. Criterion: the outermost eighth of the band (per axis)
    // contributes at most 1% of the total weighted mass, so the moment is
    // resolved to that level. A sup test would false-alarm on the FFT noise
    // floor, which grows like |xi|^k but integrates to little.
    double total_mass = 0.0, edge_mass = 0.0;
    const std::size_t total = spec.size();
    std::vector<std::size_t> idx(spec.dim(), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        double r2 = 0.0;
        bool on_edge = false;
        for (std::size_t a = 0; a < spec.dim(); ++a) {
            const double xi = spec.axes[a].point(idx[a]);
            r2 += xi * xi;
            const std::size_t n = spec.axes[a].count;
            if (idx[a] < n / 8 || idx[a] >= n - n / 8) on_edge = true;
        }
        const double w = std::pow(std::sqrt(r2), k) * std::abs(spec.values[flat]);
        total_mass += w;
        if (on_edge) edge_mass += w;
        for (std::size_t a = spec.dim(); a-- > 0;) {
            if (++idx[a] < spec.axes[a].count) break;
            idx[a] = 0;
        }
    }
    if (total_mass > 0.0 && edge_mass > 0.01 * total_mass)
        throw PrecisionError(std::string(who) + ": moment budget exceeded at the band edge",
                             edge_mass / total_mass, edge_mass / total_mass);
}

} // namespace detail

// Euclidean norm over all |alpha| = k of the alpha-th derivative of f at x,
// computed from the spectrum by the moment integrals
//   d^alpha f(x) = int (2 pi i xi)^alpha f_hat(xi) e^{2 pi i xi.x} dxi.
// The grid must resolve the k-th moment (budget check against the band
// edge); alpha enumeration order is fixed lexicographically.
inline double dk_norm(const SampledFunctionND& f_spec, int k, const std::vector<double>& x) {
    f_spec.check_consistent();
    if (x.size() != f_spec.dim()) throw ConfigError("dk_norm: point dimension mismatch");
    if (k < 0) throw ConfigError("dk_norm: negative order");
    detail::moment_budget_check(f_spec, k, "dk_norm");

    const std::size_t n_axes = f_spec.dim();
    const double cell = f_spec.cell_volume();

    // per-axis tables: phase e^{2 pi i xi x_a} and powers xi^p
    std::vector<std::vector<cplx>> phase(n_axes);
    std::vector<std::vector<std::vector<double>>> pows(n_axes);
    for (std::size_t a = 0; a < n_axes; ++a) {
        const auto& ax = f_spec.axes[a];
        phase[a].resize(ax.count);
        pows[a].assign(static_cast<std::size_t>(k) + 1, std::vector<double>(ax.count));
        for (std::size_t i = 0; i < ax.count; ++i) {
            const double xi = ax.point(i);
            phase[a][i] = std::polar(1.0, 2.0 * pi * xi * x[a]);
            double p = 1.0;
            for (int d = 0; d <= k; ++d) {
                pows[a][static_cast<std::size_t>(d)][i] = p;
                p *= xi;
            }
        }
    }

    double sum_sq = 0.0;
    detail::for_each_multiindex(k, static_cast<int>(n_axes), [&](const std::vector<int>& alpha) {
        // A_alpha = sum_m prod_a xi_a^alpha_a phase_a * f_hat_m * cell
        cplx acc = pairwise_sum<cplx>(f_spec.size(), [&](std::size_t flat) {
            std::size_t rest = flat;
            cplx w = f_spec.values[flat];
            for (std::size_t a = n_axes; a-- > 0;) {
                const std::size_t i = rest % f_spec.axes[a].count;
                rest /= f_spec.axes[a].count;
                w *= phase[a][i] * pows[a][static_cast<std::size_t>(alpha[a])][i];
            }
            return w;
        });
        sum_sq += std::norm(acc * cell);
    });
    return std::pow(2.0 * pi, k) * std::sqrt(sum_sq);
}

// log of the derivative-bound sequence m_k = C (4 pi k / theta(k^4))^k,
// returned in log space; +inf sentinel when the weight vanishes at k^4.
inline double mk_bound_log(const WeightFunction& theta, int k, double c_fit) {
    if (k < 1) throw ConfigError("mk_bound_log: k must be >= 1");
    check_decreasing(theta);
    const double th = theta.eval(std::pow(static_cast<double>(k), 4.0));
    if (th <= 0.0) return std::numeric_limits<double>::infinity();
    return std::log(c_fit) + k * std::log(4.0 * pi * k / th);
}

struct BochnerTaylorReport {
    std::vector<double> dk_at_x0;      // D_k f(x0), k = 0..K
    std::vector<double> log_mk;        // fitted bound sequence, log scale
    double c_fit = 0.0;                // fitted constant over the probe set
    double vanish_ratio = 0.0;         // max_k D_k(x0) / m_k
    bool derivatives_vanish = false;   // condition on the probe point
    Classification carleman;           // divergence of the bound sums
    double omega_mass = 0.0;           // relative L2 mass of f on the box
    bool conclusion_holds = false;     // f vanishes on the box to tolerance
    std::string verdict;               // consistent | vacuous-consistent | CONTRADICTION
};

// Vanishing audit: measures the derivative ladder at x0, fits the bound
// constant over probe points in the box, classifies the divergence of the
// bound sums, and checks the implication "derivatives vanish at x0 and the
// bound sums diverge => f vanishes on the box". The audit never proves
// vanishing; an implication failure is reported as CONTRADICTION and means a
// bug or a mis-fit, not a theorem violation.
inline BochnerTaylorReport bochner_taylor_audit(const SampledFunctionND& f,
                                                const std::vector<Interval>& omega,
                                                const std::vector<double>& x0,
                                                const WeightFunction& theta, int k_max) {
    f.check_consistent();
    if (omega.size() != f.dim() || x0.size() != f.dim())
        throw ConfigError("bochner_taylor_audit: dimension mismatch");
    for (std::size_t a = 0; a < f.dim(); ++a)
        if (x0[a] <= omega[a].lo || x0[a] >= omega[a].hi)
            throw ConfigError("bochner_taylor_audit: x0 must be interior to the box");

    BochnerTaylorReport rep;
    auto spec = fourier_nd(f, FourierSign::forward);

    // mass on the box
    double total = 0.0, inside = 0.0;
    {
        const std::size_t n = f.size();
        std::vector<std::size_t> idx(f.dim(), 0);
        for (std::size_t flat = 0; flat < n; ++flat) {
            const double m2 = std::norm(f.values[flat]);
            total += m2;
            bool in = true;
            for (std::size_t a = 0; a < f.dim(); ++a)
                if (!omega[a].contains(f.axes[a].point(idx[a]))) in = false;
            if (in) inside += m2;
            for (std::size_t a = f.dim(); a-- > 0;) {
                if (++idx[a] < f.axes[a].count) break;
                idx[a] = 0;
            }
        }
    }
    rep.omega_mass = total > 0.0 ? inside / total : 0.0;

    // degenerate zero input: everything vanishes, trivially consistent
    if (total == 0.0) {
        rep.verdict = "consistent";
        rep.derivatives_vanish = true;
        rep.conclusion_holds = true;
        rep.carleman = carleman_divergence(theta, std::max(k_max, 16));
        return rep;
    }

    // probe points: x0 plus the box corners pulled 25% toward the center
    std::vector<std::vector<double>> probes = {x0};
    {
        std::vector<double> c(f.dim());
        for (std::size_t a = 0; a < f.dim(); ++a) c[a] = 0.5 * (omega[a].lo + omega[a].hi);
        const std::size_t corners = std::size_t(1) << f.dim();
        for (std::size_t mask = 0; mask < corners; ++mask) {
            std::vector<double> p(f.dim());
            for (std::size_t a = 0; a < f.dim(); ++a) {
                const double edge = (mask >> a) & 1 ? omega[a].hi : omega[a].lo;
                p[a] = c[a] + 0.75 * (edge - c[a]);
            }
            probes.push_back(p);
        }
    }

    rep.dk_at_x0.resize(static_cast<std::size_t>(k_max) + 1);
    rep.log_mk.resize(static_cast<std::size_t>(k_max) + 1);
    double c_fit_log = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= k_max; ++k) {
        rep.dk_at_x0[static_cast<std::size_t>(k)] = dk_norm(spec, k, x0);
        const double base_log =
            k >= 1 ? mk_bound_log(theta, k, 1.0) : 0.0; // m_0 = C
        for (const auto& p : probes) {
            const double dk = dk_norm(spec, k, p);
            if (dk > 0.0) c_fit_log = std::max(c_fit_log, std::log(dk) - base_log);
        }
        rep.log_mk[static_cast<std::size_t>(k)] = base_log; // c_fit added below
    }
    rep.c_fit = std::exp(c_fit_log);
    for (auto& lm : rep.log_mk) lm += c_fit_log;

    double vr = 0.0;
    for (int k = 0; k <= k_max; ++k) {
        const double dk = rep.dk_at_x0[static_cast<std::size_t>(k)];
        const double lm = rep.log_mk[static_cast<std::size_t>(k)];
        if (std::isfinite(lm) && dk > 0.0) vr = std::max(vr, std::exp(std::log(dk) - lm));
    }
    rep.vanish_ratio = vr;
    rep.derivatives_vanish = vr <= 1e-8;

    rep.carleman = carleman_divergence(theta, std::max(k_max, 16));

    rep.conclusion_holds = rep.omega_mass <= 1e-10;
    const bool hypotheses = rep.derivatives_vanish && !rep.carleman.convergent();
    if (hypotheses)
        rep.verdict = rep.conclusion_holds ? "consistent" : "CONTRADICTION";
    else
        rep.verdict = "vacuous-consistent";
    return rep;
}

// Multivariate polynomial with real coefficients in lexicographic terms.
struct Polynomial {
    std::size_t n = 1;
    std::vector<std::pair<std::vector<int>, double>> terms; // (alpha, coeff)

    double eval(const std::vector<double>& xi) const {
        double acc = 0.0;
        for (const auto& [alpha, c] : terms) {
            double t = c;
            for (std::size_t a = 0; a < n; ++a)
                for (int p = 0; p < alpha[a]; ++p) t *= xi[a];
            acc += t;
        }
        return acc;
    }
};

// Spectral realization of the polynomial differential operator: the output
// spectrum is P(xi) * f_hat(xi) pointwise at grid nodes, so the modulus
// identity |out_hat| = |P| |f_hat| holds by definition.
inline SampledFunctionND poly_multiplier(const SampledFunctionND& f, const Polynomial& p) {
    f.check_consistent();
    if (p.n != f.dim()) throw ConfigError("poly_multiplier: polynomial dimension mismatch");
    for (const auto& ax : f.axes)
        if (!ax.centered())
            throw ConfigError("poly_multiplier: centered grids required");
    auto spec = fourier_nd(f, FourierSign::forward);

    // budget: the weighted spectrum must be resolved within the band
    int deg = 0;
    for (const auto& [alpha, c] : p.terms) {
        int d = 0;
        for (int a : alpha) d += a;
        deg = std::max(deg, d);
    }
    detail::moment_budget_check(spec, deg, "poly_multiplier");

    const std::size_t total = spec.size();
    std::vector<std::size_t> idx(spec.dim(), 0);
    std::vector<double> xi(spec.dim());
    for (std::size_t flat = 0; flat < total; ++flat) {
        for (std::size_t a = 0; a < spec.dim(); ++a) xi[a] = spec.axes[a].point(idx[a]);
        spec.values[flat] *= p.eval(xi);
        for (std::size_t a = spec.dim(); a-- > 0;) {
            if (++idx[a] < spec.axes[a].count) break;
            idx[a] = 0;
        }
    }
    auto out = fourier_nd(spec, FourierSign::inverse);
    out.support_box = f.support_box;
    out.support_radius = f.support_radius;
    return out;
}

} // namespace ulab
