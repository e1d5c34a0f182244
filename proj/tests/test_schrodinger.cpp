#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ulab/schrodinger.hpp"

using namespace ulab;

namespace {

SampledFunctionND bump_nd(const std::vector<Grid1D>& axes, double r) {
    SampledFunctionND f;
    f.axes = axes;
    f.values.resize(f.size());
    std::vector<std::size_t> idx(axes.size(), 0);
    std::vector<Interval> box;
    for (std::size_t a = 0; a < axes.size(); ++a) box.push_back({-r, r});
    for (std::size_t flat = 0; flat < f.values.size(); ++flat) {
        double v = 1.0;
        for (std::size_t a = 0; a < axes.size(); ++a) {
            const double x = axes[a].point(idx[a]);
            v *= std::abs(x) < r ? std::exp(-r * r / (r * r - x * x)) : 0.0;
        }
        f.values[flat] = v;
        for (std::size_t a = axes.size(); a-- > 0;) {
            if (++idx[a] < axes[a].count) break;
            idx[a] = 0;
        }
    }
    f.support_box = box;
    return f;
}

double rel_l2_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return std::sqrt(num / den);
}

} // namespace

TEST_CASE("diagonalize: identity, signature, reconstruction, preconditions") {
    auto id = diagonalize(Eigen::MatrixXd::Identity(3, 3));
    REQUIRE(id.k == 3);
    REQUIRE(id.sigma == 3);
    for (int j = 0; j < 3; ++j) REQUIRE(id.d(j) == Catch::Approx(1.0));

    Eigen::MatrixXd mixed = Eigen::MatrixXd::Zero(2, 2);
    mixed(0, 0) = 1.0;
    mixed(1, 1) = -1.0;
    auto m = diagonalize(mixed);
    REQUIRE(m.sigma == 0);
    REQUIRE(m.k == 2);

    std::mt19937_64 rng(31);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd r(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r(i, j) = gauss(rng);
    Eigen::MatrixXd sym = 0.5 * (r + r.transpose());
    auto s = diagonalize(sym);
    REQUIRE((s.P * s.d.asDiagonal() * s.P.transpose() - sym).cwiseAbs().maxCoeff() <= 1e-10);

    Eigen::MatrixXd bad = r; // not symmetric
    bad(0, 1) += 1.0;
    REQUIRE_THROWS_AS(diagonalize(bad), PreconditionError);
}

TEST_CASE("propagate_multiplier: identity at t = 0, unitarity, group law") {
    Grid1D g = centered_grid(16.0, 1024);
    auto f = bump_nd({g}, 1.0);
    auto sys = diagonalize(Eigen::MatrixXd::Identity(1, 1));

    auto w0 = propagate_multiplier(f, sys, 0.0);
    REQUIRE(rel_l2_diff(w0.values, f.values) <= 1e-12);

    auto w = propagate_multiplier(f, sys, 0.37);
    REQUIRE(l2_norm(w) == Catch::Approx(l2_norm(f)).epsilon(1e-10));

    auto w2 = propagate_multiplier(propagate_multiplier(f, sys, 0.17), sys, 0.20);
    REQUIRE(rel_l2_diff(w2.values, w.values) <= 1e-9);

    // time reversal inverts
    auto back = propagate_multiplier(w, sys, -0.37);
    REQUIRE(rel_l2_diff(back.values, f.values) <= 1e-9);
}

TEST_CASE("propagate_multiplier: free Gaussian follows the complete-the-square closed form") {
    Grid1D g = centered_grid(32.0, 2048);
    SampledFunctionND f;
    f.axes = {g};
    f.values.resize(2048);
    for (std::size_t i = 0; i < 2048; ++i) {
        const double x = g.point(i);
        f.values[i] = std::exp(-pi * x * x);
    }
    auto sys = diagonalize(Eigen::MatrixXd::Identity(1, 1));
    const double t = 0.15;
    auto w = propagate_multiplier(f, sys, t);

    // w(x,t) = (1 + 4 pi i t)^{-1/2} exp(-pi x^2/(1 + 4 pi i t))
    const cplx denom(1.0, 4.0 * pi * t);
    double worst = 0.0;
    for (std::size_t i = 0; i < 2048; ++i) {
        const double x = g.point(i);
        const cplx want = std::exp(-pi * x * x / denom) / std::sqrt(denom);
        worst = std::max(worst, std::abs(w.values[i] - want));
    }
    REQUIRE(worst <= 1e-8);
}

TEST_CASE("kernel_gamma: modulus, phase at the origin, conjugation, domain errors") {
    auto sys = diagonalize(Eigen::MatrixXd::Identity(1, 1));
    const double t = 0.25;
    Eigen::VectorXd origin = Eigen::VectorXd::Zero(1);
    const cplx at0 = kernel_gamma(sys, t, origin);
    const double amp = 1.0 / std::sqrt(4.0 * pi * t);
    REQUIRE(std::abs(at0) == Catch::Approx(amp).epsilon(1e-12));
    REQUIRE(std::arg(at0) == Catch::Approx(-pi / 4.0).margin(1e-12));

    Eigen::VectorXd x(1);
    for (double xi : {0.3, 0.8, 2.0}) {
        x(0) = xi;
        REQUIRE(std::abs(kernel_gamma(sys, t, x)) == Catch::Approx(amp).epsilon(1e-12));
        const cplx plus = kernel_gamma(sys, t, x);
        const cplx minus = kernel_gamma(sys, -t, x);
        REQUIRE(std::abs(minus - std::conj(plus)) <= 1e-12 * std::abs(plus));
    }

    REQUIRE_THROWS_AS(kernel_gamma(sys, 0.0, origin), DomainError);
    Eigen::MatrixXd singular = Eigen::MatrixXd::Zero(2, 2);
    singular(0, 0) = 1.0;
    REQUIRE_THROWS_AS(kernel_gamma(diagonalize(singular), t, Eigen::VectorXd::Zero(2)),
                      DomainError);
}

TEST_CASE("propagate_kernel agrees with the multiplier route in 1D") {
    Grid1D g = centered_grid(16.0, 4096);
    auto f = bump_nd({g}, 1.0);
    auto sys = diagonalize(Eigen::MatrixXd::Identity(1, 1));
    const double t = 0.1;

    auto wm = propagate_multiplier(f, sys, t);
    auto wk = propagate_kernel(f, sys, t);
    REQUIRE(rel_l2_diff(wk.values, wm.values) <= 1e-4);

    // oscillation budget: too-coarse grid refuses
    Grid1D coarse = centered_grid(16.0, 128);
    auto fc = bump_nd({coarse}, 1.0);
    REQUIRE_THROWS_AS(propagate_kernel(fc, sys, 0.01), ConfigError);
}

TEST_CASE("propagate_multiplier: t -> 0 approaches the initial state") {
    Grid1D g = centered_grid(16.0, 4096);
    auto f = bump_nd({g}, 1.0);
    auto sys = diagonalize(Eigen::MatrixXd::Identity(1, 1));
    double prev = 1e9;
    for (double t : {0.2, 0.1, 0.05}) {
        auto w = propagate_multiplier(f, sys, t);
        const double diff = rel_l2_diff(w.values, f.values);
        REQUIRE(diff < prev);
        prev = diff;
    }
    REQUIRE(prev <= 0.35);
}

TEST_CASE("propagate_kernel: singular system freezes the null coordinates") {
    // A = diag(1, 0): evolution acts on x1 only; a row at fixed x2 must equal
    // the 1D evolution of that slice
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, 2);
    A(0, 0) = 1.0;
    auto sys = diagonalize(A);
    REQUIRE(sys.k == 1);

    Grid1D g = centered_grid(16.0, 2048);
    Grid1D gy = centered_grid(4.0, 16);
    auto f = bump_nd({g, gy}, 1.0);
    const double t = 0.1;

    // probe a full row at fixed x2
    const std::size_t j = 9;
    const double x2 = gy.point(j);
    std::vector<std::vector<double>> probes;
    for (std::size_t i = 0; i < g.count; ++i) probes.push_back({g.point(i), x2});
    std::vector<cplx> row;
    propagate_kernel(f, sys, t, &probes, &row);

    // 1D kernel propagation of the slice
    SampledFunctionND slice;
    slice.axes = {g};
    slice.values.resize(g.count);
    for (std::size_t i = 0; i < g.count; ++i) slice.values[i] = f.values[i * 16 + j];
    slice.support_box = std::vector<Interval>{{-1.0, 1.0}};
    auto sys1 = diagonalize(Eigen::MatrixXd::Identity(1, 1));
    auto w1 = propagate_kernel(slice, sys1, t);

    double sup = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < g.count; ++i) {
        sup = std::max(sup, std::abs(w1.values[i]));
        diff = std::max(diff, std::abs(row[i] - w1.values[i]));
    }
    REQUIRE(diff / sup <= 1e-6);

    // and agrees with the 2D multiplier route on that row
    auto wm = propagate_multiplier(f, sys, t);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < g.count; ++i) {
        num += std::norm(row[i] - wm.values[i * 16 + j]);
        den += std::norm(wm.values[i * 16 + j]);
    }
    REQUIRE(std::sqrt(num / den) <= 1e-4);
}

TEST_CASE("chirp_reduce: modulus identity ties the rescaled chirped slice to the evolution") {
    // diag(1, 0) with a Gaussian profile in the active coordinate
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, 2);
    A(0, 0) = 1.0;
    auto sys = diagonalize(A);
    const double t0 = 0.25;

    Grid1D g = centered_grid(16.0, 1024);
    Grid1D gy = centered_grid(4.0, 16);
    SampledFunctionND f;
    f.axes = {g, gy};
    f.values.resize(f.size());
    for (std::size_t i = 0; i < g.count; ++i)
        for (std::size_t j = 0; j < gy.count; ++j) {
            const double x = g.point(i), y = gy.point(j);
            const double bump = std::abs(y) < 1.0 ? std::exp(-1.0 / (1.0 - y * y)) : 0.0;
            f.values[i * gy.count + j] = std::exp(-pi * x * x) * bump;
        }
    f.support_box = std::vector<Interval>{{-6.0, 6.0}, {-1.0, 1.0}};

    const std::size_t jrow = 9;
    const double x2 = gy.point(jrow);
    auto gfun = chirp_reduce(f, sys, t0, {x2});
    REQUIRE(gfun.dim() == 1);
    // grid mapping: z = y/(4 pi t0 d) with d = 1
    REQUIRE(gfun.axes[0].step == Catch::Approx(g.step / (4.0 * pi * t0)).epsilon(1e-12));

    auto ghat = fourier_nd(gfun, FourierSign::forward);
    const double scale = std::sqrt(1.0) * std::pow(4.0 * pi * t0, 0.5);

    // probes at the dual nodes of the z grid around the center
    std::vector<std::vector<double>> probes;
    std::vector<std::size_t> pick;
    for (int q = -16; q < 16; ++q) {
        const std::size_t m = ghat.axes[0].count / 2 + static_cast<std::size_t>(4 * q + 64);
        pick.push_back(m - 64);
        probes.push_back({ghat.axes[0].point(m - 64), x2});
    }
    std::vector<cplx> w;
    propagate_kernel(f, sys, t0, &probes, &w);

    double sup = 0.0, diff = 0.0;
    for (std::size_t q = 0; q < pick.size(); ++q) {
        const double lhs = std::abs(w[q]);
        const double rhs = scale * std::abs(ghat.values[pick[q]]);
        sup = std::max({sup, lhs, rhs});
        diff = std::max(diff, std::abs(lhs - rhs));
    }
    REQUIRE(diff / sup <= 1e-6);

    // sign flip of t0 conjugates the chirp for real input
    auto gneg = chirp_reduce(f, sys, -t0, {x2});
    double worst = 0.0;
    for (std::size_t i = 0; i < gfun.values.size(); ++i)
        worst = std::max(worst, std::abs(gneg.values[i] - std::conj(gfun.values[i])));
    REQUIRE(worst <= 1e-12);

    // dilating the eigenvalue rescales the z grid exactly
    Eigen::MatrixXd A2 = Eigen::MatrixXd::Zero(2, 2);
    A2(0, 0) = 2.0;
    auto gfun2 = chirp_reduce(f, diagonalize(A2), t0, {x2});
    REQUIRE(gfun2.axes[0].step == Catch::Approx(0.5 * gfun.axes[0].step).epsilon(1e-12));
}

TEST_CASE("uc_audit_rn: compact data stays consistent; spread data is vacuous") {
    auto sys = diagonalize(Eigen::MatrixXd::Identity(1, 1));

    Grid1D g = centered_grid(256.0, 1 << 13);
    auto f = bump_nd({g}, 1.0);
    auto rep = uc_audit_rn(f, sys, 0.25, weight_presets::sqrt_growth());
    REQUIRE(rep.compactly_supported);
    REQUIRE(rep.declared_psi.convergent());
    REQUIRE(rep.fitted_tail.convergent()); // measured envelope grows slower than r
    REQUIRE(rep.verdict == AuditVerdict::consistent);

    // wide Gaussian: the compact-support hypothesis fails
    SampledFunctionND wide;
    Grid1D gw = centered_grid(32.0, 1 << 12);
    wide.axes = {gw};
    wide.values.resize(gw.count);
    for (std::size_t i = 0; i < gw.count; ++i) {
        const double x = gw.point(i);
        wide.values[i] = std::exp(-pi * x * x / 16.0);
    }
    auto rep2 = uc_audit_rn(wide, sys, 0.25, weight_presets::sqrt_growth());
    REQUIRE_FALSE(rep2.compactly_supported);
    REQUIRE(rep2.verdict == AuditVerdict::vacuous_consistent);

    // zero state
    SampledFunctionND zero;
    zero.axes = {gw};
    zero.values.assign(gw.count, cplx(0.0));
    REQUIRE(uc_audit_rn(zero, sys, 0.25, weight_presets::sqrt_growth()).verdict ==
            AuditVerdict::consistent);
}
