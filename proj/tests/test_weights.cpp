#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ulab/weights.hpp"

using namespace ulab;

TEST_CASE("ingham_integral_test: convergent (log)^-2 with reference value") {
    auto theta = weight_presets::log_pow(2.0);
    auto c = ingham_integral_test(theta, 1);
    REQUIRE(c.convergent());
    // reference: int_1^inf dt/(t log^2(e+t)) = 1.1772220812616170 (30-digit quadrature)
    REQUIRE(std::abs(c.value_or_rate - 1.1772220812616170) <= c.error_bound * (1.0 + 1e-9) + 1e-9);
}

TEST_CASE("ingham_integral_test: constant weight diverges harmonically") {
    auto c = ingham_integral_test(weight_presets::constant(0.7), 1);
    REQUIRE_FALSE(c.convergent());
    // partial integrals grow like 0.7 log T
    REQUIRE(c.value_or_rate == Catch::Approx(0.7).epsilon(1e-3));
}

TEST_CASE("ingham_integral_test: (log)^-1 diverges like log log T") {
    auto c = ingham_integral_test(weight_presets::log_pow(1.0), 1);
    REQUIRE_FALSE(c.convergent());
    // substitution u = log t turns the integral into the harmonic one; the
    // growth against log log T has slope about 1
    REQUIRE(c.evidence.find("log log T") != std::string::npos);
    auto pos = c.evidence.find("vs log log T = ");
    const double rate2 = std::stod(c.evidence.substr(pos + 15));
    REQUIRE(rate2 == Catch::Approx(1.0).epsilon(0.08));
}

TEST_CASE("ingham_integral_test: preconditions") {
    REQUIRE_THROWS_AS(ingham_integral_test(weight_presets::sqrt_growth(), 1), PreconditionError);
}

TEST_CASE("ingham_integral_test: the 4/sqrt(r+1) profile is convergent") {
    auto c = ingham_integral_test(weight_presets::aux_inv_sqrt(), 2);
    REQUIRE(c.convergent());
    // reference: int_1^inf 4/(t sqrt(t+1)) dt = 7.0509886961563441 (30-digit quadrature)
    REQUIRE(std::abs(c.value_or_rate - 7.0509886961563441) <= c.error_bound + 1e-8);
}

TEST_CASE("pw_integral_test: sqrt profile convergent, linear divergent, zero trivial") {
    auto cs = pw_integral_test(weight_presets::sqrt_growth());
    REQUIRE(cs.convergent());
    // reference: int_R sqrt|t|/(1+t^2) dt = pi sqrt(2) = 4.442882938158366
    REQUIRE(std::abs(cs.value_or_rate - 4.442882938158366) <= cs.error_bound + 1e-8);

    auto cl = pw_integral_test(weight_presets::linear_growth());
    REQUIRE_FALSE(cl.convergent());
    // int t/(1+t^2) grows like log T
    REQUIRE(cl.value_or_rate == Catch::Approx(2.0).epsilon(1e-2));

    auto cz = pw_integral_test(weight_presets::zero());
    REQUIRE(cz.convergent());
    REQUIRE(std::abs(cz.value_or_rate) <= 1e-12);
}

TEST_CASE("pw_integral_test: half-log profile has the closed-form value pi log 2") {
    auto c = pw_integral_test(weight_presets::half_log_sq());
    REQUIRE(c.convergent());
    REQUIRE(std::abs(c.value_or_rate - 2.1775860903036021) <= c.error_bound + 1e-8);
}

TEST_CASE("carleman_divergence: quartic-argument sums agree with the integral test") {
    auto c1 = carleman_divergence(weight_presets::log_pow(1.0), 4096);
    REQUIRE_FALSE(c1.convergent());

    auto c2 = carleman_divergence(weight_presets::log_pow(2.0), 4096);
    REQUIRE(c2.convergent());
    // reference: sum_k 1/(k log^2(e+k^4)) = 0.69844406669586748; the partial
    // sum must sit below the reference and within the tail bracket
    REQUIRE(c2.value_or_rate <= 0.69844406669586748);
    REQUIRE(0.69844406669586748 - c2.value_or_rate <= c2.error_bound * (1.0 + 1e-9));

    auto c3 = carleman_divergence(weight_presets::zero(), 64);
    REQUIRE(c3.convergent());
    REQUIRE(c3.value_or_rate == 0.0);

    REQUIRE_THROWS_AS(carleman_divergence(weight_presets::log_pow(2.0), 8), ConfigError);
}

TEST_CASE("catalog property: carleman verdict equals integral-test verdict") {
    const WeightFunction catalog[] = {
        weight_presets::log_pow(0.5),  weight_presets::log_pow(1.0),
        weight_presets::log_pow(1.01), weight_presets::log_pow(2.0),
        weight_presets::log_pow(3.0),  weight_presets::inv_pow(0.25),
        weight_presets::inv_pow(1.0),  weight_presets::aux_inv_sqrt(),
        weight_presets::constant(1.0), weight_presets::zero(),
        weight_presets::log_loglog_pow(1.0), weight_presets::log_loglog_pow(2.0),
    };
    for (const auto& theta : catalog) {
        auto ci = ingham_integral_test(theta, 1);
        auto cc = carleman_divergence(theta, 256);
        INFO(theta.name);
        REQUIRE(ci.convergent() == cc.convergent());
    }
}

TEST_CASE("classification verdicts are scale invariant") {
    for (double scale : {0.01, 1.0, 250.0}) {
        WeightFunction w = weight_presets::log_pow(2.0);
        auto base_eval = w.eval;
        auto base_tail = w.tail_log_weighted;
        w.eval = [=](double r) { return scale * base_eval(r); };
        w.tail_log_weighted = [=](double T) { return scale * base_tail(T); };
        w.tail_sq_weighted = [=](double T) { return scale * 2.0 / std::sqrt(T); };
        REQUIRE(ingham_integral_test(w, 1).convergent());

        WeightFunction d = weight_presets::log_pow(1.0);
        auto d_eval = d.eval;
        d.eval = [=](double r) { return scale * d_eval(r); };
        REQUIRE_FALSE(ingham_integral_test(d, 1).convergent());
    }
}
