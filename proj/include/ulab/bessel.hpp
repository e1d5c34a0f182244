#pragma once

#include <cmath>

#include "ulab/errors.hpp"

namespace ulab {

// Bessel J of real order nu >= -1/2 for x >= 0: power series below the
// switchover, Hankel asymptotic expansion above it. The series accumulates
// in long double to tame the cancellation near the switchover; the
// asymptotic sums truncate at their smallest term. For half-integer orders
// the asymptotic series terminate and the values are exact closed forms.
inline double bessel_j(double nu, double x, double switchover = 12.0) {
    if (x < 0.0) throw DomainError("bessel_j: negative argument");
    if (nu < -0.5 - 1e-12) throw DomainError("bessel_j: order below -1/2 unsupported");

    if (x == 0.0) {
        if (nu == 0.0) return 1.0;
        if (nu > 0.0) return 0.0;
        throw DomainError("bessel_j: order -1/2 is singular at 0");
    }

    if (x < switchover) {
        const long double half = 0.5L * static_cast<long double>(x);
        const long double q = half * half;
        long double term = std::pow(half, static_cast<long double>(nu)) /
                           std::tgammal(1.0L + static_cast<long double>(nu));
        long double sum = term;
        for (int m = 1; m < 256; ++m) {
            term *= -q / (static_cast<long double>(m) * (static_cast<long double>(nu) + m));
            sum += term;
            if (std::abs(static_cast<double>(term)) <
                    1e-20L * (1.0L + std::abs(static_cast<double>(sum))) &&
                m > x)
                break;
        }
        return static_cast<double>(sum);
    }

    const long double mu = 4.0L * static_cast<long double>(nu) * static_cast<long double>(nu);
    const long double ex = 8.0L * static_cast<long double>(x);
    long double p = 1.0L, q = 0.0L;
    long double ak = 1.0L;
    long double prev = 1e300L;
    for (int k = 1; k <= 64; ++k) {
        const long double num = mu - static_cast<long double>(2 * k - 1) * (2 * k - 1);
        ak *= num / (static_cast<long double>(k) * ex);
        if (ak == 0.0L) break; // terminating (half-integer order)
        const long double mag = std::abs(static_cast<double>(ak));
        if (mag > prev) break; // past the optimal truncation point
        prev = mag;
        const int r = k % 4;
        if (r == 1)
            q += ak;
        else if (r == 2)
            p -= ak;
        else if (r == 3)
            q -= ak;
        else
            p += ak;
        if (mag < 1e-19L) break;
    }
    const double omega = x - (0.5 * nu + 0.25) * 3.14159265358979323846;
    const double amp = std::sqrt(2.0 / (3.14159265358979323846 * x));
    return amp * (static_cast<double>(p) * std::cos(omega) - static_cast<double>(q) * std::sin(omega));
}

} // namespace ulab
