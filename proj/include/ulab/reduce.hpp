#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace ulab {

// Pairwise (cascade) summation. Deterministic for a given input order and
// independent of threading, since reductions are always run over the full
// index range in one call.
namespace detail {

template <class T, class Get>
T pairwise_sum_impl(std::size_t lo, std::size_t hi, const Get& get) {
    const std::size_t n = hi - lo;
    if (n <= 32) {
        T acc{};
        for (std::size_t i = lo; i < hi; ++i) acc += get(i);
        return acc;
    }
    const std::size_t mid = lo + n / 2;
    return pairwise_sum_impl<T>(lo, mid, get) + pairwise_sum_impl<T>(mid, hi, get);
}

} // namespace detail

template <class T, class Get>
T pairwise_sum(std::size_t n, const Get& get) {
    if (n == 0) return T{};
    return detail::pairwise_sum_impl<T>(0, n, get);
}

inline double pairwise_sum(std::span<const double> v) {
    return pairwise_sum<double>(v.size(), [&](std::size_t i) { return v[i]; });
}

inline std::complex<double> pairwise_sum(std::span<const std::complex<double>> v) {
    return pairwise_sum<std::complex<double>>(v.size(), [&](std::size_t i) { return v[i]; });
}

} // namespace ulab
