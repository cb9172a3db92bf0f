#pragma once

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace wlp {

// Neumaier-compensated accumulator. The subset sums in this library add up to
// 2^n terms of mixed sign in fixed mask order; plain accumulation loses
// digits once n gets large, so every such reduction goes through this.
struct NeumaierSum {
    double sum = 0.0;
    double compensation = 0.0;

    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            compensation += (sum - t) + x;
        else
            compensation += (x - t) + sum;
        sum = t;
    }

    double value() const { return sum + compensation; }
};

inline int popcount(std::uint32_t mask) { return std::popcount(mask); }

namespace detail {

// Exact binomial coefficient, computed in 128-bit integers so that every
// value used by the closed-form moment formulas (arity cap 20, small r) is
// exact before the final conversion to double.
inline unsigned __int128 binomial_u128(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    unsigned __int128 result = 1;
    for (int i = 1; i <= k; ++i) {
        result = result * static_cast<unsigned>(n - k + i);
        result = result / static_cast<unsigned>(i);
    }
    return result;
}

inline double u128_to_double(unsigned __int128 x) {
    const auto hi = static_cast<std::uint64_t>(x >> 64);
    const auto lo = static_cast<std::uint64_t>(x);
    return static_cast<double>(hi) * 18446744073709551616.0 + static_cast<double>(lo);
}

}  // namespace detail

inline double binomial(int n, int k) {
    if (n < 0 || n > 170)
        throw std::invalid_argument("binomial: n out of supported range");
    return detail::u128_to_double(detail::binomial_u128(n, k));
}

// Shortest round-trip decimal form, used by the canonical expression printer.
inline std::string double_to_string(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

// Fixed 17-significant-digit form (round-trip safe), used for all numeric CLI
// output so repeated runs are byte-identical.
inline std::string double_to_string_17(double x) {
    char buf[64];
    int len = std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf, static_cast<std::size_t>(len));
}

}  // namespace wlp
