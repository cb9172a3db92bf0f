#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "wlp/errors.hpp"

namespace wlp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Closed interval [a, b] of the extended real line, acting as the bounded
// distributive lattice the polynomials live on. Endpoints may be infinite;
// a < b is required.
struct LatticeInterval {
    double a;
    double b;

    LatticeInterval(double bottom, double top) : a(bottom), b(top) {
        if (std::isnan(a) || std::isnan(b))
            throw std::invalid_argument("lattice endpoints must not be NaN");
        if (!(a < b))
            throw std::invalid_argument("lattice requires a < b, got [" +
                                        std::to_string(a) + ", " + std::to_string(b) + "]");
    }

    static LatticeInterval unit() { return {0.0, 1.0}; }
    static LatticeInterval nonnegative() { return {0.0, kInf}; }
    static LatticeInterval whole_line() { return {-kInf, kInf}; }

    bool contains(double x) const { return x >= a && x <= b; }
    bool is_finite() const { return std::isfinite(a) && std::isfinite(b); }
};

}  // namespace wlp
