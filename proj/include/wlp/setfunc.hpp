#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wlp/expr.hpp"
#include "wlp/numeric.hpp"

namespace wlp {

// ── SetFunction ─────────────────────────────────────────────────────────────
// Real-valued function on the subsets of [n], stored densely and indexed by
// subset bitmask (bit i-1 set <=> variable i in S). Carrier for the game v,
// the fuzzy measure mu, the Moebius transform m_v and the threshold functions
// v_{p,y}, v*_{p,y}.
struct SetFunction {
    int n = 0;
    std::vector<double> values;  // size 2^n, mask order

    SetFunction() = default;
    SetFunction(int ground_set_size, std::vector<double> vals)
        : n(ground_set_size), values(std::move(vals)) {
        if (n < 0 || n > 26)
            throw std::invalid_argument("set function ground set out of range");
        if (values.size() != (std::size_t{1} << n))
            throw std::invalid_argument("set function needs exactly 2^n values");
        for (double v : values)
            if (!std::isfinite(v))
                throw std::invalid_argument("set function values must be finite");
    }

    static SetFunction zeros(int ground_set_size) {
        return SetFunction(ground_set_size,
                           std::vector<double>(std::size_t{1} << ground_set_size, 0.0));
    }

    double operator()(std::uint32_t mask) const { return values[mask]; }
    std::uint32_t full_mask() const { return (1u << n) - 1u; }
};

// ── Moebius / zeta transforms ───────────────────────────────────────────────
// m_v(S) = sum over T <= S of (-1)^{|S|-|T|} v(T), computed by the in-place
// subset-sum sweep in O(n 2^n). The O(4^n) double loop lives in oracle.hpp
// as an independent cross-check.
inline SetFunction mobius_transform(SetFunction v) {
    const std::size_t size = v.values.size();
    for (int d = 0; d < v.n; ++d)
        for (std::uint32_t mask = 0; mask < size; ++mask)
            if (mask & (1u << d)) v.values[mask] -= v.values[mask ^ (1u << d)];
    return v;
}

// Inverse sweep: v(S) = sum over T <= S of m(T).
inline SetFunction zeta_transform(SetFunction m) {
    const std::size_t size = m.values.size();
    for (int d = 0; d < m.n; ++d)
        for (std::uint32_t mask = 0; mask < size; ++mask)
            if (mask & (1u << d)) m.values[mask] += m.values[mask ^ (1u << d)];
    return m;
}

// ── multilinear extension ───────────────────────────────────────────────────
// Owen's multilinear extension Phi_v interpolating v at the cube's vertices.
// Product form:  sum_S v(S) prod_{i in S} x_i prod_{i not in S} (1-x_i)
// Moebius form:  sum_S m_v(S) prod_{i in S} x_i
enum class MleForm { Product, Mobius };

inline double multilinear_extension(const SetFunction& v, std::span<const double> x,
                                    MleForm form = MleForm::Product) {
    if (static_cast<int>(x.size()) != v.n)
        throw std::invalid_argument("multilinear extension: point dimension mismatch");
    for (double xi : x)
        if (!(xi >= 0.0 && xi <= 1.0))
            throw std::invalid_argument("multilinear extension: coordinate outside [0,1]");
    NeumaierSum acc;
    if (form == MleForm::Product) {
        for (std::uint32_t mask = 0; mask < v.values.size(); ++mask) {
            double prod = v.values[mask];
            if (prod == 0.0) continue;
            for (int i = 0; i < v.n; ++i)
                prod *= (mask >> i) & 1u ? x[static_cast<std::size_t>(i)]
                                         : 1.0 - x[static_cast<std::size_t>(i)];
            acc.add(prod);
        }
    } else {
        const SetFunction m = mobius_transform(v);
        for (std::uint32_t mask = 0; mask < m.values.size(); ++mask) {
            double prod = m.values[mask];
            if (prod == 0.0) continue;
            for (int i = 0; i < m.n; ++i)
                if ((mask >> i) & 1u) prod *= x[static_cast<std::size_t>(i)];
            acc.add(prod);
        }
    }
    return acc.value();
}

// ── threshold set functions ─────────────────────────────────────────────────
// For fixed y, the 0/1-valued games driving the distribution formulas:
//   v_{p,y}(S)  = 1  iff  y < alpha(S)         (i.e. 1 - H_{p(e_S)}(y))
//   v*_{p,y}(S) = 1  iff  y >= alpha([n]\S)    (i.e. H_{p(e_{[n]\S})}(y))
// Both are nondecreasing under inclusion and dual to each other:
// v*(S) = 1 - v([n]\S).
inline std::pair<SetFunction, SetFunction> threshold_setfunctions(const VertexTable& table,
                                                                  double y) {
    SetFunction v = SetFunction::zeros(table.n);
    SetFunction v_star = SetFunction::zeros(table.n);
    for (std::uint32_t mask = 0; mask < v.values.size(); ++mask) {
        v.values[mask] = y < table.alpha[mask] ? 1.0 : 0.0;
        v_star.values[mask] = y >= table.beta(mask) ? 1.0 : 0.0;
    }
    return {std::move(v), std::move(v_star)};
}

// ── fuzzy measures ──────────────────────────────────────────────────────────
inline bool is_fuzzy_measure(const SetFunction& v, double a, double b) {
    if (v.values.front() != a) return false;
    if (v.values.back() != b) return false;
    for (std::uint32_t mask = 0; mask < v.values.size(); ++mask)
        for (int i = 0; i < v.n; ++i)
            if (!((mask >> i) & 1u) && v.values[mask] > v.values[mask | (1u << i)])
                return false;
    return true;
}

// Nondecreasing set function with mu(empty) = a and mu([n]) = b. Validated on
// construction; the Sugeno/Choquet operations require the unit interval.
struct FuzzyMeasure {
    SetFunction mu;
    double a = 0.0;
    double b = 1.0;

    FuzzyMeasure(SetFunction values, double bottom, double top)
        : mu(std::move(values)), a(bottom), b(top) {
        if (!is_fuzzy_measure(mu, a, b))
            throw std::invalid_argument(
                "not a fuzzy measure: requires mu(empty)=a, mu(full)=b, nondecreasing");
    }

    static FuzzyMeasure on_unit_interval(SetFunction values) {
        return FuzzyMeasure(std::move(values), 0.0, 1.0);
    }

    // The vertex table of the Sugeno integral S_mu, which is exactly the WLP
    // with these disjunctive coefficients on [a, b].
    VertexTable as_vertex_table() const {
        return VertexTable{mu.n, LatticeInterval(a, b), mu.values};
    }
};

}  // namespace wlp
