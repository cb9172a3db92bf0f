#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wlp/cdf.hpp"
#include "wlp/dist.hpp"
#include "wlp/numeric.hpp"
#include "wlp/setfunc.hpp"

namespace wlp {

namespace detail {

inline double ipow(double x, int r) {
    double acc = 1.0;
    double base = x;
    for (int e = r; e > 0; e >>= 1) {
        if (e & 1) acc *= base;
        base *= base;
    }
    return acc;
}

}  // namespace detail

// ── GSpec ───────────────────────────────────────────────────────────────────
// The transform g in E[g(Y_p)], supplied together with its derivative so the
// Stieltjes integrals never fall back on numerical differentiation. The four
// kinds cover the mean, raw moments, central moments and the MGF.
struct GSpec {
    enum class Kind { Identity, Power, CenteredPower, Exponential };

    Kind kind = Kind::Identity;
    int exponent = 1;
    double center = 0.0;
    double rate = 0.0;  // Exponential: g(y) = e^{rate * y}

    static GSpec identity() { return {}; }

    static GSpec power(int r) {
        if (r < 1) throw std::invalid_argument("power moment order must be >= 1");
        return {Kind::Power, r, 0.0, 0.0};
    }

    static GSpec centered_power(int r, double c) {
        if (r < 1) throw std::invalid_argument("power moment order must be >= 1");
        if (!std::isfinite(c)) throw std::invalid_argument("moment center must be finite");
        return {Kind::CenteredPower, r, c, 0.0};
    }

    static GSpec exponential(double t) {
        if (!std::isfinite(t)) throw std::invalid_argument("MGF argument must be finite");
        return {Kind::Exponential, 1, 0.0, t};
    }

    double g(double y) const {
        switch (kind) {
            case Kind::Identity: return y;
            case Kind::Power: return detail::ipow(y, exponent);
            case Kind::CenteredPower: return detail::ipow(y - center, exponent);
            case Kind::Exponential: return std::exp(rate * y);
        }
        return 0.0;  // unreachable
    }

    double dg(double y) const {
        switch (kind) {
            case Kind::Identity: return 1.0;
            case Kind::Power: return exponent * detail::ipow(y, exponent - 1);
            case Kind::CenteredPower: return exponent * detail::ipow(y - center, exponent - 1);
            case Kind::Exponential: return rate * std::exp(rate * y);
        }
        return 0.0;  // unreachable
    }
};

enum class ExpectationRoute { SurvivalIntegral, SubsetSum };

struct ExpectationOptions {
    QuadratureOptions quad{};
    double truncation_eps = 1e-12;
    double tail_tolerance = 1e-9;  // max admissible |g(hi)| * (1 - F_i(hi))
};

namespace detail {

// Quadrature window for E[g(Y_p)]: the merged effective bounds of the inputs,
// stretched to cover every finite vertex value (Y_p can sit at a vertex value
// outside the supports, e.g. a constant below every support).
inline std::pair<double, double> expectation_window(const VertexTable& table,
                                                    const RandomVector& rv, double eps) {
    double lo = kInf, hi = -kInf;
    for (const auto& d : rv) {
        auto [dlo, dhi] = d.effective_bounds(eps);
        lo = std::min(lo, dlo);
        hi = std::max(hi, dhi);
    }
    for (double a : table.alpha) {
        if (!std::isfinite(a)) continue;
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    return {lo, hi};
}

// Verifies lim g(y)[1-F_i(y)] = 0 at the truncation point, pushing the point
// outward while the tail still shrinks. A growing tail (e.g. the MGF beyond
// an exponential rate) is a genuine hypothesis violation and is reported with
// the variable that breaks it.
inline double settle_upper_truncation(double hi, const GSpec& g, const RandomVector& rv,
                                      double tail_tolerance) {
    double prev_worst = kInf;
    for (int iter = 0; iter < 200; ++iter) {
        double worst = 0.0;
        int worst_index = 0;
        for (std::size_t i = 0; i < rv.size(); ++i) {
            const double s = rv[i].survival(hi);
            const double tail = s == 0.0 ? 0.0 : std::abs(g.g(hi)) * s;
            if (std::isnan(tail) || tail > worst) {
                worst = std::isnan(tail) ? kInf : tail;
                worst_index = static_cast<int>(i) + 1;
            }
        }
        if (worst <= tail_tolerance) return hi;
        if (worst >= prev_worst)
            throw hypothesis_error(
                "g(y)*[1-F_" + std::to_string(worst_index) +
                    "(y)] does not vanish at the upper truncation point (got " +
                    double_to_string(worst) + ")",
                worst_index);
        prev_worst = worst;
        hi = hi <= 0.0 ? 1.0 : hi * 1.5;
    }
    throw hypothesis_error("tail condition not met after extending the truncation point", 0);
}

inline std::vector<double> expectation_breakpoints(const VertexTable& table,
                                                   const RandomVector& rv) {
    std::vector<double> cuts = distinct_alphas(table);
    for (const auto& d : rv) {
        auto [slo, shi] = d.support();
        if (std::isfinite(slo)) cuts.push_back(slo);
        if (std::isfinite(shi)) cuts.push_back(shi);
        if (d.family() == Distribution::Family::Table)
            for (const auto& [x, f] : d.points()) cuts.push_back(x);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

}  // namespace detail

// ── expectation ─────────────────────────────────────────────────────────────
// E[g(Y_p)] by either of two equivalent routes:
//
//   SurvivalIntegral   g(lo) + int [1 - F_p(y)] dg(y)
//   SubsetSum          g(lo) + sum_S int_{lo}^{alpha(S)} prod_{i not in S} F_i
//                                    prod_{i in S} [1 - F_i] dg(y)
//
// The subset-sum route never touches F_p itself, which is what makes the
// agreement between the two a meaningful check.
inline double expectation(const VertexTable& table, const RandomVector& rv, const GSpec& g,
                          ExpectationRoute route = ExpectationRoute::SurvivalIntegral,
                          const ExpectationOptions& opts = {}) {
    check_arity(rv, table.n);
    if (rv.empty())
        return g.g(table.alpha.front());  // constant polynomial, no inputs
    auto [lo, hi] = detail::expectation_window(table, rv, opts.truncation_eps);
    hi = detail::settle_upper_truncation(hi, g, rv, opts.tail_tolerance);
    if (!(lo < hi)) return g.g(lo);
    const std::vector<double> cuts = detail::expectation_breakpoints(table, rv);

    if (route == ExpectationRoute::SurvivalIntegral) {
        auto integrand = [&](double y) { return survival_at(table, rv, y) * g.dg(y); };
        return g.g(lo) + integrate(integrand, lo, hi, opts.quad, cuts);
    }

    // Per-mask tolerance scaled so the 2^n partial integrals still meet the
    // requested total.
    QuadratureOptions mask_opts = opts.quad;
    mask_opts.abs_tol = std::max(opts.quad.abs_tol / static_cast<double>(table.alpha.size()),
                                 1e-14);
    NeumaierSum acc;
    for (std::uint32_t mask = 0; mask < table.alpha.size(); ++mask) {
        const double upper = std::min(std::max(table.alpha[mask], lo), hi);
        if (!(upper > lo)) continue;
        auto integrand = [&](double y) { return subset_weight(rv, mask, y) * g.dg(y); };
        acc.add(integrate(integrand, lo, upper, mask_opts, cuts));
    }
    return g.g(lo) + acc.value();
}

inline double raw_moment(const VertexTable& table, const RandomVector& rv, int r,
                         ExpectationRoute route = ExpectationRoute::SurvivalIntegral,
                         const ExpectationOptions& opts = {}) {
    return expectation(table, rv, GSpec::power(r), route, opts);
}

// The mean is computed once, up front, and passed into the centered transform.
inline double central_moment(const VertexTable& table, const RandomVector& rv, int r,
                             ExpectationRoute route = ExpectationRoute::SurvivalIntegral,
                             const ExpectationOptions& opts = {}) {
    const double mean = expectation(table, rv, GSpec::identity(), route, opts);
    return expectation(table, rv, GSpec::centered_power(r, mean), route, opts);
}

inline double mgf(const VertexTable& table, const RandomVector& rv, double t,
                  ExpectationRoute route = ExpectationRoute::SurvivalIntegral,
                  const ExpectationOptions& opts = {}) {
    return expectation(table, rv, GSpec::exponential(t), route, opts);
}

// ── incomplete beta, integer parameters ─────────────────────────────────────
// B_z(u, v) = int_0^z t^{u-1} (1-t)^{v-1} dt. Evaluated as
// B(u,v) * sum_{j=u}^{u+v-1} C(u+v-1, j) z^j (1-z)^{u+v-1-j}: the binomial
// regrouping of the alternating expansion into nonnegative terms, with exact
// 128-bit integer coefficients. The alternating form cancels catastrophically
// for large v; this one cannot.
inline double incomplete_beta(double z, int u, int v) {
    if (!(z >= 0.0 && z <= 1.0))
        throw std::invalid_argument("incomplete beta: z must lie in [0,1]");
    if (u < 1 || v < 1)
        throw std::invalid_argument("incomplete beta: integer parameters must be >= 1");
    const int m = u + v - 1;
    NeumaierSum tail;
    for (int j = u; j <= m; ++j)
        tail.add(binomial(m, j) * std::pow(z, j) * std::pow(1.0 - z, m - j));
    const double complete = 1.0 / (static_cast<double>(m) * binomial(m - 1, u - 1));
    return complete * tail.value();
}

inline double complete_beta(int u, int v) { return incomplete_beta(1.0, u, v); }

// ── uniform closed form ─────────────────────────────────────────────────────
// For i.i.d. uniform inputs on the unit lattice:
//   E[Y_p^r] = r * sum_S B_{alpha(S)}(n - |S| + r, |S| + 1).
inline double uniform_raw_moment(const VertexTable& table, int r) {
    if (!(table.lattice.a == 0.0 && table.lattice.b == 1.0))
        throw std::invalid_argument("uniform closed form requires the lattice [0,1]");
    if (r < 1) throw std::invalid_argument("moment order must be >= 1");
    NeumaierSum acc;
    for (std::uint32_t mask = 0; mask < table.alpha.size(); ++mask) {
        const int s = popcount(mask);
        acc.add(incomplete_beta(table.alpha[mask], table.n - s + r, s + 1));
    }
    return r * acc.value();
}

// ── Sugeno integral ─────────────────────────────────────────────────────────
// S_mu(x) = max_S min(mu(S), min_{i in S} x_i); exactly the WLP whose vertex
// table is mu.
inline double sugeno_integral(const FuzzyMeasure& measure, std::span<const double> x) {
    if (!(measure.a == 0.0 && measure.b == 1.0))
        throw std::invalid_argument("sugeno integral expects a [0,1]-valued measure");
    if (static_cast<int>(x.size()) != measure.mu.n)
        throw std::invalid_argument("sugeno integral: point dimension mismatch");
    for (double xi : x)
        if (!(xi >= 0.0 && xi <= 1.0))
            throw std::invalid_argument("sugeno integral: coordinate outside [0,1]");
    double best = -kInf;
    for (std::uint32_t mask = 0; mask < measure.mu.values.size(); ++mask) {
        double mmin = 1.0;  // empty meet = lattice top
        for (int i = 0; i < measure.mu.n; ++i)
            if ((mask >> i) & 1u) mmin = std::min(mmin, x[static_cast<std::size_t>(i)]);
        best = std::max(best, std::min(measure.mu.values[mask], mmin));
    }
    return best;
}

// E of the Sugeno integral of uniform inputs: the r = 1 case of the uniform
// closed form applied to mu's vertex table.
inline double sugeno_expectation(const FuzzyMeasure& measure) {
    if (!(measure.a == 0.0 && measure.b == 1.0))
        throw std::invalid_argument("sugeno expectation expects a [0,1]-valued measure");
    return uniform_raw_moment(measure.as_vertex_table(), 1);
}

// ── Choquet integral ────────────────────────────────────────────────────────
// C_mu(x) = sum_S m_mu(S) min_{i in S} x_i over nonempty S (m_mu(empty) = 0
// for a fuzzy measure).
inline double choquet_integral(const FuzzyMeasure& measure, std::span<const double> x) {
    if (!(measure.a == 0.0 && measure.b == 1.0))
        throw std::invalid_argument("choquet integral expects a [0,1]-valued measure");
    if (static_cast<int>(x.size()) != measure.mu.n)
        throw std::invalid_argument("choquet integral: point dimension mismatch");
    for (double xi : x)
        if (!(xi >= 0.0 && xi <= 1.0))
            throw std::invalid_argument("choquet integral: coordinate outside [0,1]");
    const SetFunction m = mobius_transform(measure.mu);
    NeumaierSum acc;
    for (std::uint32_t mask = 1; mask < m.values.size(); ++mask) {
        if (m.values[mask] == 0.0) continue;
        double mmin = 1.0;
        for (int i = 0; i < m.n; ++i)
            if ((mask >> i) & 1u) mmin = std::min(mmin, x[static_cast<std::size_t>(i)]);
        acc.add(m.values[mask] * mmin);
    }
    return acc.value();
}

// E of the Choquet integral of uniform inputs:
//   sum_S mu(S) (n-|S|)! |S|! / (n+1)!  =  sum_S mu(S) / ((n+1) C(n,|S|)).
inline double choquet_expectation(const FuzzyMeasure& measure) {
    if (!(measure.a == 0.0 && measure.b == 1.0))
        throw std::invalid_argument("choquet expectation expects a [0,1]-valued measure");
    const int n = measure.mu.n;
    NeumaierSum acc;
    for (std::uint32_t mask = 0; mask < measure.mu.values.size(); ++mask) {
        const int s = popcount(mask);
        acc.add(measure.mu.values[mask] / ((n + 1) * binomial(n, s)));
    }
    return acc.value();
}

}  // namespace wlp
