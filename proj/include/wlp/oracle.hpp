#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wlp/cdf.hpp"
#include "wlp/dist.hpp"
#include "wlp/expr.hpp"
#include "wlp/moments.hpp"
#include "wlp/rng.hpp"
#include "wlp/setfunc.hpp"

namespace wlp {

// The decomposition recursions branch over all 2^n pin patterns.
inline constexpr int kOracleArityCap = 8;

// ── Monte Carlo simulation ──────────────────────────────────────────────────
// Draws X_i ~ F_i independently and evaluates p. One SplitMix64 stream per
// variable index, so two plans with the same seed produce the same draws and
// enlarging the sample count appends new ones without reordering.
struct SimulationPlan {
    WlpExpr expr;
    RandomVector rv;
    LatticeInterval lattice;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

struct SimulationSummary {
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    double mean = 0.0;
    double se = 0.0;                          // standard error of the mean
    std::array<double, 4> raw_moments{};      // E[Y^1] .. E[Y^4]
    std::vector<double> ecdf_y;
    std::vector<double> ecdf_F;
};

namespace detail {

inline void check_plan(const SimulationPlan& plan) {
    if (plan.samples < 1) throw std::invalid_argument("simulation needs at least one sample");
    check_arity(plan.rv, plan.expr.arity());
    if (!supports_within(plan.rv, plan.lattice))
        throw std::invalid_argument("a component's support leaves the lattice interval");
}

}  // namespace detail

// Raw draws of Y_p in sample order; the Kolmogorov-Smirnov checks sort these
// against the analytic CDF.
inline std::vector<double> simulate_samples(const SimulationPlan& plan) {
    detail::check_plan(plan);
    const int n = plan.expr.arity();
    std::vector<SplitMix64> streams;
    streams.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) streams.push_back(split_stream(plan.seed, static_cast<std::uint64_t>(i)));
    std::vector<double> x(static_cast<std::size_t>(n));
    std::vector<double> out;
    out.reserve(plan.samples);
    for (std::uint64_t s = 0; s < plan.samples; ++s) {
        for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = plan.rv[static_cast<std::size_t>(i)].sample(streams[static_cast<std::size_t>(i)]);
        out.push_back(detail::eval(plan.expr, x));
    }
    return out;
}

inline SimulationSummary simulate(const SimulationPlan& plan, int ecdf_points = 201) {
    detail::check_plan(plan);
    const std::vector<double> ys = simulate_samples(plan);
    const auto count = static_cast<double>(plan.samples);

    std::array<NeumaierSum, 4> moment_sums{};
    for (double y : ys) {
        double p = y;
        for (auto& acc : moment_sums) {
            acc.add(p);
            p *= y;
        }
    }
    SimulationSummary summary;
    summary.samples = plan.samples;
    summary.seed = plan.seed;
    for (std::size_t k = 0; k < 4; ++k) summary.raw_moments[k] = moment_sums[k].value() / count;
    summary.mean = summary.raw_moments[0];
    const double variance =
        plan.samples > 1
            ? std::max(0.0, (moment_sums[1].value() - count * summary.mean * summary.mean) /
                                (count - 1.0))
            : 0.0;
    summary.se = std::sqrt(variance / count);

    // Empirical CDF on a deterministic grid over the inputs' effective window.
    const LatticeInterval window = plan.rv.empty()
                                       ? LatticeInterval(ys.front(), ys.front() + 1.0)
                                       : effective_domain(plan.rv, 1e-9);
    std::vector<double> sorted = ys;
    std::sort(sorted.begin(), sorted.end());
    summary.ecdf_y.reserve(static_cast<std::size_t>(ecdf_points));
    summary.ecdf_F.reserve(static_cast<std::size_t>(ecdf_points));
    for (int j = 0; j < ecdf_points; ++j) {
        const double y =
            window.a + (window.b - window.a) * static_cast<double>(j) / (ecdf_points - 1);
        const auto below = std::upper_bound(sorted.begin(), sorted.end(), y) - sorted.begin();
        summary.ecdf_y.push_back(y);
        summary.ecdf_F.push_back(static_cast<double>(below) / count);
    }
    return summary;
}

// Kolmogorov-Smirnov distance between a sample and a model CDF. Handles
// atoms: tied sample values are compared as a block, and the lower comparison
// uses the CDF's left limit (degenerate components put real mass on single
// points, where the continuous-case formula would report a spurious gap).
template <class Cdf>
double ks_distance(std::vector<double> samples, Cdf&& cdf) {
    std::sort(samples.begin(), samples.end());
    const auto count = static_cast<double>(samples.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < samples.size()) {
        std::size_t j = i;
        while (j < samples.size() && samples[j] == samples[i]) ++j;
        const double v = samples[i];
        d = std::max(d, std::abs(cdf(v) - static_cast<double>(j) / count));
        d = std::max(d, std::abs(cdf(std::nextafter(v, -kInf)) -
                                 static_cast<double>(i) / count));
        i = j;
    }
    return d;
}

// ── recursive expectation (median split) ────────────────────────────────────
// Realizes E[g(Y_p)] = E[g_a(Y_{p_k^a})] + E[g_b(Y_{p_k^b})] with
// g_a(x) = int_{lo}^x F_k dg and g_b = g - g_a, recursing over k = 1..n until
// every variable is pinned to an endpoint and only a transformed g evaluated
// at a constant remains. The transforms live on a shared breakpoint-aligned
// grid as cumulative antiderivatives, so this path shares no quadrature
// machinery with the closed-form routes.
inline double recursive_expectation(const WlpExpr& expr, const RandomVector& rv, const GSpec& g,
                                    const LatticeInterval& lattice, int grid_points = 4096) {
    const int n = expr.arity();
    if (n > kOracleArityCap)
        throw std::invalid_argument("recursive expectation capped at arity " +
                                    std::to_string(kOracleArityCap));
    check_arity(rv, n);
    if (grid_points < 16) throw std::invalid_argument("grid too coarse");
    const VertexTable table = vertex_table(expr, lattice);
    if (rv.empty()) return g.g(table.alpha.front());

    auto [lo, hi] = detail::expectation_window(table, rv, 1e-12);
    hi = detail::settle_upper_truncation(hi, g, rv, 1e-9);
    if (!(lo < hi)) return g.g(lo);

    // breakpoint-aligned composite grid: points spread over the segments
    // between kinks, proportionally to length, every kink kept as a node
    std::vector<double> cuts = detail::expectation_breakpoints(table, rv);
    std::vector<double> edges{lo};
    for (double c : cuts)
        if (c > lo && c < hi) edges.push_back(c);
    edges.push_back(hi);
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(grid_points) + edges.size());
    for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
        const double seg_lo = edges[s], seg_hi = edges[s + 1];
        const int pts = std::max(
            4, static_cast<int>(std::lround(grid_points * (seg_hi - seg_lo) / (hi - lo))));
        for (int j = 0; j < pts; ++j)
            xs.push_back(seg_lo + (seg_hi - seg_lo) * static_cast<double>(j) / pts);
    }
    xs.push_back(hi);
    const std::size_t grid = xs.size();

    // F_k sampled at cell midpoints: the Stieltjes increment over a cell is
    // F_k(mid) * (g(x1) - g(x0)). Midpoint sampling keeps O(h^2) accuracy on
    // smooth stretches and stays exact across CDF jumps, which sit on grid
    // nodes (degenerate components).
    std::vector<std::vector<double>> F_mid(rv.size(), std::vector<double>(grid - 1));
    for (std::size_t i = 0; i < rv.size(); ++i)
        for (std::size_t j = 0; j + 1 < grid; ++j)
            F_mid[i][j] = rv[i].cdf(0.5 * (xs[j] + xs[j + 1]));

    std::vector<double> g0(grid);
    for (std::size_t j = 0; j < grid; ++j) g0[j] = g.g(xs[j]);

    std::vector<double> point(static_cast<std::size_t>(n));
    auto value_at = [&](const std::vector<double>& gv, double c) {
        if (c <= xs.front()) return gv.front();
        if (c >= xs.back()) return gv.back();
        const auto it = std::upper_bound(xs.begin(), xs.end(), c);
        const std::size_t hi_idx = static_cast<std::size_t>(it - xs.begin());
        const double x0 = xs[hi_idx - 1], x1 = xs[hi_idx];
        const double w = (c - x0) / (x1 - x0);
        return gv[hi_idx - 1] * (1.0 - w) + gv[hi_idx] * w;
    };

    auto recurse = [&](auto&& self, int k, const std::vector<double>& gv) -> double {
        if (k > n) return value_at(gv, detail::eval(expr, point));
        const std::vector<double>& Fk = F_mid[static_cast<std::size_t>(k - 1)];
        std::vector<double> ga(grid), gb(grid);
        ga[0] = 0.0;
        for (std::size_t j = 1; j < grid; ++j)
            ga[j] = ga[j - 1] + Fk[j - 1] * (gv[j] - gv[j - 1]);
        for (std::size_t j = 0; j < grid; ++j) gb[j] = gv[j] - ga[j];
        point[static_cast<std::size_t>(k - 1)] = lattice.a;
        const double low_branch = self(self, k + 1, ga);
        point[static_cast<std::size_t>(k - 1)] = lattice.b;
        const double high_branch = self(self, k + 1, gb);
        return low_branch + high_branch;
    };
    return recurse(recurse, 1, g0);
}

// ── g_S sequence expectation ────────────────────────────────────────────────
// The recursive integrand sequence: starting from dg, each step
// multiplies by F_k (k not in S) or 1-F_k (k in S); after n steps the result
// is dg_S^n, and E[g(Y_p)] = sum_S g_S^n(alpha(S)). Only the full set keeps
// the g(lo) base value.
inline double gs_sequence_expectation(const WlpExpr& expr, const RandomVector& rv,
                                      const GSpec& g, const LatticeInterval& lattice,
                                      const ExpectationOptions& opts = {}) {
    const int n = expr.arity();
    if (n > kOracleArityCap)
        throw std::invalid_argument("g_S sequence expectation capped at arity " +
                                    std::to_string(kOracleArityCap));
    check_arity(rv, n);
    const VertexTable table = vertex_table(expr, lattice);
    if (rv.empty()) return g.g(table.alpha.front());

    auto [lo, hi] = detail::expectation_window(table, rv, opts.truncation_eps);
    hi = detail::settle_upper_truncation(hi, g, rv, opts.tail_tolerance);
    if (!(lo < hi)) return g.g(lo);
    const std::vector<double> cuts = detail::expectation_breakpoints(table, rv);

    QuadratureOptions mask_opts = opts.quad;
    mask_opts.abs_tol =
        std::max(opts.quad.abs_tol / static_cast<double>(table.alpha.size()), 1e-14);

    NeumaierSum acc;
    const std::uint32_t full = table.full_mask();
    for (std::uint32_t mask = 0; mask < table.alpha.size(); ++mask) {
        if (mask == full) acc.add(g.g(lo));  // g_S^n(lo) = g(lo) only for S = [n]
        const double upper = std::min(std::max(table.alpha[mask], lo), hi);
        if (!(upper > lo)) continue;
        auto integrand = [&](double y) {
            double w = g.dg(y);
            for (int k = 0; k < n; ++k) {
                const double f = rv[static_cast<std::size_t>(k)].cdf(y);
                w *= (mask >> k) & 1u ? 1.0 - f : f;
            }
            return w;
        };
        acc.add(integrate(integrand, lo, upper, mask_opts, cuts));
    }
    return acc.value();
}

// ── naive Moebius transform ─────────────────────────────────────────────────
// Literal double loop over (S, T <= S); O(4^n). Kept as the independent
// oracle for the fast in-place sweep (bit-for-bit equal on integer values).
inline SetFunction naive_mobius(const SetFunction& v) {
    if (v.n > 12) throw std::invalid_argument("naive Moebius transform capped at n = 12");
    SetFunction m = SetFunction::zeros(v.n);
    for (std::uint32_t s_mask = 0; s_mask < v.values.size(); ++s_mask) {
        double sum = 0.0;
        for (std::uint32_t t_mask = 0; t_mask < v.values.size(); ++t_mask) {
            if ((t_mask & s_mask) != t_mask) continue;
            const double sign = ((popcount(s_mask) - popcount(t_mask)) & 1) ? -1.0 : 1.0;
            sum += sign * v.values[t_mask];
        }
        m.values[s_mask] = sum;
    }
    return m;
}

}  // namespace wlp
