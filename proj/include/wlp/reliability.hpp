#pragma once

#include <cmath>
#include <cstdint>
#include <iostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wlp/cdf.hpp"
#include "wlp/dist.hpp"
#include "wlp/expr.hpp"
#include "wlp/moments.hpp"
#include "wlp/setfunc.hpp"

namespace wlp {

// Above this arity the closed-form MTTF falls back to quadrature: the double
// subset sum enumerates 3^n (S, T) pairs.
inline constexpr int kMttfClosedFormCap = 14;

// ── SystemModel ─────────────────────────────────────────────────────────────
// Coherent-system structure as a WLP over component lifetimes (series = min,
// parallel = max, constants = fixed-lifetime components) on the lattice
// [0, +inf], plus one lifetime law per component.
struct SystemModel {
    WlpExpr structure;
    RandomVector components;
    VertexTable table;

    SystemModel(WlpExpr expr, RandomVector lifetimes)
        : structure(std::move(expr)),
          components(std::move(lifetimes)),
          table(vertex_table(structure, LatticeInterval::nonnegative())) {
        check_arity(components, structure.arity());
        for (std::size_t i = 0; i < components.size(); ++i)
            if (components[i].support().first < 0.0)
                throw std::invalid_argument("component " + std::to_string(i + 1) +
                                            " has a lifetime law with negative support");
    }
};

struct ExponentialRates {
    std::vector<double> lambdas;

    explicit ExponentialRates(std::vector<double> rates) : lambdas(std::move(rates)) {
        for (double l : lambdas)
            if (!(std::isfinite(l) && l > 0.0))
                throw std::invalid_argument("exponential rates must be positive");
    }

    double lambda_of(std::uint32_t mask) const {
        double sum = 0.0;
        for (std::size_t i = 0; i < lambdas.size(); ++i)
            if ((mask >> i) & 1u) sum += lambdas[i];
        return sum;
    }

    RandomVector as_random_vector() const {
        RandomVector rv;
        rv.reserve(lambdas.size());
        for (double l : lambdas) rv.push_back(Distribution::exponential(l));
        return rv;
    }
};

// ── system_reliability ──────────────────────────────────────────────────────
// R_p(t) = Pr[Y_p > t] = Phi_{v_{p,t}}(r_1(t), ..., r_n(t)) with component
// reliabilities r_i(t) = 1 - F_i(t). Computed through the multilinear
// extension directly; survival_at reaches the same value through 1 - F_p.
inline double system_reliability(const SystemModel& model, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("system reliability needs t > 0");
    auto [v, v_star] = threshold_setfunctions(model.table, t);
    std::vector<double> r(model.components.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = model.components[i].survival(t);
    return multilinear_extension(v, r, MleForm::Product);
}

// ── mean_lifetime_numeric ───────────────────────────────────────────────────
// E[Y_p] = int_0^inf R_p(t) dt by adaptive quadrature over the effective
// domain; the oracle for the exponential closed form, and the general path
// for non-exponential lifetimes.
inline double mean_lifetime_numeric(const SystemModel& model,
                                    const ExpectationOptions& opts = {}) {
    return expectation(model.table, model.components, GSpec::identity(),
                       ExpectationRoute::SurvivalIntegral, opts);
}

// ── mttf_exponential ────────────────────────────────────────────────────────
// Mean time to failure under r_i(t) = e^{-lambda_i t}:
//
//   E[Y_p] = alpha(empty) + sum_{S != empty} sum_{T <= S} (-1)^{|S|-|T|}
//            [1 - e^{-lambda(S) alpha(T)}] / lambda(S),
//
// where alpha(T) = +inf contributes the limit value 1/lambda(S). The double
// sum enumerates 3^n pairs, so beyond the cap this delegates to the
// quadrature path with a notice.
inline double mttf_exponential(const VertexTable& table, const ExponentialRates& rates) {
    if (static_cast<int>(rates.lambdas.size()) != table.n)
        throw std::invalid_argument("rate vector length does not match table arity");
    if (!(table.lattice.a == 0.0 && table.lattice.b == kInf))
        throw std::invalid_argument("mttf requires the lifetime lattice [0, +inf]");
    if (!std::isfinite(table.alpha.front()))
        throw std::invalid_argument("mttf requires a finite alpha(empty)");

    if (table.n > kMttfClosedFormCap) {
        std::clog << "wlp: mttf closed form capped at n = " << kMttfClosedFormCap
                  << ", using quadrature for n = " << table.n << "\n";
        return expectation(table, rates.as_random_vector(), GSpec::identity(),
                           ExpectationRoute::SurvivalIntegral, ExpectationOptions{});
    }

    NeumaierSum acc;
    acc.add(table.alpha.front());
    const std::uint32_t full = table.full_mask();
    for (std::uint32_t s_mask = 1; s_mask <= full && s_mask != 0; ++s_mask) {
        const double lambda = rates.lambda_of(s_mask);
        const int s_bits = popcount(s_mask);
        // submask walk covers every T <= S, including the empty set
        std::uint32_t t_mask = s_mask;
        while (true) {
            const double a = table.alpha[t_mask];
            const double numerator = std::isinf(a) ? 1.0 : -std::expm1(-lambda * a);
            const double sign = ((s_bits - popcount(t_mask)) & 1) ? -1.0 : 1.0;
            acc.add(sign * numerator / lambda);
            if (t_mask == 0) break;
            t_mask = (t_mask - 1) & s_mask;
        }
    }
    return acc.value();
}

}  // namespace wlp
