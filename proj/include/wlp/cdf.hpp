#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "wlp/dist.hpp"
#include "wlp/expr.hpp"
#include "wlp/numeric.hpp"
#include "wlp/setfunc.hpp"

namespace wlp {

// The four equivalent closed forms of F_p(y) = Pr[Y_p <= y]. All of them
// must produce identical values; keeping every route live is what makes the
// cross-checks meaningful.
//
//   Disjunctive        1 - Phi_{v_{p,y}}(1-F_1, ..., 1-F_n)
//   Conjunctive        Phi_{v*_{p,y}}(F_1, ..., F_n)
//   MobiusDisjunctive  1 - sum_S m_{v_{p,y}}(S)  prod_{i in S} (1-F_i)
//   MobiusConjunctive  sum_S m_{v*_{p,y}}(S) prod_{i in S} F_i
//
// The Heaviside convention H(x)=1 iff x>=0 makes Pr[Y_p <= y] include
// equality, so F_p is right-continuous and degenerate inputs produce their
// jumps exactly at vertex values.
enum class CdfMethod { Disjunctive, Conjunctive, MobiusDisjunctive, MobiusConjunctive };

// prod_{i not in S} F_i(y) * prod_{i in S} (1 - F_i(y)): the probability that
// exactly the variables in S exceed y. This kernel is shared by the CDF sums
// and the subset-sum expectation route.
inline double subset_weight(const RandomVector& rv, std::uint32_t mask, double y) {
    double w = 1.0;
    for (std::size_t i = 0; i < rv.size(); ++i)
        w *= (mask >> i) & 1u ? rv[i].survival(y) : rv[i].cdf(y);
    return w;
}

inline double cdf_at(const VertexTable& table, const RandomVector& rv, double y,
                     CdfMethod method = CdfMethod::Disjunctive) {
    check_arity(rv, table.n);
    std::vector<double> f(rv.size()), fbar(rv.size());
    for (std::size_t i = 0; i < rv.size(); ++i) {
        f[i] = rv[i].cdf(y);
        fbar[i] = rv[i].survival(y);
    }
    switch (method) {
        case CdfMethod::Disjunctive: {
            auto [v, v_star] = threshold_setfunctions(table, y);
            return 1.0 - multilinear_extension(v, fbar, MleForm::Product);
        }
        case CdfMethod::Conjunctive: {
            auto [v, v_star] = threshold_setfunctions(table, y);
            return multilinear_extension(v_star, f, MleForm::Product);
        }
        case CdfMethod::MobiusDisjunctive: {
            auto [v, v_star] = threshold_setfunctions(table, y);
            return 1.0 - multilinear_extension(v, fbar, MleForm::Mobius);
        }
        case CdfMethod::MobiusConjunctive: {
            auto [v, v_star] = threshold_setfunctions(table, y);
            return multilinear_extension(v_star, f, MleForm::Mobius);
        }
    }
    return 0.0;  // unreachable
}

inline double survival_at(const VertexTable& table, const RandomVector& rv, double t,
                          CdfMethod method = CdfMethod::Disjunctive) {
    return 1.0 - cdf_at(table, rv, t, method);
}

// Ordinary lattice polynomials (vertex values only {a, b}, alpha(empty) = a):
// F_p(y) = 1 - sum over {S : p(e_S) = b} of the subset weights.
inline double cdf_lattice(const VertexTable& table, const RandomVector& rv, double y) {
    check_arity(rv, table.n);
    if (!table.is_lattice_polynomial())
        throw std::invalid_argument(
            "cdf_lattice requires an {a,b}-valued vertex table with alpha(empty)=a");
    NeumaierSum acc;
    for (std::uint32_t mask = 0; mask < table.alpha.size(); ++mask)
        if (table.alpha[mask] == table.lattice.b) acc.add(subset_weight(rv, mask, y));
    return 1.0 - acc.value();
}

inline std::vector<double> cdf_grid(const VertexTable& table, const RandomVector& rv,
                                    std::span<const double> ys,
                                    CdfMethod method = CdfMethod::Disjunctive) {
    std::vector<double> out;
    out.reserve(ys.size());
    for (double y : ys) out.push_back(cdf_at(table, rv, y, method));
    return out;
}

// Sorted distinct finite vertex values; the CDF integrands kink exactly here,
// so these feed the quadrature breakpoints (and the grid-evaluation caches).
inline std::vector<double> distinct_alphas(const VertexTable& table) {
    std::vector<double> vals;
    vals.reserve(table.alpha.size());
    for (double v : table.alpha)
        if (std::isfinite(v)) vals.push_back(v);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    return vals;
}

}  // namespace wlp
