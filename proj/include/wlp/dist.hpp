#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wlp/lattice.hpp"
#include "wlp/quadrature.hpp"
#include "wlp/rng.hpp"

namespace wlp {

// ── Distribution ────────────────────────────────────────────────────────────
// Univariate law exposing the CDF, support bounds, and a seeded inverse-
// transform sampler. Four families cover the artifact: uniform(lo,hi),
// exponential(rate), the degenerate constant(c), and a piecewise-linear CDF
// given by interpolation points.
class Distribution {
public:
    enum class Family { Uniform, Exponential, Constant, Table };

    static Distribution uniform(double lo, double hi) {
        if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi))
            throw std::invalid_argument("uniform requires finite lo < hi");
        Distribution d(Family::Uniform);
        d.p1_ = lo;
        d.p2_ = hi;
        return d;
    }

    static Distribution exponential(double rate) {
        if (!(std::isfinite(rate) && rate > 0.0))
            throw std::invalid_argument("exponential requires rate > 0");
        Distribution d(Family::Exponential);
        d.p1_ = rate;
        return d;
    }

    static Distribution constant(double c) {
        if (!std::isfinite(c)) throw std::invalid_argument("constant requires a finite value");
        Distribution d(Family::Constant);
        d.p1_ = c;
        return d;
    }

    // Piecewise-linear CDF through (x_j, F_j): x strictly increasing,
    // F nondecreasing from 0 to 1; F is 0 left of the first point and 1 right
    // of the last.
    static Distribution table(std::vector<std::pair<double, double>> points) {
        if (points.size() < 2)
            throw std::invalid_argument("table distribution needs at least two points");
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (!std::isfinite(points[i].first) || !std::isfinite(points[i].second))
                throw std::invalid_argument("table distribution points must be finite");
            if (i > 0 && !(points[i - 1].first < points[i].first))
                throw std::invalid_argument("table distribution x values must strictly increase");
            if (i > 0 && points[i - 1].second > points[i].second)
                throw std::invalid_argument("table distribution CDF must be nondecreasing");
        }
        if (points.front().second != 0.0 || points.back().second != 1.0)
            throw std::invalid_argument("table distribution CDF must run from 0 to 1");
        Distribution d(Family::Table);
        d.points_ = std::move(points);
        return d;
    }

    Family family() const { return family_; }

    double cdf(double y) const {
        switch (family_) {
            case Family::Uniform:
                if (y <= p1_) return 0.0;
                if (y >= p2_) return 1.0;
                return (y - p1_) / (p2_ - p1_);
            case Family::Exponential:
                return y <= 0.0 ? 0.0 : -std::expm1(-p1_ * y);
            case Family::Constant:
                return y >= p1_ ? 1.0 : 0.0;
            case Family::Table: {
                if (y <= points_.front().first) return 0.0;
                if (y >= points_.back().first) return 1.0;
                auto it = std::upper_bound(
                    points_.begin(), points_.end(), y,
                    [](double v, const std::pair<double, double>& q) { return v < q.first; });
                const auto& [x1, f1] = *it;
                const auto& [x0, f0] = *(it - 1);
                return f0 + (f1 - f0) * (y - x0) / (x1 - x0);
            }
        }
        return 0.0;  // unreachable
    }

    // Computed per family rather than as 1 - cdf: the exponential tail stays
    // accurate far below the point where 1 - F underflows against 1.
    double survival(double y) const {
        if (family_ == Family::Exponential)
            return y <= 0.0 ? 1.0 : std::exp(-p1_ * y);
        return 1.0 - cdf(y);
    }

    // Smallest interval carrying all the mass (endpoints may be infinite).
    std::pair<double, double> support() const {
        switch (family_) {
            case Family::Uniform: return {p1_, p2_};
            case Family::Exponential: return {0.0, kInf};
            case Family::Constant: return {p1_, p1_};
            case Family::Table: return {points_.front().first, points_.back().first};
        }
        return {0.0, 0.0};
    }

    // Finite [lo, hi] with F(lo) <= eps and F(hi) >= 1 - eps, used to
    // truncate integrals over unbounded supports.
    std::pair<double, double> effective_bounds(double eps) const {
        switch (family_) {
            case Family::Uniform: return {p1_, p2_};
            case Family::Exponential: return {0.0, -std::log(eps) / p1_};
            case Family::Constant: return {p1_, p1_};
            case Family::Table: return {points_.front().first, points_.back().first};
        }
        return {0.0, 0.0};
    }

    // Inverse-transform draw from the given stream.
    double sample(SplitMix64& rng) const {
        const double u = rng.next_double();
        switch (family_) {
            case Family::Uniform:
                return p1_ + u * (p2_ - p1_);
            case Family::Exponential:
                return -std::log1p(-u) / p1_;
            case Family::Constant:
                return p1_;
            case Family::Table: {
                auto it = std::lower_bound(
                    points_.begin(), points_.end(), u,
                    [](const std::pair<double, double>& q, double v) { return q.second < v; });
                if (it == points_.begin()) return points_.front().first;
                if (it == points_.end()) return points_.back().first;
                const auto& [x1, f1] = *it;
                const auto& [x0, f0] = *(it - 1);
                return x0 + (x1 - x0) * (u - f0) / (f1 - f0);
            }
        }
        return 0.0;  // unreachable
    }

    // Family parameters, exposed for serialization.
    double param1() const { return p1_; }
    double param2() const { return p2_; }
    const std::vector<std::pair<double, double>>& points() const { return points_; }

private:
    explicit Distribution(Family f) : family_(f) {}

    Family family_;
    double p1_ = 0.0;
    double p2_ = 0.0;
    std::vector<std::pair<double, double>> points_;
};

// One independent law per variable, in index order.
using RandomVector = std::vector<Distribution>;

inline void check_arity(const RandomVector& rv, int n) {
    if (static_cast<int>(rv.size()) != n)
        throw std::invalid_argument("random vector has " + std::to_string(rv.size()) +
                                    " components, expression needs " + std::to_string(n));
}

inline bool supports_within(const RandomVector& rv, const LatticeInterval& lattice) {
    for (const auto& d : rv) {
        auto [lo, hi] = d.support();
        if (lo < lattice.a || hi > lattice.b) return false;
    }
    return true;
}

// ── effective_domain ────────────────────────────────────────────────────────
// Finite window [lo, hi] with F_i(lo) <= eps and F_i(hi) >= 1 - eps for every
// component; infinite-support integrals are truncated here. A degenerate
// window (all components constant at one value) is widened by one unit so the
// result is a valid interval.
inline LatticeInterval effective_domain(const RandomVector& rv, double eps = 1e-12) {
    if (rv.empty()) throw std::invalid_argument("effective domain of an empty vector");
    if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("eps must lie in (0, 0.5)");
    double lo = kInf, hi = -kInf;
    for (const auto& d : rv) {
        auto [dlo, dhi] = d.effective_bounds(eps);
        lo = std::min(lo, dlo);
        hi = std::max(hi, dhi);
    }
    if (!(lo < hi)) hi = lo + 1.0;
    return {lo, hi};
}

// ── stieltjes_expectation ───────────────────────────────────────────────────
// E[g(Y)] = g(lo) + integral over [lo, hi] of survival(y) * dg(y), for g of
// bounded variation supplied together with its derivative. Truncation to the
// effective domain leaves an error of order eps * |g| at the endpoints.
template <class Survival, class G, class Dg>
double stieltjes_expectation(Survival&& survival, G&& g, Dg&& dg, const LatticeInterval& domain,
                             const QuadratureOptions& opts = {},
                             std::span<const double> breakpoints = {}) {
    auto integrand = [&](double y) {
        const double s = survival(y);
        if (!(s >= -1e-9 && s <= 1.0 + 1e-9))
            throw quadrature_error("survival value outside [0,1] at " + double_to_string(y));
        return s * dg(y);
    };
    return g(domain.a) + integrate(integrand, domain.a, domain.b, opts, breakpoints);
}

}  // namespace wlp
