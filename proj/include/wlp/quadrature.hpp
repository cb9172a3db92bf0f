#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <vector>

#include "wlp/errors.hpp"
#include "wlp/numeric.hpp"

namespace wlp {

struct QuadratureOptions {
    double abs_tol = 1e-9;
    int max_subdivisions = 4000;
};

namespace detail {

// Gauss-Kronrod 7-15 pair on [-1, 1] (QUADPACK dqk15 abscissae/weights).
// The Gauss nodes are the even-indexed Kronrod nodes; the difference between
// the two rules drives the per-interval error estimate.
inline constexpr double kGk15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr double kGk15KronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kGk15GaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct GkEstimate {
    double kronrod;
    double error;
};

// The odd-indexed nodes (and the center) form the embedded 7-point Gauss rule.
template <class F>
GkEstimate gk15(F& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double kronrod = 0.0;
    double gauss = 0.0;
    for (int j = 0; j < 8; ++j) {
        const double offset = half * kGk15Nodes[j];
        const double fsum =
            j == 7 ? f(center) : f(center - offset) + f(center + offset);
        if (!std::isfinite(fsum))
            throw quadrature_error("non-finite integrand near " +
                                   double_to_string(center - offset));
        kronrod += kGk15KronrodWeights[j] * fsum;
        if (j % 2 == 1) gauss += kGk15GaussWeights[j / 2] * fsum;
    }
    kronrod *= half;
    gauss *= half;
    return {kronrod, std::abs(kronrod - gauss)};
}

struct Segment {
    double lo, hi;
    double value;
    double error;
};

}  // namespace detail

// Adaptive Gauss-Kronrod integration of f over [lo, hi] to an absolute
// tolerance. `breakpoints` forces initial splits (integrand kinks at
// distribution support endpoints and vertex values); only points strictly
// inside the interval are used. The final reduction runs in position order so
// results are independent of the subdivision history.
template <class F>
double integrate(F&& f, double lo, double hi, const QuadratureOptions& opts = {},
                 std::span<const double> breakpoints = {}) {
    if (!(lo < hi)) return 0.0;
    std::vector<double> cuts{lo};
    for (double b : breakpoints)
        if (b > lo && b < hi) cuts.push_back(b);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<detail::Segment> segments;
    segments.reserve(cuts.size() + 64);
    double total_error = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        auto est = detail::gk15(f, cuts[i], cuts[i + 1]);
        segments.push_back({cuts[i], cuts[i + 1], est.kronrod, est.error});
        total_error += est.error;
    }

    int splits = 0;
    while (total_error > opts.abs_tol) {
        if (splits >= opts.max_subdivisions)
            throw quadrature_error("quadrature tolerance " + double_to_string(opts.abs_tol) +
                                   " not reached after " + std::to_string(splits) +
                                   " subdivisions (residual error " +
                                   double_to_string(total_error) + ")");
        // split the worst segment; ties broken by position for determinism
        std::size_t worst = 0;
        for (std::size_t i = 1; i < segments.size(); ++i)
            if (segments[i].error > segments[worst].error) worst = i;
        detail::Segment seg = segments[worst];
        const double mid = 0.5 * (seg.lo + seg.hi);
        if (!(seg.lo < mid && mid < seg.hi))
            throw quadrature_error("quadrature interval collapsed below machine precision");
        auto left = detail::gk15(f, seg.lo, mid);
        auto right = detail::gk15(f, mid, seg.hi);
        total_error += left.error + right.error - seg.error;
        segments[worst] = {seg.lo, mid, left.kronrod, left.error};
        segments.push_back({mid, seg.hi, right.kronrod, right.error});
        ++splits;
    }

    std::sort(segments.begin(), segments.end(),
              [](const detail::Segment& x, const detail::Segment& y) { return x.lo < y.lo; });
    NeumaierSum acc;
    for (const auto& s : segments) acc.add(s.value);
    return acc.value();
}

}  // namespace wlp
