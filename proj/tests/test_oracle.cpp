#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "generators.hpp"
#include "wlp/moments.hpp"
#include "wlp/oracle.hpp"

using namespace wlp;

namespace {
const LatticeInterval kUnit = LatticeInterval::unit();

RandomVector uniforms(int n) {
    return RandomVector(static_cast<std::size_t>(n), Distribution::uniform(0, 1));
}
}  // namespace

TEST_CASE("equal plans produce identical output streams") {
    SplitMix64 rng(601);
    const WlpExpr e = gen::random_wlp(rng, 3, 3, 0.0, 1.0);
    const RandomVector rv = gen::random_unit_vector(rng, 3);
    const SimulationPlan plan{e, rv, kUnit, 20000, 12345};
    const SimulationSummary a = simulate(plan);
    const SimulationSummary b = simulate(plan);
    REQUIRE(a.mean == b.mean);
    REQUIRE(a.se == b.se);
    REQUIRE(a.raw_moments == b.raw_moments);
    REQUIRE(a.ecdf_F == b.ecdf_F);

    SimulationPlan other = plan;
    other.seed = 54321;
    REQUIRE(simulate(other).mean != a.mean);
}

TEST_CASE("per-variable streams: extending a run appends, never reorders") {
    SplitMix64 rng(607);
    const WlpExpr e = gen::random_wlp(rng, 3, 3, 0.0, 1.0);
    const RandomVector rv = gen::random_unit_vector(rng, 3);
    SimulationPlan small{e, rv, kUnit, 1000, 7};
    SimulationPlan large{e, rv, kUnit, 2500, 7};
    const std::vector<double> short_run = simulate_samples(small);
    const std::vector<double> long_run = simulate_samples(large);
    for (std::size_t i = 0; i < short_run.size(); ++i)
        REQUIRE(short_run[i] == long_run[i]);
}

TEST_CASE("simulated means land within four standard errors") {
    // single uniform variable
    const SimulationPlan p1{parse("x1", kUnit), uniforms(1), kUnit, 1000000, 11};
    const SimulationSummary s1 = simulate(p1);
    REQUIRE(std::abs(s1.mean - 0.5) <= 4.0 * s1.se);

    // minimum of two uniforms: 1/3
    const SimulationPlan p2{parse("x1&x2", kUnit), uniforms(2), kUnit, 1000000, 13};
    const SimulationSummary s2 = simulate(p2);
    REQUIRE(std::abs(s2.mean - 1.0 / 3.0) <= 4.0 * s2.se);

    // exponential series: min of exp(1), exp(2) has mean 1/3
    const LatticeInterval life = LatticeInterval::nonnegative();
    const SimulationPlan p3{parse("x1&x2", life),
                            {Distribution::exponential(1), Distribution::exponential(2)},
                            life, 1000000, 17};
    const SimulationSummary s3 = simulate(p3);
    REQUIRE(std::abs(s3.mean - 1.0 / 3.0) <= 4.0 * s3.se);
}

TEST_CASE("recursive expectation worked examples") {
    REQUIRE(recursive_expectation(parse("x1", kUnit), uniforms(1), GSpec::identity(), kUnit) ==
            Catch::Approx(0.5).margin(1e-7));
    REQUIRE(recursive_expectation(parse("x1&x2", kUnit), uniforms(2), GSpec::identity(),
                                  kUnit) == Catch::Approx(1.0 / 3.0).margin(1e-6));
}

TEST_CASE("recursive expectation agrees with the subset-sum route") {
    SplitMix64 rng(613);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = gen::int_in(rng, 1, 4);
        const WlpExpr e = gen::random_wlp(rng, n, 2, 0.0, 1.0);
        const VertexTable t = vertex_table(e, kUnit, n);
        const RandomVector rv = gen::random_unit_vector(rng, n);
        const GSpec g = trial % 2 ? GSpec::identity() : GSpec::power(2);
        const double via_recursion = recursive_expectation(e, rv, g, kUnit);
        const double via_subset_sum =
            expectation(t, rv, g, ExpectationRoute::SubsetSum);
        REQUIRE(via_recursion == Catch::Approx(via_subset_sum).margin(1e-6));
    }
    // arity cap
    std::vector<WlpExpr> vars;
    for (int i = 1; i <= 9; ++i) vars.push_back(WlpExpr::var(i));
    REQUIRE_THROWS_AS(
        recursive_expectation(WlpExpr::meet(std::move(vars)), uniforms(9),
                              GSpec::identity(), kUnit),
        std::invalid_argument);
}

TEST_CASE("g_S sequence expectation matches the subset-sum route") {
    SplitMix64 rng(617);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = gen::int_in(rng, 1, 5);
        const WlpExpr e = gen::random_wlp(rng, n, 3, 0.0, 1.0);
        const VertexTable t = vertex_table(e, kUnit, n);
        const RandomVector rv = gen::random_unit_vector(rng, n);
        const GSpec g = trial % 2 ? GSpec::identity() : GSpec::power(2);
        REQUIRE(gs_sequence_expectation(e, rv, g, kUnit) ==
                Catch::Approx(expectation(t, rv, g, ExpectationRoute::SubsetSum))
                    .margin(1e-8));
    }
}

TEST_CASE("g_S sequence: only the full-set term survives for a pure minimum") {
    // p = min(x1..xn) of uniforms: alpha(S) = 0 except S = [n], so the sum
    // collapses to int_0^1 (1-y)^n dy = 1/(n+1), the min term of the uniform
    // closed form.
    for (int n = 1; n <= 4; ++n) {
        std::vector<WlpExpr> vars;
        for (int i = 1; i <= n; ++i) vars.push_back(WlpExpr::var(i));
        const WlpExpr e = n == 1 ? WlpExpr::var(1) : WlpExpr::meet(std::move(vars));
        REQUIRE(gs_sequence_expectation(e, uniforms(n), GSpec::identity(), kUnit) ==
                Catch::Approx(1.0 / (n + 1)).margin(1e-10));
    }
}

TEST_CASE("g_S sequence on a constant polynomial returns g(c)") {
    const double c = 0.37;
    const WlpExpr e = pin(parse("min(x1,x2)", kUnit), {{1, c}, {2, c}}, kUnit);
    REQUIRE(e.arity() == 0);
    REQUIRE(gs_sequence_expectation(e, {}, GSpec::power(2), kUnit) ==
            Catch::Approx(c * c).margin(1e-12));
    // constant-valued table with a live variable: the per-S terms partition
    // the total probability and still sum to g(c)
    const WlpExpr shadowed = parse("min(0.37, max(x1, 0.37))", kUnit);
    REQUIRE(gs_sequence_expectation(shadowed, uniforms(1), GSpec::power(2), kUnit) ==
            Catch::Approx(c * c).margin(1e-10));
}

TEST_CASE("naive and fast Moebius transforms are bit-for-bit equal on integers") {
    SplitMix64 rng(619);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = gen::int_in(rng, 1, 10);
        SetFunction v = SetFunction::zeros(n);
        for (auto& x : v.values) x = static_cast<double>(gen::int_in(rng, -20, 20));
        const SetFunction fast = mobius_transform(v);
        const SetFunction naive = naive_mobius(v);
        REQUIRE(fast.values == naive.values);
    }
    REQUIRE_THROWS_AS(naive_mobius(SetFunction::zeros(13)), std::invalid_argument);
}

TEST_CASE("oracle triangle: all expectation paths meet on small instances") {
    SplitMix64 rng(631);
    for (int trial = 0; trial < 5; ++trial) {
        const int n = gen::int_in(rng, 1, 4);
        const WlpExpr e = gen::random_wlp(rng, n, 2, 0.0, 1.0);
        const VertexTable t = vertex_table(e, kUnit, n);
        const RandomVector rv = gen::random_unit_vector(rng, n);
        const double survival = expectation(t, rv, GSpec::identity());
        const double subset = expectation(t, rv, GSpec::identity(), ExpectationRoute::SubsetSum);
        const double recursion = recursive_expectation(e, rv, GSpec::identity(), kUnit);
        const double sequence = gs_sequence_expectation(e, rv, GSpec::identity(), kUnit);
        const SimulationPlan plan{e, rv, kUnit, 200000, 1000 + static_cast<std::uint64_t>(trial)};
        const SimulationSummary mc = simulate(plan);
        REQUIRE(subset == Catch::Approx(survival).margin(1e-8));
        REQUIRE(recursion == Catch::Approx(survival).margin(1e-6));
        REQUIRE(sequence == Catch::Approx(survival).margin(1e-8));
        REQUIRE(std::abs(mc.mean - survival) <= 4.0 * mc.se + 1e-12);
    }
}
