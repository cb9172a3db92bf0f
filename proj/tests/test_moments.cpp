#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "generators.hpp"
#include "wlp/moments.hpp"

using namespace wlp;

namespace {
const LatticeInterval kUnit = LatticeInterval::unit();

RandomVector uniforms(int n) {
    return RandomVector(static_cast<std::size_t>(n), Distribution::uniform(0, 1));
}

// The classical alternating expansion; stable only for small v, which
// is exactly where it serves as the oracle for the regrouped form.
double incomplete_beta_alternating(double z, int u, int v) {
    double sum = 0.0;
    for (int i = 0; i < v; ++i) {
        const double sign = (i & 1) ? -1.0 : 1.0;
        sum += sign * binomial(v - 1, i) * std::pow(z, u + i) / (u + i);
    }
    return sum;
}

// Vertex table of alpha(S) ^ min_{i in S} X_i over the same n variables.
VertexTable bounded_min_table(const VertexTable& t, std::uint32_t s_mask) {
    VertexTable q{t.n, t.lattice, std::vector<double>(t.alpha.size(), 0.0)};
    for (std::uint32_t mask = 0; mask < q.alpha.size(); ++mask)
        if ((mask & s_mask) == s_mask) q.alpha[mask] = t.alpha[s_mask];
    return q;
}
}  // namespace

TEST_CASE("expectation worked examples") {
    const VertexTable t_x1 = vertex_table(parse("x1", kUnit), kUnit);
    REQUIRE(expectation(t_x1, uniforms(1), GSpec::identity()) ==
            Catch::Approx(0.5).margin(1e-10));

    const VertexTable t_min = vertex_table(parse("x1&x2", kUnit), kUnit);
    for (ExpectationRoute route :
         {ExpectationRoute::SurvivalIntegral, ExpectationRoute::SubsetSum}) {
        REQUIRE(expectation(t_min, uniforms(2), GSpec::identity(), route) ==
                Catch::Approx(1.0 / 3.0).margin(1e-10));
        REQUIRE(expectation(t_min, uniforms(2), GSpec::power(2), route) ==
                Catch::Approx(1.0 / 6.0).margin(1e-10));
    }

    // degenerate polynomial: E[e^{t c}] = e^{t c}
    const VertexTable t_const = vertex_table(WlpExpr::constant(0.4), kUnit);
    REQUIRE(expectation(t_const, {}, GSpec::exponential(1.5)) ==
            Catch::Approx(std::exp(1.5 * 0.4)).epsilon(1e-12));
    const VertexTable t_const1 = vertex_table(WlpExpr::constant(0.4), kUnit, 1);
    REQUIRE(expectation(t_const1, uniforms(1), GSpec::exponential(1.5)) ==
            Catch::Approx(std::exp(1.5 * 0.4)).margin(1e-9));

    // a lattice with a negative bottom: E[min of two uniform(-1,1)] = -1/3
    const LatticeInterval wide(-1.0, 1.0);
    const VertexTable t_neg = vertex_table(parse("x1&x2", wide), wide);
    const RandomVector rv_neg(2, Distribution::uniform(-1, 1));
    for (ExpectationRoute route :
         {ExpectationRoute::SurvivalIntegral, ExpectationRoute::SubsetSum})
        REQUIRE(expectation(t_neg, rv_neg, GSpec::identity(), route) ==
                Catch::Approx(-1.0 / 3.0).margin(1e-9));
}

TEST_CASE("the survival-integral and subset-sum routes agree") {
    SplitMix64 rng(401);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = gen::int_in(rng, 1, 6);
        const WlpExpr e = gen::random_wlp(rng, n, 3, 0.0, 1.0);
        const VertexTable t = vertex_table(e, kUnit, n);
        const RandomVector rv = gen::random_unit_vector(rng, n);
        const GSpec g = trial % 3 == 0   ? GSpec::identity()
                        : trial % 3 == 1 ? GSpec::power(2)
                                         : GSpec::exponential(0.7);
        const double a = expectation(t, rv, g, ExpectationRoute::SurvivalIntegral);
        const double b = expectation(t, rv, g, ExpectationRoute::SubsetSum);
        REQUIRE(a == Catch::Approx(b).margin(2e-9));
    }
    // unbounded supports: exponential mixes on the [0, inf] lattice
    const LatticeInterval life = LatticeInterval::nonnegative();
    for (int trial = 0; trial < 10; ++trial) {
        const int n = gen::int_in(rng, 1, 4);
        const WlpExpr e = gen::random_wlp(rng, n, 2, 0.0, 3.0);
        const VertexTable t = vertex_table(e, life, n);
        RandomVector rv;
        for (int i = 0; i < n; ++i) rv.push_back(gen::random_nonnegative_distribution(rng));
        const GSpec g = trial % 2 ? GSpec::identity() : GSpec::power(2);
        const double a = expectation(t, rv, g, ExpectationRoute::SurvivalIntegral);
        const double b = expectation(t, rv, g, ExpectationRoute::SubsetSum);
        REQUIRE(a == Catch::Approx(b).margin(2e-9));
    }
}

TEST_CASE("raw, central and mgf wrappers") {
    const VertexTable t_med =
        vertex_table(parse("(x1&x2)|(x1&x3)|(x2&x3)", kUnit), kUnit);
    REQUIRE(raw_moment(t_med, uniforms(3), 1) == Catch::Approx(0.5).margin(1e-9));

    const VertexTable t_max = vertex_table(parse("x1|x2", kUnit), kUnit);
    REQUIRE(raw_moment(t_max, uniforms(2), 1) == Catch::Approx(2.0 / 3.0).margin(1e-9));

    SplitMix64 rng(409);
    for (int trial = 0; trial < 5; ++trial) {
        const int n = gen::int_in(rng, 1, 4);
        const WlpExpr e = gen::random_wlp(rng, n, 2, 0.0, 1.0);
        const VertexTable t = vertex_table(e, kUnit, n);
        const RandomVector rv = gen::random_unit_vector(rng, n);
        REQUIRE(central_moment(t, rv, 1) == Catch::Approx(0.0).margin(1e-8));
        REQUIRE(mgf(t, rv, 0.0) == 1.0);
        // d/dt MGF at 0 equals the mean (finite differences)
        const double h = 1e-5;
        const double slope = (mgf(t, rv, h) - mgf(t, rv, -h)) / (2.0 * h);
        REQUIRE(slope ==
                Catch::Approx(expectation(t, rv, GSpec::identity())).margin(1e-4));
    }
}

TEST_CASE("mgf beyond an exponential rate violates the tail hypothesis") {
    const LatticeInterval lat = LatticeInterval::nonnegative();
    const VertexTable t = vertex_table(parse("x1", lat), lat);
    const RandomVector rv{Distribution::exponential(1.0)};
    REQUIRE(mgf(t, rv, 0.5) == Catch::Approx(2.0).margin(1e-6));  // 1/(1-t)
    try {
        mgf(t, rv, 1.5);
        FAIL("expected hypothesis_error");
    } catch (const hypothesis_error& e) {
        REQUIRE(e.variable_index() == 1);
    }
}

TEST_CASE("incomplete beta function") {
    SplitMix64 rng(419);
    SECTION("worked values") {
        for (int trial = 0; trial < 20; ++trial) {
            const double z = rng.next_double();
            REQUIRE(incomplete_beta(z, 1, 1) == Catch::Approx(z).margin(1e-15));
        }
        REQUIRE(incomplete_beta(0.5, 2, 1) == Catch::Approx(0.125).margin(1e-16));
        // complete beta for integer arguments: (u-1)!(v-1)!/(u+v-1)!
        REQUIRE(complete_beta(1, 3) == Catch::Approx(1.0 / 3.0).epsilon(1e-14));
        REQUIRE(complete_beta(3, 4) == Catch::Approx(2.0 * 6.0 / 720.0).epsilon(1e-14));
        REQUIRE(complete_beta(10, 10) ==
                Catch::Approx(std::exp(std::lgamma(10.0) * 2 - std::lgamma(20.0)))
                    .epsilon(1e-12));
    }
    SECTION("matches the alternating expansion where that one is stable") {
        for (int trial = 0; trial < 100; ++trial) {
            const double z = rng.next_double();
            const int u = gen::int_in(rng, 1, 6);
            const int v = gen::int_in(rng, 1, 6);
            REQUIRE(incomplete_beta(z, u, v) ==
                    Catch::Approx(incomplete_beta_alternating(z, u, v)).margin(1e-13));
        }
    }
    SECTION("nondecreasing in z and reflection symmetric") {
        for (int u = 1; u <= 5; ++u)
            for (int v = 1; v <= 5; ++v) {
                double prev = 0.0;
                for (int j = 0; j <= 50; ++j) {
                    const double z = j / 50.0;
                    const double b = incomplete_beta(z, u, v);
                    REQUIRE(b >= prev);
                    prev = b;
                    REQUIRE(b + incomplete_beta(1.0 - z, v, u) ==
                            Catch::Approx(complete_beta(u, v)).margin(1e-14));
                }
            }
    }
    SECTION("argument validation") {
        REQUIRE_THROWS_AS(incomplete_beta(1.5, 1, 1), std::invalid_argument);
        REQUIRE_THROWS_AS(incomplete_beta(0.5, 0, 1), std::invalid_argument);
    }
}

TEST_CASE("uniform closed-form moments") {
    SECTION("minimum of n uniforms and order statistics") {
        for (int n = 2; n <= 6; ++n) {
            const VertexTable t = gen::order_statistic_table(n, 1);
            REQUIRE(uniform_raw_moment(t, 1) ==
                    Catch::Approx(1.0 / (n + 1)).margin(1e-12));
        }
        for (int n = 1; n <= 5; ++n)
            for (int k = 1; k <= n; ++k)
                REQUIRE(uniform_raw_moment(gen::order_statistic_table(n, k), 1) ==
                        Catch::Approx(static_cast<double>(k) / (n + 1)).margin(1e-12));
    }
    SECTION("constant polynomial") {
        const VertexTable t = vertex_table(WlpExpr::constant(0.3), kUnit, 2);
        for (int r = 1; r <= 3; ++r)
            REQUIRE(uniform_raw_moment(t, r) ==
                    Catch::Approx(std::pow(0.3, r)).epsilon(1e-13));
    }
    SECTION("agrees with quadrature moments") {
        SplitMix64 rng(431);
        for (int trial = 0; trial < 12; ++trial) {
            const int n = gen::int_in(rng, 1, 6);
            const WlpExpr e = gen::random_wlp(rng, n, 3, 0.0, 1.0);
            const VertexTable t = vertex_table(e, kUnit, n);
            for (int r = 1; r <= 3; ++r)
                REQUIRE(uniform_raw_moment(t, r) ==
                        Catch::Approx(raw_moment(t, uniforms(n), r)).margin(1e-9));
        }
    }
    SECTION("requires the unit lattice") {
        const LatticeInterval wide(0.0, 2.0);
        const VertexTable t = vertex_table(parse("x1", wide), wide);
        REQUIRE_THROWS_AS(uniform_raw_moment(t, 1), std::invalid_argument);
    }
}

TEST_CASE("bounded minima identity") {
    // (1/r) E[Y_p^r] = sum_S E[(alpha(S) ^ min_{i in S} X_i)^{n-|S|+r}] / (n-|S|+r)
    SplitMix64 rng(433);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = gen::int_in(rng, 1, 5);
        const WlpExpr e = gen::random_wlp(rng, n, 3, 0.0, 1.0);
        const VertexTable t = vertex_table(e, kUnit, n);
        for (int r = 1; r <= 2; ++r) {
            const double lhs = uniform_raw_moment(t, r) / r;
            NeumaierSum rhs;
            for (std::uint32_t mask = 0; mask < t.alpha.size(); ++mask) {
                const int order = t.n - popcount(mask) + r;
                rhs.add(uniform_raw_moment(bounded_min_table(t, mask), order) / order);
            }
            REQUIRE(lhs == Catch::Approx(rhs.value()).margin(1e-9));
        }
    }
}

TEST_CASE("sugeno integral worked examples") {
    const FuzzyMeasure unanimity = FuzzyMeasure::on_unit_interval(SetFunction(2, {0, 0, 0, 1}));
    const FuzzyMeasure any_one = FuzzyMeasure::on_unit_interval(SetFunction(2, {0, 1, 1, 1}));
    SplitMix64 rng(439);
    for (int trial = 0; trial < 30; ++trial) {
        const std::vector<double> x{rng.next_double(), rng.next_double()};
        REQUIRE(sugeno_integral(unanimity, x) == std::min(x[0], x[1]));
        REQUIRE(sugeno_integral(any_one, x) == std::max(x[0], x[1]));
    }

    const FuzzyMeasure cardinality =
        FuzzyMeasure::on_unit_interval(SetFunction(3, {0, 1. / 3, 1. / 3, 2. / 3, 1. / 3,
                                                       2. / 3, 2. / 3, 1}));
    REQUIRE(sugeno_integral(cardinality, std::vector<double>{1, 0, 0}) ==
            Catch::Approx(1.0 / 3.0));
}

TEST_CASE("sugeno integral equals the WLP with vertex table mu") {
    SplitMix64 rng(443);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = gen::int_in(rng, 1, 5);
        const FuzzyMeasure mu = FuzzyMeasure::on_unit_interval(gen::random_measure(rng, n));
        std::vector<double> x(static_cast<std::size_t>(n));
        for (auto& xi : x) xi = rng.next_double();
        REQUIRE(sugeno_integral(mu, x) == gen::brute_disjunctive(mu.as_vertex_table(), x));
    }
}

TEST_CASE("sugeno expectation") {
    const FuzzyMeasure unanimity = FuzzyMeasure::on_unit_interval(SetFunction(2, {0, 0, 0, 1}));
    REQUIRE(sugeno_expectation(unanimity) == Catch::Approx(1.0 / 3.0).epsilon(1e-14));

    // B_1(2,2) + B_1(2,2) + B_1(1,3) = 1/6 + 1/6 + 1/3 = 2/3: the mean of the max
    const FuzzyMeasure any_one = FuzzyMeasure::on_unit_interval(SetFunction(2, {0, 1, 1, 1}));
    REQUIRE(sugeno_expectation(any_one) == Catch::Approx(2.0 / 3.0).epsilon(1e-14));

    SplitMix64 rng(449);
    for (int trial = 0; trial < 20; ++trial) {
        const FuzzyMeasure mu =
            FuzzyMeasure::on_unit_interval(gen::random_measure(rng, gen::int_in(rng, 1, 6)));
        REQUIRE(sugeno_expectation(mu) == uniform_raw_moment(mu.as_vertex_table(), 1));
    }
}

TEST_CASE("choquet integral worked examples") {
    const double w1 = 0.3, w2 = 0.7;
    const FuzzyMeasure additive =
        FuzzyMeasure::on_unit_interval(SetFunction(2, {0, w1, w2, 1}));
    const FuzzyMeasure unanimity = FuzzyMeasure::on_unit_interval(SetFunction(2, {0, 0, 0, 1}));
    SplitMix64 rng(457);
    for (int trial = 0; trial < 30; ++trial) {
        const std::vector<double> x{rng.next_double(), rng.next_double()};
        REQUIRE(choquet_integral(additive, x) ==
                Catch::Approx(w1 * x[0] + w2 * x[1]).margin(1e-15));
        REQUIRE(choquet_integral(unanimity, x) == std::min(x[0], x[1]));
    }
    // idempotency at constant vectors
    for (int trial = 0; trial < 10; ++trial) {
        const int n = gen::int_in(rng, 1, 5);
        const FuzzyMeasure mu = FuzzyMeasure::on_unit_interval(gen::random_measure(rng, n));
        const double c = rng.next_double();
        REQUIRE(choquet_integral(mu, std::vector<double>(static_cast<std::size_t>(n), c)) ==
                Catch::Approx(c).margin(1e-12));
    }
}

TEST_CASE("choquet expectation worked examples") {
    const FuzzyMeasure cardinality =
        FuzzyMeasure::on_unit_interval(SetFunction(2, {0, 0.5, 0.5, 1}));
    REQUIRE(choquet_expectation(cardinality) == Catch::Approx(0.5).margin(1e-14));

    const FuzzyMeasure unanimity = FuzzyMeasure::on_unit_interval(SetFunction(2, {0, 0, 0, 1}));
    REQUIRE(choquet_expectation(unanimity) == Catch::Approx(1.0 / 3.0).epsilon(1e-14));

    const FuzzyMeasure any_one = FuzzyMeasure::on_unit_interval(SetFunction(2, {0, 1, 1, 1}));
    REQUIRE(choquet_expectation(any_one) == Catch::Approx(2.0 / 3.0).epsilon(1e-14));
}
