#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mrbench/engine.hpp"
#include "mrbench/error.hpp"
#include "mrbench/rng.hpp"
#include "mrbench/suts.hpp"
#include "oracles.hpp"

using namespace mrbench;
using namespace mrbench::suts;

namespace {

WeightedGraph triangle() {
    return WeightedGraph{{"A", "B", "C"}, {{"A", "B", 1.0}, {"B", "C", 1.0}, {"A", "C", 3.0}}, false, "A", "C"};
}

WeightedGraph random_graph(Rng& rng, std::size_t max_vertices) {
    WeightedGraph g;
    const auto n = static_cast<std::size_t>(rng.integer(2, static_cast<std::int64_t>(max_vertices)));
    for (std::size_t i = 0; i < n; ++i) g.vertices.push_back("v" + std::to_string(i));
    g.directed = rng.coin(0.3);
    const auto edges = rng.integer(0, static_cast<std::int64_t>(n * (n - 1)));
    for (std::int64_t e = 0; e < edges; ++e) {
        const auto a = rng.index(n), b = rng.index(n);
        if (a == b) continue;
        // Integer weights make ties common, which exercises the tie-break.
        const double w = rng.coin() ? static_cast<double>(rng.integer(0, 4)) : rng.uniform(0.0, 10.0);
        g.edges.push_back({g.vertices[a], g.vertices[b], w});
    }
    g.source = g.vertices[rng.index(n)];
    g.target = g.vertices[rng.index(n)];
    return g;
}

}  // namespace

TEST(Sin, Examples) {
    EXPECT_EQ(sin_eval(0.0).value, 0.0);
    EXPECT_NEAR(sin_eval(std::numbers::pi / 2).value, 1.0, 1e-15);
    EXPECT_NEAR(sin_eval(1.0).value, 0.8414709848, 1e-9);
}

TEST(Sin, AgreesWithTaylorOracle) {
    Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        const double x = rng.uniform(-10 * std::numbers::pi, 10 * std::numbers::pi);
        EXPECT_NEAR(sin_eval(x).value, oracle::taylor_sin(x), 1e-12) << "x = " << x;
    }
}

TEST(Sum, Examples) {
    const std::vector<double> v{1, 2, 3};
    EXPECT_EQ(sum_eval(v).value, 6.0);
    EXPECT_EQ(sum_eval({}).value, 0.0);
    const std::vector<double> tenths(10, 0.1);
    EXPECT_NEAR(sum_eval(tenths).value, oracle::compensated_sum(tenths), 1e-9);
    EXPECT_NEAR(sum_eval(tenths).value, 1.0, 1e-9);
}

TEST(Sum, AgreesWithCompensatedOracle) {
    Rng rng(12);
    for (int i = 0; i < 500; ++i) {
        std::vector<double> v(static_cast<std::size_t>(rng.integer(0, 200)));
        for (auto& x : v) x = rng.uniform(-100, 100);
        EXPECT_NEAR(sum_eval(v).value, oracle::compensated_sum(v), 1e-9);
    }
}

TEST(ShortestPath, Examples) {
    const auto p = shortest_path(triangle());
    ASSERT_TRUE(p.found);
    EXPECT_EQ(p.vertices, (std::vector<std::string>{"A", "B", "C"}));
    EXPECT_DOUBLE_EQ(p.total_cost, 2.0);

    auto self = triangle();
    self.target = "A";
    const auto q = shortest_path(self);
    ASSERT_TRUE(q.found);
    EXPECT_EQ(q.vertices, std::vector<std::string>{"A"});
    EXPECT_EQ(q.total_cost, 0.0);

    auto cut = triangle();
    cut.vertices.push_back("D");
    cut.target = "D";
    EXPECT_FALSE(shortest_path(cut).found);
}

TEST(ShortestPath, EqualCostRoutesPickLexicographicallySmallest) {
    WeightedGraph g{{"A", "B", "C", "D"}, {{"A", "C", 1}, {"C", "D", 1}, {"A", "B", 1}, {"B", "D", 1}}, false, "A", "D"};
    EXPECT_EQ(shortest_path(g).vertices, (std::vector<std::string>{"A", "B", "D"}));
}

TEST(ShortestPath, ZeroWeightDetourDoesNotDerailTieBreak) {
    const WeightedGraph g{{"v0", "v1", "v2", "v3", "v4", "v5"},
                          {{"v0", "v2", 0}, {"v5", "v4", 4}, {"v5", "v3", 3}, {"v2", "v1", 4}, {"v2", "v5", 1},
                           {"v3", "v2", 2}, {"v0", "v5", 4}},
                          false, "v4", "v3"};
    const auto p = shortest_path(g);
    EXPECT_EQ(p.vertices, (std::vector<std::string>{"v4", "v5", "v2", "v3"}));
    EXPECT_DOUBLE_EQ(p.total_cost, 7.0);
    EXPECT_EQ(p.vertices, oracle::brute_force_path(g).vertices);
}

TEST(ShortestPath, NegativeWeightIsRejected) {
    auto g = triangle();
    g.edges[0].weight = -1;
    EXPECT_THROW(shortest_path(g), PreconditionError);
}

TEST(ShortestPath, AgreesWithBruteForce) {
    Rng rng(13);
    for (int i = 0; i < 500; ++i) {
        const auto g = random_graph(rng, 7);
        const auto want = oracle::brute_force_path(g);
        const auto got = shortest_path(g);
        ASSERT_EQ(got.found, want.found) << "graph " << i;
        if (!want.found) continue;
        EXPECT_NEAR(got.total_cost, want.cost, 1e-9) << "graph " << i;
        EXPECT_EQ(got.vertices, want.vertices) << "graph " << i;
    }
}

TEST(Regression, Examples) {
    const DataMatrix d{{{{0.0}, 1.0}, {{1.0}, 3.0}, {{2.0}, 5.0}}};
    const auto c = ols_fit(d);
    EXPECT_NEAR(c.intercept, 1.0, 1e-8);
    ASSERT_EQ(c.weights.size(), 1u);
    EXPECT_NEAR(c.weights[0], 2.0, 1e-8);

    DataMatrix zero = d;
    for (auto& r : zero.rows) r.response = 0.0;
    const auto z = ols_fit(zero);
    EXPECT_NEAR(z.intercept, 0.0, 1e-12);
    EXPECT_NEAR(z.weights[0], 0.0, 1e-12);

    DataMatrix wide = d;
    for (auto& r : wide.rows) r.predictors.push_back(0.0);
    const auto w = ols_fit(wide);
    EXPECT_NEAR(w.intercept, 1.0, 1e-8);
    EXPECT_NEAR(w.weights[0], 2.0, 1e-8);
    EXPECT_EQ(w.weights[1], 0.0);
}

TEST(Regression, AgreesWithNormalEquations) {
    Rng rng(14);
    for (int i = 0; i < 200; ++i) {
        const auto input = generate_source("REGRESSION", 99, static_cast<std::uint64_t>(i));
        auto d = std::get<DataMatrix>(input);
        for (auto& r : d.rows) r.response += rng.uniform(-1, 1);
        const auto beta = oracle::normal_equations(d);
        const auto c = ols_fit(d);
        EXPECT_NEAR(c.intercept, beta[0], 1e-7);
        for (std::size_t j = 0; j < c.weights.size(); ++j) EXPECT_NEAR(c.weights[j], beta[j + 1], 1e-7);
    }
}

TEST(Fft, Examples) {
    const auto impulse = fft_eval(TimeSeries{{1, 0, 0, 0}, 1.0});
    for (const auto& b : impulse.bins) EXPECT_NEAR(std::abs(b - std::complex<double>(1, 0)), 0.0, 1e-12);
    const auto constant = fft_eval(TimeSeries{{1, 1, 1, 1}, 1.0});
    EXPECT_NEAR(std::abs(constant.bins[0] - 4.0), 0.0, 1e-12);
    for (std::size_t k = 1; k < 4; ++k) EXPECT_NEAR(std::abs(constant.bins[k]), 0.0, 1e-12);

    TimeSeries tone{std::vector<double>(32), 1.0 / 32};
    for (std::size_t i = 0; i < 32; ++i) tone.samples[i] = std::cos(2 * std::numbers::pi * 3 * i / 32.0);
    const auto s = fft_eval(tone);
    const auto peak = std::max_element(s.amplitudes.begin(), s.amplitudes.end()) - s.amplitudes.begin();
    EXPECT_EQ(peak, 3);
    EXPECT_NEAR(s.frequencies[3], 3.0, 1e-12);
    EXPECT_NEAR(s.amplitudes[3], 1.0, 1e-12);
}

TEST(Fft, AgreesWithNaiveDft) {
    Rng rng(15);
    for (std::size_t n : {2u, 3u, 5u, 8u, 12u, 64u, 100u, 256u, 1024u}) {
        std::vector<double> x(n);
        for (auto& v : x) v = rng.uniform(-1, 1);
        const auto want = oracle::naive_dft(x);
        const auto got = fft_eval(TimeSeries{x, 1.0}).bins;
        ASSERT_EQ(got.size(), n);
        for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(std::abs(got[k] - want[k]), 0.0, 1e-9) << "N=" << n << " k=" << k;
    }
}

TEST(Fft, SeriesShorterThanTwoIsRejected) {
    EXPECT_THROW(fft_eval(TimeSeries{{1.0}, 1.0}), PreconditionError);
}

TEST(Variants, RegistryLookups) {
    const auto offset = get_variant("SIN", "mutant-offset");
    EXPECT_NEAR(std::get<Scalar>(offset(Angle{1.0})).value, std::sin(1.0) + 0.01, 1e-15);
    const auto drop = get_variant("SUM", "mutant-drop-first");
    EXPECT_EQ(std::get<Scalar>(drop(NumberList{{5, 2, 3}})).value, 5.0);
    EXPECT_THROW(get_variant("SIN", "nope"), ReferenceError);
    EXPECT_TRUE(variants_for("WFS").empty());
}

TEST(Variants, EveryMutantDiffersFromReferenceOnItsWitness) {
    for (const auto& sut : executable_sut_ids()) {
        const auto vs = variants_for(sut);
        ASSERT_FALSE(vs.empty());
        EXPECT_EQ(vs.front()->info.kind, VariantKind::Reference);
        for (std::size_t i = 1; i < vs.size(); ++i) {
            ASSERT_FALSE(vs[i]->witnesses.empty()) << vs[i]->info.variant_id;
            for (const auto& w : vs[i]->witnesses)
                EXPECT_NE(vs[0]->evaluate(w), vs[i]->evaluate(w)) << sut << " " << vs[i]->info.variant_id;
        }
    }
}
