#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "netrobust/centrality.hpp"
#include "oracles.hpp"

using namespace netrobust;

TEST(Betweenness, PathOfThree) {
  const auto b = betweenness(oracle::path(3));
  EXPECT_DOUBLE_EQ(b[0], 0.0);
  EXPECT_DOUBLE_EQ(b[1], 1.0);
  EXPECT_DOUBLE_EQ(b[2], 0.0);
}

TEST(Betweenness, TriangleIsZero) {
  for (double x : betweenness(oracle::complete(3))) EXPECT_EQ(x, 0.0);
}

TEST(Betweenness, StarCentreCountsLeafPairs) {
  const auto b = betweenness(oracle::star(4));
  EXPECT_DOUBLE_EQ(b[0], 6.0);
  for (int i = 1; i <= 4; ++i) EXPECT_EQ(b[i], 0.0);
}

TEST(Betweenness, DisconnectedPairsContributeNothing) {
  const auto b = betweenness(oracle::make_graph(6, {{0, 1}, {1, 2}, {3, 4}}));
  EXPECT_DOUBLE_EQ(b[1], 1.0);
  EXPECT_EQ(b[4], 0.0);
  EXPECT_EQ(b[5], 0.0);
}

TEST(Betweenness, MatchesPathEnumerationOnRandomGraphs) {
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const auto g = oracle::random_graph(1 + gen() % 8, 0.1 + 0.1 * (trial % 6), gen);
    const auto fast = betweenness(g);
    const auto slow = oracle::betweenness(g);
    for (std::size_t v = 0; v < fast.size(); ++v) {
      EXPECT_NEAR(fast[v], slow[v], 1e-9);
      EXPECT_GE(fast[v], 0.0);
    }
  }
}

TEST(Betweenness, CompleteGraphsAreZero) {
  for (std::size_t n = 1; n <= 8; ++n)
    for (double x : betweenness(oracle::complete(n))) EXPECT_EQ(x, 0.0);
}

TEST(PageRank, FirstStepFromUniformStart) {
  // w=0, x=1, y=2, z=3; every node starts at 0.25.
  const auto g = oracle::make_graph(4, {{0, 1}, {1, 2}, {0, 2}, {0, 3}, {1, 3}, {2, 3}});
  const auto r = pagerank(g, {0.85, 1e-10, 1});
  // Complete K4: each node receives 3 * 0.25 / 3.
  for (double x : r.ranks) EXPECT_NEAR(x, 0.25, 1e-15);

  const auto h = oracle::make_graph(4, {{0, 1}, {1, 2}, {0, 2}, {0, 3}});
  const auto s = pagerank(h, {0.85, 1e-10, 1});
  // Degrees 3, 2, 2, 1.
  const double base = 0.15 / 4;
  EXPECT_NEAR(s.ranks[0], base + 0.85 * (0.25 / 2 + 0.25 / 2 + 0.25 / 1), 1e-15);
  EXPECT_NEAR(s.ranks[1], base + 0.85 * (0.25 / 3 + 0.25 / 2), 1e-15);
  EXPECT_NEAR(s.ranks[3], base + 0.85 * (0.25 / 3), 1e-15);
}

TEST(PageRank, CycleIsUniform) {
  for (double d : {0.5, 0.85, 0.99}) {
    const auto r = pagerank(oracle::cycle(4), {d, 1e-12, 1000});
    EXPECT_TRUE(r.converged);
    for (double x : r.ranks) EXPECT_NEAR(x, 0.25, 1e-12);
  }
}

TEST(PageRank, PathMatchesLinearSolve) {
  const auto exact = oracle::pagerank(oracle::path(3), 0.85);
  EXPECT_NEAR(exact[0], 0.256757, 1e-6);
  EXPECT_NEAR(exact[1], 0.486486, 1e-6);
  const auto r = pagerank(oracle::path(3));
  ASSERT_TRUE(r.converged);
  for (int v = 0; v < 3; ++v) EXPECT_NEAR(r.ranks[v], exact[v], 1e-9);
}

TEST(PageRank, IsolatedNodesAndRandomGraphsMatchLinearSolve) {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = oracle::random_graph(1 + gen() % 10, 0.25, gen);
    const auto r = pagerank(g);
    ASSERT_TRUE(r.converged);
    const auto exact = oracle::pagerank(g, 0.85);
    double total = 0.0;
    for (std::size_t v = 0; v < r.ranks.size(); ++v) {
      EXPECT_NEAR(r.ranks[v], exact[v], 1e-9);
      EXPECT_GE(r.ranks[v], 0.0);
      total += r.ranks[v];
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(PageRank, PermutesWithNodes) {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + gen() % 10;
    const auto g = oracle::random_graph(n, 0.3, gen);
    std::vector<NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), NodeId{0});
    std::shuffle(perm.begin(), perm.end(), gen);
    const auto a = pagerank(g).ranks;
    const auto b = pagerank(oracle::relabel(g, perm)).ranks;
    for (std::size_t v = 0; v < n; ++v) EXPECT_NEAR(a[v], b[perm[v]], 1e-9);
  }
}

TEST(PageRank, RegularGraphsUniformForAnyDamping) {
  for (std::size_t n : {3u, 5u, 8u}) {
    for (double d : {0.1, 0.5, 0.85, 0.95}) {
      for (const auto& g : {oracle::cycle(n), oracle::complete(n)}) {
        const auto r = pagerank(g, {d, 1e-12, 5000});
        for (double x : r.ranks) EXPECT_NEAR(x, 1.0 / static_cast<double>(n), 1e-9);
      }
    }
  }
}

TEST(PageRank, AddingAnEdgeKeepsNormalization) {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + gen() % 8;
    const auto g = oracle::random_graph(n, 0.2, gen);
    auto edges = g.edges();
    edges.push_back({0, static_cast<NodeId>(n - 1)});
    const Graph h(n, edges);
    double total = 0.0;
    for (double x : pagerank(h).ranks) total += x;
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(PageRank, UndampedBipartiteDoesNotConverge) {
  const auto r = pagerank(oracle::path(2), {1.0, 1e-10, 50});
  // Uniform is already stationary on K2, so use a graph where it is not.
  const auto s = pagerank(oracle::star(3), {1.0, 1e-10, 50});
  EXPECT_TRUE(r.converged);
  EXPECT_FALSE(s.converged);
  EXPECT_EQ(s.iterations, 50);
  double total = 0.0;
  for (double x : s.ranks) total += x;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(PageRank, Errors) {
  EXPECT_THROW(pagerank(Graph()), EmptyNetworkError);
  EXPECT_THROW(pagerank(oracle::path(2), {0.0, 1e-10, 10}), std::invalid_argument);
}

TEST(Variance, Examples) {
  EXPECT_DOUBLE_EQ(variance(std::vector<double>{0.3, 0.3, 0.3}), 0.0);
  EXPECT_DOUBLE_EQ(variance(std::vector<double>{0.0, 1.0}), 0.25);
  EXPECT_NEAR(variance(betweenness(oracle::star(4))), 5.76, 1e-12);
  EXPECT_THROW(variance(std::vector<double>{}), EmptyInputError);
}

TEST(Variance, TranslationInvariantAndQuadraticScaling) {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x(1 + gen() % 20);
    for (auto& v : x) v = u(gen);
    const double base = variance(x);
    const double shift = u(gen), scale = u(gen);
    std::vector<double> shifted(x), scaled(x);
    for (auto& v : shifted) v += shift;
    for (auto& v : scaled) v *= scale;
    EXPECT_NEAR(variance(shifted), base, 1e-9 * std::max(1.0, base));
    EXPECT_NEAR(variance(scaled), scale * scale * base, 1e-12 * std::max(1.0, scale * scale * base));
  }
}
