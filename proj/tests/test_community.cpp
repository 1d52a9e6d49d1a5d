#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "netrobust/community.hpp"
#include "oracles.hpp"

using namespace netrobust;

namespace {

constexpr double kBarbellQ = 5.0 / 14.0;

// Two partitions describe the same grouping, ignoring id numbering.
bool same_grouping(const Partition& a, const Partition& b) {
  if (a.assignment.size() != b.assignment.size()) return false;
  return Partition::from_labels(a.assignment) == Partition::from_labels(b.assignment);
}

Partition permuted(const Partition& p, const std::vector<NodeId>& perm) {
  std::vector<CommunityId> labels(p.assignment.size());
  for (std::size_t v = 0; v < perm.size(); ++v) labels[perm[v]] = p.assignment[v];
  return Partition::from_labels(labels);
}

void expect_well_formed(const Graph& g, const DetectionResult& r) {
  ASSERT_EQ(r.partition.assignment.size(), g.node_count());
  std::set<CommunityId> used(r.partition.assignment.begin(), r.partition.assignment.end());
  EXPECT_EQ(used.size(), r.partition.community_count);
  if (!used.empty()) {
    EXPECT_EQ(*used.rbegin() + 1, r.partition.community_count);
  }
  if (g.edge_count() > 0) {
    ASSERT_TRUE(r.modularity.has_value());
    EXPECT_NEAR(*r.modularity, modularity(g, r.partition), 1e-9);
  }
}

std::vector<NodeId> random_permutation(std::size_t n, std::mt19937_64& gen) {
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), NodeId{0});
  std::shuffle(perm.begin(), perm.end(), gen);
  return perm;
}

}  // namespace

// --- modularity -------------------------------------------------------------

TEST(Modularity, SpotValues) {
  EXPECT_NEAR(modularity(oracle::figure_graph(), Partition::whole(5)), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(modularity(oracle::path(2), Partition::singletons(2)), -0.5);
  const auto split = Partition::from_labels(std::vector<int>{0, 0, 0, 1, 1, 1});
  EXPECT_NEAR(modularity(oracle::barbell(), split), kBarbellQ, 1e-15);
  EXPECT_NEAR(oracle::modularity(oracle::barbell(), split.assignment), kBarbellQ, 1e-15);
}

TEST(Modularity, MatchesDoubleSumOnEveryPartition) {
  std::mt19937_64 gen(1);
  for (int trial = 0; trial < 60; ++trial) {
    const auto g = oracle::random_graph(1 + gen() % 6, 0.5, gen);
    if (g.edge_count() == 0) continue;
    oracle::for_each_partition(g.node_count(), [&](const std::vector<std::uint32_t>& labels) {
      const double q = modularity(g, Partition::from_labels(labels));
      EXPECT_NEAR(q, oracle::modularity(g, labels), 1e-12);
      EXPECT_GE(q, -0.5 - 1e-12);
      EXPECT_LE(q, 1.0);
    });
  }
}

TEST(Modularity, UndefinedWithoutEdges) {
  EXPECT_THROW(modularity(Graph(3, std::vector<Edge>{}), Partition::whole(3)), UndefinedModularityError);
}

TEST(Partition, CommunityCount) {
  DetectionResult r;
  r.partition = Partition::singletons(7);
  EXPECT_EQ(community_count(r), 7u);
  r.partition = Partition::whole(7);
  EXPECT_EQ(community_count(r), 1u);
}

// --- CNM --------------------------------------------------------------------

TEST(Cnm, Barbell) {
  const auto r = cnm(oracle::barbell());
  EXPECT_EQ(community_count(r), 2u);
  EXPECT_NEAR(*r.modularity, kBarbellQ, 1e-12);
  EXPECT_NEAR(oracle::best_modularity(oracle::barbell()), kBarbellQ, 1e-12);
  EXPECT_EQ(r.partition.assignment, (std::vector<CommunityId>{0, 0, 0, 1, 1, 1}));
}

TEST(Cnm, DisjointEdgesAndTriangle) {
  const auto two = cnm(oracle::two_disjoint_edges());
  EXPECT_EQ(community_count(two), 2u);
  EXPECT_NEAR(*two.modularity, 0.5, 1e-12);
  EXPECT_NEAR(oracle::best_modularity(oracle::two_disjoint_edges()), 0.5, 1e-12);
  const auto tri = cnm(oracle::complete(3));
  EXPECT_EQ(community_count(tri), 1u);
  EXPECT_NEAR(*tri.modularity, 0.0, 1e-12);
}

TEST(Cnm, EdgelessGraphHasUndefinedModularity) {
  const auto r = cnm(Graph(4, std::vector<Edge>{}));
  EXPECT_FALSE(r.modularity.has_value());
  EXPECT_EQ(community_count(r), 4u);
}

TEST(Cnm, CompleteBipartiteStopsAtZeroGain) {
  // Every balanced split of K_{3,3} has Q = 0, so after three positive merges
  // no merge strictly improves modularity.
  const auto r = cnm(oracle::complete_bipartite(3, 3));
  EXPECT_EQ(community_count(r), 3u);
  EXPECT_NEAR(*r.modularity, 0.0, 1e-12);
  EXPECT_NEAR(oracle::best_modularity(oracle::complete_bipartite(3, 3)), 0.0, 1e-12);
}

// --- Louvain ----------------------------------------------------------------

TEST(Louvain, BarbellFromEveryVisitingOrder) {
  const auto g = oracle::barbell();
  std::vector<NodeId> order(6);
  std::iota(order.begin(), order.end(), NodeId{0});
  int orders = 0;
  do {
    Rng rng(0);
    const auto p = detail::louvain_partition(g, rng, order);
    EXPECT_EQ(p.community_count, 2u);
    EXPECT_NEAR(modularity(g, p), kBarbellQ, 1e-12);
    ++orders;
  } while (std::next_permutation(order.begin(), order.end()));
  EXPECT_EQ(orders, 720);
}

TEST(Louvain, DisjointEdgesAndDeterminism) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_EQ(community_count(louvain(oracle::two_disjoint_edges(), seed)), 2u);
    const auto a = louvain(oracle::barbell(), seed);
    const auto b = louvain(oracle::barbell(), seed);
    EXPECT_EQ(a.partition, b.partition);
    EXPECT_EQ(a.seed, seed);
  }
}

// --- CNM and Louvain against exhaustive search ------------------------------

TEST(GreedyModularity, BoundedByExhaustiveOptimum) {
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 80; ++trial) {
    const std::size_t n = 2 + gen() % 7;
    const auto g = oracle::random_graph(n, 0.35, gen);
    if (g.edge_count() == 0) continue;
    const double best = oracle::best_modularity(g);
    const double singleton_q = modularity(g, Partition::singletons(n));
    const bool connected = connected_components(g).count == 1;
    for (const auto& r : {cnm(g), louvain(g, gen())}) {
      expect_well_formed(g, r);
      EXPECT_LE(*r.modularity, best + 1e-12);
      EXPECT_GE(*r.modularity, singleton_q - 1e-12);
      if (connected) {
        EXPECT_GE(*r.modularity, -1e-12);
      }
    }
  }
}

TEST(Cnm, RelabelingPermutesTieFreeRuns) {
  std::mt19937_64 gen(123);
  int checked = 0;
  for (int trial = 0; trial < 3000 && checked < 25; ++trial) {
    const std::size_t n = 4 + gen() % 8;
    const auto g = oracle::random_graph(n, 0.3, gen);
    const auto a = cnm_trace(g);
    if (a.ambiguous || g.edge_count() == 0) continue;
    const auto perm = random_permutation(n, gen);
    const auto b = cnm_trace(oracle::relabel(g, perm));
    if (b.ambiguous) continue;
    EXPECT_TRUE(same_grouping(permuted(a.result.partition, perm), b.result.partition));
    ++checked;
  }
  EXPECT_GE(checked, 25);
}

// --- edge betweenness and Girvan-Newman -------------------------------------

TEST(EdgeBetweenness, SmallGraphs) {
  const auto k2 = edge_betweenness(oracle::path(2));
  ASSERT_EQ(k2.size(), 1u);
  EXPECT_DOUBLE_EQ(k2[0].value, 1.0);

  const auto p3 = edge_betweenness(oracle::path(3));
  EXPECT_DOUBLE_EQ(p3[0].value, 2.0);
  EXPECT_DOUBLE_EQ(p3[1].value, 2.0);

  for (const auto& s : edge_betweenness(oracle::barbell()))
    if (s.edge == Edge{2, 3}) {
      EXPECT_DOUBLE_EQ(s.value, 9.0);
    }
}

TEST(EdgeBetweenness, MatchesPathEnumeration) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = oracle::random_graph(2 + gen() % 7, 0.4, gen);
    const auto expected = oracle::edge_betweenness(g);
    for (const auto& s : edge_betweenness(g)) EXPECT_NEAR(s.value, expected.at({s.edge.u, s.edge.v}), 1e-9);
  }
}

TEST(GirvanNewman, BarbellRemovesBridgeFirst) {
  const auto t = girvan_newman_trace(oracle::barbell());
  ASSERT_FALSE(t.removed.empty());
  EXPECT_EQ(t.removed.front(), (Edge{2, 3}));
  EXPECT_EQ(community_count(t.result), 2u);
  EXPECT_NEAR(*t.result.modularity, kBarbellQ, 1e-12);
}

TEST(GirvanNewman, TriangleAndDisjointEdges) {
  const auto tri = girvan_newman(oracle::complete(3));
  EXPECT_EQ(community_count(tri), 1u);
  EXPECT_NEAR(*tri.modularity, 0.0, 1e-12);
  const auto two = girvan_newman(oracle::two_disjoint_edges());
  EXPECT_EQ(community_count(two), 2u);
  EXPECT_NEAR(*two.modularity, 0.5, 1e-12);
  EXPECT_FALSE(girvan_newman(Graph(3, std::vector<Edge>{})).modularity.has_value());
}

TEST(GirvanNewman, ReturnsMaximumOfEvaluatedSequence) {
  std::mt19937_64 gen(9);
  for (auto stop : {GirvanNewmanStop::FirstDecrease, GirvanNewmanStop::Exhaustive}) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto g = oracle::random_graph(2 + gen() % 12, 0.3, gen);
      if (g.edge_count() == 0) continue;
      const auto t = girvan_newman_trace(g, {stop});
      expect_well_formed(g, t.result);
      ASSERT_FALSE(t.evaluated.empty());
      EXPECT_EQ(*t.result.modularity, *std::max_element(t.evaluated.begin(), t.evaluated.end()));
      if (stop == GirvanNewmanStop::Exhaustive) {
        EXPECT_EQ(t.removed.size(), g.edge_count());
      }
    }
  }
}

TEST(GirvanNewman, ExhaustiveNeverWorseThanFirstDecrease) {
  std::mt19937_64 gen(19);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = oracle::random_graph(3 + gen() % 12, 0.25, gen);
    if (g.edge_count() == 0) continue;
    const double early = *girvan_newman(g).modularity;
    const double full = *girvan_newman(g, {GirvanNewmanStop::Exhaustive}).modularity;
    EXPECT_GE(full, early);
  }
}

TEST(GirvanNewman, RelabelingPermutesTieFreeRuns) {
  std::mt19937_64 gen(321);
  int checked = 0;
  for (int trial = 0; trial < 3000 && checked < 25; ++trial) {
    const std::size_t n = 4 + gen() % 8;
    const auto g = oracle::random_graph(n, 0.35, gen);
    if (g.edge_count() == 0) continue;
    const auto a = girvan_newman_trace(g);
    if (a.ambiguous) continue;
    const auto perm = random_permutation(n, gen);
    const auto b = girvan_newman_trace(oracle::relabel(g, perm));
    if (b.ambiguous) continue;
    EXPECT_TRUE(same_grouping(permuted(a.result.partition, perm), b.result.partition));
    ++checked;
  }
  EXPECT_GE(checked, 25);
}

// --- label propagation ------------------------------------------------------

TEST(LabelPropagation, ConfinedToComponents) {
  EXPECT_EQ(community_count(label_propagation(oracle::two_disjoint_edges(), 3)), 2u);
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = oracle::random_graph(2 + gen() % 20, 0.1, gen);
    const auto r = label_propagation(g, gen());
    expect_well_formed(g, r);
    const auto comps = connected_components(g);
    for (NodeId u = 0; u < g.node_count(); ++u)
      for (NodeId v = 0; v < g.node_count(); ++v)
        if (r.partition.assignment[u] == r.partition.assignment[v]) {
          EXPECT_EQ(comps.labels[u], comps.labels[v]);
        }
  }
}

TEST(LabelPropagation, CompleteGraphCollapses) {
  for (std::uint64_t seed = 0; seed < 200; ++seed)
    EXPECT_EQ(community_count(label_propagation(oracle::complete(5), seed)), 1u) << "seed " << seed;
}

TEST(LabelPropagation, DeterministicForSeed) {
  std::mt19937_64 gen(2);
  const auto g = oracle::random_graph(30, 0.1, gen);
  for (std::uint64_t seed = 0; seed < 10; ++seed)
    EXPECT_EQ(label_propagation(g, seed).partition, label_propagation(g, seed).partition);
}

TEST(LabelPropagation, IsolatedNodesKeepOwnLabel) {
  const auto r = label_propagation(oracle::make_graph(4, {{0, 1}}), 1);
  EXPECT_EQ(community_count(r), 3u);
  EXPECT_FALSE(label_propagation(Graph(3, std::vector<Edge>{}), 1).modularity.has_value());
}
