#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "netrobust/centrality.hpp"
#include "netrobust/error.hpp"
#include "netrobust/graph.hpp"
#include "netrobust/rng.hpp"

namespace netrobust {

using CommunityId = std::uint32_t;

/// Community assignment with contiguous ids 0..community_count-1.
struct Partition {
  std::vector<CommunityId> assignment;
  std::size_t community_count = 0;

  /// Renumbers arbitrary labels by order of first appearance over node index.
  template <typename Label>
  static Partition from_labels(std::span<const Label> labels) {
    Partition p;
    p.assignment.resize(labels.size());
    std::map<Label, CommunityId> ids;
    for (std::size_t v = 0; v < labels.size(); ++v) {
      auto [it, inserted] = ids.try_emplace(labels[v], static_cast<CommunityId>(ids.size()));
      p.assignment[v] = it->second;
    }
    p.community_count = ids.size();
    return p;
  }

  template <typename Label>
  static Partition from_labels(const std::vector<Label>& labels) {
    return from_labels(std::span<const Label>(labels));
  }

  static Partition singletons(std::size_t n) {
    Partition p;
    p.assignment.resize(n);
    std::iota(p.assignment.begin(), p.assignment.end(), CommunityId{0});
    p.community_count = n;
    return p;
  }

  static Partition whole(std::size_t n) {
    Partition p;
    p.assignment.assign(n, 0);
    p.community_count = n == 0 ? 0 : 1;
    return p;
  }

  friend bool operator==(const Partition&, const Partition&) = default;
};

enum class Algorithm { CNM, Louvain, GirvanNewman, LabelPropagation };

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::CNM: return "CNM";
    case Algorithm::Louvain: return "Louvain";
    case Algorithm::GirvanNewman: return "GirvanNewman";
    case Algorithm::LabelPropagation: return "LabelPropagation";
  }
  return "";
}

struct DetectionResult {
  Partition partition;
  std::optional<double> modularity;  // empty when the graph has no edges
  Algorithm algorithm = Algorithm::CNM;
  std::optional<std::uint64_t> seed;
};

inline std::size_t community_count(const DetectionResult& r) noexcept { return r.partition.community_count; }

/// Newman modularity, evaluated per community as
/// sum_c [ L_c / m - (K_c / 2m)^2 ] with L_c internal edges and K_c degree sum.
inline double modularity(const Graph& g, const Partition& p) {
  const std::size_t m = g.edge_count();
  if (m == 0) throw UndefinedModularityError("modularity is undefined on a graph without edges");
  if (p.assignment.size() != g.node_count())
    throw std::invalid_argument("partition does not cover the graph");
  std::vector<double> internal(p.community_count, 0.0), degree_sum(p.community_count, 0.0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto c = p.assignment[v];
    degree_sum[c] += static_cast<double>(g.degree(v));
    for (NodeId w : g.neighbors(v))
      if (v < w && p.assignment[w] == c) internal[c] += 1.0;
  }
  const double md = static_cast<double>(m);
  double q = 0.0;
  for (std::size_t c = 0; c < p.community_count; ++c) {
    const double share = degree_sum[c] / (2.0 * md);
    q += internal[c] / md - share * share;
  }
  return q;
}

namespace detail {

inline DetectionResult undefined_result(const Graph& g, Algorithm a, std::optional<std::uint64_t> seed) {
  return {Partition::singletons(g.node_count()), std::nullopt, a, seed};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Clauset-Newman-Moore greedy agglomeration.
//
// The merge gain of communities i and j is 2 (e_ij - a_i a_j); scaled by
// (2m)^2 / 2 it becomes the integer 2m E_ij - K_i K_j, where E_ij counts edges
// between them and K is the degree sum. Working in integers keeps ties exact.
// ---------------------------------------------------------------------------

struct CnmTrace {
  DetectionResult result;
  std::vector<std::pair<CommunityId, CommunityId>> merges;  // (kept, absorbed) ids
  bool ambiguous = false;  // some merge had a tied best gain
};

inline CnmTrace cnm_trace(const Graph& g) {
  CnmTrace trace;
  const std::size_t n = g.node_count();
  const auto two_m = static_cast<std::int64_t>(2 * g.edge_count());
  if (two_m == 0) {
    trace.result = detail::undefined_result(g, Algorithm::CNM, std::nullopt);
    return trace;
  }

  std::vector<std::map<CommunityId, std::int64_t>> between(n);
  std::vector<std::int64_t> degree_sum(n);
  std::vector<CommunityId> owner(n);
  std::iota(owner.begin(), owner.end(), CommunityId{0});
  for (NodeId v = 0; v < n; ++v) {
    degree_sum[v] = static_cast<std::int64_t>(g.degree(v));
    for (NodeId w : g.neighbors(v)) between[v][w] = 1;
  }

  for (;;) {
    std::int64_t best = 0;
    CommunityId keep = 0, absorb = 0;
    bool found = false, tied = false;
    // Ascending (i, j) with strict improvement picks the lexicographically
    // smallest pair among equal gains.
    for (CommunityId i = 0; i < n; ++i) {
      for (const auto& [j, e] : between[i]) {
        if (j <= i) continue;
        const std::int64_t gain = two_m * e - degree_sum[i] * degree_sum[j];
        if (gain > best) {
          best = gain;
          keep = i;
          absorb = j;
          found = true;
          tied = false;
        } else if (found && gain == best) {
          tied = true;
        }
      }
    }
    if (!found) break;
    trace.merges.emplace_back(keep, absorb);
    trace.ambiguous = trace.ambiguous || tied;

    for (const auto& [x, e] : between[absorb]) {
      if (x == keep) continue;
      between[keep][x] += e;
      between[x][keep] += e;
      between[x].erase(absorb);
    }
    between[keep].erase(absorb);
    between[absorb].clear();
    degree_sum[keep] += degree_sum[absorb];
    degree_sum[absorb] = 0;
    for (auto& o : owner)
      if (o == absorb) o = keep;
  }

  auto& r = trace.result;
  r.partition = Partition::from_labels(owner);
  r.modularity = modularity(g, r.partition);
  r.algorithm = Algorithm::CNM;
  return trace;
}

inline DetectionResult cnm(const Graph& g) { return cnm_trace(g).result; }

// ---------------------------------------------------------------------------
// Louvain: local moving followed by aggregation, repeated until a level makes
// no move. Coarse graphs carry integer weights and self-loops.
// ---------------------------------------------------------------------------

namespace detail {

struct WeightedGraph {
  std::vector<std::vector<std::pair<NodeId, double>>> adjacency;  // no self entries
  std::vector<double> loop;      // diagonal entry A_ii
  std::vector<double> strength;  // sum_j A_ij including the diagonal
  double total = 0.0;            // 2m

  std::size_t size() const noexcept { return adjacency.size(); }

  static WeightedGraph from(const Graph& g) {
    WeightedGraph w;
    const std::size_t n = g.node_count();
    w.adjacency.resize(n);
    w.loop.assign(n, 0.0);
    w.strength.assign(n, 0.0);
    for (NodeId v = 0; v < n; ++v) {
      for (NodeId u : g.neighbors(v)) w.adjacency[v].emplace_back(u, 1.0);
      w.strength[v] = static_cast<double>(g.degree(v));
      w.total += w.strength[v];
    }
    return w;
  }

  WeightedGraph coarsen(std::span<const CommunityId> community, std::size_t count) const {
    WeightedGraph c;
    c.adjacency.resize(count);
    c.loop.assign(count, 0.0);
    c.strength.assign(count, 0.0);
    c.total = total;
    std::vector<std::map<NodeId, double>> merged(count);
    for (NodeId v = 0; v < size(); ++v) {
      const auto cv = community[v];
      c.loop[cv] += loop[v];
      c.strength[cv] += strength[v];
      for (const auto& [u, weight] : adjacency[v]) {
        const auto cu = community[u];
        if (cu == cv) c.loop[cv] += weight;
        else merged[cv][cu] += weight;
      }
    }
    for (std::size_t i = 0; i < count; ++i)
      c.adjacency[i].assign(merged[i].begin(), merged[i].end());
    return c;
  }
};

/// One level of local moving. Returns true if any node changed community.
inline bool louvain_local_moving(const WeightedGraph& w, std::span<const NodeId> order,
                                 std::vector<CommunityId>& community) {
  const std::size_t n = w.size();
  std::vector<double> total(n, 0.0);
  for (NodeId v = 0; v < n; ++v) total[community[v]] += w.strength[v];
  std::vector<double> link(n, 0.0);
  std::vector<CommunityId> touched;
  bool moved_any = false;
  for (;;) {
    bool moved = false;
    for (NodeId v : order) {
      const CommunityId own = community[v];
      const double k = w.strength[v];
      touched.clear();
      for (const auto& [u, weight] : w.adjacency[v]) {
        const CommunityId c = community[u];
        if (link[c] == 0.0) touched.push_back(c);
        link[c] += weight;
      }
      total[own] -= k;
      // Gain of joining c, scaled by 2m: 2m * k_{v,c} - K_c * k_v.
      CommunityId best = own;
      double best_gain = w.total * link[own] - total[own] * k;
      std::sort(touched.begin(), touched.end());
      for (CommunityId c : touched) {
        if (c == own) continue;
        const double gain = w.total * link[c] - total[c] * k;
        if (gain > best_gain) {
          best_gain = gain;
          best = c;
        }
      }
      total[best] += k;
      for (CommunityId c : touched) link[c] = 0.0;
      link[own] = 0.0;
      if (best != own) {
        community[v] = best;
        moved = true;
      }
    }
    if (!moved) break;
    moved_any = true;
  }
  return moved_any;
}

/// Louvain with an explicit first-level visiting order; later levels draw
/// their order from `rng`.
inline Partition louvain_partition(const Graph& g, Rng& rng, std::span<const NodeId> first_order) {
  const std::size_t n = g.node_count();
  std::vector<CommunityId> node_community(n);
  std::iota(node_community.begin(), node_community.end(), CommunityId{0});
  WeightedGraph level = WeightedGraph::from(g);
  std::vector<NodeId> order(first_order.begin(), first_order.end());
  for (;;) {
    std::vector<CommunityId> community(level.size());
    std::iota(community.begin(), community.end(), CommunityId{0});
    if (!louvain_local_moving(level, order, community)) break;
    const auto renumbered = Partition::from_labels(community);
    for (auto& c : node_community) c = renumbered.assignment[c];
    level = level.coarsen(renumbered.assignment, renumbered.community_count);
    order.resize(level.size());
    std::iota(order.begin(), order.end(), NodeId{0});
    rng.shuffle(std::span<NodeId>(order));
  }
  return Partition::from_labels(node_community);
}

}  // namespace detail

/// Louvain with resolution 1. Node visiting order is a seeded shuffle per level.
inline DetectionResult louvain(const Graph& g, std::uint64_t seed) {
  if (g.edge_count() == 0) return detail::undefined_result(g, Algorithm::Louvain, seed);
  Rng rng(seed);
  std::vector<NodeId> order(g.node_count());
  std::iota(order.begin(), order.end(), NodeId{0});
  rng.shuffle(std::span<NodeId>(order));
  DetectionResult r;
  r.partition = detail::louvain_partition(g, rng, order);
  r.modularity = modularity(g, r.partition);
  r.algorithm = Algorithm::Louvain;
  r.seed = seed;
  return r;
}

// ---------------------------------------------------------------------------
// Edge betweenness and Girvan-Newman.
// ---------------------------------------------------------------------------

struct EdgeScore {
  Edge edge;
  double value = 0.0;
};

namespace detail {

// Graph with stable edge ids whose edges can be switched off.
struct RemovableGraph {
  std::vector<std::vector<std::pair<NodeId, std::uint32_t>>> adjacency;
  std::vector<Edge> edges;
  std::vector<char> alive;

  explicit RemovableGraph(const Graph& g) : adjacency(g.node_count()), edges(g.edges()), alive(edges.size(), 1) {
    for (std::uint32_t id = 0; id < edges.size(); ++id) {
      adjacency[edges[id].u].emplace_back(edges[id].v, id);
      adjacency[edges[id].v].emplace_back(edges[id].u, id);
    }
  }

  /// Nodes reachable from `s`, ascending.
  std::vector<NodeId> component_of(NodeId s) const {
    std::vector<char> seen(adjacency.size(), 0);
    std::vector<NodeId> out{s};
    seen[s] = 1;
    for (std::size_t head = 0; head < out.size(); ++head) {
      for (const auto& [w, id] : adjacency[out[head]]) {
        if (alive[id] && !seen[w]) {
          seen[w] = 1;
          out.push_back(w);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<std::uint32_t> component_labels() const {
    constexpr auto unset = ~std::uint32_t{0};
    std::vector<std::uint32_t> label(adjacency.size(), unset);
    std::uint32_t next = 0;
    std::vector<NodeId> frontier;
    for (NodeId s = 0; s < adjacency.size(); ++s) {
      if (label[s] != unset) continue;
      label[s] = next;
      frontier.assign(1, s);
      while (!frontier.empty()) {
        const NodeId u = frontier.back();
        frontier.pop_back();
        for (const auto& [w, id] : adjacency[u]) {
          if (alive[id] && label[w] == unset) {
            label[w] = next;
            frontier.push_back(w);
          }
        }
      }
      ++next;
    }
    return label;
  }

  /// Adds ordered-pair edge dependencies from every source in `sources`.
  void accumulate_betweenness(std::span<const NodeId> sources, std::vector<double>& score) const {
    ShortestPathDag dag(adjacency.size());
    std::vector<double> delta(adjacency.size(), 0.0);
    auto neighbors = [this](NodeId u, auto&& visit) {
      for (const auto& [w, id] : adjacency[u])
        if (alive[id]) visit(w);
    };
    for (NodeId s : sources) {
      dag.run(s, neighbors);
      for (NodeId v : dag.order) delta[v] = 0.0;
      for (auto it = dag.order.rbegin(); it != dag.order.rend(); ++it) {
        const NodeId w = *it;
        for (const auto& [v, id] : adjacency[w]) {
          if (!alive[id] || dag.dist[v] != dag.dist[w] - 1) continue;
          const double c = dag.sigma[v] / dag.sigma[w] * (1.0 + delta[w]);
          score[id] += c;
          delta[v] += c;
        }
      }
    }
  }
};

}  // namespace detail

/// For each edge, the sum over unordered node pairs of the fraction of
/// shortest paths that use it. Edges come back as (u < v), sorted.
inline std::vector<EdgeScore> edge_betweenness(const Graph& g) {
  detail::RemovableGraph rg(g);
  std::vector<double> score(rg.edges.size(), 0.0);
  std::vector<NodeId> sources(g.node_count());
  std::iota(sources.begin(), sources.end(), NodeId{0});
  rg.accumulate_betweenness(sources, score);
  std::vector<EdgeScore> out;
  out.reserve(score.size());
  for (std::size_t id = 0; id < score.size(); ++id) out.push_back({rg.edges[id], 0.5 * score[id]});
  return out;
}

enum class GirvanNewmanStop {
  FirstDecrease,  // stop at the first split that does not raise modularity
  Exhaustive,     // remove every edge and keep the best split seen
};

struct GirvanNewmanOptions {
  GirvanNewmanStop stop = GirvanNewmanStop::FirstDecrease;
  // Betweenness values within this relative distance count as tied; ties go
  // to the lexicographically smallest (u, v).
  double tie_tolerance = 1e-9;
};

struct GirvanNewmanTrace {
  DetectionResult result;
  std::vector<double> evaluated;  // modularity of each distinct component split, in order
  std::vector<Edge> removed;
  bool ambiguous = false;  // some removal chose among tied betweenness values
};

/// Repeatedly removes the edge of highest betweenness, recomputing only the
/// component the removed edge belonged to. Each time the component count
/// grows, the component partition is scored against the original graph.
inline GirvanNewmanTrace girvan_newman_trace(const Graph& g, const GirvanNewmanOptions& opt = {}) {
  GirvanNewmanTrace trace;
  if (g.edge_count() == 0) {
    trace.result = detail::undefined_result(g, Algorithm::GirvanNewman, std::nullopt);
    return trace;
  }
  detail::RemovableGraph rg(g);
  std::vector<double> score(rg.edges.size(), 0.0);
  {
    std::vector<NodeId> all(g.node_count());
    std::iota(all.begin(), all.end(), NodeId{0});
    rg.accumulate_betweenness(all, score);
  }

  Partition best = Partition::from_labels(rg.component_labels());
  double best_q = modularity(g, best);
  trace.evaluated.push_back(best_q);
  std::size_t components = best.community_count;
  std::size_t remaining = rg.edges.size();

  while (remaining > 0) {
    std::uint32_t pick = 0;
    double top = -1.0;
    for (std::uint32_t id = 0; id < rg.edges.size(); ++id) {
      if (!rg.alive[id]) continue;
      if (top < 0.0 || score[id] > top + opt.tie_tolerance * std::max(1.0, top)) {
        top = score[id];
        pick = id;
      }
    }
    for (std::uint32_t id = 0; id < rg.edges.size() && !trace.ambiguous; ++id) {
      if (id != pick && rg.alive[id] && std::abs(score[id] - top) <= opt.tie_tolerance * std::max(1.0, top))
        trace.ambiguous = true;
    }
    rg.alive[pick] = 0;
    --remaining;
    trace.removed.push_back(rg.edges[pick]);

    const auto [u, v] = rg.edges[pick];
    auto affected = rg.component_of(u);
    const bool split = !std::binary_search(affected.begin(), affected.end(), v);
    if (split) {
      auto other = rg.component_of(v);
      affected.insert(affected.end(), other.begin(), other.end());
      std::sort(affected.begin(), affected.end());
    }
    std::vector<char> in_affected(g.node_count(), 0);
    for (NodeId x : affected) in_affected[x] = 1;
    for (std::uint32_t id = 0; id < rg.edges.size(); ++id)
      if (in_affected[rg.edges[id].u]) score[id] = 0.0;
    rg.accumulate_betweenness(affected, score);

    if (!split) continue;
    ++components;
    auto candidate = Partition::from_labels(rg.component_labels());
    const double q = modularity(g, candidate);
    trace.evaluated.push_back(q);
    if (q > best_q) {
      best_q = q;
      best = std::move(candidate);
    } else if (opt.stop == GirvanNewmanStop::FirstDecrease) {
      break;
    }
  }
  trace.result = {std::move(best), best_q, Algorithm::GirvanNewman, std::nullopt};
  return trace;
}

inline DetectionResult girvan_newman(const Graph& g, const GirvanNewmanOptions& opt = {}) {
  return girvan_newman_trace(g, opt).result;
}

// ---------------------------------------------------------------------------
// Asynchronous label propagation.
// ---------------------------------------------------------------------------

inline constexpr int kDefaultLabelPropagationRounds = 1000;

/// Every node starts with its own label. Each round visits nodes in a fresh
/// seeded shuffle; a node takes the most frequent label among its neighbours,
/// drawing uniformly among tied maxima. Stops once every node already holds a
/// maximal label, or after `max_rounds`.
inline DetectionResult label_propagation(const Graph& g, std::uint64_t seed,
                                         int max_rounds = kDefaultLabelPropagationRounds) {
  if (max_rounds < 1) throw std::invalid_argument("max_rounds must be positive");
  const std::size_t n = g.node_count();
  Rng rng(seed);
  std::vector<CommunityId> label(n);
  std::iota(label.begin(), label.end(), CommunityId{0});
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::vector<std::uint32_t> count(n, 0);
  std::vector<CommunityId> seen, maxima;

  auto tally = [&](NodeId v) {
    seen.clear();
    maxima.clear();
    std::uint32_t top = 0;
    for (NodeId w : g.neighbors(v)) {
      const CommunityId l = label[w];
      if (count[l]++ == 0) seen.push_back(l);
      top = std::max(top, count[l]);
    }
    for (CommunityId l : seen) {
      if (count[l] == top) maxima.push_back(l);
      count[l] = 0;
    }
    std::sort(maxima.begin(), maxima.end());
  };

  for (int round = 0; round < max_rounds; ++round) {
    rng.shuffle(std::span<NodeId>(order));
    for (NodeId v : order) {
      if (g.degree(v) == 0) continue;
      tally(v);
      label[v] = maxima.size() == 1 ? maxima.front() : maxima[rng.below(maxima.size())];
    }
    bool stable = true;
    for (NodeId v = 0; v < n && stable; ++v) {
      if (g.degree(v) == 0) continue;
      tally(v);
      stable = std::binary_search(maxima.begin(), maxima.end(), label[v]);
    }
    if (stable) break;
  }

  DetectionResult r;
  r.partition = Partition::from_labels(label);
  if (g.edge_count() > 0) r.modularity = modularity(g, r.partition);
  r.algorithm = Algorithm::LabelPropagation;
  r.seed = seed;
  return r;
}

}  // namespace netrobust
