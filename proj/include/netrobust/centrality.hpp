#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "netrobust/error.hpp"
#include "netrobust/graph.hpp"

namespace netrobust {

/// Per-node scores indexed like the Graph.
using CentralityVector = std::vector<double>;

namespace detail {

// Single-source shortest-path DAG from an unweighted BFS, reused by node and
// edge betweenness. `order` lists reached nodes by non-decreasing distance.
struct ShortestPathDag {
  std::vector<NodeId> order;
  std::vector<double> sigma;
  std::vector<int> dist;

  explicit ShortestPathDag(std::size_t n) : sigma(n, 0.0), dist(n, -1) { order.reserve(n); }

  template <typename Neighbors>
  void run(NodeId source, Neighbors&& neighbors) {
    for (NodeId v : order) {
      sigma[v] = 0.0;
      dist[v] = -1;
    }
    order.clear();
    sigma[source] = 1.0;
    dist[source] = 0;
    order.push_back(source);
    for (std::size_t head = 0; head < order.size(); ++head) {
      const NodeId u = order[head];
      neighbors(u, [&](NodeId w) {
        if (dist[w] < 0) {
          dist[w] = dist[u] + 1;
          order.push_back(w);
        }
        if (dist[w] == dist[u] + 1) sigma[w] += sigma[u];
      });
    }
  }
};

}  // namespace detail

/// Node betweenness: for each v, the sum over unordered pairs {s, t} with
/// v not in {s, t} of the fraction of shortest s-t paths through v.
/// Unnormalized; disconnected pairs contribute nothing.
inline CentralityVector betweenness(const Graph& g) {
  const std::size_t n = g.node_count();
  CentralityVector score(n, 0.0);
  detail::ShortestPathDag dag(n);
  std::vector<double> delta(n, 0.0);
  auto neighbors = [&g](NodeId u, auto&& visit) {
    for (NodeId w : g.neighbors(u)) visit(w);
  };
  for (NodeId s = 0; s < n; ++s) {
    dag.run(s, neighbors);
    for (NodeId v : dag.order) delta[v] = 0.0;
    // Dependency accumulation in reverse BFS order.
    for (auto it = dag.order.rbegin(); it != dag.order.rend(); ++it) {
      const NodeId w = *it;
      for (NodeId v : g.neighbors(w)) {
        if (dag.dist[v] == dag.dist[w] - 1) delta[v] += dag.sigma[v] / dag.sigma[w] * (1.0 + delta[w]);
      }
      if (w != s) score[w] += delta[w];
    }
  }
  // Each unordered pair was counted from both endpoints.
  for (auto& x : score) x *= 0.5;
  return score;
}

struct PageRankOptions {
  double damping = 0.85;
  double tolerance = 1e-10;
  int max_iterations = 1000;
};

struct PageRankResult {
  CentralityVector ranks;
  int iterations = 0;
  bool converged = false;
};

/// Power iteration over the undirected graph, starting from the uniform
/// vector. Rank held by isolated nodes is spread uniformly each step.
inline PageRankResult pagerank(const Graph& g, const PageRankOptions& opt = {}) {
  const std::size_t n = g.node_count();
  if (n == 0) throw EmptyNetworkError("pagerank needs at least one node");
  if (!(opt.damping > 0.0 && opt.damping <= 1.0)) throw std::invalid_argument("damping must be in (0, 1]");
  if (!(opt.tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (opt.max_iterations < 1) throw std::invalid_argument("max_iterations must be positive");

  const double inv_n = 1.0 / static_cast<double>(n);
  PageRankResult out;
  out.ranks.assign(n, inv_n);
  std::vector<double> next(n);
  for (out.iterations = 1; out.iterations <= opt.max_iterations; ++out.iterations) {
    double dangling = 0.0;
    for (NodeId v = 0; v < n; ++v)
      if (g.degree(v) == 0) dangling += out.ranks[v];
    const double base = (1.0 - opt.damping) * inv_n + opt.damping * dangling * inv_n;
    for (NodeId x = 0; x < n; ++x) {
      double inflow = 0.0;
      for (NodeId y : g.neighbors(x)) inflow += out.ranks[y] / static_cast<double>(g.degree(y));
      next[x] = base + opt.damping * inflow;
    }
    double change = 0.0;
    for (NodeId v = 0; v < n; ++v) change += std::abs(next[v] - out.ranks[v]);
    out.ranks.swap(next);
    if (change <= opt.tolerance) {
      out.converged = true;
      break;
    }
  }
  if (!out.converged) out.iterations = opt.max_iterations;
  double total = 0.0;
  for (double r : out.ranks) total += r;
  for (double& r : out.ranks) r /= total;
  return out;
}

/// Population variance: sum of squared deviations over n.
inline double variance(std::span<const double> values) {
  if (values.empty()) throw EmptyInputError("variance of an empty list");
  double mean = 0.0;
  for (double x : values) mean += x;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double x : values) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(values.size());
}

}  // namespace netrobust
