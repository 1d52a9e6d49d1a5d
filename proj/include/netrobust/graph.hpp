#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "netrobust/error.hpp"

namespace netrobust {

using NodeId = std::uint32_t;

enum class InteractionType { Pollination, HostParasite, PlantAnt, SeedDispersal, Other };

inline std::string_view to_string(InteractionType t) {
  switch (t) {
    case InteractionType::Pollination: return "Pollination";
    case InteractionType::HostParasite: return "HostParasite";
    case InteractionType::PlantAnt: return "PlantAnt";
    case InteractionType::SeedDispersal: return "SeedDispersal";
    case InteractionType::Other: return "Other";
  }
  return "Other";
}

/// Accepts the canonical names plus common spellings ("host-parasite",
/// "seed_dispersal", ...). Returns false when nothing matches.
inline bool parse_interaction_type(std::string_view text, InteractionType& out) {
  std::string key;
  for (char c : text) {
    if (c == '-' || c == '_' || c == ' ') continue;
    key.push_back(static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c));
  }
  if (key == "pollination") out = InteractionType::Pollination;
  else if (key == "hostparasite") out = InteractionType::HostParasite;
  else if (key == "plantant") out = InteractionType::PlantAnt;
  else if (key == "seeddispersal") out = InteractionType::SeedDispersal;
  else if (key == "other") out = InteractionType::Other;
  else return false;
  return true;
}

struct BipartiteEdge {
  NodeId row;
  NodeId col;

  friend auto operator<=>(const BipartiteEdge&, const BipartiteEdge&) = default;
};

/// An observed two-mode network. Edges only run between the row partition
/// and the column partition and are kept sorted and unique.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  BipartiteGraph(std::vector<std::string> row_labels, std::vector<std::string> col_labels,
                 std::vector<BipartiteEdge> edges, std::string network_id = {},
                 InteractionType type = InteractionType::Other)
      : rows_(std::move(row_labels)),
        cols_(std::move(col_labels)),
        edges_(std::move(edges)),
        network_id_(std::move(network_id)),
        type_(type) {
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    for (const auto& e : edges_) {
      if (e.row >= rows_.size() || e.col >= cols_.size())
        throw std::out_of_range("bipartite edge references a missing node");
    }
  }

  std::size_t row_count() const noexcept { return rows_.size(); }
  std::size_t col_count() const noexcept { return cols_.size(); }
  std::size_t node_count() const noexcept { return rows_.size() + cols_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::size_t pair_count() const noexcept { return rows_.size() * cols_.size(); }

  const std::vector<std::string>& row_labels() const noexcept { return rows_; }
  const std::vector<std::string>& col_labels() const noexcept { return cols_; }
  std::span<const BipartiteEdge> edges() const noexcept { return edges_; }

  const std::string& network_id() const noexcept { return network_id_; }
  InteractionType interaction_type() const noexcept { return type_; }
  void set_network_id(std::string id) { network_id_ = std::move(id); }
  void set_interaction_type(InteractionType t) noexcept { type_ = t; }

  bool has_edge(NodeId row, NodeId col) const noexcept {
    return std::binary_search(edges_.begin(), edges_.end(), BipartiteEdge{row, col});
  }

  /// Copy with `extra` merged into the edge set.
  BipartiteGraph with_edges(std::span<const BipartiteEdge> extra) const {
    std::vector<BipartiteEdge> all(edges_);
    all.insert(all.end(), extra.begin(), extra.end());
    return BipartiteGraph(rows_, cols_, std::move(all), network_id_, type_);
  }

  /// Copy without rows and columns that have no incident edge.
  BipartiteGraph without_isolated() const {
    std::vector<NodeId> row_map(rows_.size(), kDropped), col_map(cols_.size(), kDropped);
    for (const auto& e : edges_) row_map[e.row] = col_map[e.col] = 0;
    std::vector<std::string> rows, cols;
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (row_map[i] != kDropped) { row_map[i] = static_cast<NodeId>(rows.size()); rows.push_back(rows_[i]); }
    for (std::size_t j = 0; j < cols_.size(); ++j)
      if (col_map[j] != kDropped) { col_map[j] = static_cast<NodeId>(cols.size()); cols.push_back(cols_[j]); }
    std::vector<BipartiteEdge> edges;
    edges.reserve(edges_.size());
    for (const auto& e : edges_) edges.push_back({row_map[e.row], col_map[e.col]});
    return BipartiteGraph(std::move(rows), std::move(cols), std::move(edges), network_id_, type_);
  }

 private:
  static constexpr NodeId kDropped = ~NodeId{0};

  std::vector<std::string> rows_;
  std::vector<std::string> cols_;
  std::vector<BipartiteEdge> edges_;
  std::string network_id_;
  InteractionType type_ = InteractionType::Other;
};

struct Edge {
  NodeId u;
  NodeId v;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple undirected graph with sorted adjacency lists. Immutable once built.
class Graph {
 public:
  Graph() = default;

  /// Self-loops are rejected; duplicate edges collapse to one.
  Graph(std::size_t n, std::span<const Edge> edges, std::vector<std::string> labels = {})
      : adjacency_(n), labels_(std::move(labels)) {
    if (!labels_.empty() && labels_.size() != n)
      throw std::invalid_argument("label count does not match node count");
    for (const auto& e : edges) {
      if (e.u >= n || e.v >= n) throw std::out_of_range("edge references a missing node");
      if (e.u == e.v) throw std::invalid_argument("self-loops are not allowed");
      adjacency_[e.u].push_back(e.v);
      adjacency_[e.v].push_back(e.u);
    }
    std::size_t ends = 0;
    for (auto& list : adjacency_) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
      ends += list.size();
    }
    edge_count_ = ends / 2;
  }

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  std::span<const NodeId> neighbors(NodeId v) const noexcept { return adjacency_[v]; }
  std::size_t degree(NodeId v) const noexcept { return adjacency_[v].size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  bool has_edge(NodeId u, NodeId v) const noexcept {
    const auto& list = adjacency_[u];
    return std::binary_search(list.begin(), list.end(), v);
  }

  /// Every edge once, as (u, v) with u < v, in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (NodeId u = 0; u < adjacency_.size(); ++u)
      for (NodeId v : adjacency_[u])
        if (u < v) out.push_back({u, v});
    return out;
  }

 private:
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<std::string> labels_;
  std::size_t edge_count_ = 0;
};

/// Rows first, then columns: row r keeps index r, column c becomes rows + c.
inline Graph to_undirected(const BipartiteGraph& g) {
  const auto rows = static_cast<NodeId>(g.row_count());
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (const auto& e : g.edges()) edges.push_back({e.row, rows + e.col});
  std::vector<std::string> labels;
  labels.reserve(g.node_count());
  labels.insert(labels.end(), g.row_labels().begin(), g.row_labels().end());
  labels.insert(labels.end(), g.col_labels().begin(), g.col_labels().end());
  return Graph(g.node_count(), edges, std::move(labels));
}

struct Components {
  std::size_t count = 0;
  std::vector<std::uint32_t> labels;
};

/// BFS labelling; component ids follow the smallest node index they contain.
inline Components connected_components(const Graph& g) {
  constexpr auto unset = ~std::uint32_t{0};
  Components out;
  out.labels.assign(g.node_count(), unset);
  std::queue<NodeId> frontier;
  for (NodeId s = 0; s < g.node_count(); ++s) {
    if (out.labels[s] != unset) continue;
    const auto id = static_cast<std::uint32_t>(out.count++);
    out.labels[s] = id;
    frontier.push(s);
    while (!frontier.empty()) {
      const NodeId u = frontier.front();
      frontier.pop();
      for (NodeId w : g.neighbors(u)) {
        if (out.labels[w] == unset) {
          out.labels[w] = id;
          frontier.push(w);
        }
      }
    }
  }
  return out;
}

/// Proper 2-colouring check. Fills `side` (0/1 per node) when it succeeds.
inline bool is_bipartite(const Graph& g, std::vector<int>* side = nullptr) {
  std::vector<int> color(g.node_count(), -1);
  std::queue<NodeId> frontier;
  for (NodeId s = 0; s < g.node_count(); ++s) {
    if (color[s] != -1) continue;
    color[s] = 0;
    frontier.push(s);
    while (!frontier.empty()) {
      const NodeId u = frontier.front();
      frontier.pop();
      for (NodeId w : g.neighbors(u)) {
        if (color[w] == -1) {
          color[w] = 1 - color[u];
          frontier.push(w);
        } else if (color[w] == color[u]) {
          return false;
        }
      }
    }
  }
  if (side) *side = std::move(color);
  return true;
}

/// m / (rows * cols).
inline double connectance(const BipartiteGraph& g) {
  if (g.row_count() == 0 || g.col_count() == 0)
    throw EmptyNetworkError("connectance needs both partitions to be non-empty");
  return static_cast<double>(g.edge_count()) / static_cast<double>(g.pair_count());
}

/// Dense symmetric matrix, row-major.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t n) : n_(n), entries_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * n_ + j]; }

  /// Writes both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double value) noexcept {
    entries_[i * n_ + j] = value;
    entries_[j * n_ + i] = value;
  }

  std::span<const double> data() const noexcept { return entries_; }

  double trace() const noexcept {
    double t = 0.0;
    for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> entries_;
};

inline SymmetricMatrix adjacency_matrix(const Graph& g) {
  SymmetricMatrix a(g.node_count());
  for (const auto& e : g.edges()) a.set(e.u, e.v, 1.0);
  return a;
}

inline SymmetricMatrix degree_matrix(const Graph& g) {
  SymmetricMatrix d(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) d.set(v, v, static_cast<double>(g.degree(v)));
  return d;
}

/// L = D - A.
inline SymmetricMatrix laplacian(const Graph& g) {
  SymmetricMatrix l(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    l.set(v, v, static_cast<double>(g.degree(v)));
    for (NodeId w : g.neighbors(v))
      if (v < w) l.set(v, w, -1.0);
  }
  return l;
}

}  // namespace netrobust
