#pragma once

// Missing-data simulation: candidate ground-truth graphs are the observed
// graph plus k random absent cross-partition edges, k = 1..floor(m/2), with
// several independent candidates per k. Every metric is evaluated on each
// candidate and on the observed graph itself (k = 0).

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <vector>

#include "netrobust/centrality.hpp"
#include "netrobust/community.hpp"
#include "netrobust/error.hpp"
#include "netrobust/graph.hpp"
#include "netrobust/rng.hpp"
#include "netrobust/spectral.hpp"

namespace netrobust {

enum class MetricId : std::uint8_t {
  ComponentCount,
  NonzeroEigenvalues,
  LargestEigenvalue,
  BetweennessVariance,
  PageRankVariance,
  CommunitiesCNM,
  CommunitiesLouvain,
  CommunitiesGN,
  CommunitiesLP,
};

inline constexpr std::array<MetricId, 9> kAllMetrics = {
    MetricId::ComponentCount,      MetricId::NonzeroEigenvalues, MetricId::LargestEigenvalue,
    MetricId::BetweennessVariance, MetricId::PageRankVariance,   MetricId::CommunitiesCNM,
    MetricId::CommunitiesLouvain,  MetricId::CommunitiesGN,      MetricId::CommunitiesLP,
};

inline std::string_view to_string(MetricId m) {
  switch (m) {
    case MetricId::ComponentCount: return "ComponentCount";
    case MetricId::NonzeroEigenvalues: return "NonzeroEigenvalues";
    case MetricId::LargestEigenvalue: return "LargestEigenvalue";
    case MetricId::BetweennessVariance: return "BetweennessVariance";
    case MetricId::PageRankVariance: return "PageRankVariance";
    case MetricId::CommunitiesCNM: return "CommunitiesCNM";
    case MetricId::CommunitiesLouvain: return "CommunitiesLouvain";
    case MetricId::CommunitiesGN: return "CommunitiesGN";
    case MetricId::CommunitiesLP: return "CommunitiesLP";
  }
  return "";
}

inline std::optional<MetricId> parse_metric(std::string_view name) {
  for (MetricId m : kAllMetrics)
    if (to_string(m) == name) return m;
  return std::nullopt;
}

enum class SamplingMode {
  Independent,  // every (k, replicate) candidate draws its k edges afresh
  Cumulative,   // each replicate grows one edge sequence; k takes its prefix
};

inline std::string_view to_string(SamplingMode m) {
  return m == SamplingMode::Independent ? "independent" : "cumulative";
}

struct SweepConfig {
  double max_added_fraction = 0.5;
  std::size_t grid_stride = 1;
  std::size_t replicates = 10;
  std::uint64_t base_seed = 0;
  std::vector<MetricId> metrics{kAllMetrics.begin(), kAllMetrics.end()};
  double pagerank_damping = 0.85;
  double pagerank_tolerance = 1e-10;
  int pagerank_max_iterations = 1000;
  double zero_tolerance = kDefaultZeroTolerance;
  int label_propagation_rounds = kDefaultLabelPropagationRounds;
  SamplingMode mode = SamplingMode::Independent;

  void validate() const {
    if (!(max_added_fraction > 0.0 && max_added_fraction <= 0.5))
      throw std::invalid_argument("max_added_fraction must be in (0, 0.5]");
    if (grid_stride == 0) throw std::invalid_argument("grid_stride must be positive");
    if (replicates == 0) throw std::invalid_argument("replicates must be positive");
    if (!(pagerank_damping > 0.0 && pagerank_damping <= 1.0))
      throw std::invalid_argument("pagerank_damping must be in (0, 1]");
    if (metrics.empty()) throw std::invalid_argument("no metrics selected");
  }

  /// Metrics in canonical order without duplicates.
  std::vector<MetricId> selected_metrics() const {
    std::vector<MetricId> out(metrics);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

/// Missing value = metric undefined on this graph (community counts on an
/// edgeless graph).
using MetricValues = std::map<MetricId, std::optional<double>>;

struct RobustnessRecord {
  std::string network_id;
  InteractionType interaction_type = InteractionType::Other;
  std::size_t k_added = 0;
  double added_fraction = 0.0;
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  MetricId metric = MetricId::ComponentCount;
  std::optional<double> value;

  friend bool operator==(const RobustnessRecord&, const RobustnessRecord&) = default;
};

struct AggregateBin {
  double center = 0.0;
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
  std::size_t samples = 0;
};

struct AggregateCurve {
  InteractionType interaction_type = InteractionType::Other;
  MetricId metric = MetricId::ComponentCount;
  std::vector<AggregateBin> bins;
  // Samples left unnormalized because their network's baseline was 0 or absent.
  std::size_t unnormalized_samples = 0;
};

// ---------------------------------------------------------------------------
// Seeds
// ---------------------------------------------------------------------------

/// Child seed for one sweep cell:
/// mix(mix(mix(mix(base) ^ fnv1a(network_id)) ^ k) ^ replicate), with mix the
/// SplitMix64 finalizer. Independent of execution order.
inline std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view network_id, std::uint64_t k,
                                 std::uint64_t replicate) {
  std::uint64_t h = mix64(base_seed);
  h = mix64(h ^ fnv1a64(network_id));
  h = mix64(h ^ k);
  return mix64(h ^ replicate);
}

inline std::uint64_t louvain_seed(std::uint64_t algorithm_seed) { return mix64(algorithm_seed + 1); }
inline std::uint64_t label_propagation_seed(std::uint64_t algorithm_seed) { return mix64(algorithm_seed + 2); }

// ---------------------------------------------------------------------------
// Edge addition
// ---------------------------------------------------------------------------

/// Absent cross-partition pairs in row-major order.
inline std::vector<BipartiteEdge> absent_pairs(const BipartiteGraph& g) {
  std::vector<BipartiteEdge> out;
  out.reserve(g.pair_count() - g.edge_count());
  auto present = g.edges().begin();
  const auto end = g.edges().end();
  for (NodeId r = 0; r < g.row_count(); ++r) {
    for (NodeId c = 0; c < g.col_count(); ++c) {
      const BipartiteEdge e{r, c};
      if (present != end && *present == e) ++present;
      else out.push_back(e);
    }
  }
  return out;
}

/// First `k` entries of a seeded forward Fisher-Yates shuffle of `pool`,
/// which is reordered in place. The prefix for k is the prefix for any k' > k
/// under the same seed.
inline std::vector<BipartiteEdge> sample_without_replacement(std::vector<BipartiteEdge>& pool, std::size_t k,
                                                             std::uint64_t seed) {
  if (k > pool.size()) throw CapacityError(k, pool.size());
  Rng rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  return {pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k)};
}

/// Observed graph plus exactly k distinct absent pairs drawn uniformly.
inline BipartiteGraph add_random_edges(const BipartiteGraph& g, std::size_t k, std::uint64_t seed) {
  const std::size_t capacity = g.pair_count() - g.edge_count();
  if (k > capacity) throw CapacityError(k, capacity);
  if (k == 0) return g;
  auto pool = absent_pairs(g);
  const auto added = sample_without_replacement(pool, k, seed);
  return g.with_edges(added);
}

// ---------------------------------------------------------------------------
// Metric evaluation
// ---------------------------------------------------------------------------

/// Stochastic community algorithms take seeds derived from `algorithm_seed`.
inline MetricValues evaluate_metrics(const BipartiteGraph& bg, std::span<const MetricId> metrics,
                                     const SweepConfig& config, std::uint64_t algorithm_seed) {
  const Graph g = to_undirected(bg);
  auto wants = [&](MetricId m) { return std::find(metrics.begin(), metrics.end(), m) != metrics.end(); };
  MetricValues out;

  if (wants(MetricId::ComponentCount) || wants(MetricId::NonzeroEigenvalues) ||
      wants(MetricId::LargestEigenvalue)) {
    const Spectrum s = laplacian_spectrum(g, config.zero_tolerance);
    if (wants(MetricId::ComponentCount)) {
      const std::size_t bfs = connected_components(g).count;
      if (spectral_component_count(s) != bfs)
        throw NumericalError("zero-eigenvalue count " + std::to_string(s.zero_count) +
                             " disagrees with " + std::to_string(bfs) + " connected components");
      out[MetricId::ComponentCount] = static_cast<double>(s.zero_count);
    }
    if (wants(MetricId::NonzeroEigenvalues))
      out[MetricId::NonzeroEigenvalues] = static_cast<double>(count_nonzero_eigenvalues(s));
    if (wants(MetricId::LargestEigenvalue)) out[MetricId::LargestEigenvalue] = largest_eigenvalue(s);
  }
  if (wants(MetricId::BetweennessVariance)) out[MetricId::BetweennessVariance] = variance(betweenness(g));
  if (wants(MetricId::PageRankVariance)) {
    const auto pr = pagerank(g, {config.pagerank_damping, config.pagerank_tolerance, config.pagerank_max_iterations});
    out[MetricId::PageRankVariance] = variance(pr.ranks);
  }

  const bool has_edges = g.edge_count() > 0;
  auto count_of = [&](auto&& detect) -> std::optional<double> {
    if (!has_edges) return std::nullopt;
    return static_cast<double>(community_count(detect()));
  };
  if (wants(MetricId::CommunitiesCNM)) out[MetricId::CommunitiesCNM] = count_of([&] { return cnm(g); });
  if (wants(MetricId::CommunitiesLouvain))
    out[MetricId::CommunitiesLouvain] = count_of([&] { return louvain(g, louvain_seed(algorithm_seed)); });
  if (wants(MetricId::CommunitiesGN)) out[MetricId::CommunitiesGN] = count_of([&] { return girvan_newman(g); });
  if (wants(MetricId::CommunitiesLP))
    out[MetricId::CommunitiesLP] = count_of([&] {
      return label_propagation(g, label_propagation_seed(algorithm_seed), config.label_propagation_rounds);
    });
  return out;
}

inline MetricValues evaluate_metrics(const BipartiteGraph& g, const SweepConfig& config) {
  const auto metrics = config.selected_metrics();
  return evaluate_metrics(g, metrics, config, config.base_seed);
}

// ---------------------------------------------------------------------------
// Sweep
// ---------------------------------------------------------------------------

/// Added-edge counts stride, 2*stride, ... up to floor(m * fraction), capped
/// by the number of absent pairs.
inline std::vector<std::size_t> sweep_grid(const BipartiteGraph& g, const SweepConfig& config) {
  const std::size_t m = g.edge_count();
  auto limit = static_cast<std::size_t>(std::floor(static_cast<double>(m) * config.max_added_fraction));
  limit = std::min(limit, g.pair_count() - m);
  std::vector<std::size_t> grid;
  for (std::size_t k = config.grid_stride; k <= limit; k += config.grid_stride) grid.push_back(k);
  return grid;
}

namespace detail {

template <typename Task>
void parallel_for(std::size_t count, unsigned threads, Task&& task) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(failure_lock);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  workers.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

/// Records are ordered by (k, replicate, metric) with the k = 0 baseline
/// (replicate 0) first, whatever the thread count.
inline std::vector<RobustnessRecord> sweep(const BipartiteGraph& g, const SweepConfig& config,
                                           unsigned threads = 1) {
  config.validate();
  const auto grid = sweep_grid(g, config);
  if (grid.empty())
    throw GridError("no added-edge counts to evaluate for '" + g.network_id() + "' (m = " +
                    std::to_string(g.edge_count()) + ")");
  const auto metrics = config.selected_metrics();
  const auto m = static_cast<double>(g.edge_count());
  const std::string& id = g.network_id();

  struct Cell {
    std::size_t k;
    std::size_t replicate;
    std::uint64_t seed;
    MetricValues values;
  };
  std::vector<Cell> cells;
  cells.push_back({0, 0, derive_seed(config.base_seed, id, 0, 0), {}});
  for (std::size_t k : grid)
    for (std::size_t r = 1; r <= config.replicates; ++r)
      cells.push_back({k, r, derive_seed(config.base_seed, id, k, r), {}});

  const auto pool = absent_pairs(g);
  detail::parallel_for(cells.size(), threads, [&](std::size_t i) {
    Cell& cell = cells[i];
    if (cell.k == 0) {
      cell.values = evaluate_metrics(g, metrics, config, cell.seed);
      return;
    }
    const std::uint64_t sample_seed = config.mode == SamplingMode::Independent
                                          ? cell.seed
                                          : derive_seed(config.base_seed, id, 0, cell.replicate);
    auto local = pool;
    const auto added = sample_without_replacement(local, cell.k, sample_seed);
    cell.values = evaluate_metrics(g.with_edges(added), metrics, config, cell.seed);
  });

  std::vector<RobustnessRecord> records;
  records.reserve(cells.size() * metrics.size());
  for (const Cell& cell : cells) {
    for (MetricId metric : metrics) {
      records.push_back({id, g.interaction_type(), cell.k, static_cast<double>(cell.k) / m, cell.replicate,
                         cell.seed, metric, cell.values.at(metric)});
    }
  }
  return records;
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

/// Groups by (interaction type, metric), divides each value by its network's
/// k = 0 value, and bins added fractions into `bin_count` equal bins over
/// [0, 0.5]. Fractions above 0.5 land in the last bin; missing values are
/// skipped.
inline std::vector<AggregateCurve> aggregate(std::span<const RobustnessRecord> records, std::size_t bin_count) {
  if (records.empty()) throw EmptyInputError("no records to aggregate");
  if (bin_count == 0) throw std::invalid_argument("bin_count must be positive");

  std::map<std::pair<std::string, MetricId>, double> baseline;
  for (const auto& r : records)
    if (r.k_added == 0 && r.value) baseline.emplace(std::pair{r.network_id, r.metric}, *r.value);

  struct Accumulator {
    std::vector<std::vector<double>> bins;
    std::size_t unnormalized = 0;
  };
  std::map<std::pair<InteractionType, MetricId>, Accumulator> groups;
  const double width = 0.5 / static_cast<double>(bin_count);
  for (const auto& r : records) {
    if (!r.value) continue;
    auto& acc = groups[{r.interaction_type, r.metric}];
    if (acc.bins.empty()) acc.bins.resize(bin_count);
    double value = *r.value;
    const auto base = baseline.find({r.network_id, r.metric});
    if (base != baseline.end() && base->second != 0.0) value /= base->second;
    else ++acc.unnormalized;
    const auto bin = std::min(bin_count - 1, static_cast<std::size_t>(std::max(0.0, r.added_fraction) / width));
    acc.bins[bin].push_back(value);
  }

  std::vector<AggregateCurve> curves;
  for (const auto& [key, acc] : groups) {
    AggregateCurve curve{key.first, key.second, {}, acc.unnormalized};
    for (std::size_t b = 0; b < bin_count; ++b) {
      const auto& values = acc.bins[b];
      if (values.empty()) continue;
      AggregateBin bin;
      bin.center = (static_cast<double>(b) + 0.5) * width;
      bin.samples = values.size();
      for (double v : values) bin.mean += v;
      bin.mean /= static_cast<double>(values.size());
      double ss = 0.0;
      for (double v : values) ss += (v - bin.mean) * (v - bin.mean);
      bin.std = std::sqrt(ss / static_cast<double>(values.size()));
      curve.bins.push_back(bin);
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

}  // namespace netrobust
