#pragma once

// Command implementations behind the `netrobust` executable. Each returns a
// process exit code: 0 success, 1 no network succeeded (or a partial batch
// when failures are not allowed), 2 usage or I/O error.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "netrobust/community.hpp"
#include "netrobust/io.hpp"
#include "netrobust/parse.hpp"
#include "netrobust/robustness.hpp"

namespace netrobust::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNoSuccess = 1;
inline constexpr int kExitUsage = 2;

struct NetworkInput {
  std::filesystem::path path;
  std::optional<NetworkFormat> format;  // guessed from the extension when empty
  std::optional<bool> row_header;       // detected from content when empty
  std::optional<bool> col_header;
  bool drop_isolated = false;
};

inline BipartiteGraph load_input(const NetworkInput& in) {
  if (!std::filesystem::exists(in.path)) throw Error("no such file: " + in.path.string());
  const auto format = in.format.value_or(guess_format(in.path));
  std::optional<IncidenceHeaders> headers;
  if (format == NetworkFormat::IncidenceCSV && (in.row_header || in.col_header)) {
    const auto detected = detect_incidence_headers(text::read_file(in.path));
    headers = IncidenceHeaders{in.row_header.value_or(detected.row_header),
                               in.col_header.value_or(detected.col_header)};
  }
  auto g = load_network(in.path, format, headers);
  if (in.drop_isolated) g = g.without_isolated();
  g.set_network_id(in.path.stem().string());
  return g;
}

// ---------------------------------------------------------------------------

struct MetricsOptions {
  NetworkInput input;
  SweepConfig config;
  bool json = false;
};

inline int cmd_metrics(const MetricsOptions& opt, std::ostream& out, std::ostream& err) {
  BipartiteGraph g;
  MetricValues values;
  try {
    opt.config.validate();
    g = load_input(opt.input);
    values = evaluate_metrics(g, opt.config);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  const double conn = g.row_count() && g.col_count() ? connectance(g) : 0.0;
  if (opt.json) {
    nlohmann::ordered_json j;
    j["network_id"] = g.network_id();
    j["n"] = g.node_count();
    j["m"] = g.edge_count();
    j["connectance"] = conn;
    for (const auto& [metric, value] : values) {
      if (value) j[std::string(to_string(metric))] = *value;
      else j[std::string(to_string(metric))] = nullptr;
    }
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  auto row = [&out](std::string_view name, const std::string& value) {
    out << std::left << std::setw(22) << name << value << '\n';
  };
  row("network", g.network_id());
  row("n", std::to_string(g.node_count()));
  row("m", std::to_string(g.edge_count()));
  row("connectance", format_double(conn));
  for (const auto& [metric, value] : values) row(to_string(metric), format_value(value));
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SweepOptions {
  std::filesystem::path manifest;
  std::filesystem::path out_dir;
  SweepConfig config;
  unsigned threads = 1;
  std::size_t bins = 10;
  bool allow_failures = true;
  bool drop_isolated = false;
};

inline int cmd_sweep(const SweepOptions& opt, std::ostream& out, std::ostream& err) {
  std::vector<ManifestEntry> entries;
  try {
    opt.config.validate();
    if (opt.bins == 0) throw std::invalid_argument("bins must be positive");
    std::vector<std::string> warnings;
    entries = load_manifest(opt.manifest, warnings);
    for (const auto& w : warnings) err << "warning: " << w << '\n';
    std::filesystem::create_directories(opt.out_dir);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  RunReport report;
  report.config = opt.config;
  report.threads = opt.threads;
  report.bins = opt.bins;
  report.allow_failures = opt.allow_failures;
  std::vector<RobustnessRecord> records;
  for (const auto& entry : entries) {
    ++report.networks_processed;
    try {
      auto g = load_network(entry.path, entry.format);
      if (opt.drop_isolated) g = g.without_isolated();
      g.set_network_id(entry.network_id);
      g.set_interaction_type(entry.interaction_type);
      auto rows = sweep(g, opt.config, opt.threads);
      records.insert(records.end(), std::make_move_iterator(rows.begin()), std::make_move_iterator(rows.end()));
      out << entry.network_id << ": " << rows.size() << " records\n";
    } catch (const std::exception& e) {
      report.failures.push_back({entry.network_id, e.what()});
      err << "warning: " << entry.network_id << " failed: " << e.what() << '\n';
    }
  }
  report.records_emitted = records.size();

  try {
    auto open = [&](const char* name) {
      std::ofstream f(opt.out_dir / name, std::ios::binary);
      if (!f) throw Error("cannot write " + (opt.out_dir / name).string());
      return f;
    };
    auto records_file = open("records.csv");
    write_records_csv(records_file, records);
    auto aggregate_file = open("aggregate.csv");
    if (records.empty()) aggregate_file << kAggregateHeader << '\n';
    else write_aggregate_csv(aggregate_file, aggregate(records, opt.bins));
    auto report_file = open("report.json");
    report_file << report_to_json(report).dump(2) << '\n';
    if (!records_file || !aggregate_file || !report_file) throw Error("write failed in " + opt.out_dir.string());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (report.successes() == 0) return kExitNoSuccess;
  if (!report.failures.empty() && !opt.allow_failures) return kExitNoSuccess;
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct AggregateOptions {
  std::filesystem::path records;
  std::filesystem::path output;  // stdout when empty
  std::size_t bins = 10;
};

inline int cmd_aggregate(const AggregateOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const auto records = read_records_csv(text::read_file(opt.records));
    const auto curves = aggregate(records, opt.bins);
    if (opt.output.empty()) {
      write_aggregate_csv(out, curves);
    } else {
      std::ofstream f(opt.output, std::ios::binary);
      if (!f) throw Error("cannot write " + opt.output.string());
      write_aggregate_csv(f, curves);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct DemoOptions {
  NetworkInput input;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  int label_propagation_rounds = kDefaultLabelPropagationRounds;
};

struct CommunityCounts {
  std::optional<std::size_t> cnm, louvain, girvan_newman, label_propagation;
};

inline CommunityCounts community_counts(const BipartiteGraph& bg, std::uint64_t seed, int lp_rounds) {
  const Graph g = to_undirected(bg);
  if (g.edge_count() == 0) return {};
  return {community_count(cnm(g)), community_count(louvain(g, louvain_seed(seed))),
          community_count(girvan_newman(g)),
          community_count(label_propagation(g, label_propagation_seed(seed), lp_rounds))};
}

/// Community counts of all four algorithms on the observed graph and on one
/// candidate with k random edges added.
inline int cmd_demo_communities(const DemoOptions& opt, std::ostream& out, std::ostream& err) {
  CommunityCounts before, after;
  try {
    const auto g = load_input(opt.input);
    const auto candidate = add_random_edges(g, opt.k, opt.seed);
    before = community_counts(g, opt.seed, opt.label_propagation_rounds);
    after = community_counts(candidate, opt.seed, opt.label_propagation_rounds);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  auto cell = [](const std::optional<std::size_t>& x) { return x ? std::to_string(*x) : std::string("NA"); };
  const std::string added = "k=" + std::to_string(opt.k);
  out << std::left << std::setw(18) << "algorithm" << std::setw(10) << "observed" << added << '\n';
  auto row = [&](std::string_view name, const std::optional<std::size_t>& b, const std::optional<std::size_t>& a) {
    out << std::left << std::setw(18) << name << std::setw(10) << cell(b) << cell(a) << '\n';
  };
  row("CNM", before.cnm, after.cnm);
  row("Louvain", before.louvain, after.louvain);
  row("GirvanNewman", before.girvan_newman, after.girvan_newman);
  row("LabelPropagation", before.label_propagation, after.label_propagation);
  return kExitOk;
}

}  // namespace netrobust::cli
