#pragma once

// File formats for batch runs: manifest CSV, long-form records CSV,
// aggregate curves CSV and the JSON run report. CSV output uses fixed column
// order, LF line endings and shortest round-trip number formatting, so equal
// inputs give byte-identical files.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "netrobust/error.hpp"
#include "netrobust/graph.hpp"
#include "netrobust/parse.hpp"
#include "netrobust/robustness.hpp"

namespace netrobust {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Shortest decimal text that parses back to exactly `x` (17 significant
/// digits at most).
inline std::string format_double(double x) {
  char buffer[32];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, x);
  return std::string(buffer, ec == std::errc{} ? end : buffer);
}

inline std::string format_value(const std::optional<double>& x) { return x ? format_double(*x) : "NA"; }

/// Quotes a text field when it holds a separator, quote or line break.
inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------

struct ManifestEntry {
  std::filesystem::path path;
  std::string network_id;
  InteractionType interaction_type = InteractionType::Other;
  NetworkFormat format = NetworkFormat::IncidenceCSV;
};

/// Header `path,network_id,interaction_type,format`. Relative paths resolve
/// against the manifest's directory. Unknown interaction types become Other
/// and add a line to `warnings`.
inline std::vector<ManifestEntry> load_manifest(const std::filesystem::path& manifest,
                                                std::vector<std::string>& warnings) {
  const auto content = text::read_file(manifest);
  const auto lines = text::lines(content);
  if (lines.empty()) throw ManifestError("manifest " + manifest.string() + " is empty");
  const auto header = text::split_record(lines.front());
  if (header != std::vector<std::string>{"path", "network_id", "interaction_type", "format"})
    throw ManifestError("manifest header must be path,network_id,interaction_type,format");

  std::vector<ManifestEntry> entries;
  std::set<std::string> ids;
  std::vector<std::string> missing;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto line_no = i + 1;
    if (text::trim(lines[i]).empty()) continue;
    const auto f = text::split_record(lines[i]);
    if (f.size() != 4) throw ManifestError("manifest line " + std::to_string(line_no) + ": expected 4 fields");
    ManifestEntry e;
    e.path = std::filesystem::path(f[0]);
    if (e.path.is_relative()) e.path = manifest.parent_path() / e.path;
    e.network_id = f[1];
    if (e.network_id.empty()) throw ManifestError("manifest line " + std::to_string(line_no) + ": empty network_id");
    if (!ids.insert(e.network_id).second) throw ManifestError("duplicate network_id '" + e.network_id + "'");
    if (!parse_interaction_type(f[2], e.interaction_type)) {
      e.interaction_type = InteractionType::Other;
      warnings.push_back("network '" + e.network_id + "': unknown interaction type '" + f[2] + "', using Other");
    }
    if (!parse_network_format(f[3], e.format))
      throw ManifestError("manifest line " + std::to_string(line_no) + ": unknown format '" + f[3] + "'");
    if (!std::filesystem::exists(e.path)) missing.push_back(e.path.string());
    entries.push_back(std::move(e));
  }
  if (!missing.empty()) {
    std::string msg = "manifest references missing files:";
    for (const auto& p : missing) msg += " " + p;
    throw ManifestError(msg);
  }
  return entries;
}

inline std::vector<ManifestEntry> load_manifest(const std::filesystem::path& manifest) {
  std::vector<std::string> ignored;
  return load_manifest(manifest, ignored);
}

// ---------------------------------------------------------------------------
// Records CSV
// ---------------------------------------------------------------------------

inline constexpr std::string_view kRecordsHeader =
    "network_id,interaction_type,k_added,added_fraction,replicate,seed,metric,value";

inline void write_records_header(std::ostream& out) { out << kRecordsHeader << '\n'; }

inline void write_records_rows(std::ostream& out, std::span<const RobustnessRecord> records) {
  for (const auto& r : records) {
    out << csv_field(r.network_id) << ',' << to_string(r.interaction_type) << ',' << r.k_added << ','
        << format_double(r.added_fraction) << ',' << r.replicate << ',' << r.seed << ',' << to_string(r.metric)
        << ',' << format_value(r.value) << '\n';
  }
}

inline void write_records_csv(std::ostream& out, std::span<const RobustnessRecord> records) {
  write_records_header(out);
  write_records_rows(out, records);
}

inline std::vector<RobustnessRecord> read_records_csv(std::string_view csv) {
  const auto lines = text::lines(csv);
  if (lines.empty() || text::trim(lines.front()) != kRecordsHeader)
    throw ParseError(1, "records header must be " + std::string(kRecordsHeader));
  std::vector<RobustnessRecord> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto line_no = i + 1;
    if (text::trim(lines[i]).empty()) continue;
    const auto f = text::split_record(lines[i]);
    if (f.size() != 8) throw ParseError(line_no, "expected 8 fields");
    RobustnessRecord r;
    r.network_id = f[0];
    if (!parse_interaction_type(f[1], r.interaction_type)) throw ParseError(line_no, "unknown interaction type");
    auto parse_uint = [&](const std::string& s, auto& target) {
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), target);
      if (ec != std::errc{} || ptr != s.data() + s.size()) throw ParseError(line_no, "bad integer '" + s + "'");
    };
    parse_uint(f[2], r.k_added);
    const auto fraction = text::parse_number(f[3]);
    if (!fraction) throw ParseError(line_no, "bad added_fraction");
    r.added_fraction = *fraction;
    parse_uint(f[4], r.replicate);
    parse_uint(f[5], r.seed);
    const auto metric = parse_metric(f[6]);
    if (!metric) throw ParseError(line_no, "unknown metric '" + f[6] + "'");
    r.metric = *metric;
    if (f[7] != "NA") {
      const auto value = text::parse_number(f[7]);
      if (!value) throw ParseError(line_no, "bad value '" + f[7] + "'");
      r.value = *value;
    }
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Aggregate CSV
// ---------------------------------------------------------------------------

inline constexpr std::string_view kAggregateHeader =
    "interaction_type,metric,bin_center,mean,std,n_samples,unnormalized_samples";

inline void write_aggregate_csv(std::ostream& out, std::span<const AggregateCurve> curves) {
  out << kAggregateHeader << '\n';
  for (const auto& c : curves) {
    for (const auto& b : c.bins) {
      out << to_string(c.interaction_type) << ',' << to_string(c.metric) << ',' << format_double(b.center) << ','
          << format_double(b.mean) << ',' << format_double(b.std) << ',' << b.samples << ','
          << c.unnormalized_samples << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// Run report
// ---------------------------------------------------------------------------

struct RunFailure {
  std::string network_id;
  std::string message;
};

struct RunReport {
  std::size_t networks_processed = 0;
  std::size_t records_emitted = 0;
  std::vector<RunFailure> failures;
  SweepConfig config;
  unsigned threads = 1;
  std::size_t bins = 10;
  bool allow_failures = true;
  std::string tool_version{kToolVersion};

  std::size_t successes() const noexcept { return networks_processed - failures.size(); }
};

inline nlohmann::ordered_json config_to_json(const SweepConfig& c) {
  nlohmann::ordered_json j;
  j["max_added_fraction"] = c.max_added_fraction;
  j["grid_stride"] = c.grid_stride;
  j["replicates"] = c.replicates;
  j["base_seed"] = c.base_seed;
  auto metrics = nlohmann::ordered_json::array();
  for (MetricId m : c.selected_metrics()) metrics.push_back(std::string(to_string(m)));
  j["metrics"] = metrics;
  j["pagerank_damping"] = c.pagerank_damping;
  j["pagerank_tolerance"] = c.pagerank_tolerance;
  j["pagerank_max_iterations"] = c.pagerank_max_iterations;
  j["zero_tolerance"] = c.zero_tolerance;
  j["label_propagation_rounds"] = c.label_propagation_rounds;
  j["sampling_mode"] = std::string(to_string(c.mode));
  return j;
}

inline nlohmann::ordered_json report_to_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["tool_version"] = r.tool_version;
  j["networks_processed"] = r.networks_processed;
  j["networks_succeeded"] = r.successes();
  j["records_emitted"] = r.records_emitted;
  auto failures = nlohmann::ordered_json::array();
  for (const auto& f : r.failures) failures.push_back({{"network_id", f.network_id}, {"error", f.message}});
  j["failures"] = failures;
  auto config = config_to_json(r.config);
  config["threads"] = r.threads;
  config["bins"] = r.bins;
  config["allow_failures"] = r.allow_failures;
  j["config"] = config;
  return j;
}

}  // namespace netrobust
