#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "netrobust/cli.hpp"

namespace {

using namespace netrobust;

struct CommonFlags {
  std::uint64_t seed = 42;
  std::size_t replicates = 10;
  double max_added_fraction = 0.5;
  std::size_t stride = 1;
  double damping = 0.85;
  std::string metrics;
  std::string mode = "independent";
};

void add_config_flags(CLI::App& app, CommonFlags& f) {
  app.add_option("--seed", f.seed, "Base seed (falls back to NETROBUST_SEED)")
      ->envname("NETROBUST_SEED")
      ->capture_default_str();
  app.add_option("--replicates", f.replicates, "Candidate graphs per added-edge count")->capture_default_str();
  app.add_option("--max-added-fraction", f.max_added_fraction, "Largest k as a fraction of m")->capture_default_str();
  app.add_option("--stride", f.stride, "Step between added-edge counts")->capture_default_str();
  app.add_option("--damping", f.damping, "PageRank damping factor")->capture_default_str();
  app.add_option("--metrics", f.metrics, "Comma-separated metric names (default: all)");
  app.add_option("--mode", f.mode, "independent | cumulative")->capture_default_str();
}

SweepConfig to_config(const CommonFlags& f) {
  SweepConfig c;
  c.base_seed = f.seed;
  c.replicates = f.replicates;
  c.max_added_fraction = f.max_added_fraction;
  c.grid_stride = f.stride;
  c.pagerank_damping = f.damping;
  if (f.mode == "cumulative") c.mode = SamplingMode::Cumulative;
  else if (f.mode != "independent") throw CLI::ValidationError("--mode", "expected independent or cumulative");
  if (!f.metrics.empty()) {
    c.metrics.clear();
    for (const auto& name : text::split_record(f.metrics)) {
      const auto m = parse_metric(name);
      if (!m) throw CLI::ValidationError("--metrics", "unknown metric '" + name + "'");
      c.metrics.push_back(*m);
    }
  }
  return c;
}

void add_input_flags(CLI::App& app, cli::NetworkInput& in, std::string& format) {
  app.add_option("file", in.path, "Network file")->required();
  app.add_option("--format", format, "incidence | edgelist (default: .csv is incidence)");
  app.add_flag("--row-header,!--no-row-header", in.row_header, "First column holds row labels");
  app.add_flag("--col-header,!--no-col-header", in.col_header, "First row holds column labels");
  app.add_flag("--drop-isolated", in.drop_isolated, "Remove species without interactions");
}

void resolve_format(cli::NetworkInput& in, const std::string& format) {
  if (format.empty()) return;
  NetworkFormat f;
  if (!parse_network_format(format, f)) throw CLI::ValidationError("--format", "unknown format '" + format + "'");
  in.format = f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structural metrics of bipartite interaction networks and their robustness to missing edges"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  CommonFlags flags;
  int code = cli::kExitOk;

  cli::MetricsOptions metrics;
  std::string metrics_format;
  auto* metrics_cmd = app.add_subcommand("metrics", "Evaluate every metric on one network");
  add_input_flags(*metrics_cmd, metrics.input, metrics_format);
  add_config_flags(*metrics_cmd, flags);
  metrics_cmd->add_flag("--json", metrics.json, "Emit one JSON object");
  metrics_cmd->callback([&] {
    resolve_format(metrics.input, metrics_format);
    metrics.config = to_config(flags);
    code = cli::cmd_metrics(metrics, std::cout, std::cerr);
  });

  cli::SweepOptions sweep;
  sweep.threads = std::max(1u, std::thread::hardware_concurrency());
  auto* sweep_cmd = app.add_subcommand("sweep", "Run the missing-edge simulation over a manifest");
  sweep_cmd->add_option("manifest", sweep.manifest, "Manifest CSV")->required();
  sweep_cmd->add_option("--out", sweep.out_dir, "Output directory")->required();
  add_config_flags(*sweep_cmd, flags);
  sweep_cmd->add_option("--threads", sweep.threads, "Worker threads")->capture_default_str();
  sweep_cmd->add_option("--bins", sweep.bins, "Aggregate bins over [0, 0.5]")->capture_default_str();
  sweep_cmd->add_flag("--allow-failures,!--no-allow-failures", sweep.allow_failures,
                      "Exit 0 when some networks fail")->capture_default_str();
  sweep_cmd->add_flag("--drop-isolated", sweep.drop_isolated, "Remove species without interactions");
  sweep_cmd->callback([&] {
    sweep.config = to_config(flags);
    code = cli::cmd_sweep(sweep, std::cout, std::cerr);
  });

  cli::AggregateOptions agg;
  auto* agg_cmd = app.add_subcommand("aggregate", "Rebuild aggregate curves from records.csv");
  agg_cmd->add_option("records", agg.records, "records.csv")->required();
  agg_cmd->add_option("--out", agg.output, "Output file (default: stdout)");
  agg_cmd->add_option("--bins", agg.bins, "Bins over [0, 0.5]")->capture_default_str();
  agg_cmd->callback([&] { code = cli::cmd_aggregate(agg, std::cout, std::cerr); });

  cli::DemoOptions demo;
  demo.seed = flags.seed;
  std::string demo_format;
  auto* demo_cmd = app.add_subcommand("demo-communities", "Community counts before and after adding k edges");
  add_input_flags(*demo_cmd, demo.input, demo_format);
  demo_cmd->add_option("-k,--added", demo.k, "Edges to add")->capture_default_str();
  demo_cmd->add_option("--seed", demo.seed, "Seed (falls back to NETROBUST_SEED)")
      ->envname("NETROBUST_SEED")
      ->capture_default_str();
  demo_cmd->callback([&] {
    resolve_format(demo.input, demo_format);
    code = cli::cmd_demo_communities(demo, std::cout, std::cerr);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kExitUsage;
  }
  return code;
}
