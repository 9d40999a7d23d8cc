#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"

#include "ringel/errors.hpp"
#include "ringel/runner.hpp"

namespace {

constexpr const char* exit_codes_help = R"(Exit codes:
  0  success (decomposition verified)
  1  internal error
  2  usage, input or configuration error
  3  tree classification or partition failure
  4  pipeline abort (stage and reason in summary.json)
  5  infeasible instance
  6  search or walk budget exhausted
  7  produced decomposition failed verification

Environment:
  RINGEL_CONFIG  path of a JSON config applied before any --cfg file)";

void log_result(const ringel::RunResult& r) {
  if (r.exit_code == ringel::exit_ok)
    spdlog::info("success: case {} n={} copies verified{}", r.case_tag, r.n, r.fallback_used ? " (exact fallback)" : "");
  else
    spdlog::warn("{} at stage '{}': {}", r.status, r.stage, r.reason);
}

}  // namespace

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_color_st("ringel");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");

  CLI::App app{"Tree decompositions of dense host graphs"};
  app.footer(exit_codes_help);
  app.set_version_flag("--version", "ringel 1.0");

  ringel::RunSpec spec;
  std::uint64_t seed = 0;
  std::string mode = "pipeline", out_dir, metrics_path;
  std::vector<std::string> cfg_files;
  std::vector<std::uint64_t> bench_seeds;
  long sampler_samples = 2000;
  bool verbose = false;

  auto add_run_options = [&](CLI::App& a) {
    a.add_option("--graph", spec.graph_path, "host graph: .json or an edge list")->check(CLI::ExistingFile);
    a.add_option("--tree", spec.tree_path, "tree: .json or a parent array")->check(CLI::ExistingFile);
    a.add_option("--gen", spec.gen,
                 "generators: complete:N, gnp:N:P, tree-random:V, tree-recursive:V, tree-path:V, "
                 "tree-star:L, tree-spider:LEGS:LEN, tree-caterpillar:SPINE:LEAVES");
    a.add_option("--mode", mode, "pipeline, oracle or hybrid")->check(CLI::IsMember({"pipeline", "oracle", "hybrid"}));
    a.add_option("--cfg", cfg_files, "JSON config layers, applied in order")->check(CLI::ExistingFile);
    a.add_option("--set", spec.overrides, "config override key=value, applied last");
    a.add_flag("--fallback-exact", spec.fallback_exact, "run the exact search when the pipeline fails");
    a.add_option("--snapshot-at", spec.snapshot_at, "time markers to snapshot: name, name:layer or all");
    a.add_option("--oracle-nodes", spec.oracle_budget.max_nodes, "node cap of the exact search");
    a.add_option("--oracle-edges", spec.oracle_budget.edge_cap, "largest host the exact search accepts");
    a.add_option("--out", out_dir, "artifact directory");
  };

  add_run_options(app);
  app.add_option("--seed", seed, "root seed");
  app.add_option("--metrics", metrics_path, "also write the metrics CSV here ('-' for stdout)");
  app.add_flag("-v,--verbose", verbose, "debug logging");

  auto* bench_cmd = app.add_subcommand("bench", "run one spec over many seeds");
  bench_cmd->fallthrough();
  bench_cmd->add_option("--seeds", bench_seeds, "seeds to run")->required();
  bench_cmd->add_option("--sampler-samples", sampler_samples, "samples for the K_{3,3} marginal check");
  bench_cmd->footer(exit_codes_help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ringel::exit_usage;
  }
  if (verbose) spdlog::set_level(spdlog::level::debug);

  try {
    spec.mode = ringel::mode_from(mode);
    if (const char* env = std::getenv("RINGEL_CONFIG"); env && *env) {
      spdlog::debug("config from RINGEL_CONFIG: {}", env);
      spec.cfg_layers.push_back(ringel::read_json_file(env));
    }
    for (const auto& f : cfg_files) spec.cfg_layers.push_back(ringel::read_json_file(f));
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return ringel::exit_usage;
  }

  if (bench_cmd->parsed()) {
    const auto report = ringel::bench(spec, bench_seeds, sampler_samples);
    std::cout << ringel::bench_summary(report);
    if (!out_dir.empty()) {
      std::ostringstream csv;
      ringel::write_bench_csv(csv, report);
      std::filesystem::create_directories(out_dir);
      ringel::write_text_file(out_dir + "/bench.csv", csv.str());
      ringel::write_text_file(out_dir + "/bench.txt", ringel::bench_summary(report));
    }
    return report.successes == static_cast<int>(report.rows.size()) ? 0 : ringel::exit_abort;
  }

  if (app.count("--seed") == 0) {
    spdlog::error("--seed is required for reproducibility");
    return ringel::exit_usage;
  }
  spec.seed = seed;
  const auto result = ringel::run(spec);
  log_result(result);
  try {
    if (!out_dir.empty()) ringel::write_artifacts(result, out_dir);
    if (metrics_path == "-") {
      ringel::write_metrics_csv(std::cout, result.metrics);
    } else if (!metrics_path.empty()) {
      std::ofstream os(metrics_path);
      if (!os) throw ringel::InputError("cannot write " + metrics_path);
      ringel::write_metrics_csv(os, result.metrics);
    }
  } catch (const std::exception& e) {
    spdlog::error("writing artifacts: {}", e.what());
    return ringel::exit_usage;
  }
  if (out_dir.empty() && metrics_path.empty()) std::cout << result.summary().dump(2) << '\n';
  return result.exit_code;
}
