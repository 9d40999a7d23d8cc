#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ringel/embedder.hpp"
#include "ringel/exact_step.hpp"
#include "ringel/io.hpp"
#include "ringel/oracle.hpp"

namespace ringel {

enum class Mode { pipeline, oracle, hybrid };
const char* to_string(Mode m);
Mode mode_from(const std::string& s);

// Exit codes of a run, also used by the command line tool.
enum ExitCode : int {
  exit_ok = 0,
  exit_internal = 1,
  exit_usage = 2,  // bad flags, unreadable input, invalid configuration
  exit_classification = 3,
  exit_abort = 4,
  exit_infeasible = 5,
  exit_budget = 6,
  exit_unverified = 7,
};

struct RunSpec {
  std::string graph_path, tree_path;  // JSON, edge list / parent array text
  std::vector<std::string> gen;       // e.g. "gnp:500:0.5", "tree-random:126"
  std::optional<std::uint64_t> seed;
  Mode mode = Mode::pipeline;
  std::vector<json> cfg_layers;         // applied in order over the defaults
  std::vector<std::string> overrides;   // key=value, applied last
  bool fallback_exact = false;          // pipeline mode: try the oracle after a failure
  std::vector<std::string> snapshot_at; // time marker names, optionally "name:layer"
  SearchBudget oracle_budget;
};

struct RunResult {
  int exit_code = exit_internal;
  std::string status;  // "success" or the failure class
  std::string case_tag;
  std::string stage;   // furthest stage reached
  std::string reason;  // abort or error detail
  bool fallback_used = false;
  std::optional<Decomposition> decomposition;  // verified when present
  std::vector<Metric> metrics;
  std::vector<ProgressRow> progress;
  std::map<std::string, json> snapshots;  // file stem -> state
  ParamConfig cfg;
  int n = 0;
  std::size_t host_edges = 0, tree_edges = 0;

  json summary() const;
};

// Validates the spec (exactly one source for each input, a seed) and builds
// the instance and configuration. Throws InputError or ConfigError.
struct Instance {
  Graph host;
  Tree tree;
  ParamConfig cfg;
};
Instance prepare(const RunSpec& spec);

// Never throws for failures of the algorithms themselves; those become exit
// codes and reasons in the result.
RunResult run(const RunSpec& spec);

// decomposition.json (success only), metrics.csv, progress.csv,
// summary.json and snapshots/<stem>.json under `dir`.
void write_artifacts(const RunResult& r, const std::string& dir);

struct BenchRow {
  std::uint64_t seed = 0;
  RunResult result;
  double marginal_dev = 0;  // largest |freq - 1/3| of the sampler on K_{3,3}
};
struct BenchReport {
  std::vector<BenchRow> rows;
  std::map<std::string, int> stage_histogram;
  int successes = 0;
};
// Runs `spec` once per seed. Failures are recorded, never rethrown.
BenchReport bench(const RunSpec& spec, const std::vector<std::uint64_t>& seeds, long sampler_samples = 2000);
// The marginal check used by bench for one seed.
double sampler_deviation(std::uint64_t seed, long samples);
void write_bench_csv(std::ostream& os, const BenchReport& r);
std::string bench_summary(const BenchReport& r);

}  // namespace ringel
