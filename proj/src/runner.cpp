#include "ringel/runner.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ringel/errors.hpp"
#include "ringel/matching.hpp"
#include "ringel/partition.hpp"

namespace ringel {
namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

int to_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw InputError(what + ": '" + s + "' is not an integer");
}

double to_real(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw InputError(what + ": '" + s + "' is not a number");
}

bool ends_with(const std::string& s, const std::string& tail) {
  return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

Graph load_graph(const std::string& path) {
  if (ends_with(path, ".json")) return graph_from_json(read_json_file(path));
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_edge_list(in);
}

Tree load_tree(const std::string& path) {
  if (ends_with(path, ".json")) return tree_from_json(read_json_file(path));
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_parent_array(in);
}

// "gnp:500:0.5", "complete:7"; returns false for tree generators.
bool make_host(const std::string& g, std::uint64_t seed, Graph& out, double& density) {
  const auto parts = split(g, ':');
  if (parts.empty()) throw InputError("empty generator");
  if (parts[0] == "complete") {
    if (parts.size() != 2) throw InputError("generator complete:N");
    out = complete_graph(to_int(parts[1], "complete"));
    density = 1;
    return true;
  }
  if (parts[0] == "gnp") {
    if (parts.size() != 3) throw InputError("generator gnp:N:P");
    Rng rng = stream(seed, "host");
    density = to_real(parts[2], "gnp density");
    out = gnp(to_int(parts[1], "gnp size"), density, rng);
    return true;
  }
  return false;
}

bool make_tree(const std::string& g, std::uint64_t seed, Tree& out) {
  const auto parts = split(g, ':');
  auto arg = [&](std::size_t k) {
    if (parts.size() <= k) throw InputError("generator " + g + " is missing an argument");
    return to_int(parts[k], parts[0]);
  };
  Rng rng = stream(seed, "tree");
  if (parts[0] == "tree-random") out = random_tree(arg(1), rng);
  else if (parts[0] == "tree-recursive") out = random_recursive_tree(arg(1), rng);
  else if (parts[0] == "tree-path") out = path_tree(arg(1));
  else if (parts[0] == "tree-star") out = star_tree(arg(1));
  else if (parts[0] == "tree-spider") out = spider(arg(1), arg(2));
  else if (parts[0] == "tree-caterpillar") out = caterpillar(arg(1), arg(2));
  else return false;
  return true;
}

int code_for(const std::exception_ptr& ep, RunResult& r) {
  try {
    std::rethrow_exception(ep);
  } catch (const ClassificationFailure& e) {
    r.status = "classification_failure";
    r.reason = e.what();
    return exit_classification;
  } catch (const PartitionFailure& e) {
    r.status = "classification_failure";
    r.reason = e.what();
    return exit_classification;
  } catch (const AbortError& e) {
    r.status = "abort";
    r.stage = e.stage;
    r.reason = e.what();
    return exit_abort;
  } catch (const InfeasibleError& e) {
    r.status = "infeasible";
    r.reason = e.what();
    return exit_infeasible;
  } catch (const StuckError& e) {
    r.status = "budget";
    r.reason = e.what();
    return exit_budget;
  } catch (const BudgetExceeded& e) {
    r.status = "budget";
    r.reason = e.what();
    return exit_budget;
  } catch (const ConfigError& e) {
    r.status = "config_error";
    r.reason = e.what();
    return exit_usage;
  } catch (const InputError& e) {
    r.status = "input_error";
    r.reason = e.what();
    return exit_usage;
  } catch (const std::exception& e) {
    r.status = "internal_error";
    r.reason = e.what();
    return exit_internal;
  }
}

bool wants_snapshot(const RunSpec& spec, const std::string& name, int layer) {
  for (const auto& s : spec.snapshot_at)
    if (s == name || s == "all" || s == name + ":" + std::to_string(layer)) return true;
  return false;
}

bool layered(Clock c) { return c == Clock::layer_before || c == Clock::layer_after; }

void finish_with(RunResult& r, const Embeddings& emb) {
  auto dec = emb.to_decomposition();
  const auto v = verify(dec);
  if (!v.ok) {
    r.status = "unverified";
    r.reason = v.detail;
    r.exit_code = exit_unverified;
    return;
  }
  r.decomposition = std::move(dec);
  r.status = "success";
  r.stage = "verified";
  r.exit_code = exit_ok;
}

void run_pipeline(const RunSpec& spec, const Instance& inst, std::uint64_t seed, RunResult& r) {
  const auto tag = classify_case(inst.tree, inst.cfg);
  r.case_tag = to_string(tag.kind);
  r.stage = "classified";
  auto add = [&](const std::string& name, double value) { r.metrics.push_back({r.stage, 0, name, value}); };

  if (tag.kind == TreeCase::L) {
    if (inst.host.edge_count() != static_cast<std::size_t>(inst.host.n()) * inst.tree.edge_count())
      throw InfeasibleError("host has " + std::to_string(inst.host.edge_count()) + " edges, the copies need " +
                            std::to_string(static_cast<std::size_t>(inst.host.n()) * inst.tree.edge_count()));
    Embeddings emb(inst.host, inst.tree);
    Rng rng = stream(seed, "large_stars");
    r.stage = "large_stars";
    LargeStarsReport rep;
    try {
      rep = large_stars(emb, inst.cfg, rng);
    } catch (...) {
      r.metrics.push_back({"large_stars", 0, "placed", static_cast<double>(emb.placed_count())});
      throw;
    }
    r.progress = rep.progress;
    for (auto [name, v] : {std::pair{"sigma_initial", rep.sigma_initial}, {"xvz_moves", rep.moves},
                           {"j_two_cycles", rep.j_two_cycles}, {"sigma_steps_off", rep.sigma_steps_off},
                           {"disjointness_failures", rep.disjointness_failures}})
      add(name, static_cast<double>(v));
    finish_with(r, emb);
    return;
  }

  const auto tp = tree_partition(inst.tree, tag, inst.cfg);
  r.stage = "tree_partition";
  add("i_star", tp.i_star);
  add("removed_edges", static_cast<double>(tp.p_ex.size()));
  Rng state_rng = stream(seed, "state");
  EmbeddingState st = make_state(inst.host, inst.tree, tp, inst.cfg, state_rng);
  st.on_checkpoint = [&](const EmbeddingState& s) {
    const std::string name = to_string(s.clock);
    r.stage = name;
    if (wants_snapshot(spec, name, s.layer))
      r.snapshots[layered(s.clock) ? name + "_" + std::to_string(s.layer) : name] = snapshot(s);
  };
  auto keep_metrics = [&] {
    r.metrics.insert(r.metrics.end(), st.metrics.begin(), st.metrics.end());
    st.metrics.clear();
  };
  try {
    Rng a = stream(seed, "high_degrees");
    high_degrees(st, a);
    Rng b = stream(seed, "intervals");
    intervals(st, b);
    Rng c = stream(seed, "embed_a0");
    embed_a0(st, c);
    Rng d = stream(seed, "digraph");
    try {
      digraph_allocate(st, d);
    } catch (const ConfigError& err) {
      // The table only becomes infeasible for this tree and host.
      throw AbortError("digraph", err.what());
    }
    Rng e = stream(seed, "approx");
    approx_decomposition(st, e);
    keep_metrics();
    Rng f = stream(seed, "finisher");
    FinishReport rep;
    if (tag.kind == TreeCase::S) {
      r.stage = "small_stars";
      rep = small_stars(st, f);
    } else {
      r.stage = "paths";
      rep = paths_parity_and_reserve(st, f, spec.oracle_budget);
    }
    r.progress = rep.progress;
  } catch (...) {
    keep_metrics();
    const auto bad = audit_state(st);
    r.metrics.push_back({r.stage, st.layer, "audit_violations", static_cast<double>(bad.size())});
    throw;
  }
  const auto bad = audit_state(st);
  r.metrics.push_back({r.stage, st.layer, "audit_violations", static_cast<double>(bad.size())});
  finish_with(r, st.emb);
}

void run_oracle(const Instance& inst, const SearchBudget& budget, RunResult& r) {
  r.stage = "oracle";
  const auto need = static_cast<std::size_t>(inst.host.n()) * inst.tree.edge_count();
  if (inst.host.edge_count() != need)
    throw InfeasibleError("host has " + std::to_string(inst.host.edge_count()) + " edges, the copies need " +
                          std::to_string(need));
  const auto res = brute_decompose(inst.host, inst.tree, budget);
  r.metrics.push_back({"oracle", 0, "search_nodes", static_cast<double>(res.nodes)});
  if (res.status == SearchStatus::budget) throw BudgetExceeded("oracle search ran out of budget");
  if (!res.decomposition) throw InfeasibleError("oracle: no decomposition exists");
  Decomposition dec = *res.decomposition;
  const auto v = verify(dec);
  if (!v.ok) {
    r.status = "unverified";
    r.reason = v.detail;
    r.exit_code = exit_unverified;
    return;
  }
  r.decomposition = std::move(dec);
  r.status = "success";
  r.stage = "verified";
  r.exit_code = exit_ok;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

const char* to_string(Mode m) {
  switch (m) {
    case Mode::pipeline: return "pipeline";
    case Mode::oracle: return "oracle";
    case Mode::hybrid: return "hybrid";
  }
  return "?";
}

Mode mode_from(const std::string& s) {
  if (s == "pipeline") return Mode::pipeline;
  if (s == "oracle") return Mode::oracle;
  if (s == "hybrid") return Mode::hybrid;
  throw InputError("unknown mode '" + s + "' (pipeline, oracle or hybrid)");
}

Instance prepare(const RunSpec& spec) {
  if (!spec.seed) throw InputError("a seed is required");
  const std::uint64_t seed = *spec.seed;
  Instance inst;
  bool have_host = false, have_tree = false;
  double density = -1;
  for (const auto& g : spec.gen) {
    Graph host;
    Tree tree;
    if (make_host(g, seed, host, density)) {
      if (have_host) throw InputError("more than one host source");
      inst.host = std::move(host);
      have_host = true;
    } else if (make_tree(g, seed, tree)) {
      if (have_tree) throw InputError("more than one tree source");
      inst.tree = std::move(tree);
      have_tree = true;
    } else {
      throw InputError("unknown generator '" + g + "'");
    }
  }
  if (!spec.graph_path.empty()) {
    if (have_host) throw InputError("give either --graph or a host generator, not both");
    inst.host = load_graph(spec.graph_path);
    have_host = true;
  }
  if (!spec.tree_path.empty()) {
    if (have_tree) throw InputError("give either --tree or a tree generator, not both");
    inst.tree = load_tree(spec.tree_path);
    have_tree = true;
  }
  if (!have_host) throw InputError("no host graph (use --graph or --gen complete:N / gnp:N:P)");
  if (!have_tree) throw InputError("no tree (use --tree or --gen tree-...)");
  if (density < 0) density = inst.host.density();

  inst.cfg = ParamConfig::desk(inst.host.n(), density);
  for (const auto& layer : spec.cfg_layers) apply_config(inst.cfg, layer);
  for (const auto& o : spec.overrides) apply_assignment(inst.cfg, o);
  if (inst.cfg.n != inst.host.n())
    throw ConfigError("configured n = " + std::to_string(inst.cfg.n) + " but the host has " + std::to_string(inst.host.n()) +
                      " vertices");
  inst.cfg.validate();
  return inst;
}

RunResult run(const RunSpec& spec) {
  RunResult r;
  Instance inst;
  try {
    inst = prepare(spec);
  } catch (...) {
    r.exit_code = code_for(std::current_exception(), r);
    r.stage = "input";
    return r;
  }
  r.cfg = inst.cfg;
  r.n = inst.host.n();
  r.host_edges = inst.host.edge_count();
  r.tree_edges = inst.tree.edge_count();
  const std::uint64_t seed = *spec.seed;

  const bool pipeline_first = spec.mode != Mode::oracle;
  const bool oracle_after = spec.mode == Mode::hybrid || (spec.mode == Mode::pipeline && spec.fallback_exact);
  if (pipeline_first) {
    try {
      run_pipeline(spec, inst, seed, r);
    } catch (...) {
      r.exit_code = code_for(std::current_exception(), r);
    }
    if (r.exit_code == exit_ok || !oracle_after) return r;
    if (inst.host.edge_count() > spec.oracle_budget.edge_cap) {
      r.reason += " (no exact fallback: " + std::to_string(inst.host.edge_count()) + " edges exceed the cap)";
      return r;
    }
    r.fallback_used = true;
  }
  const std::string pipeline_stage = r.stage, pipeline_reason = r.reason;
  try {
    run_oracle(inst, spec.oracle_budget, r);
  } catch (...) {
    r.exit_code = code_for(std::current_exception(), r);
  }
  if (r.fallback_used) {
    r.metrics.push_back({"oracle", 0, "fallback", 1});
    if (!pipeline_reason.empty()) r.reason = r.exit_code == exit_ok ? "pipeline: " + pipeline_reason : r.reason;
    (void)pipeline_stage;
  }
  return r;
}

json RunResult::summary() const {
  json out = {{"status", status},    {"exit_code", exit_code}, {"case", case_tag},
          {"stage", stage},      {"reason", reason},       {"fallback_used", fallback_used},
          {"n", n},              {"host_edges", host_edges}, {"tree_edges", tree_edges},
          {"config", to_json(cfg)}, {"metrics", metrics.size()}, {"snapshots", [&] {
             json names = json::array();
             for (const auto& [k, v] : snapshots) names.push_back(k);
             return names;
           }()}};
  if (stage == "input") out.erase("config");  // nothing was configured
  return out;
}

void write_artifacts(const RunResult& r, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  if (r.decomposition) write_text_file((fs::path(dir) / "decomposition.json").string(), to_json(*r.decomposition).dump() + "\n");
  std::ostringstream m, p;
  write_metrics_csv(m, r.metrics);
  write_text_file((fs::path(dir) / "metrics.csv").string(), m.str());
  write_progress_csv(p, r.progress);
  write_text_file((fs::path(dir) / "progress.csv").string(), p.str());
  write_text_file((fs::path(dir) / "summary.json").string(), r.summary().dump(2) + "\n");
  if (!r.snapshots.empty()) {
    fs::create_directories(fs::path(dir) / "snapshots");
    for (const auto& [stem, snap] : r.snapshots)
      write_text_file((fs::path(dir) / "snapshots" / (stem + ".json")).string(), snap.dump() + "\n");
  }
}

double sampler_deviation(std::uint64_t seed, long samples) {
  BipartiteInstance k33;
  k33.x_size = k33.y_size = 3;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) k33.b.emplace_back(x, y);
  Rng rng = stream(seed, "bench-sampler");
  const auto rep = match_marginal_report(k33, rng, samples, 0.1);
  double worst = 0;
  for (const auto& row : rep.rows) worst = std::max(worst, std::abs(row.freq - 1.0 / 3));
  return worst;
}

BenchReport bench(const RunSpec& spec, const std::vector<std::uint64_t>& seeds, long sampler_samples) {
  BenchReport out;
  for (auto seed : seeds) {
    RunSpec s = spec;
    s.seed = seed;
    BenchRow row;
    row.seed = seed;
    row.result = run(s);
    row.marginal_dev = sampler_deviation(seed, sampler_samples);
    ++out.stage_histogram[row.result.stage];
    out.successes += row.result.exit_code == exit_ok;
    out.rows.push_back(std::move(row));
  }
  return out;
}

void write_bench_csv(std::ostream& os, const BenchReport& r) {
  os << "seed,status,exit_code,case,stage,marginal_dev,reason\n";
  double worst = 0;
  for (const auto& row : r.rows) {
    const auto& res = row.result;
    os << row.seed << ',' << res.status << ',' << res.exit_code << ',' << res.case_tag << ',' << res.stage << ','
       << format_number(row.marginal_dev) << ',' << csv_field(res.reason) << '\n';
    worst = std::max(worst, row.marginal_dev);
  }
  if (!r.rows.empty())
    os << "all,success_rate=" << format_number(static_cast<double>(r.successes) / static_cast<double>(r.rows.size())) << ",,,,"
       << format_number(worst) << ",\n";
}

std::string bench_summary(const BenchReport& r) {
  std::ostringstream os;
  os << "runs: " << r.rows.size() << "\nsuccesses: " << r.successes << '\n';
  if (r.rows.empty()) return os.str();
  os << "furthest stage reached:\n";
  for (const auto& [stage, count] : r.stage_histogram) os << "  " << stage << ": " << count << '\n';
  std::map<std::string, int> status;
  for (const auto& row : r.rows) ++status[row.result.status];
  os << "outcomes:\n";
  for (const auto& [s, count] : status) os << "  " << s << ": " << count << '\n';
  double worst = 0;
  for (const auto& row : r.rows) worst = std::max(worst, row.marginal_dev);
  os << "sampler marginal deviation (max over runs): " << format_number(worst) << '\n';
  return os.str();
}

}  // namespace ringel
