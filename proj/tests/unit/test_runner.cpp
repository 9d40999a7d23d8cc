#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ringel/errors.hpp"
#include "ringel/matching.hpp"
#include "ringel/runner.hpp"

using namespace ringel;

namespace {

RunSpec spec_of(std::vector<std::string> gen, std::uint64_t seed, Mode mode = Mode::pipeline) {
  RunSpec s;
  s.gen = std::move(gen);
  s.seed = seed;
  s.mode = mode;
  return s;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("oracle mode on K5 with a two-edge path") {
  const auto r = run(spec_of({"complete:5", "tree-path:3"}, 1, Mode::oracle));
  CHECK(r.exit_code == exit_ok);
  REQUIRE(r.decomposition);
  CHECK(verify(*r.decomposition).ok);
  CHECK(r.decomposition->copies.size() == 5);
}

TEST_CASE("input validation") {
  RunSpec none;
  none.gen = {"complete:5", "tree-path:3"};
  CHECK(run(none).exit_code == exit_usage);  // no seed
  CHECK(run(spec_of({"complete:5"}, 1)).exit_code == exit_usage);
  CHECK(run(spec_of({"complete:5", "complete:7", "tree-path:3"}, 1)).exit_code == exit_usage);
  CHECK(run(spec_of({"petersen", "tree-path:3"}, 1)).exit_code == exit_usage);
  auto bad = spec_of({"complete:5", "tree-path:3"}, 1);
  bad.overrides = {"nonsense=1"};
  CHECK(run(bad).exit_code == exit_usage);
  CHECK_THROWS_AS(mode_from("fast"), InputError);

  // K_6 has 15 edges, not a multiple of five copies of a 2-edge tree.
  const auto inf = run(spec_of({"complete:6", "tree-path:3"}, 1, Mode::oracle));
  CHECK(inf.exit_code == exit_infeasible);
}

TEST_CASE("pipeline smoke run on G(200, 1/2) with a 50-edge tree") {
  const auto r = run(spec_of({"gnp:200:0.5", "tree-random:51"}, 3));
  CHECK(r.tree_edges == 50);
  CHECK(r.n == 200);
  // Desk-scale runs usually abort; what matters is that the outcome is
  // classified and stage metrics were recorded past the partition.
  CHECK(r.exit_code != exit_internal);
  CHECK(r.exit_code != exit_usage);
  CHECK_FALSE(r.case_tag.empty());
  bool partition_metrics = false;
  for (const auto& m : r.metrics) partition_metrics |= m.clock == "tree_partition";
  if (r.exit_code != exit_classification) CHECK(partition_metrics);
  if (r.exit_code != exit_ok) CHECK_FALSE(r.reason.empty());
}

TEST_CASE("hybrid mode falls back to the exact search") {
  const auto r = run(spec_of({"complete:7", "tree-star:3"}, 2, Mode::hybrid));
  CHECK(r.exit_code == exit_ok);
  REQUIRE(r.decomposition);
  CHECK(verify(*r.decomposition).ok);
}

TEST_CASE("same spec and seed give byte-identical artifacts") {
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "ringel_runner_test";
  fs::remove_all(base);
  for (const auto& gen : {std::vector<std::string>{"complete:7", "tree-spider:1:3"},
                          std::vector<std::string>{"gnp:120:0.5", "tree-random:20"}}) {
    auto s = spec_of(gen, 9, Mode::hybrid);
    s.snapshot_at = {"all"};
    write_artifacts(run(s), (base / "a").string());
    write_artifacts(run(s), (base / "b").string());
    for (const auto& entry : fs::recursive_directory_iterator(base / "a")) {
      if (!entry.is_regular_file()) continue;
      const auto rel = fs::relative(entry.path(), base / "a");
      CHECK_MESSAGE(slurp(entry.path()) == slurp(base / "b" / rel), rel.string());
    }
    fs::remove_all(base);
  }
}

TEST_CASE("bench aggregates runs") {
  const auto empty = bench(spec_of({"complete:5", "tree-path:3"}, 0), {});
  CHECK(empty.rows.empty());
  CHECK(empty.successes == 0);
  std::ostringstream e;
  write_bench_csv(e, empty);
  CHECK(e.str() == "seed,status,exit_code,case,stage,marginal_dev,reason\n");

  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const auto rep = bench(spec_of({"complete:5", "tree-path:3"}, 0, Mode::oracle), seeds, 500);
  CHECK(rep.rows.size() == 10);
  CHECK(rep.successes == 10);
  std::ostringstream os;
  write_bench_csv(os, rep);
  int lines = 0;
  std::string line, last;
  std::istringstream is(os.str());
  while (std::getline(is, line)) ++lines, last = line;
  CHECK(lines == 12);  // header, ten runs, aggregate
  CHECK(last.rfind("all,", 0) == 0);
  CHECK(bench_summary(rep).find("successes: 10") != std::string::npos);

  // The deviation column is the sampler's own marginal report.
  BipartiteInstance k33;
  k33.x_size = k33.y_size = 3;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) k33.b.emplace_back(x, y);
  for (const auto& row : rep.rows) {
    Rng rng = stream(row.seed, "bench-sampler");
    const auto m = match_marginal_report(k33, rng, 500, 0.1);
    double worst = 0;
    for (const auto& r : m.rows) worst = std::max(worst, std::abs(r.freq - 1.0 / 3));
    CHECK(row.marginal_dev == worst);
    CHECK(row.marginal_dev < 0.1);
  }
}
