#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "ringel/embedder.hpp"
#include "ringel/errors.hpp"

using namespace ringel;

TEST_CASE("interval families partition the cycle") {
  CHECK(interval_width(42, 4, 1) == 42);
  CHECK(interval_width(42, 4, 2) == 5);
  CHECK(interval_width(42, 4, 3) == 1);
  CHECK(interval_width(42, 4, 9) == 1);
  for (int n : {7, 50, 97}) {
    for (int width : {1, 3, 10, 200}) {
      std::vector<int> starts(static_cast<std::size_t>(n), 0);
      for (int j = 0; j < std::min(width, n); ++j) {
        auto fam = interval_family(n, width, j);
        CHECK(check_interval_partition(n, fam).empty());
        for (const auto& iv : fam) ++starts[static_cast<std::size_t>(iv.start)];
      }
      CHECK(std::all_of(starts.begin(), starts.end(), [](int c) { return c == 1; }));
    }
  }
  auto fam = interval_family(10, 4, 1);
  REQUIRE(fam.size() == 3);
  CHECK(fam[0] == Interval{1, 4});
  CHECK(fam[2] == Interval{9, 2});  // wraps through 0
  CHECK_FALSE(check_interval_partition(10, {{0, 5}, {4, 6}}).empty());
  CHECK_THROWS_AS(interval_family(10, 4, 4), InputError);
}

TEST_CASE("shift selection") {
  Adjacency none(2);
  auto x = pick_shifts({0, 1}, none, 100, 3);
  CHECK(x.at(0) == 0);
  CHECK(x.at(1) == 10);
  CHECK(pick_shifts({5}, Adjacency(6), 3, 40).at(5) == 0);
  CHECK_THROWS_AS(pick_shifts({0, 1}, none, 9, 3), AbortError);

  // Path 0-1-2: the second forest edge must realise a new distance.
  Adjacency path{{1}, {0, 2}, {1}};
  auto y = pick_shifts({0, 1, 2}, path, 200, 2);
  CHECK(y.at(1) == 7);
  const int d01 = cyclic_distance(200, y.at(0), y.at(1));
  const int d12 = cyclic_distance(200, y.at(1), y.at(2));
  CHECK(d01 != d12);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < a; ++b) CHECK(cyclic_distance(200, y.at(a), y.at(b)) > 6);
}

TEST_CASE("block sizes") {
  for (int n : {100, 500, 1001})
    for (int m : {1, 2, 9, 37}) {
      const double Delta = std::pow(n, 0.25);
      auto [n0, ns] = split_sizes(n, m, Delta);
      CHECK(n0 + m * ns == n);
      CHECK(n0 % m == n % m);
      const double target = n * std::pow(Delta, -0.1);
      for (int k = n % m; k <= n; k += m) {
        CHECK(std::abs(n0 - target) <= std::abs(k - target));
        if (std::abs(n0 - target) == std::abs(k - target)) CHECK(n0 <= k);
      }
    }
  CHECK(split_sizes(10, 0, 2) == std::pair{10, 0});
}

TEST_CASE("instrument on hand-made layer hypergraphs") {
  EmbeddingState st;
  LayerHypergraph empty;
  for (const auto& m : instrument(st, 1, empty)) CHECK(m.value == 0);

  LayerHypergraph lh;
  lh.h = WeightedHypergraph(8, 2);
  for (int k = 1; k <= 7; ++k) lh.h.add_edge({0, k}, 1.0 / 10);
  lh.slot_vertex = {0};
  lh.slots = 1;
  auto ms = instrument(st, 1, lh);
  auto value = [&](const std::string& name) {
    auto it = std::find_if(ms.begin(), ms.end(), [&](const Metric& m) { return m.name == name; });
    REQUIRE(it != ms.end());
    return it->value;
  };
  CHECK(value("omega_slot_max") == doctest::Approx(0.7));
  CHECK(value("omega_incremental_gap") < 1e-12);
  CHECK(value("omega_prime_max") <= 1.0);
}

namespace {

// Settings under which a G(500, 1/2) host and a three-legged spider get
// through the allocation stage.
ParamConfig reach_config() {
  ParamConfig cfg = ParamConfig::desk(500, 0.5);
  cfg.p0 = 0.05;
  cfg.eps = cfg.p_max = 0.004;
  cfg.p_min = 1e-5;
  cfg.derive();
  return cfg;
}

}  // namespace

TEST_CASE("pipeline stages keep every structural invariant") {
  auto cfg = reach_config();
  Rng rng(11);
  auto g = gnp(500, 0.5, rng);
  auto t = spider(3, 34);
  auto tag = classify_case(t, cfg);
  REQUIRE(tag.kind == TreeCase::P);
  auto tp = tree_partition(t, tag, cfg);
  auto st = make_state(g, t, tp, cfg, rng);
  std::vector<std::string> bad;
  int checkpoints = 0;
  st.on_checkpoint = [&](const EmbeddingState& s) {
    ++checkpoints;
    auto b = audit_state(s);
    bad.insert(bad.end(), b.begin(), b.end());
  };
  CHECK_THROWS_AS(intervals(st, rng), PipelineOrderError);
  high_degrees(st, rng);
  intervals(st, rng);
  embed_a0(st, rng);
  digraph_allocate(st, rng);
  CHECK(st.table_arc_sum <= 1);
  CHECK(st.table_pair_sum <= 1);
  try {
    approx_decomposition(st, rng);
  } catch (const AbortError& e) {
    CHECK(e.stage == "approx_decomposition");
  }
  CHECK(checkpoints >= 6);
  CHECK_MESSAGE(bad.empty(), (bad.empty() ? "" : bad.front()));
  CHECK(st.emb.placed_count() > 0);

  // Instrumented weights of every layer stay normalised.
  for (const auto& m : st.metrics) {
    if (m.name == "omega_prime_max") CHECK(m.value <= 1 + 1e-12);
    if (m.name == "omega_incremental_gap") CHECK(m.value < 1e-9);
  }
}

TEST_CASE("probability table is checked before anything is drawn") {
  auto cfg = reach_config();
  cfg.p0 = 0.4;  // leaves p1 = 0.1, far too little for the forest
  Rng rng(3);
  auto g = gnp(500, 0.5, rng);
  auto t = spider(3, 34);
  auto tp = tree_partition(t, classify_case(t, cfg), cfg);
  auto st = make_state(g, t, tp, cfg, rng);
  high_degrees(st, rng);
  intervals(st, rng);
  embed_a0(st, rng);
  CHECK_THROWS_AS(digraph_allocate(st, rng), ConfigError);
  CHECK(st.arcs.find("Gex") < 0);
  CHECK(st.g1.empty());
}
