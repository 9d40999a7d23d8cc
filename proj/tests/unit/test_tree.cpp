#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "ringel/errors.hpp"
#include "ringel/partition.hpp"
#include "ringel/tree.hpp"

using namespace ringel;

TEST_CASE("tree validation") {
  CHECK_THROWS_AS(Tree::from_edges(3, {{0, 1}}), InputError);
  CHECK_THROWS_AS(Tree::from_edges(4, {{0, 1}, {1, 2}, {2, 0}}), InputError);
  CHECK_THROWS_AS(Tree::from_parents({-1, 0, -1}), InputError);
  auto t = Tree::from_parents({-1, 0, 0, 1});
  CHECK(t.edge_count() == 3);
  CHECK(t.parents(0) == std::vector<int>{-1, 0, 0, 1});
}

TEST_CASE("k-span examples") {
  auto p = path_tree(5);
  std::vector<int> s{0, 4};
  CHECK(k_span(p, s, 3) == VertexSet{0, 1, 2, 3, 4});
  CHECK(k_span(p, s, 2) == VertexSet{0, 4});
  CHECK(k_span(p, std::vector<int>{}, 3).empty());
  CHECK_THROWS_AS(k_span(p, s, 0), InputError);
}

namespace {
int components(const Tree& t, const VertexSet& s) {
  std::vector<char> in(static_cast<std::size_t>(t.size()), 0);
  for (int v : s) in[static_cast<std::size_t>(v)] = 1;
  int edges = 0;
  for (auto [u, v] : t.edges()) edges += in[static_cast<std::size_t>(u)] && in[static_cast<std::size_t>(v)];
  return static_cast<int>(s.size()) - edges;
}

// Fixed point of the naive rule: try every connected set of at most k
// outside vertices, restarting after each merge. Only for small trees.
VertexSet naive_span(const Tree& t, VertexSet s, int k) {
  const int n = t.size();
  for (bool changed = true; changed;) {
    changed = false;
    for (unsigned mask = 1; mask < (1u << n) && !changed; ++mask) {
      if (__builtin_popcount(mask) > k) continue;
      VertexSet add;
      for (int v = 0; v < n; ++v)
        if ((mask >> v) & 1u) add.push_back(v);
      bool fresh = std::none_of(add.begin(), add.end(), [&](int v) { return std::binary_search(s.begin(), s.end(), v); });
      if (!fresh) continue;
      VertexSet u;
      std::set_union(s.begin(), s.end(), add.begin(), add.end(), std::back_inserter(u));
      if (components(t, u) < components(t, s)) {
        s = u;
        changed = true;
      }
    }
  }
  return s;
}
}  // namespace

TEST_CASE("k-span matches the naive closure on small trees") {
  Rng rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    auto t = random_tree(12, rng);
    auto s = random_subset(rng, 12, 1 + uniform_index(rng, 4));
    int k = 1 + uniform_index(rng, 3);
    CHECK(k_span(t, s, k) == naive_span(t, s, k));
  }
}

TEST_CASE("k-span size, monotonicity and idempotence") {
  Rng rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    auto t = random_tree(300, rng);
    auto s = random_subset(rng, 300, 10);
    auto bigger = s;
    for (int v : random_subset(rng, 300, 5)) bigger.push_back(v);
    std::sort(bigger.begin(), bigger.end());
    bigger.erase(std::unique(bigger.begin(), bigger.end()), bigger.end());
    for (int k = 1; k <= 6; ++k) {
      auto sp = k_span(t, s, k);
      CHECK(sp.size() <= static_cast<std::size_t>(k + 1) * s.size());
      CHECK(k_span(t, sp, k) == sp);
      auto big = k_span(t, bigger, k);
      CHECK(std::includes(big.begin(), big.end(), sp.begin(), sp.end()));
    }
  }
}

TEST_CASE("leaf stars and bare paths") {
  auto st = star_tree(5);
  auto ls = leaf_stars(st);
  REQUIRE(ls.size() == 1);
  CHECK(ls[0].center == 0);
  CHECK(ls[0].size() == 5);
  auto p = path_tree(1000);
  auto paths = extract_bare_paths(p, 32, {});
  CHECK(paths.size() == 30);
  for (const auto& q : paths) CHECK(q.size() == 33);
}

TEST_CASE("case classification") {
  ParamConfig cfg = ParamConfig::desk(100, 0.5);
  cfg.Lambda = 50;
  cfg.p_plus = 0.1;
  CHECK(classify_case(star_tree(99), cfg).kind == TreeCase::L);

  cfg.p_minus = 0.3;
  auto cat = caterpillar(50, 1);
  auto tag = classify_case(cat, cfg);
  CHECK(tag.kind == TreeCase::S);
  CHECK(tag.in_small >= 50);

  ParamConfig pc = ParamConfig::desk(1000, 0.5);
  pc.K = 4;
  pc.p_plus = 0.2;
  pc.Lambda = 50;
  auto ptag = classify_case(path_tree(1000), pc);
  CHECK(ptag.kind == TreeCase::P);
  CHECK(static_cast<double>(ptag.paths.size()) >= 0.2 * 1000 / 400);

  ParamConfig fc = ParamConfig::desk(100, 0.5);
  fc.p_plus = 0.01;
  fc.p_minus = 0.99;
  fc.K = 50;
  CHECK_THROWS_AS(classify_case(spider(33, 3), fc), ClassificationFailure);
}

TEST_CASE("forest maximum independent set") {
  auto p = path_tree(5);
  CHECK(forest_max_independent_set(p.adjacency(), {0, 1, 2, 3, 4}).size() == 3);
  CHECK(forest_max_independent_set(star_tree(6).adjacency(), {0, 1, 2, 3, 4, 5, 6}).size() == 6);
  Rng rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    auto t = random_tree(14, rng);
    VertexSet all(14);
    for (int i = 0; i < 14; ++i) all[static_cast<std::size_t>(i)] = i;
    auto mis = forest_max_independent_set(t.adjacency(), all);
    for (auto [u, v] : t.edges())
      CHECK_FALSE((std::binary_search(mis.begin(), mis.end(), u) && std::binary_search(mis.begin(), mis.end(), v)));
    std::size_t best = 0;
    for (unsigned mask = 0; mask < (1u << 14); ++mask) {
      bool ok = true;
      for (auto [u, v] : t.edges()) ok = ok && !(((mask >> u) & 1u) && ((mask >> v) & 1u));
      if (ok) best = std::max<std::size_t>(best, static_cast<std::size_t>(__builtin_popcount(mask)));
    }
    CHECK(mis.size() == best);
  }
}

TEST_CASE("apportionment") {
  CHECK(apportion({7}, 7) == std::vector<long>{7});
  CHECK(apportion({3, 1}, 4) == std::vector<long>{3, 1});
  auto a = apportion({3, 1}, 7);
  CHECK(a[0] + a[1] == 7);
  CHECK(a == std::vector<long>{5, 2});
  CHECK(apportion({1, 1, 1}, 2) == std::vector<long>{1, 1, 0});
}

namespace {
// Caterpillar with enough small leaf stars for Case S at n = 500.
Tree case_s_tree(int n, Rng& rng) {
  EdgeList e;
  int spine = n / 3;
  for (int i = 0; i + 1 < spine; ++i) e.emplace_back(i, i + 1);
  int next = spine;
  while (next < n) e.emplace_back(uniform_index(rng, spine), next++);
  return Tree::from_edges(n, e);
}
}  // namespace

TEST_CASE("tree partition on Case S and P trees") {
  for (int seed = 0; seed < 10; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed));
    ParamConfig cfg = ParamConfig::desk(500, 0.5);
    auto t = case_s_tree(499, rng);
    auto tag = classify_case(t, cfg);
    REQUIRE(tag.kind == TreeCase::S);
    auto tp = tree_partition(t, tag, cfg);
    auto bad = audit_partition(t, tp, cfg);
    CHECK_MESSAGE(bad.empty(), (bad.empty() ? "" : bad.front()));
    auto again = tree_partition(t, tag, cfg);
    CHECK(again.a0 == tp.a0);
    auto ls = label_scheme(tp, cfg);
    if (!ls.empty) {
      long small = 0, large = 0;
      for (auto& [k, c] : ls.copies) (std::find(tp.q_lambda.begin(), tp.q_lambda.end(), k) != tp.q_lambda.end() ? large : small) += c;
      if (ls.m_small > 0) CHECK(small == ls.m);
      if (ls.m_large > 0) CHECK(large == ls.m);
    }
  }
  ParamConfig cfg = ParamConfig::desk(500, 0.5);
  auto t = spider(12, 41);
  auto tag = classify_case(t, cfg);
  REQUIRE(tag.kind == TreeCase::P);
  auto tp = tree_partition(t, tag, cfg);
  auto bad = audit_partition(t, tp, cfg);
  CHECK_MESSAGE(bad.empty(), (bad.empty() ? "" : bad.front()));
  CHECK(tp.ex_leaf_edges.size() == 2);
}

TEST_CASE("label scheme") {
  TreePartition tp;
  tp.q_delta = {{0, 1}};
  tp.m_ai[{0, 1}] = 7;
  tp.m = 7;
  auto ls = label_scheme(tp, ParamConfig::desk(100, 0.5));
  CHECK(ls.labels.size() == 7);
  CHECK(ls.p_small == 1.0);
  tp.q_delta = {{0, 1}, {3, 2}};
  tp.m_ai[{3, 2}] = 1;
  tp.m_ai[{0, 1}] = 3;
  tp.m = 4;
  ls = label_scheme(tp, ParamConfig::desk(100, 0.5));
  CHECK(ls.labels.size() == 4);
  CHECK(ls.m_large == 0);
  TreePartition empty;
  CHECK(label_scheme(empty, ParamConfig::desk(100, 0.5)).empty);
}
