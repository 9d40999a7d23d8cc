#include <numeric>
#include <set>
#include <sstream>

#include "doctest.h"
#include "ringel/errors.hpp"
#include "ringel/exact_step.hpp"

using namespace ringel;

namespace {

std::vector<int> out_degrees(const Digraph& d) {
  std::vector<int> out(static_cast<std::size_t>(d.n()));
  for (int v = 0; v < d.n(); ++v) out[static_cast<std::size_t>(v)] = d.out_degree(v);
  return out;
}

bool always(int, int) { return true; }

// Rotations of a gracefully labelled path: copy w sends vertex i to
// label(i) + w mod 2k+1, which decomposes K_{2k+1}.
Decomposition rotational_paths(int k) {
  const int n = 2 * k + 1;
  std::vector<int> label(static_cast<std::size_t>(k + 1));
  for (int i = 0, lo = 0, hi = k; i <= k; ++i) label[static_cast<std::size_t>(i)] = i % 2 == 0 ? lo++ : hi--;
  Decomposition dec{complete_graph(n), path_tree(k + 1), {}};
  for (int w = 0; w < n; ++w) {
    std::vector<int> copy;
    for (int l : label) copy.push_back((l + w) % n);
    dec.copies.push_back(copy);
  }
  return dec;
}

}  // namespace

TEST_CASE("orientation with prescribed out-degrees") {
  Rng rng(1);
  Graph c4 = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  auto d = degree_target_orient(c4, {1, 1, 1, 1}, rng);
  CHECK(out_degrees(d) == std::vector<int>{1, 1, 1, 1});
  CHECK(d.arc_count() == 4);

  OrientationTrace tr;
  degree_target_orient(Graph(3), {0, 0, 0}, rng, &tr);
  CHECK(tr.imbalance == std::vector<long>{0});

  CHECK_THROWS_AS(degree_target_orient(c4, {1, 1, 1, 0}, rng), InputError);
  CHECK_THROWS_AS(degree_target_orient(c4, {2, 2, 0, 0}, rng), StuckError);  // 0 and 1 cannot both send two arcs out

  // A single edge has no two-step path; the fallback flips it directly.
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    Rng r(seed);
    OrientationTrace t;
    auto e = degree_target_orient(Graph::from_edges(2, {{0, 1}}), {1, 0}, r, &t);
    CHECK(e.has_arc(0, 1));
    CHECK(t.path_reversals == t.imbalance.size() - 1);
  }

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng r(seed);
    Graph g = gnp(50, 0.5, r);
    auto targets = out_degrees(random_orientation(g, r));
    OrientationTrace t;
    auto o = degree_target_orient(g, targets, r, &t);
    CHECK(out_degrees(o) == targets);
    CHECK(o.underlying() == g);
    const long moves = static_cast<long>(t.imbalance.size()) - 1;
    CHECK(moves < 10 * static_cast<long>(g.edge_count()));
    for (std::size_t k = 1; k < t.imbalance.size(); ++k) CHECK(t.imbalance[k - 1] - t.imbalance[k] == 2);
    if (t.imbalance.front() == 0) CHECK(moves == 0);
  }
}

TEST_CASE("small stars completes oracle-built states") {
  SUBCASE("no stars is a no-op") {
    auto dec = *brute_decompose(complete_graph(5), path_tree(3)).decomposition;
    auto emb = strip_leaves(dec, {});
    Rng rng(2);
    auto rep = small_stars(emb, {}, always, rng, ParamConfig::desk(5, 1));
    CHECK(rep.moves == 0);
    CHECK(emb.complete());
  }
  SUBCASE("forced assignment") {
    // Rotations of the 2-edge path 0-1-2 on K_5 with the leaves of copy 0
    // missing: the two free edges must both leave the centre image.
    Embeddings emb(complete_graph(5), path_tree(3));
    for (int w = 0; w < 5; ++w) {
      emb.place(w, 1, (w + 2) % 5);
      if (w == 0) continue;
      emb.place(w, 0, w);
      emb.place(w, 2, (w + 1) % 5);
    }
    Rng rng(3);
    auto rep = small_stars(emb, {LeafStar{1, {0, 2}}}, [](int w, int) { return w == 0; }, rng, ParamConfig::desk(5, 1));
    REQUIRE(emb.complete());
    CHECK(std::set<int>{emb.image(0, 0), emb.image(0, 2)} == std::set<int>{0, 1});
    CHECK(rep.violations == 0);
    CHECK(verify(emb.to_decomposition()).ok);
  }
  SUBCASE("K7 and K9") {
    int solved = 0, runs = 0;
    for (auto [n, t] : {std::pair{7, star_tree(3)}, std::pair{9, spider(2, 2)}, std::pair{7, caterpillar(2, 1)}}) {
      auto dec = *brute_decompose(complete_graph(n), t).decomposition;
      std::vector<LeafStar> stars;
      VertexSet leaves;
      for (const auto& s : leaf_stars(t))
        if (s.leaves.size() >= 2 || stars.empty()) {
          stars.push_back(s);
          leaves.insert(leaves.end(), s.leaves.begin(), s.leaves.end());
        }
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto emb = strip_leaves(dec, leaves);
        Rng rng(seed);
        ++runs;
        try {
          OrientationTrace tr;
          auto rep = small_stars(emb, stars, always, rng, ParamConfig::desk(n, 1), &tr);
          CHECK(rep.violations == 0);
          for (std::size_t k = 1; k < tr.imbalance.size(); ++k) CHECK(tr.imbalance[k - 1] - tr.imbalance[k] == 2);
          REQUIRE(emb.complete());
          CHECK(verify(emb.to_decomposition()).ok);
          ++solved;
        } catch (const AbortError& e) {
          CHECK(e.stage == "small_stars");
        }
      }
    }
    MESSAGE("small stars solved " << solved << " of " << runs);
    CHECK(solved * 2 >= runs);
  }
  SUBCASE("too many leaves at a vertex") {
    Embeddings emb(complete_graph(3), star_tree(2));
    emb.place(0, 0, 0);
    emb.place(1, 0, 0);
    emb.place(2, 0, 1);
    Rng rng(4);
    CHECK_THROWS_AS(small_stars(emb, {LeafStar{0, {1, 2}}}, always, rng, ParamConfig::desk(3, 1)), InfeasibleError);
  }
}

TEST_CASE("paths finisher on exact rotational states") {
  // Path v0..v4 on K_9: leaves v0 and v4, one bare path v1 v2 v3. Every
  // edge is free at the start, so this only succeeds when the random
  // choices happen to fit exactly.
  const int k = 4;
  auto dec = rotational_paths(k);
  REQUIRE(verify(dec).ok);
  PathsInput in;
  in.leaf1 = {1, 0};
  in.leaf2 = {3, 4};
  in.bare_paths = {{1, 2, 3}};
  in.order = CyclicOrder(dec.host.n());
  auto fresh = [&] { return strip_leaves(dec, {0, 4, 2}); };
  CHECK(odd_vertices(fresh(), in).empty());
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto emb = fresh();
    Rng rng(seed);
    try {
      paths_parity_and_reserve(emb, in, always, rng, ParamConfig::desk(dec.host.n(), 1));
      REQUIRE(emb.complete());
      CHECK(verify(emb.to_decomposition()).ok);
    } catch (const AbortError& e) {
      CHECK(e.stage == "paths");
      CHECK(std::string(e.what()).find("inconsistency") == std::string::npos);
    }
  }
}

TEST_CASE("paths parity on a host with spare edges") {
  // K_13 with copies of the 4-edge path whose bare path ends sit on two
  // shifted permutations; the odd set is empty and after the greedy stage
  // every leftover degree is even, so the run reaches the path-system step.
  const int n = 13;
  PathsInput in;
  in.leaf1 = {1, 0};
  in.leaf2 = {3, 4};
  in.bare_paths = {{1, 2, 3}};
  in.order = CyclicOrder(n);
  int reached = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Embeddings emb(complete_graph(n), path_tree(5));
    for (int w = 0; w < n; ++w) {
      emb.place(w, 1, w);
      emb.place(w, 3, (w + 5) % n);
    }
    CHECK(odd_vertices(emb, in).empty());
    Rng rng(seed);
    try {
      paths_parity_and_reserve(emb, in, always, rng, ParamConfig::desk(n, 1));
      FAIL("spare edges cannot be covered");
    } catch (const AbortError& e) {
      const std::string what = e.what();
      CHECK(what.find("inconsistency") == std::string::npos);
      if (what.find("path systems") != std::string::npos) {
        ++reached;
        const Graph left = free_graph(emb);
        CHECK(left.edge_count() == 26);
        for (int x = 0; x < n; ++x) CHECK(left.degree(x) % 2 == 0);
      }
    }
  }
  CHECK(reached > 10);
}

TEST_CASE("paths reservation accounting") {
  const int k = 14;
  auto dec = rotational_paths(k);
  const int n = dec.host.n();
  PathsInput in;
  in.leaf1 = {1, 0};
  in.leaf2 = {k - 1, k};
  std::vector<int> bare;
  for (int v = 1; v <= k - 1; ++v) bare.push_back(v);
  in.bare_paths = {bare};  // 12 edges
  in.order = CyclicOrder(n);
  in.reserve.resize(static_cast<std::size_t>(n));
  in.reserve[0] = {Interval{3, 2}};  // [3, 4]: an 8-path from 3 to 5
  in.reserve[1] = {Interval{n - 1, 1}};  // a single label reserves nothing
  CHECK(reserved_length(in, 0) == 10);
  CHECK(reserved_length(in, 1) == 0);
  CHECK(reserved_length(in, 2) == 0);
  for (int w = 0; w < n; ++w) CHECK(reserved_length(in, w) <= static_cast<long>(bare.size()) - 1);

  VertexSet stripped{0, k};
  for (int v = 2; v <= k - 2; ++v) stripped.push_back(v);
  Rng rng(5);
  for (int attempt = 0; attempt < 5; ++attempt) {
    auto emb = strip_leaves(dec, stripped);
    try {
      paths_parity_and_reserve(emb, in, always, rng, ParamConfig::desk(n, 1));
      CHECK(verify(emb.to_decomposition()).ok);
    } catch (const AbortError& e) {
      CHECK(e.stage == "paths");
      CHECK(std::string(e.what()).find("deficit") == std::string::npos);
    }
  }

  in.reserve[0] = {Interval{3, 3}};  // 16 + 2 edges, more than the bare path has
  auto emb = strip_leaves(dec, stripped);
  try {
    paths_parity_and_reserve(emb, in, always, rng, ParamConfig::desk(n, 1));
    FAIL("reservation should not fit");
  } catch (const AbortError& e) {
    CHECK(std::string(e.what()).find("reservation deficit") != std::string::npos);
  }
}

TEST_CASE("large stars keeps its bookkeeping identities") {
  // A centre with eight leaves and a two-edge tail, on K_21.
  EdgeList e;
  for (int i = 1; i <= 8; ++i) e.emplace_back(0, i);
  e.emplace_back(0, 9);
  e.emplace_back(9, 10);
  Tree t = Tree::from_edges(11, e);
  int solved = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ParamConfig cfg = ParamConfig::desk(21, 1);
    cfg.Lambda = 3;
    Embeddings emb(complete_graph(21), t);
    Rng rng(seed);
    try {
      auto rep = large_stars(emb, cfg, rng);
      CHECK(rep.j_checks > 0);
      CHECK(rep.j_two_cycles == 0);
      CHECK(rep.sigma_steps_off == 0);
      CHECK(rep.disjointness_failures == 0);
      CHECK(rep.moves * 2 == rep.sigma_initial);
      REQUIRE(emb.complete());
      CHECK(verify(emb.to_decomposition()).ok);
      ++solved;
    } catch (const AbortError& ex) {
      CHECK(ex.stage == "large_stars");
    }
  }
  CHECK(solved >= 15);

  ParamConfig cfg = ParamConfig::desk(21, 1);
  cfg.Lambda = 100;
  Embeddings emb(complete_graph(21), t);
  Rng rng(0);
  CHECK_THROWS_AS(large_stars(emb, cfg, rng), AbortError);
  Embeddings wrong(complete_graph(20), t);
  cfg.Lambda = 3;
  CHECK_THROWS_AS(large_stars(wrong, cfg, rng), InputError);
}

TEST_CASE("progress log format") {
  std::ostringstream os;
  write_progress_csv(os, {{"orient", 4, 0}, {"orient", 2, 1}});
  CHECK(os.str() == "step,value,moves\norient,4,0\norient,2,1\n");
}
