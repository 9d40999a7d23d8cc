#include <cmath>
#include <set>

#include "doctest.h"
#include "ringel/errors.hpp"
#include "ringel/graph.hpp"

using namespace ringel;

TEST_CASE("common neighbourhood") {
  auto k4 = complete_graph(4);
  std::vector<int> s{0, 1};
  CHECK(common_neighborhood(k4, s) == VertexSet{2, 3});
  CHECK(common_neighborhood(k4, {}) == VertexSet{0, 1, 2, 3});
  auto c5 = cycle_graph(5);
  std::vector<int> s2{0, 2};
  CHECK(common_neighborhood(c5, s2) == VertexSet{1});
  std::vector<int> bad{7};
  CHECK_THROWS_AS(common_neighborhood(c5, bad), InputError);
}

TEST_CASE("common neighbourhood recursion") {
  Rng rng(3);
  auto g = gnp(30, 0.4, rng);
  for (int trial = 0; trial < 50; ++trial) {
    auto s = random_subset(rng, 30, uniform_index(rng, 3));
    int x = uniform_index(rng, 30);
    auto grown = s;
    grown.push_back(x);
    std::sort(grown.begin(), grown.end());
    grown.erase(std::unique(grown.begin(), grown.end()), grown.end());
    VertexSet lhs = common_neighborhood(g, grown), base = common_neighborhood(g, s), rhs;
    std::set_intersection(base.begin(), base.end(), g.neighbors(x).begin(), g.neighbors(x).end(),
                          std::back_inserter(rhs));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("typicality") {
  CHECK(is_typical(complete_graph(10), 0.3, 2).typical);
  Graph g = complete_graph(10);
  for (int i = 0; i < 10; i += 2) g.remove_edge(i, i + 1);
  auto r = is_typical(g, 0.01, 1);
  CHECK_FALSE(r.typical);
  CHECK(r.witness.size() == 1);
  CHECK(r.witness_count == 8);
  CHECK(is_typical(Graph(10), 0.2, 1).typical);
  CHECK_THROWS_AS(is_typical(Graph(3), 0.1, 4), InputError);
}

namespace {
// Independent double loop over all subsets of size <= s.
bool typical_by_hand(const Graph& g, double xi, int s) {
  const int n = g.n();
  const double d = g.density();
  bool ok = true;
  for (unsigned mask = 1; mask < (1u << n) && ok; ++mask) {
    int k = __builtin_popcount(mask);
    if (k > s) continue;
    int cnt = 0;
    for (int v = 0; v < n; ++v) {
      bool all = true;
      for (int u = 0; u < n && all; ++u)
        if ((mask >> u) & 1u) all = g.has_edge(u, v);
      cnt += all;
    }
    double lo = std::pow((1 - xi) * d, k) * n, hi = std::pow((1 + xi) * d, k) * n;
    ok = cnt >= lo - 1e-9 && cnt <= hi + 1e-9;
  }
  return ok;
}
}  // namespace

TEST_CASE("typicality agrees with a direct subset scan") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = gnp(12, 0.6, rng);
    double xi = 0.2 + 0.05 * (trial % 6);
    CHECK(is_typical(g, xi, 2).typical == typical_by_hand(g, xi, 2));
  }
}

TEST_CASE("cyclic distance") {
  CHECK(cyclic_distance(10, 2, 9) == 3);
  CHECK(cyclic_distance(10, 4, 4) == 0);
  CHECK(cyclic_distance(7, 1, 5) == 3);
  Rng rng(5);
  auto o = CyclicOrder::random(13, rng);
  for (int x = 0; x < 13; ++x)
    for (int y = 0; y < 13; ++y) {
      CHECK(cyclic_distance(o, x, y) <= 6);
      CHECK(cyclic_distance(o, x, y) == cyclic_distance(o, o.succ(x), o.succ(y)));
      CHECK(cyclic_distance(o, x, y) == cyclic_distance(o, y, x));
      for (int z = 0; z < 13; ++z)
        CHECK(cyclic_distance(o, x, z) <= cyclic_distance(o, x, y) + cyclic_distance(o, y, z));
    }
}

TEST_CASE("random orientation") {
  int forward = 0;
  Graph e = Graph::from_edges(2, {{0, 1}});
  for (int seed = 0; seed < 400; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed));
    auto d = random_orientation(e, rng);
    CHECK(d.arc_count() == 1);
    forward += d.has_arc(0, 1);
  }
  CHECK(forward > 150);
  CHECK(forward < 250);
  Rng rng(1);
  CHECK(random_orientation(Graph(5), rng).arc_count() == 0);
  auto d = random_orientation(complete_graph(4), rng);
  CHECK(d.arc_count() == 6);
  CHECK(d.underlying() == complete_graph(4));
}

TEST_CASE("independent subsample") {
  Rng rng(2);
  auto k = complete_graph(30);
  CHECK(independent_subsample(k, 1.0, rng) == k);
  CHECK(independent_subsample(k, 0.0, rng).edge_count() == 0);
  CHECK_THROWS_AS(independent_subsample(k, 1.5, rng), InputError);
  auto k100 = complete_graph(100);
  const double sd = std::sqrt(4950 * 0.25);
  for (int seed = 0; seed < 100; ++seed) {
    Rng r(static_cast<std::uint64_t>(seed));
    auto h = independent_subsample(k100, 0.5, r);
    CHECK(std::abs(static_cast<double>(h.edge_count()) - 2475) < 4 * sd);
    for (auto [u, v] : h.edges()) CHECK(k100.has_edge(u, v));
  }
  Rng a(9), b(9);
  CHECK(independent_subsample(k100, 0.3, a) == independent_subsample(k100, 0.3, b));
}

TEST_CASE("graph bookkeeping") {
  Graph g(4);
  CHECK(g.add_edge(0, 1));
  CHECK_FALSE(g.add_edge(1, 0));
  CHECK_THROWS_AS(g.add_edge(2, 2), InputError);
  CHECK_THROWS_AS(g.add_edge(0, 4), InputError);
  CHECK(g.edge_count() == 1);
  CHECK(g.has_edge(1, 0));
  Digraph d(3);
  CHECK(d.add_arc(0, 1, "x"));
  CHECK(d.add_arc(0, 1, "y"));
  CHECK_FALSE(d.add_arc(0, 1, "x"));
  CHECK_THROWS_AS(d.add_arc(1, 1), InputError);
}
