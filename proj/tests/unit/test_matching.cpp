#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "ringel/errors.hpp"
#include "ringel/matching.hpp"

using namespace ringel;

namespace {

BipartiteInstance complete_bipartite(int n) {
  BipartiteInstance b;
  b.x_size = b.y_size = n;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) b.b.emplace_back(x, y);
  return b;
}

// All perfect matchings by permutation enumeration.
std::vector<std::vector<int>> all_perfect(const BipartiteInstance& inst) {
  std::vector<std::vector<char>> ok(static_cast<std::size_t>(inst.x_size), std::vector<char>(static_cast<std::size_t>(inst.y_size), 0));
  for (auto [x, y] : inst.b) ok[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = 1;
  std::vector<int> perm(static_cast<std::size_t>(inst.y_size));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    bool good = true;
    for (int x = 0; x < inst.x_size && good; ++x) good = ok[static_cast<std::size_t>(x)][static_cast<std::size_t>(perm[static_cast<std::size_t>(x)])];
    if (good) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// Permanent of a 0/1 matrix by subset dynamic programming.
double permanent(const std::vector<std::vector<char>>& a) {
  const int n = static_cast<int>(a.size());
  std::vector<double> f(1u << n, 0);
  f[0] = 1;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (f[mask] == 0) continue;
    int row = __builtin_popcount(mask);
    if (row == n) continue;
    for (int c = 0; c < n; ++c)
      if (!((mask >> c) & 1u) && a[static_cast<std::size_t>(row)][static_cast<std::size_t>(c)]) f[mask | (1u << c)] += f[mask];
  }
  return f[(1u << n) - 1];
}

}  // namespace

TEST_CASE("exact matching and Hall violators") {
  auto k = complete_bipartite(3);
  CHECK(max_bipartite_matching(k).perfect);
  BipartiteInstance star;
  star.x_size = star.y_size = 3;
  for (int y = 0; y < 3; ++y) star.b.emplace_back(0, y);
  auto m = max_bipartite_matching(star);
  CHECK_FALSE(m.perfect);
  CHECK(m.size == 1);
  CHECK(m.hall_violator == VertexSet{1, 2});
  CHECK(m.neighbourhood.empty());
  Rng rng(6);
  BipartiteInstance sparse;
  sparse.x_size = sparse.y_size = 7;
  for (int x = 0; x < 7; ++x)
    for (int y = 0; y < 7; ++y)
      if (coin(rng, 0.25)) sparse.b.emplace_back(x, y);
  auto sm = max_bipartite_matching(sparse);
  if (!sm.perfect) CHECK(sm.neighbourhood.size() < sm.hall_violator.size());
}

TEST_CASE("unique perfect matching is returned unchanged") {
  BipartiteInstance id;
  id.x_size = id.y_size = 4;
  for (int i = 0; i < 4; ++i) id.b.emplace_back(i, i);
  Rng rng(1);
  auto s = match_sample(id, rng, 1000);
  CHECK(s.mate_x == std::vector<int>{0, 1, 2, 3});
  CHECK(s.accepted == 0);
  BipartiteInstance none = id;
  none.b.pop_back();
  CHECK_THROWS_AS(match_sample(none, rng, 10), InfeasibleError);
}

TEST_CASE("K33 marginals") {
  auto k = complete_bipartite(3);
  Rng rng(42);
  auto r = match_marginal_report(k, rng, 100000, 0.1, 20);
  for (const auto& row : r.rows) CHECK(std::abs(row.freq - 1.0 / 3) <= 0.02);
  std::ostringstream os;
  write_marginal_csv(os, r);
  CHECK(os.str().rfind("x,y,freq", 0) == 0);
}

TEST_CASE("K44 minus an edge matches enumeration") {
  auto k = complete_bipartite(4);
  k.b.erase(k.b.begin());
  auto all = all_perfect(k);
  CHECK(all.size() == 18);
  Rng rng(7);
  auto r = match_marginal_report(k, rng, 60000, 0.1, 20);
  for (const auto& row : r.rows) {
    double exact = 0;
    for (const auto& pm : all) exact += pm[static_cast<std::size_t>(row.x)] == row.y;
    exact /= static_cast<double>(all.size());
    CHECK(std::abs(row.freq - exact) < 0.015);
  }
}

TEST_CASE("random 12+12 marginals against permanents") {
  Rng gen(2024);
  BipartiteInstance inst;
  inst.x_size = inst.y_size = 12;
  std::vector<std::vector<char>> a(12, std::vector<char>(12, 0));
  for (int x = 0; x < 12; ++x)
    for (int y = 0; y < 12; ++y)
      if (coin(gen, 0.7)) {
        inst.b.emplace_back(x, y);
        a[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = 1;
      }
  const double total = permanent(a);
  REQUIRE(total > 0);
  Rng rng(5);
  auto r = match_marginal_report(inst, rng, 100000, 0.1, 100);
  double worst = 0;
  for (const auto& row : r.rows) {
    auto minor = a;
    minor.erase(minor.begin() + row.x);
    for (auto& line : minor) line.erase(line.begin() + row.y);
    double exact = permanent(minor) / total;
    worst = std::max(worst, std::abs(exact - row.freq));
  }
  CHECK(worst <= 0.03);
}

TEST_CASE("MZMZ repair is monotone and ends at zero") {
  for (int seed = 0; seed < 20; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed));
    auto k = complete_bipartite(10);
    for (int x = 0; x < 10; ++x)
      for (int y = 0; y < 10; ++y)
        if (x != y && coin(rng, 0.15)) k.z.emplace_back(x, y);
    SwitchingOptions opts;
    opts.check_monotone = true;
    SwitchingChain chain(k, rng, opts);
    long prev = chain.mzmz();
    CHECK(prev == count_mzmz(k, chain.mate_x()));
    chain.repair();
    CHECK(chain.mzmz() == 0);
    for (int s = 0; s < 2000; ++s) {
      chain.step();
      CHECK(chain.mzmz() <= prev);
      prev = chain.mzmz();
    }
    CHECK(count_mzmz(k, chain.mate_x()) == 0);
  }
}

TEST_CASE("blocked sampler") {
  auto k = complete_bipartite(25);
  Rng rng(9);
  auto s = match_sample_blocked(k, rng);
  std::vector<int> ys = s.mate_x;
  std::sort(ys.begin(), ys.end());
  for (int i = 0; i < 25; ++i) CHECK(ys[static_cast<std::size_t>(i)] == i);
}

TEST_CASE("pair condition") {
  CHECK(pair_condition_check(complete_bipartite(10), 0.05, 1.0).pass);
  auto km = complete_bipartite(20);
  km.b.erase(std::remove_if(km.b.begin(), km.b.end(), [](auto e) { return e.first == e.second; }), km.b.end());
  CHECK(pair_condition_check(km, 0.1, 0.95).pass);
  BipartiteInstance two;
  two.x_size = two.y_size = 20;
  for (int x = 0; x < 20; ++x)
    for (int y = 0; y < 20; ++y)
      if ((x < 10) == (y < 10)) two.b.emplace_back(x, y);
  auto pc = pair_condition_check(two, 0.05, 0.5);
  CHECK_FALSE(pc.pass);
  CHECK(pc.heavy_pairs == 180);
  CHECK(pc.pair_limit == doctest::Approx(40));
}

TEST_CASE("rainbow matching") {
  LabeledMultigraph one{1, 1, 1, {{0, 0, 0}}};
  auto r1 = rainbow_matching(one);
  CHECK(r1.edges.size() == 1);
  CHECK(r1.deficit == 0);

  const int m = 9;
  LabeledMultigraph shifts{m, m, m, {}};
  for (int j = 0; j < m; ++j)
    for (int x = 0; x < m; ++x) shifts.edges.push_back({x, (x + j) % m, j});
  auto rs = rainbow_matching(shifts);
  CHECK(rs.deficit == 0);

  // Greedy in input order takes (0,0,a) and (1,1,b), leaving c with nothing.
  LabeledMultigraph adv{3, 3, 3, {{0, 0, 0}, {1, 1, 1}, {2, 1, 0}, {0, 2, 1}, {1, 0, 2}}};
  auto ra = rainbow_matching(adv, 0);
  CHECK(ra.edges.size() == 2);
  auto rb = rainbow_matching(adv);
  CHECK(rb.edges.size() == 3);
  std::vector<int> lx, ly, ll;
  for (int e : rb.edges) {
    lx.push_back(adv.edges[static_cast<std::size_t>(e)].x);
    ly.push_back(adv.edges[static_cast<std::size_t>(e)].y);
    ll.push_back(adv.edges[static_cast<std::size_t>(e)].label);
  }
  for (auto* v : {&lx, &ly, &ll}) {
    std::sort(v->begin(), v->end());
    CHECK(std::adjacent_find(v->begin(), v->end()) == v->end());
  }
  LabeledMultigraph bad{2, 2, 1, {{0, 0, 0}, {0, 1, 0}}};
  CHECK_THROWS_AS(rainbow_matching(bad), InputError);
}
