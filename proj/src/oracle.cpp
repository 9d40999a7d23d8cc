#include "ringel/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <unordered_set>

#include "ringel/errors.hpp"

namespace ringel {

namespace {
std::size_t at(int v) { return static_cast<std::size_t>(v); }
}  // namespace

const char* to_string(Violation v) {
  switch (v) {
    case Violation::none: return "none";
    case Violation::count: return "count";
    case Violation::injectivity: return "injectivity";
    case Violation::adjacency: return "adjacency";
    case Violation::reuse: return "reuse";
    case Violation::coverage: return "coverage";
  }
  return "?";
}

VerifyResult verify(const Decomposition& d) {
  VerifyResult r;
  auto fail = [&](Violation k, std::string detail, int copy = -1, std::pair<int, int> e = {-1, -1}) {
    r.ok = false;
    r.kind = k;
    r.detail = std::move(detail);
    r.copy = copy;
    r.edge = e;
    return r;
  };
  const int n = d.host.n();
  if (static_cast<int>(d.copies.size()) != n)
    return fail(Violation::count, "expected " + std::to_string(n) + " copies, got " + std::to_string(d.copies.size()));
  for (int w = 0; w < n; ++w) {
    const auto& phi = d.copies[at(w)];
    if (static_cast<int>(phi.size()) != d.tree.size())
      return fail(Violation::injectivity, "copy " + std::to_string(w) + " maps " + std::to_string(phi.size()) + " vertices", w);
    std::vector<char> hit(at(n), 0);
    for (int x : phi) {
      if (x < 0 || x >= n) return fail(Violation::injectivity, "copy " + std::to_string(w) + " maps outside the host", w);
      if (hit[at(x)]++) return fail(Violation::injectivity, "copy " + std::to_string(w) + " hits vertex " + std::to_string(x) + " twice", w);
    }
  }
  for (int w = 0; w < n; ++w)
    for (auto [u, v] : d.tree.edges()) {
      int x = d.copies[at(w)][at(u)], y = d.copies[at(w)][at(v)];
      if (!d.host.has_edge(x, y))
        return fail(Violation::adjacency, "copy " + std::to_string(w) + " sends tree edge to non-edge " + std::to_string(x) + "-" + std::to_string(y), w, {x, y});
    }
  std::unordered_set<std::uint64_t> used;
  for (int w = 0; w < n; ++w)
    for (auto [u, v] : d.tree.edges()) {
      int x = d.copies[at(w)][at(u)], y = d.copies[at(w)][at(v)];
      if (!used.insert(edge_key(x, y)).second)
        return fail(Violation::reuse, "host edge " + std::to_string(std::min(x, y)) + "-" + std::to_string(std::max(x, y)) + " used twice", w, {std::min(x, y), std::max(x, y)});
    }
  if (used.size() != d.host.edge_count())
    return fail(Violation::coverage, std::to_string(used.size()) + " of " + std::to_string(d.host.edge_count()) + " host edges covered");
  return r;
}

namespace {

using Clock = std::chrono::steady_clock;

struct BruteSearch {
  const Graph& g;
  const Tree& t;
  const SearchBudget& budget;
  Clock::time_point start;
  std::vector<std::vector<char>> used;  // adjacency matrix of covered edges
  std::size_t covered = 0;
  std::vector<std::vector<int>> copies;
  long nodes = 0;
  bool out_of_budget = false;
  // Tree vertices in BFS order from each vertex, with parents.
  std::vector<std::vector<std::pair<int, int>>> order_from;

  bool over() {
    if (out_of_budget) return true;
    if (++nodes > budget.max_nodes || ((nodes & 1023) == 0 && Clock::now() - start > budget.wall)) out_of_budget = true;
    return out_of_budget;
  }

  // Every embedding of t that maps tree edge (a, b) onto (x, y), using only
  // uncovered edges.
  void embeddings(int a, int x, int b, int y, std::vector<std::vector<int>>& out) {
    const auto& ord = order_from[at(a)];
    std::vector<int> phi(at(t.size()), -1);
    std::vector<char> taken(at(g.n()), 0);
    phi[at(a)] = x;
    taken[at(x)] = 1;
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
      if (out_of_budget) return;
      if (k == ord.size()) {
        out.push_back(phi);
        return;
      }
      auto [u, p] = ord[k];
      const int px = phi[at(p)];
      auto place = [&](int z) {
        if (taken[at(z)] || used[at(px)][at(z)]) return;
        phi[at(u)] = z;
        taken[at(z)] = 1;
        rec(k + 1);
        taken[at(z)] = 0;
        phi[at(u)] = -1;
      };
      if (u == b) {
        if (g.has_edge(px, y)) place(y);
      } else {
        for (int z : g.neighbors(px)) place(z);
      }
    };
    rec(1);
  }

  bool solve() {
    if (covered == g.edge_count()) return true;
    if (over()) return false;
    int ex = -1, ey = -1;
    for (int x = 0; x < g.n() && ex < 0; ++x)
      for (int y : g.neighbors(x))
        if (y > x && !used[at(x)][at(y)]) {
          ex = x;
          ey = y;
          break;
        }
    std::vector<std::vector<int>> cands;
    for (auto [a, b] : t.edges()) {
      embeddings(a, ex, b, ey, cands);
      embeddings(b, ex, a, ey, cands);
    }
    // Different maps onto the same edge set are the same copy.
    std::set<std::vector<std::uint64_t>> seen;
    for (const auto& phi : cands) {
      std::vector<std::uint64_t> key;
      for (auto [u, v] : t.edges()) key.push_back(edge_key(phi[at(u)], phi[at(v)]));
      std::sort(key.begin(), key.end());
      if (!seen.insert(key).second) continue;
      for (auto [u, v] : t.edges()) used[at(phi[at(u)])][at(phi[at(v)])] = used[at(phi[at(v)])][at(phi[at(u)])] = 1;
      covered += t.edge_count();
      copies.push_back(phi);
      if (solve()) return true;
      copies.pop_back();
      covered -= t.edge_count();
      for (auto [u, v] : t.edges()) used[at(phi[at(u)])][at(phi[at(v)])] = used[at(phi[at(v)])][at(phi[at(u)])] = 0;
      if (out_of_budget) return false;
    }
    return false;
  }
};

}  // namespace

BruteResult brute_decompose(const Graph& g, const Tree& t, const SearchBudget& budget) {
  const std::size_t n = static_cast<std::size_t>(g.n());
  if (g.edge_count() != n * t.edge_count())
    throw InputError("brute_decompose: host has " + std::to_string(g.edge_count()) + " edges, need n |E(T)| = " +
                     std::to_string(n * t.edge_count()));
  if (g.edge_count() > budget.edge_cap)
    throw BudgetExceeded("brute_decompose refused: " + std::to_string(g.edge_count()) + " edges exceed the cap of " +
                         std::to_string(budget.edge_cap));
  BruteSearch s{g, t, budget, Clock::now(), std::vector<std::vector<char>>(n, std::vector<char>(n, 0)), 0, {}, 0, false, {}};
  s.order_from.resize(at(t.size()));
  for (int r = 0; r < t.size(); ++r) {
    auto par = t.parents(r);
    std::vector<int> q{r};
    for (std::size_t k = 0; k < q.size(); ++k)
      for (int c : t.neighbors(q[k]))
        if (par[at(c)] == q[k]) q.push_back(c);
    for (int v : q) s.order_from[at(r)].emplace_back(v, par[at(v)]);
  }
  BruteResult res;
  bool ok = t.edge_count() == 0 ? n == 0 || g.edge_count() == 0 : s.solve();
  res.nodes = s.nodes;
  if (ok) {
    Decomposition d{g, t, s.copies};
    if (t.edge_count() == 0) d.copies.assign(n, std::vector<int>(at(t.size()), 0));
    std::sort(d.copies.begin(), d.copies.end());
    auto v = verify(d);
    if (!v.ok) throw std::logic_error("brute_decompose produced an invalid decomposition: " + v.detail);
    res.status = SearchStatus::found;
    res.decomposition = std::move(d);
  } else {
    res.status = s.out_of_budget ? SearchStatus::budget : SearchStatus::none;
  }
  return res;
}

BipartiteMatching exact_perfect_matching(const BipartiteInstance& b) { return max_bipartite_matching(b); }

namespace {

struct PathSearch {
  const Graph& g;
  const std::vector<std::vector<PathDemand>>& demands;
  const std::vector<VertexSet>& forbidden;
  const SearchBudget& budget;
  Clock::time_point start;
  std::vector<std::pair<int, int>> slots;  // (w, k)
  std::vector<std::vector<char>> used;
  std::vector<std::vector<char>> occupied;  // per w, vertices on its paths
  std::vector<std::vector<char>> banned;
  PathSystem out;
  long nodes = 0;
  bool out_of_budget = false;

  bool over() {
    if (out_of_budget) return true;
    if (++nodes > budget.max_nodes || ((nodes & 1023) == 0 && Clock::now() - start > budget.wall)) out_of_budget = true;
    return out_of_budget;
  }

  bool extend(std::size_t slot, std::vector<int>& path) {
    if (over()) return false;
    auto [w, k] = slots[slot];
    const auto& dm = demands[at(w)][at(k)];
    const int len = static_cast<int>(path.size()) - 1;
    const int cur = path.back();
    if (len == dm.length) {
      if (cur != dm.to) return false;
      out.paths[at(w)][at(k)] = path;
      return fill(slot + 1);
    }
    for (int z : g.neighbors(cur)) {
      if (used[at(cur)][at(z)]) continue;
      const bool last = len + 1 == dm.length;
      if (last != (z == dm.to)) continue;
      if (!last && (occupied[at(w)][at(z)] || banned[at(w)][at(z)])) continue;
      used[at(cur)][at(z)] = used[at(z)][at(cur)] = 1;
      if (!last) occupied[at(w)][at(z)] = 1;
      path.push_back(z);
      if (extend(slot, path)) return true;
      path.pop_back();
      if (!last) occupied[at(w)][at(z)] = 0;
      used[at(cur)][at(z)] = used[at(z)][at(cur)] = 0;
      if (out_of_budget) return false;
    }
    return false;
  }

  bool fill(std::size_t slot) {
    if (slot == slots.size()) return true;
    auto [w, k] = slots[slot];
    std::vector<int> path{demands[at(w)][at(k)].from};
    return extend(slot, path);
  }
};

}  // namespace

std::optional<PathSystem> path_factor_solve(const Graph& g, const std::vector<std::vector<PathDemand>>& demands,
                                            const std::vector<VertexSet>& forbidden, const SearchBudget& budget,
                                            SearchStatus* status) {
  auto report = [&](SearchStatus s) {
    if (status) *status = s;
  };
  long total = 0;
  for (const auto& dw : demands)
    for (const auto& dm : dw) {
      if (dm.length < 1) throw InputError("path_factor_solve: lengths must be positive");
      if (dm.from < 0 || dm.from >= g.n() || dm.to < 0 || dm.to >= g.n()) throw InputError("path_factor_solve: endpoint out of range");
      total += dm.length;
    }
  if (total != static_cast<long>(g.edge_count()))
    throw InputError("path_factor_solve: demanded lengths sum to " + std::to_string(total) + ", graph has " +
                     std::to_string(g.edge_count()) + " edges");
  if (g.edge_count() > budget.edge_cap)
    throw BudgetExceeded("path_factor_solve refused: " + std::to_string(g.edge_count()) + " edges exceed the cap");

  // Degree parity: a vertex is an end of some demands and interior to others.
  std::vector<long> ends(at(g.n()), 0);
  for (std::size_t w = 0; w < demands.size(); ++w) {
    std::vector<int> endpoint_use(at(g.n()), 0);
    for (const auto& dm : demands[w]) {
      ++ends[at(dm.from)];
      ++ends[at(dm.to)];
      if (dm.from == dm.to || ++endpoint_use[at(dm.from)] > 1 || ++endpoint_use[at(dm.to)] > 1) {
        report(SearchStatus::none);
        return std::nullopt;
      }
    }
  }
  for (int v = 0; v < g.n(); ++v)
    if (g.degree(v) < ends[at(v)] || (g.degree(v) - ends[at(v)]) % 2 != 0) {
      report(SearchStatus::none);
      return std::nullopt;
    }

  const std::size_t n = static_cast<std::size_t>(g.n());
  PathSearch s{g, demands, forbidden, budget, Clock::now(), {}, std::vector<std::vector<char>>(n, std::vector<char>(n, 0)),
               std::vector<std::vector<char>>(demands.size(), std::vector<char>(n, 0)),
               std::vector<std::vector<char>>(demands.size(), std::vector<char>(n, 0)), {}, 0, false};
  s.out.paths.resize(demands.size());
  for (std::size_t w = 0; w < demands.size(); ++w) {
    s.out.paths[w].resize(demands[w].size());
    for (std::size_t k = 0; k < demands[w].size(); ++k) {
      s.slots.emplace_back(static_cast<int>(w), static_cast<int>(k));
      s.occupied[w][at(demands[w][k].from)] = s.occupied[w][at(demands[w][k].to)] = 1;
    }
    if (w < forbidden.size())
      for (int v : forbidden[w]) s.banned[w][at(v)] = 1;
  }
  // Longest demands first prunes earlier.
  std::stable_sort(s.slots.begin(), s.slots.end(), [&](auto a, auto b) {
    return demands[at(a.first)][at(a.second)].length > demands[at(b.first)][at(b.second)].length;
  });
  if (!s.fill(0)) {
    report(s.out_of_budget ? SearchStatus::budget : SearchStatus::none);
    return std::nullopt;
  }
  // Verify before returning.
  std::set<std::uint64_t> seen;
  for (std::size_t w = 0; w < demands.size(); ++w)
    for (std::size_t k = 0; k < demands[w].size(); ++k) {
      const auto& p = s.out.paths[w][k];
      if (static_cast<int>(p.size()) != demands[w][k].length + 1 || p.front() != demands[w][k].from || p.back() != demands[w][k].to)
        throw std::logic_error("path_factor_solve: malformed path");
      for (std::size_t j = 0; j + 1 < p.size(); ++j)
        if (!g.has_edge(p[j], p[j + 1]) || !seen.insert(edge_key(p[j], p[j + 1])).second)
          throw std::logic_error("path_factor_solve: edge misuse");
    }
  if (seen.size() != g.edge_count()) throw std::logic_error("path_factor_solve: edges left over");
  report(SearchStatus::found);
  return s.out;
}

std::string canonical_form(const Tree& t) {
  const int n = t.size();
  if (n == 1) return "()";
  // Centre(s) by repeated leaf stripping.
  std::vector<int> deg(at(n));
  std::vector<int> layer;
  for (int v = 0; v < n; ++v) {
    deg[at(v)] = t.degree(v);
    if (deg[at(v)] <= 1) layer.push_back(v);
  }
  int remaining = n;
  while (remaining > 2) {
    std::vector<int> next;
    remaining -= static_cast<int>(layer.size());
    for (int v : layer)
      for (int u : t.neighbors(v))
        if (--deg[at(u)] == 1) next.push_back(u);
    layer = std::move(next);
  }
  std::function<std::string(int, int)> enc = [&](int v, int p) {
    std::vector<std::string> kids;
    for (int u : t.neighbors(v))
      if (u != p) kids.push_back(enc(u, v));
    std::sort(kids.begin(), kids.end());
    std::string s = "(";
    for (auto& k : kids) s += k;
    return s + ")";
  };
  std::string best;
  for (int c : layer) {
    std::string s = enc(c, -1);
    if (best.empty() || s < best) best = s;
  }
  return best;
}

std::vector<Tree> nonisomorphic_trees(int vertices) {
  if (vertices < 1) return {};
  if (vertices > 10) throw InputError("nonisomorphic_trees: only small sizes are enumerated");
  if (vertices <= 2) return {path_tree(vertices)};
  std::map<std::string, Tree> reps;
  std::vector<int> seq(at(vertices - 2), 0);
  for (;;) {
    std::vector<int> deg(at(vertices), 1);
    for (int x : seq) ++deg[at(x)];
    EdgeList e;
    std::set<int> leaves;
    for (int v = 0; v < vertices; ++v)
      if (deg[at(v)] == 1) leaves.insert(v);
    for (int x : seq) {
      int leaf = *leaves.begin();
      leaves.erase(leaves.begin());
      e.emplace_back(leaf, x);
      if (--deg[at(x)] == 1) leaves.insert(x);
    }
    e.emplace_back(*leaves.begin(), *std::next(leaves.begin()));
    Tree t = Tree::from_edges(vertices, e);
    reps.emplace(canonical_form(t), std::move(t));
    std::size_t k = 0;
    while (k < seq.size() && ++seq[k] == vertices) seq[k++] = 0;
    if (k == seq.size()) break;
  }
  std::vector<Tree> out;
  for (auto& [k, t] : reps) out.push_back(std::move(t));
  return out;
}

}  // namespace ringel
