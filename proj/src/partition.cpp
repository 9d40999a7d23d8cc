#include "ringel/partition.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>
#include <string>
#include <unordered_set>

#include "ringel/errors.hpp"

namespace ringel {

namespace {

std::size_t at(int v) { return static_cast<std::size_t>(v); }

VertexSet sorted_union(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VertexSet sorted_minus(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<char> flags(int n, const VertexSet& s) {
  std::vector<char> f(at(n), 0);
  for (int v : s) f[at(v)] = 1;
  return f;
}

// Breadth-first order of T[X], components in order of their smallest vertex.
// Every non-root vertex has exactly one earlier neighbour inside X.
std::vector<int> bfs_order(const Tree& t, const VertexSet& x) {
  auto in = flags(t.size(), x);
  std::vector<char> seen(at(t.size()), 0);
  std::vector<int> out;
  for (int r : x) {
    if (seen[at(r)]) continue;
    std::deque<int> q{r};
    seen[at(r)] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      out.push_back(v);
      for (int u : t.neighbors(v))
        if (in[at(u)] && !seen[at(u)]) {
          seen[at(u)] = 1;
          q.push_back(u);
        }
    }
  }
  return out;
}

struct Classes {
  std::vector<VertexSet> layers;
  std::vector<LayerClasses> per_layer;
  Adjacency f_prime;
};

Classes compute_classes(const Tree& t, const Adjacency& f_adj, const std::vector<VertexSet>& c_sets, int i_star,
                        const VertexSet& a0, const ParamConfig& cfg) {
  const int nt = t.size();
  auto in_a0 = flags(nt, a0);
  Classes out;
  std::vector<int> layer_id(at(nt), 0);
  for (int i = 1; i <= i_star; ++i) {
    VertexSet layer = sorted_minus(c_sets[at(i_star - i)], a0);  // A_i = C_{i*+1-i} \ A_0
    for (int v : layer) layer_id[at(v)] = i;
    out.layers.push_back(std::move(layer));
  }
  out.per_layer.resize(at(i_star));
  std::set<std::pair<int, int>> cut;  // F edges removed to form F'
  for (int a = 0; a < nt; ++a) {
    if (t.degree(a) < cfg.Delta) continue;
    std::map<int, VertexSet> by_layer;
    for (int u : f_adj[at(a)])
      if (layer_id[at(u)] > 0) by_layer[layer_id[at(u)]].push_back(u);
    for (auto& [i, group] : by_layer) {
      if (static_cast<double>(group.size()) < cfg.Delta) continue;
      std::sort(group.begin(), group.end());
      auto& lc = out.per_layer[at(i - 1)];
      const bool large = static_cast<double>(group.size()) >= cfg.Lambda;
      for (int u : group) {
        cut.emplace(std::min(a, u), std::max(a, u));
        (large ? lc.ge_lambda : lc.lt_lambda).push_back(u);
        lc.hi.push_back(u);
      }
      lc.groups[a] = group;
    }
  }
  out.f_prime = f_adj;
  for (int v = 0; v < nt; ++v) {
    auto& nb = out.f_prime[at(v)];
    nb.erase(std::remove_if(nb.begin(), nb.end(),
                            [&](int u) { return cut.count({std::min(u, v), std::max(u, v)}) > 0; }),
             nb.end());
  }
  for (int i = 1; i <= i_star; ++i) {
    auto& lc = out.per_layer[at(i - 1)];
    std::sort(lc.hi.begin(), lc.hi.end());
    std::sort(lc.lt_lambda.begin(), lc.lt_lambda.end());
    std::sort(lc.ge_lambda.begin(), lc.ge_lambda.end());
    for (int u : out.layers[at(i - 1)]) {
      int prime_hits = 0;
      for (int x : out.f_prime[at(u)]) prime_hits += in_a0[at(x)];
      if (prime_hits == 1) lc.lo.push_back(u);
      bool touches = false;
      for (int x : f_adj[at(u)]) touches = touches || in_a0[at(x)];
      if (!touches) lc.no.push_back(u);
    }
  }
  return out;
}

}  // namespace

VertexSet TreePartition::earlier(int v) const {
  VertexSet out;
  for (int u : f_prime_adj[at(v)])
    if (rank[at(u)] < rank[at(v)]) out.push_back(u);
  std::sort(out.begin(), out.end());
  return out;
}

VertexSet TreePartition::later(int v) const {
  VertexSet out;
  for (int u : f_prime_adj[at(v)])
    if (rank[at(u)] > rank[at(v)]) out.push_back(u);
  std::sort(out.begin(), out.end());
  return out;
}

VertexSet forest_max_independent_set(const Adjacency& forest, const VertexSet& vertices) {
  const int n = static_cast<int>(forest.size());
  auto in = flags(n, vertices);
  std::vector<int> take(at(n), 0), skip(at(n), 0), parent(at(n), -1);
  std::vector<char> seen(at(n), 0);
  VertexSet out;
  for (int r : vertices) {
    if (seen[at(r)]) continue;
    std::vector<int> order;  // preorder
    std::vector<int> stack{r};
    seen[at(r)] = 1;
    parent[at(r)] = -1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      order.push_back(v);
      for (int u : forest[at(v)])
        if (in[at(u)] && !seen[at(u)]) {
          seen[at(u)] = 1;
          parent[at(u)] = v;
          stack.push_back(u);
        }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      int v = *it;
      take[at(v)] = 1;
      skip[at(v)] = 0;
      for (int u : forest[at(v)])
        if (in[at(u)] && parent[at(u)] == v) {
          take[at(v)] += skip[at(u)];
          skip[at(v)] += std::max(take[at(u)], skip[at(u)]);
        }
    }
    // Reconstruct top-down, preferring to take a vertex on ties.
    std::vector<char> picked(at(n), 0);
    for (int v : order) {
      const int p = parent[at(v)];
      if (p >= 0 && picked[at(p)]) continue;
      if (take[at(v)] >= skip[at(v)]) picked[at(v)] = 1;
    }
    for (int v : order)
      if (picked[at(v)]) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

TreePartition tree_partition(const Tree& t, const CaseTag& tag, const ParamConfig& cfg) {
  if (tag.kind == TreeCase::L) throw InputError("tree_partition: Case L trees go straight to the large-star finisher");
  const int nt = t.size();
  const double n = cfg.n > 0 ? cfg.n : nt;
  TreePartition tp;
  tp.kind = tag.kind;

  // Step i: high-degree core and the removable part.
  VertexSet high;
  for (int v = 0; v < nt; ++v)
    if (t.degree(v) >= cfg.Delta) high.push_back(v);
  tp.a_star = k_span(t, high, 4);
  auto in_star = flags(nt, tp.a_star);
  auto in_core_edge = [&](int u, int v) { return in_star[at(u)] && in_star[at(v)]; };

  std::set<std::pair<int, int>> removed;
  auto remove_edge = [&](int u, int v) {
    removed.emplace(std::min(u, v), std::max(u, v));
    tp.p_ex.emplace_back(std::min(u, v), std::max(u, v));
  };

  if (tag.kind == TreeCase::S) {
    const long target = std::lround(cfg.p_minus * n / 2);
    const long cap = std::max(1L, static_cast<long>(std::floor(cfg.Lambda)));
    long total = 0;
    for (const auto& s : leaf_stars(t)) {
      if (total >= target) break;
      LeafStar piece{s.center, {}};
      // Keep at least one edge at the centre so it stays in F.
      long room = static_cast<long>(s.leaves.size());
      if (room == t.degree(s.center)) --room;
      room = std::min({room, cap, target - total});
      for (int leaf : s.leaves) {
        if (static_cast<long>(piece.leaves.size()) >= room) break;
        if (in_core_edge(s.center, leaf)) continue;
        piece.leaves.push_back(leaf);
      }
      if (piece.leaves.empty()) continue;
      for (int leaf : piece.leaves) remove_edge(s.center, leaf);
      total += static_cast<long>(piece.leaves.size());
      tp.ex_stars.push_back(std::move(piece));
    }
    if (static_cast<double>(total) < static_cast<double>(target) - cfg.Lambda)
      throw PartitionFailure("only " + std::to_string(total) + " leaf-star edges available outside the core, need " +
                                 std::to_string(target) + " +- Lambda",
                             target - total);
  } else {
    const long want = std::max(1L, static_cast<long>(std::ceil(cfg.p_plus * n / (101.0 * cfg.K))));
    auto paths = extract_bare_paths(t, 8 * cfg.K, in_star, true);
    if (static_cast<long>(paths.size()) < want)
      throw PartitionFailure("only " + std::to_string(paths.size()) + " bare paths avoid the core, need " +
                                 std::to_string(want),
                             want - static_cast<long>(paths.size()));
    paths.resize(at(static_cast<int>(want)));
    std::vector<char> taken(at(nt), 0);
    for (const auto& path : paths) {
      for (int v : path) taken[at(v)] = 1;
      for (std::size_t j = 0; j + 1 < path.size(); ++j) remove_edge(path[j], path[j + 1]);
    }
    for (int leaf = 0; leaf < nt && tp.ex_leaf_edges.size() < 2; ++leaf) {
      if (!t.is_leaf(leaf) || taken[at(leaf)]) continue;
      const int a = t.neighbors(leaf)[0];
      if (taken[at(a)] || t.degree(a) < 2 || in_core_edge(a, leaf)) continue;
      taken[at(leaf)] = taken[at(a)] = 1;
      tp.ex_leaf_edges.emplace_back(a, leaf);
      remove_edge(a, leaf);
    }
    if (tp.ex_leaf_edges.size() < 2)
      throw PartitionFailure("fewer than two disjoint leaf edges remain outside the bare paths",
                             2 - static_cast<long>(tp.ex_leaf_edges.size()));
    tp.ex_paths = std::move(paths);
  }
  std::sort(tp.p_ex.begin(), tp.p_ex.end());

  tp.f_adj.assign(at(nt), {});
  for (auto [u, v] : t.edges()) {
    if (removed.count({u, v})) continue;
    tp.f_edges.emplace_back(u, v);
    tp.f_adj[at(u)].push_back(v);
    tp.f_adj[at(v)].push_back(u);
  }
  tp.in_f.assign(at(nt), 0);
  for (int v = 0; v < nt; ++v) tp.in_f[at(v)] = !tp.f_adj[at(v)].empty();
  std::vector<char> in_fstar(at(nt), 0);
  for (int v = 0; v < nt; ++v) in_fstar[at(v)] = tp.in_f[at(v)] && !in_star[at(v)];

  // Step ii: peel independent sets of low-degree vertices.
  std::vector<int> c_index(at(nt), 0);
  const double out_cap = 1.0 / cfg.p_max;
  for (int i = 1;; ++i) {
    VertexSet candidates;
    for (int v = 0; v < nt; ++v) {
      if (!in_fstar[at(v)] || c_index[at(v)] != 0) continue;
      int inside = 0, toward_c = 0;
      for (int u : tp.f_adj[at(v)]) {
        if (!in_fstar[at(u)]) continue;
        if (c_index[at(u)] == 0) ++inside;
        else ++toward_c;
      }
      if (inside <= 3 && toward_c <= out_cap) candidates.push_back(v);
    }
    VertexSet ci = forest_max_independent_set(tp.f_adj, candidates);
    if (static_cast<double>(ci.size()) < cfg.eps * n) {
      tp.i_star = i - 1;
      break;
    }
    for (int v : ci) c_index[at(v)] = i;
    tp.c_sets.push_back(std::move(ci));
  }

  // Step iii: the early set A_0 and the classes of each layer.
  VertexSet seed = tp.a_star;
  for (int v = 0; v < nt; ++v)
    if (in_fstar[at(v)] && c_index[at(v)] == 0) seed.push_back(v);
  std::sort(seed.begin(), seed.end());
  seed.erase(std::unique(seed.begin(), seed.end()), seed.end());
  VertexSet a0 = k_span(tp.f_adj, seed, 4);
  Classes cls = compute_classes(t, tp.f_adj, tp.c_sets, tp.i_star, a0, cfg);

  // Step iv: fold undersized classes into A_0 until every class clears its floor.
  auto class_of = [](const LayerClasses& lc, int j) -> const VertexSet& {
    switch (j) {
      case 1: return lc.no;
      case 2: return lc.ge_lambda;
      case 3: return lc.lt_lambda;
      default: return lc.lo;
    }
  };
  for (bool moved = true; moved;) {
    moved = false;
    for (int j = 1; j <= 4; ++j) {
      const double floor_j = std::pow(cfg.delta, 0.1 * j + 0.6) * n;
      for (;;) {
        const VertexSet* small = nullptr;
        for (const auto& lc : cls.per_layer) {
          const auto& c = class_of(lc, j);
          if (!c.empty() && static_cast<double>(c.size()) < floor_j) {
            small = &c;
            break;
          }
        }
        if (!small) break;
        a0 = k_span(tp.f_adj, sorted_union(a0, *small), 4);
        cls = compute_classes(t, tp.f_adj, tp.c_sets, tp.i_star, a0, cfg);
        moved = true;
      }
    }
  }

  VertexSet high_d;
  for (int v = 0; v < nt; ++v)
    if (t.degree(v) >= cfg.D) high_d.push_back(v);
  VertexSet a_ss = sorted_minus(k_span(t, high_d, 4), tp.a_star);
  std::set_intersection(a_ss.begin(), a_ss.end(), a0.begin(), a0.end(), std::back_inserter(tp.a_star_star));

  // Step v.
  bool any_hi = false;
  for (const auto& lc : cls.per_layer) any_hi = any_hi || !lc.hi.empty();
  if (!any_hi) {
    tp.a_star_star = sorted_union(tp.a_star_star, tp.a_star);
    tp.a_star.clear();
  }
  tp.a0 = a0;
  tp.a0_prime = sorted_minus(sorted_minus(a0, tp.a_star), tp.a_star_star);
  tp.layers = std::move(cls.layers);
  tp.classes = std::move(cls.per_layer);
  tp.f_prime_adj = std::move(cls.f_prime);
  for (auto& nb : tp.f_prime_adj) std::sort(nb.begin(), nb.end());
  for (auto& nb : tp.f_adj) std::sort(nb.begin(), nb.end());
  for (int v = 0; v < nt; ++v)
    for (int u : tp.f_prime_adj[at(v)])
      if (v < u) tp.f_prime_edges.emplace_back(v, u);

  // The order.
  for (const VertexSet* part : {&tp.a_star, &tp.a_star_star, &tp.a0_prime}) {
    auto o = bfs_order(t, *part);
    tp.order.insert(tp.order.end(), o.begin(), o.end());
  }
  tp.layer_of.assign(at(nt), -1);
  for (int v : a0) tp.layer_of[at(v)] = 0;
  for (std::size_t i = 0; i < tp.layers.size(); ++i) {
    for (int v : tp.layers[i]) tp.layer_of[at(v)] = static_cast<int>(i) + 1;
    tp.order.insert(tp.order.end(), tp.layers[i].begin(), tp.layers[i].end());
  }
  for (int v = 0; v < nt; ++v)
    if (tp.layer_of[at(v)] < 0) tp.order.push_back(v);
  tp.rank.assign(at(nt), -1);
  for (std::size_t r = 0; r < tp.order.size(); ++r) tp.rank[at(tp.order[r])] = static_cast<int>(r);

  tp.class_of.assign(at(nt), VertexClass::none);
  tp.hi_center.assign(at(nt), -1);
  for (std::size_t i = 0; i < tp.classes.size(); ++i) {
    const auto& lc = tp.classes[i];
    for (int v : lc.no) tp.class_of[at(v)] = VertexClass::no;
    for (int v : lc.lo) tp.class_of[at(v)] = VertexClass::lo;
    for (const auto& [a, group] : lc.groups) {
      const std::pair<int, int> key{a, static_cast<int>(i) + 1};
      for (int v : group) {
        tp.class_of[at(v)] = VertexClass::hi;
        tp.hi_center[at(v)] = a;
      }
      (static_cast<double>(group.size()) >= cfg.Lambda ? tp.q_lambda : tp.q_delta).push_back(key);
      const long mai = static_cast<long>(std::ceil(std::pow(cfg.Delta, -0.2) * static_cast<double>(group.size()) - 1e-12));
      tp.m_ai[key] = mai;
      tp.m_a[a] += mai;
      tp.m += mai;
    }
  }
  return tp;
}

std::vector<std::string> audit_partition(const Tree& t, const TreePartition& tp, const ParamConfig& cfg) {
  std::vector<std::string> bad;
  const int nt = t.size();
  const double n = cfg.n > 0 ? cfg.n : nt;
  auto say = [&](std::string s) { bad.push_back(std::move(s)); };

  if (sorted_union(sorted_union(tp.a_star, tp.a_star_star), tp.a0_prime) != tp.a0) say("A_0 != A* u A** u A'_0");
  if (tp.a_star.size() + tp.a_star_star.size() + tp.a0_prime.size() != tp.a0.size()) say("A*, A**, A'_0 overlap");

  std::vector<int> seen(at(nt), 0);
  for (int v : tp.a0) ++seen[at(v)];
  for (std::size_t i = 0; i < tp.layers.size(); ++i)
    for (int v : tp.layers[i]) ++seen[at(v)];
  for (int v = 0; v < nt; ++v)
    if (seen[at(v)] > 1) say("vertex " + std::to_string(v) + " in more than one of A_0, A_1, ...");

  auto independent_in_fstar = [&](const VertexSet& s, const std::string& name) {
    auto in = flags(nt, s);
    auto core = flags(nt, tp.a_star);
    for (int v : s)
      for (int u : tp.f_adj[at(v)])
        if (in[at(u)] && !core[at(u)] && !core[at(v)]) {
          say(name + " not independent: edge " + std::to_string(v) + "-" + std::to_string(u));
          return;
        }
  };
  for (std::size_t i = 0; i < tp.layers.size(); ++i) independent_in_fstar(tp.layers[i], "A_" + std::to_string(i + 1));
  for (std::size_t i = 0; i < tp.c_sets.size(); ++i) independent_in_fstar(tp.c_sets[i], "C_" + std::to_string(i + 1));
  if (static_cast<double>(tp.i_star) >= 7 * std::log(1 / cfg.eps))
    say("i* = " + std::to_string(tp.i_star) + " not below 7 log(1/eps)");

  auto in_a0 = flags(nt, tp.a0);
  for (int v = 0; v < nt; ++v) {
    VertexSet e = tp.earlier(v);
    if (e.size() > 4) say("vertex " + std::to_string(v) + " has " + std::to_string(e.size()) + " earlier neighbours");
    if (tp.layer_of[at(v)] >= 1) {
      int hits = 0;
      for (int u : e) hits += in_a0[at(u)];
      if (hits > 1) say("layer vertex " + std::to_string(v) + " has " + std::to_string(hits) + " earlier neighbours in A_0");
      if (static_cast<double>(tp.later(v).size()) > 1 / cfg.p_max) say("layer vertex " + std::to_string(v) + " has too many later neighbours");
    }
  }
  for (const VertexSet* part : {&tp.a_star, &tp.a_star_star, &tp.a0_prime}) {
    auto in = flags(nt, *part);
    for (int v : *part) {
      int hits = 0;
      for (int u : tp.earlier(v)) hits += in[at(u)];
      if (hits > 1) say("vertex " + std::to_string(v) + " has two earlier neighbours inside its part of A_0");
    }
  }

  // Order respects A* < A** < A'_0 < A_1 < ... < rest.
  auto group_of = [&](int v) {
    if (std::binary_search(tp.a_star.begin(), tp.a_star.end(), v)) return 0;
    if (std::binary_search(tp.a_star_star.begin(), tp.a_star_star.end(), v)) return 1;
    if (std::binary_search(tp.a0_prime.begin(), tp.a0_prime.end(), v)) return 2;
    if (tp.layer_of[at(v)] >= 1) return 2 + tp.layer_of[at(v)];
    return 1 << 20;
  };
  if (tp.order.size() != at(nt)) say("order is not a permutation");
  for (std::size_t r = 1; r < tp.order.size(); ++r)
    if (group_of(tp.order[r - 1]) > group_of(tp.order[r])) {
      say("order breaks the part sequence at position " + std::to_string(r));
      break;
    }
  for (int v = 0; v < nt; ++v)
    if (tp.layer_of[at(v)] < 0 && tp.in_f[at(v)]) say("vertex " + std::to_string(v) + " of F is in no part");

  // Class floors and disjoint groups.
  for (std::size_t i = 0; i < tp.classes.size(); ++i) {
    const auto& lc = tp.classes[i];
    const VertexSet* cs[4] = {&lc.no, &lc.ge_lambda, &lc.lt_lambda, &lc.lo};
    for (int j = 1; j <= 4; ++j) {
      const auto& c = *cs[j - 1];
      if (!c.empty() && static_cast<double>(c.size()) < std::pow(cfg.delta, 0.1 * j + 0.6) * n)
        say("class " + std::to_string(j) + " of A_" + std::to_string(i + 1) + " below its floor");
    }
  }
  std::vector<int> group_hits(at(nt), 0);
  for (const auto& lc : tp.classes)
    for (const auto& [a, g] : lc.groups)
      for (int v : g) ++group_hits[at(v)];
  for (int v = 0; v < nt; ++v)
    if (group_hits[at(v)] > 1) say("vertex " + std::to_string(v) + " in two star groups");

  // F = T \ P_ex and F' = F minus group edges.
  {
    std::set<std::pair<int, int>> f(tp.f_edges.begin(), tp.f_edges.end()), pex(tp.p_ex.begin(), tp.p_ex.end());
    for (auto e : t.edges())
      if (f.count(e) == pex.count(e)) say("edge " + std::to_string(e.first) + "-" + std::to_string(e.second) + " not split between F and P_ex");
    std::set<std::pair<int, int>> expect = f;
    for (const auto& lc : tp.classes)
      for (const auto& [a, g] : lc.groups)
        for (int v : g) expect.erase({std::min(a, v), std::max(a, v)});
    if (expect != std::set<std::pair<int, int>>(tp.f_prime_edges.begin(), tp.f_prime_edges.end())) say("F' differs from F minus the group edges");
  }

  // No short path outside A_0 joining two vertices of A^hi u A^lo.
  {
    std::vector<char> end(at(nt), 0);
    for (const auto& lc : tp.classes) {
      for (int v : lc.hi) end[at(v)] = 1;
      for (int v : lc.lo) end[at(v)] = 1;
    }
    for (int s = 0; s < nt; ++s) {
      if (!end[at(s)]) continue;
      std::deque<std::tuple<int, int, int>> q{{s, -1, 0}};
      while (!q.empty()) {
        auto [v, par, dist] = q.front();
        q.pop_front();
        if (v != s && end[at(v)]) {
          say("path of length " + std::to_string(dist) + " outside A_0 joins " + std::to_string(s) + " and " + std::to_string(v));
          break;
        }
        if (dist == 3) continue;
        for (int u : t.neighbors(v))
          if (u != par && !in_a0[at(u)]) q.emplace_back(u, v, dist + 1);
      }
    }
  }
  for (int a : tp.a0)
    for (int u : tp.later(a))
      if (tp.class_of[at(u)] == VertexClass::hi) say("A_0 vertex " + std::to_string(a) + " has a later F' neighbour in A^hi");

  // P_ex shape.
  if (tp.kind == TreeCase::S) {
    const double target = cfg.p_minus * n / 2;
    if (std::abs(static_cast<double>(tp.p_ex.size()) - target) > cfg.Lambda + 0.5) say("|P_ex| outside p_- n/2 +- Lambda");
    for (const auto& s : tp.ex_stars) {
      if (static_cast<double>(s.size()) > cfg.Lambda) say("removed star larger than Lambda");
      for (int l : s.leaves)
        if (!t.is_leaf(l) || !t.has_edge(s.center, l)) say("removed star edge is not a leaf edge");
    }
  } else {
    auto core = flags(nt, tp.a_star);
    std::vector<int> use(at(nt), 0);
    for (const auto& p : tp.ex_paths) {
      if (static_cast<int>(p.size()) != 8 * cfg.K + 1) say("removed path has the wrong length");
      for (std::size_t j = 0; j < p.size(); ++j) {
        ++use[at(p[j])];
        if (j > 0 && j + 1 < p.size() && t.degree(p[j]) != 2) say("removed path is not bare");
        if (j > 0 && core[at(p[j])] && core[at(p[j - 1])]) say("removed path uses an edge of T[A*]");
      }
    }
    for (auto [a, l] : tp.ex_leaf_edges) {
      ++use[at(a)];
      ++use[at(l)];
      if (!t.is_leaf(l)) say("removed leaf edge has no leaf");
    }
    for (int v = 0; v < nt; ++v)
      if (use[at(v)] > 1) say("removed paths and leaf edges share vertex " + std::to_string(v));
  }
  return bad;
}

std::vector<long> apportion(const std::vector<long>& weights, long total) {
  std::vector<long> out(weights.size(), 0);
  const long sum = std::accumulate(weights.begin(), weights.end(), 0L);
  if (sum <= 0 || weights.empty()) return out;
  long given = 0;
  std::vector<std::pair<long, std::size_t>> rema;  // remainder numerators
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const __int128 num = static_cast<__int128>(weights[k]) * total;
    out[k] = static_cast<long>(num / sum);
    given += out[k];
    rema.emplace_back(static_cast<long>(num % sum), k);
  }
  std::stable_sort(rema.begin(), rema.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  for (long r = 0; r < total - given; ++r) ++out[rema[static_cast<std::size_t>(r)].second];
  return out;
}

LabelScheme label_scheme(const TreePartition& tp, const ParamConfig& /*cfg*/) {
  LabelScheme ls;
  ls.m = tp.m;
  if (tp.m == 0) return ls;
  ls.empty = false;
  for (const bool large : {false, true}) {
    const auto& q = large ? tp.q_lambda : tp.q_delta;
    std::vector<long> w;
    for (const auto& key : q) w.push_back(tp.m_ai.at(key));
    const long mc = std::accumulate(w.begin(), w.end(), 0L);
    (large ? ls.m_large : ls.m_small) = mc;
    (large ? ls.p_large : ls.p_small) = static_cast<double>(mc) / static_cast<double>(tp.m);
    if (mc == 0) continue;
    auto copies = apportion(w, tp.m);
    for (std::size_t k = 0; k < q.size(); ++k) {
      ls.copies[q[k]] = copies[k];
      for (long j = 1; j <= copies[k]; ++j)
        ls.labels.push_back({q[k].first, q[k].second, static_cast<int>(j), large});
    }
  }
  return ls;
}

}  // namespace ringel
