#include "ringel/tree.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <queue>
#include <set>
#include <string>

#include "ringel/errors.hpp"

namespace ringel {

Tree Tree::from_edges(int n, const EdgeList& edges) {
  if (n < 1) throw InputError("tree needs at least one vertex");
  if (static_cast<int>(edges.size()) != n - 1)
    throw InputError("tree on " + std::to_string(n) + " vertices needs " + std::to_string(n - 1) + " edges, got " +
                     std::to_string(edges.size()));
  Tree t;
  t.adj_.resize(static_cast<std::size_t>(n));
  std::vector<int> dsu(static_cast<std::size_t>(n));
  std::iota(dsu.begin(), dsu.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (dsu[static_cast<std::size_t>(x)] != x) x = dsu[static_cast<std::size_t>(x)] = dsu[static_cast<std::size_t>(dsu[static_cast<std::size_t>(x)])];
    return x;
  };
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw InputError("tree edge endpoint out of range");
    if (u == v) throw InputError("tree edge is a loop");
    int a = find(u), b = find(v);
    if (a == b) throw InputError("tree edges contain a cycle through " + std::to_string(u) + "-" + std::to_string(v));
    dsu[static_cast<std::size_t>(a)] = b;
    t.adj_[static_cast<std::size_t>(u)].push_back(v);
    t.adj_[static_cast<std::size_t>(v)].push_back(u);
    t.edges_.emplace_back(std::min(u, v), std::max(u, v));
  }
  for (auto& a : t.adj_) std::sort(a.begin(), a.end());
  std::sort(t.edges_.begin(), t.edges_.end());
  return t;
}

Tree Tree::from_parents(const std::vector<int>& parent) {
  const int n = static_cast<int>(parent.size());
  EdgeList edges;
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    int p = parent[static_cast<std::size_t>(i)];
    if (p == -1) {
      ++roots;
      continue;
    }
    edges.emplace_back(i, p);
  }
  if (roots != 1) throw InputError("parent array must contain exactly one root (-1), found " + std::to_string(roots));
  return from_edges(n, edges);
}

bool Tree::has_edge(int u, int v) const {
  if (u < 0 || v < 0 || u >= size() || v >= size()) return false;
  const auto& a = neighbors(u);
  return std::binary_search(a.begin(), a.end(), v);
}

std::vector<int> Tree::parents(int root) const {
  std::vector<int> par(static_cast<std::size_t>(size()), -2);
  par[static_cast<std::size_t>(root)] = -1;
  std::vector<int> stack{root};
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (int y : neighbors(x))
      if (par[static_cast<std::size_t>(y)] == -2) {
        par[static_cast<std::size_t>(y)] = x;
        stack.push_back(y);
      }
  }
  return par;
}

Tree path_tree(int vertices) {
  EdgeList e;
  for (int i = 0; i + 1 < vertices; ++i) e.emplace_back(i, i + 1);
  return Tree::from_edges(vertices, e);
}

Tree star_tree(int leaves) {
  EdgeList e;
  for (int i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return Tree::from_edges(leaves + 1, e);
}

Tree caterpillar(int spine, int legs) {
  EdgeList e;
  for (int i = 0; i + 1 < spine; ++i) e.emplace_back(i, i + 1);
  int next = spine;
  for (int i = 0; i < spine; ++i)
    for (int j = 0; j < legs; ++j) e.emplace_back(i, next++);
  return Tree::from_edges(next, e);
}

Tree spider(int legs, int leg_length) {
  EdgeList e;
  int next = 1;
  for (int l = 0; l < legs; ++l) {
    int prev = 0;
    for (int j = 0; j < leg_length; ++j) {
      e.emplace_back(prev, next);
      prev = next++;
    }
  }
  return Tree::from_edges(next, e);
}

Tree random_tree(int vertices, Rng& rng) {
  if (vertices <= 2) return path_tree(std::max(vertices, 1));
  std::vector<int> seq(static_cast<std::size_t>(vertices - 2));
  for (auto& x : seq) x = uniform_index(rng, vertices);
  std::vector<int> deg(static_cast<std::size_t>(vertices), 1);
  for (int x : seq) ++deg[static_cast<std::size_t>(x)];
  std::priority_queue<int, std::vector<int>, std::greater<>> leaves;
  for (int v = 0; v < vertices; ++v)
    if (deg[static_cast<std::size_t>(v)] == 1) leaves.push(v);
  EdgeList e;
  for (int x : seq) {
    int leaf = leaves.top();
    leaves.pop();
    e.emplace_back(leaf, x);
    if (--deg[static_cast<std::size_t>(x)] == 1) leaves.push(x);
  }
  int a = leaves.top();
  leaves.pop();
  int b = leaves.top();
  e.emplace_back(a, b);
  return Tree::from_edges(vertices, e);
}

Tree random_recursive_tree(int vertices, Rng& rng) {
  EdgeList e;
  for (int i = 1; i < vertices; ++i) e.emplace_back(uniform_index(rng, i), i);
  return Tree::from_edges(std::max(vertices, 1), e);
}

std::vector<LeafStar> leaf_stars(const Tree& t) {
  std::vector<LeafStar> out;
  if (t.size() == 2) {
    out.push_back({0, {1}});
    return out;
  }
  for (int v = 0; v < t.size(); ++v) {
    if (t.is_leaf(v)) continue;
    LeafStar s{v, {}};
    for (int u : t.neighbors(v))
      if (t.is_leaf(u)) s.leaves.push_back(u);
    if (!s.leaves.empty()) out.push_back(std::move(s));
  }
  return out;
}

VertexSet k_span(const Tree& t, std::span<const int> s, int k) { return k_span(t.adjacency(), s, k); }

VertexSet k_span(const Adjacency& t, std::span<const int> s, int k) {
  if (k < 1) throw InputError("k_span: k must be at least 1");
  const int n = static_cast<int>(t.size());
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  for (int v : s) {
    if (v < 0 || v >= n) throw InputError("k_span: vertex out of range");
    in[static_cast<std::size_t>(v)] = 1;
  }

  std::vector<int> root(static_cast<std::size_t>(n));
  std::iota(root.begin(), root.end(), 0);
  std::vector<std::vector<int>> members(static_cast<std::size_t>(n));
  auto find = [&](int x) {
    while (root[static_cast<std::size_t>(x)] != x)
      x = root[static_cast<std::size_t>(x)] = root[static_cast<std::size_t>(root[static_cast<std::size_t>(x)])];
    return x;
  };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return a;
    if (members[static_cast<std::size_t>(a)].size() < members[static_cast<std::size_t>(b)].size()) std::swap(a, b);
    auto& ma = members[static_cast<std::size_t>(a)];
    auto& mb = members[static_cast<std::size_t>(b)];
    ma.insert(ma.end(), mb.begin(), mb.end());
    mb.clear();
    mb.shrink_to_fit();
    root[static_cast<std::size_t>(b)] = a;
    return a;
  };
  auto add = [&](int v) {
    in[static_cast<std::size_t>(v)] = 1;
    members[static_cast<std::size_t>(v)] = {v};
    for (int u : t[static_cast<std::size_t>(v)])
      if (in[static_cast<std::size_t>(u)]) unite(u, v);
  };

  for (int v = 0; v < n; ++v)
    if (in[static_cast<std::size_t>(v)]) members[static_cast<std::size_t>(v)] = {v};
  for (int v = 0; v < n; ++v)
    if (in[static_cast<std::size_t>(v)])
      for (int u : t[static_cast<std::size_t>(v)])
        if (u > v && in[static_cast<std::size_t>(u)]) unite(u, v);

  auto comp_min = [&](int r) {
    const auto& m = members[static_cast<std::size_t>(r)];
    return *std::min_element(m.begin(), m.end());
  };
  std::set<int> work;  // smallest vertex of each component still to scan
  for (int v = 0; v < n; ++v)
    if (in[static_cast<std::size_t>(v)] && find(v) == v) work.insert(comp_min(v));

  struct Node {
    int v, parent, depth;
  };
  std::vector<int> via(static_cast<std::size_t>(n), -1);
  while (!work.empty()) {
    const int rep = *work.begin();
    work.erase(work.begin());
    const int r = find(rep);
    if (comp_min(r) != rep) continue;  // stale entry; merged elsewhere

    std::vector<int> boundary;
    for (int x : members[static_cast<std::size_t>(r)])
      for (int y : t[static_cast<std::size_t>(x)])
        if (!in[static_cast<std::size_t>(y)]) boundary.push_back(y);
    std::sort(boundary.begin(), boundary.end());

    std::deque<Node> queue;
    for (int b : boundary) {
      queue.push_back({b, -1, 1});
      via[static_cast<std::size_t>(b)] = -1;
    }
    int hit = -1;
    while (!queue.empty() && hit < 0) {
      Node cur = queue.front();
      queue.pop_front();
      for (int y : t[static_cast<std::size_t>(cur.v)]) {
        if (in[static_cast<std::size_t>(y)] && find(y) != r) {
          hit = cur.v;
          break;
        }
      }
      if (hit >= 0 || cur.depth >= k) continue;
      for (int y : t[static_cast<std::size_t>(cur.v)]) {
        if (y == cur.parent || in[static_cast<std::size_t>(y)]) continue;
        via[static_cast<std::size_t>(y)] = cur.v;
        queue.push_back({y, cur.v, cur.depth + 1});
      }
    }
    if (hit < 0) continue;
    for (int x = hit; x != -1; x = via[static_cast<std::size_t>(x)]) add(x);
    work.insert(comp_min(find(rep)));
  }

  VertexSet out;
  for (int v = 0; v < n; ++v)
    if (in[static_cast<std::size_t>(v)]) out.push_back(v);
  return out;
}

std::vector<std::vector<int>> bare_segments(const Tree& t) {
  std::vector<std::vector<int>> out;
  const int n = t.size();
  if (n < 2) return out;
  int start = 0;
  while (t.degree(start) == 2) ++start;  // a tree always has a leaf
  std::vector<int> parent(static_cast<std::size_t>(n), -2);
  std::vector<int> preorder;
  std::vector<int> stack{start};
  parent[static_cast<std::size_t>(start)] = -1;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    preorder.push_back(x);
    const auto& nb = t.neighbors(x);
    for (auto it = nb.rbegin(); it != nb.rend(); ++it)
      if (parent[static_cast<std::size_t>(*it)] == -2) {
        parent[static_cast<std::size_t>(*it)] = x;
        stack.push_back(*it);
      }
  }
  for (int x : preorder) {
    if (t.degree(x) == 2) continue;
    for (int c : t.neighbors(x)) {
      if (c == parent[static_cast<std::size_t>(x)]) continue;
      std::vector<int> seg{x, c};
      int prev = x, cur = c;
      while (t.degree(cur) == 2) {
        int nxt = t.neighbors(cur)[0] == prev ? t.neighbors(cur)[1] : t.neighbors(cur)[0];
        seg.push_back(nxt);
        prev = cur;
        cur = nxt;
      }
      out.push_back(std::move(seg));
    }
  }
  return out;
}

std::vector<std::vector<int>> extract_bare_paths(const Tree& t, int length, const std::vector<char>& blocked,
                                                 bool inner_ends) {
  if (length < 1) throw InputError("bare path length must be positive");
  std::vector<char> used(static_cast<std::size_t>(t.size()), 0);
  auto bad = [&](int v) {
    return used[static_cast<std::size_t>(v)] ||
           (!blocked.empty() && blocked[static_cast<std::size_t>(v)]);
  };
  std::vector<std::vector<int>> out;
  for (const auto& seg : bare_segments(t)) {
    const int len = static_cast<int>(seg.size()) - 1;
    int pos = 0;
    while (pos + length <= len) {
      bool ok = true;
      for (int j = pos; j <= pos + length && ok; ++j) ok = !bad(seg[static_cast<std::size_t>(j)]);
      if (ok && inner_ends)
        ok = t.degree(seg[static_cast<std::size_t>(pos)]) >= 2 && t.degree(seg[static_cast<std::size_t>(pos + length)]) >= 2;
      if (!ok) {
        ++pos;
        continue;
      }
      std::vector<int> piece(seg.begin() + pos, seg.begin() + pos + length + 1);
      for (int v : piece) used[static_cast<std::size_t>(v)] = 1;
      out.push_back(std::move(piece));
      pos += length + 1;
    }
  }
  return out;
}

const char* to_string(TreeCase c) {
  switch (c) {
    case TreeCase::L: return "L";
    case TreeCase::S: return "S";
    case TreeCase::P: return "P";
  }
  return "?";
}

CaseTag classify_case(const Tree& t, const ParamConfig& cfg) {
  if (t.size() < 1) throw InputError("classify_case: empty tree");
  const double n = cfg.n > 0 ? cfg.n : t.size();
  CaseTag tag;
  const auto stars = leaf_stars(t);
  std::size_t in_large = 0;
  std::vector<char> big_leaf(static_cast<std::size_t>(t.size()), 0);
  for (const auto& s : stars) {
    if (static_cast<double>(s.size()) >= cfg.Lambda) {
      in_large += s.size() + 1;
      for (int l : s.leaves) big_leaf[static_cast<std::size_t>(l)] = 1;
    }
    if (static_cast<double>(s.size()) <= cfg.Lambda) tag.in_small += s.size() + 1;
  }
  tag.outside_large = static_cast<std::size_t>(t.size()) - in_large;
  if (static_cast<double>(tag.outside_large) <= cfg.p_plus * n) {
    tag.kind = TreeCase::L;
    return tag;
  }
  if (static_cast<double>(tag.in_small) >= cfg.p_minus * n) {
    tag.kind = TreeCase::S;
    return tag;
  }
  // Pruned tree: leaves of large stars can never be interior to a bare path,
  // and are excluded as ends as well.
  tag.paths = extract_bare_paths(t, 8 * cfg.K, big_leaf);
  if (static_cast<double>(tag.paths.size()) >= cfg.p_plus * n / (100.0 * cfg.K)) {
    tag.kind = TreeCase::P;
    return tag;
  }
  throw ClassificationFailure("no tree regime certified: " + std::to_string(tag.outside_large) +
                                  " vertices outside large leaf stars, " + std::to_string(tag.in_small) +
                                  " in small leaf stars, " + std::to_string(tag.paths.size()) + " bare paths",
                              tag.outside_large, tag.in_small, tag.paths.size());
}

}  // namespace ringel
