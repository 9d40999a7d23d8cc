#include "ringel/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "ringel/errors.hpp"

namespace ringel {

Graph::Graph(int n) {
  if (n < 0) throw InputError("negative vertex count");
  adj_.resize(static_cast<std::size_t>(n));
}

Graph Graph::from_edges(int n, const EdgeList& edges) {
  Graph g(n);
  for (auto [u, v] : edges) {
    if (!g.add_edge(u, v)) throw InputError("duplicate edge " + std::to_string(u) + "-" + std::to_string(v));
  }
  return g;
}

void Graph::check_vertex(int v) const {
  if (v < 0 || v >= n()) throw InputError("vertex " + std::to_string(v) + " out of range [0," + std::to_string(n()) + ")");
}

bool Graph::add_edge(int u, int v) {
  check_vertex(u);
  check_vertex(v);
  if (u == v) throw InputError("loop at vertex " + std::to_string(u));
  auto& a = adj_[static_cast<std::size_t>(u)];
  auto it = std::lower_bound(a.begin(), a.end(), v);
  if (it != a.end() && *it == v) return false;
  a.insert(it, v);
  auto& b = adj_[static_cast<std::size_t>(v)];
  b.insert(std::lower_bound(b.begin(), b.end(), u), u);
  ++m_;
  return true;
}

bool Graph::remove_edge(int u, int v) {
  check_vertex(u);
  check_vertex(v);
  auto& a = adj_[static_cast<std::size_t>(u)];
  auto it = std::lower_bound(a.begin(), a.end(), v);
  if (it == a.end() || *it != v) return false;
  a.erase(it);
  auto& b = adj_[static_cast<std::size_t>(v)];
  b.erase(std::lower_bound(b.begin(), b.end(), u));
  --m_;
  return true;
}

bool Graph::has_edge(int u, int v) const {
  if (u < 0 || v < 0 || u >= n() || v >= n()) return false;
  const auto& a = adj_[static_cast<std::size_t>(u)];
  return std::binary_search(a.begin(), a.end(), v);
}

const std::vector<int>& Graph::neighbors(int v) const {
  check_vertex(v);
  return adj_[static_cast<std::size_t>(v)];
}

EdgeList Graph::edges() const {
  EdgeList out;
  out.reserve(m_);
  for (int u = 0; u < n(); ++u)
    for (int v : adj_[static_cast<std::size_t>(u)])
      if (u < v) out.emplace_back(u, v);
  return out;
}

double Graph::density() const {
  if (n() < 2) return 0.0;
  return static_cast<double>(m_) / (0.5 * n() * (n() - 1.0));
}

CyclicOrder::CyclicOrder(int n) : label_(static_cast<std::size_t>(n)), vertex_(static_cast<std::size_t>(n)) {
  std::iota(label_.begin(), label_.end(), 0);
  std::iota(vertex_.begin(), vertex_.end(), 0);
}

CyclicOrder CyclicOrder::from_labels(std::vector<int> label_of_vertex) {
  CyclicOrder o;
  const int n = static_cast<int>(label_of_vertex.size());
  o.vertex_.assign(static_cast<std::size_t>(n), -1);
  for (int v = 0; v < n; ++v) {
    int l = label_of_vertex[static_cast<std::size_t>(v)];
    if (l < 0 || l >= n || o.vertex_[static_cast<std::size_t>(l)] != -1)
      throw InputError("cyclic order is not a bijection onto [0,n)");
    o.vertex_[static_cast<std::size_t>(l)] = v;
  }
  o.label_ = std::move(label_of_vertex);
  return o;
}

CyclicOrder CyclicOrder::random(int n, Rng& rng) {
  std::vector<int> labels(static_cast<std::size_t>(n));
  std::iota(labels.begin(), labels.end(), 0);
  shuffle(labels, rng);
  return from_labels(std::move(labels));
}

int CyclicOrder::succ(int v) const { return vertex((label(v) + 1) % n()); }
int CyclicOrder::pred(int v) const { return vertex((label(v) + n() - 1) % n()); }

int cyclic_distance(int n, int x, int y) {
  if (n <= 0 || x < 0 || y < 0 || x >= n || y >= n) throw InputError("cyclic_distance: label out of range");
  int d = std::abs(x - y);
  return std::min(d, n - d);
}

int cyclic_distance(const CyclicOrder& o, int x, int y) {
  if (x < 0 || y < 0 || x >= o.n() || y >= o.n()) throw InputError("cyclic_distance: vertex out of range");
  return cyclic_distance(o.n(), o.label(x), o.label(y));
}

Digraph::Digraph(int n) : out_(static_cast<std::size_t>(n)), in_(static_cast<std::size_t>(n)) {}

void Digraph::check_vertex(int v) const {
  if (v < 0 || v >= n()) throw InputError("digraph vertex " + std::to_string(v) + " out of range");
}

bool Digraph::add_arc(int u, int v, const std::string& label) {
  check_vertex(u);
  check_vertex(v);
  if (u == v) throw InputError("digraph loop at " + std::to_string(u));
  if (!arcs_.emplace(u, v, label).second) return false;
  out_[static_cast<std::size_t>(u)].push_back(v);
  in_[static_cast<std::size_t>(v)].push_back(u);
  return true;
}

bool Digraph::remove_arc(int u, int v, const std::string& label) {
  if (arcs_.erase({u, v, label}) == 0) return false;
  auto& o = out_[static_cast<std::size_t>(u)];
  o.erase(std::find(o.begin(), o.end(), v));
  auto& i = in_[static_cast<std::size_t>(v)];
  i.erase(std::find(i.begin(), i.end(), u));
  return true;
}

bool Digraph::has_arc(int u, int v) const {
  auto it = arcs_.lower_bound({u, v, std::string{}});
  return it != arcs_.end() && std::get<0>(*it) == u && std::get<1>(*it) == v;
}

bool Digraph::has_arc(int u, int v, const std::string& label) const { return arcs_.count({u, v, label}) > 0; }

void Digraph::reverse(int u, int v) {
  if (!remove_arc(u, v)) throw InputError("reverse: no arc " + std::to_string(u) + "->" + std::to_string(v));
  add_arc(v, u);
}

std::vector<Arc> Digraph::arcs() const {
  std::vector<Arc> out;
  out.reserve(arcs_.size());
  for (const auto& [u, v, l] : arcs_) out.push_back({u, v, l});
  return out;
}

Graph Digraph::underlying() const {
  Graph g(n());
  for (const auto& [u, v, l] : arcs_) g.add_edge(u, v);
  return g;
}

VertexSet common_neighborhood(const Graph& g, std::span<const int> s) {
  for (int x : s) g.check_vertex(x);
  VertexSet cur(static_cast<std::size_t>(g.n()));
  std::iota(cur.begin(), cur.end(), 0);
  for (int x : s) {
    VertexSet next;
    const auto& nb = g.neighbors(x);
    std::set_intersection(cur.begin(), cur.end(), nb.begin(), nb.end(), std::back_inserter(next));
    cur = std::move(next);
  }
  return cur;
}

namespace {

using boost::multiprecision::cpp_rational;

// Bit rows of the adjacency matrix, for fast repeated intersections.
struct BitRows {
  int words;
  std::vector<std::uint64_t> bits;
  explicit BitRows(const Graph& g) : words((g.n() + 63) / 64) {
    bits.assign(static_cast<std::size_t>(g.n()) * static_cast<std::size_t>(words), 0);
    for (int v = 0; v < g.n(); ++v)
      for (int u : g.neighbors(v))
        bits[static_cast<std::size_t>(v) * static_cast<std::size_t>(words) + static_cast<std::size_t>(u / 64)] |=
            (std::uint64_t{1} << (u % 64));
  }
  const std::uint64_t* row(int v) const { return &bits[static_cast<std::size_t>(v) * static_cast<std::size_t>(words)]; }
};

// Closed bounds ((1 -/+ xi) d)^k n for k = 1..s; exact when n is moderate.
class Bounds {
 public:
  Bounds(const Graph& g, double xi, int s) : exact_(g.n() <= 10000) {
    const long long n = g.n();
    if (exact_) {
      cpp_rational d = n < 2 ? cpp_rational(0) : cpp_rational(2 * static_cast<long long>(g.edge_count()), n * (n - 1));
      cpp_rational x(xi);  // doubles are dyadic, so this is exact
      cpp_rational lo = (1 - x) * d, hi = (1 + x) * d;
      cpp_rational plo = n, phi = n;
      for (int k = 1; k <= s; ++k) {
        plo *= lo;
        phi *= hi;
        qlo_.push_back(plo);
        qhi_.push_back(phi);
      }
    }
    const double d = g.density();
    double plo = static_cast<double>(n), phi = static_cast<double>(n);
    for (int k = 1; k <= s; ++k) {
      plo *= (1 - xi) * d;
      phi *= (1 + xi) * d;
      lo_.push_back(plo);
      hi_.push_back(phi);
    }
  }
  bool inside(int k, std::size_t count) const {
    const auto i = static_cast<std::size_t>(k - 1);
    if (exact_) return cpp_rational(count) >= qlo_[i] && cpp_rational(count) <= qhi_[i];
    const double c = static_cast<double>(count);
    return c >= lo_[i] - 1e-9 && c <= hi_[i] + 1e-9;
  }
  double lo(int k) const { return lo_[static_cast<std::size_t>(k - 1)]; }
  double hi(int k) const { return hi_[static_cast<std::size_t>(k - 1)]; }

 private:
  bool exact_;
  std::vector<cpp_rational> qlo_, qhi_;
  std::vector<double> lo_, hi_;
};

double binomial(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TypicalityResult is_typical(const Graph& g, double xi, int s, Rng& rng, const TypicalityOptions& opts) {
  if (!(xi > 0 && xi < 1)) throw InputError("is_typical: xi must lie in (0,1)");
  if (s < 1) throw InputError("is_typical: s must be at least 1");
  if (s > g.n()) throw InputError("is_typical: s exceeds vertex count");

  TypicalityResult res;
  const Bounds bounds(g, xi, s);
  const BitRows rows(g);
  const int n = g.n();
  const int words = rows.words;

  auto fail = [&](const VertexSet& set, std::size_t count) {
    res.typical = false;
    res.witness = set;
    res.witness_count = count;
    res.lower = bounds.lo(static_cast<int>(set.size()));
    res.upper = bounds.hi(static_cast<int>(set.size()));
  };

  // Largest size enumerated exhaustively; larger sizes are sampled.
  int exhaustive_upto = 0;
  for (int k = 1; k <= s; ++k) {
    if (binomial(n, k) <= opts.exhaustive_limit) exhaustive_upto = k;
    else break;
  }

  std::vector<std::vector<std::uint64_t>> stack(static_cast<std::size_t>(exhaustive_upto + 1),
                                                std::vector<std::uint64_t>(static_cast<std::size_t>(words)));
  VertexSet cur;
  // Depth-first over all subsets of size <= exhaustive_upto in lexicographic order.
  auto dfs = [&](auto&& self, int start, int depth) -> bool {
    for (int v = start; v < n; ++v) {
      auto& here = stack[static_cast<std::size_t>(depth)];
      const std::uint64_t* r = rows.row(v);
      std::size_t count = 0;
      if (depth == 0) {
        for (int w = 0; w < words; ++w) here[static_cast<std::size_t>(w)] = r[w];
      } else {
        const auto& prev = stack[static_cast<std::size_t>(depth - 1)];
        for (int w = 0; w < words; ++w) here[static_cast<std::size_t>(w)] = prev[static_cast<std::size_t>(w)] & r[w];
      }
      for (int w = 0; w < words; ++w) count += static_cast<std::size_t>(std::popcount(here[static_cast<std::size_t>(w)]));
      cur.push_back(v);
      ++res.sets_checked;
      if (!bounds.inside(depth + 1, count)) {
        fail(cur, count);
        return false;
      }
      if (depth + 1 < exhaustive_upto && !self(self, v + 1, depth + 1)) return false;
      cur.pop_back();
    }
    return true;
  };
  if (exhaustive_upto > 0 && !dfs(dfs, 0, 0)) return res;

  for (int k = exhaustive_upto + 1; k <= s; ++k) {
    res.sampled = true;
    for (std::size_t t = 0; t < opts.samples_per_size; ++t) {
      VertexSet set = random_subset(rng, n, k);
      std::size_t count = common_neighborhood(g, set).size();
      ++res.sets_checked;
      if (!bounds.inside(k, count)) {
        fail(set, count);
        return res;
      }
    }
  }
  return res;
}

TypicalityResult is_typical(const Graph& g, double xi, int s, const TypicalityOptions& opts) {
  Rng rng = stream(0, "typicality");
  return is_typical(g, xi, s, rng, opts);
}

Digraph random_orientation(const Graph& g, Rng& rng) {
  Digraph d(g.n());
  for (auto [u, v] : g.edges()) {
    if (coin(rng, 0.5)) d.add_arc(u, v);
    else d.add_arc(v, u);
  }
  return d;
}

Graph independent_subsample(const Graph& g, double p, Rng& rng) {
  if (!(p >= 0 && p <= 1)) throw InputError("independent_subsample: p must lie in [0,1]");
  Graph h(g.n());
  for (auto [u, v] : g.edges())
    if (coin(rng, p)) h.add_edge(u, v);
  return h;
}

Graph complete_graph(int n) {
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

Graph cycle_graph(int n) {
  Graph g(n);
  for (int u = 0; u < n; ++u) g.add_edge(u, (u + 1) % n);
  return g;
}

Graph gnp(int n, double p, Rng& rng) {
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng, p)) g.add_edge(u, v);
  return g;
}

}  // namespace ringel
