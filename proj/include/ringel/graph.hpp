#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ringel/rng.hpp"

namespace ringel {

using VertexSet = std::vector<int>;  // sorted, duplicate free
using EdgeList = std::vector<std::pair<int, int>>;

inline std::uint64_t edge_key(int u, int v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint32_t>(v);
}

// Simple undirected graph on [0, n). Adjacency lists are kept sorted.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);
  static Graph from_edges(int n, const EdgeList& edges);

  int n() const { return static_cast<int>(adj_.size()); }
  std::size_t edge_count() const { return m_; }

  // Returns false if the edge is already present. Loops and out-of-range
  // endpoints throw InputError.
  bool add_edge(int u, int v);
  bool remove_edge(int u, int v);
  bool has_edge(int u, int v) const;

  const std::vector<int>& neighbors(int v) const;
  int degree(int v) const { return static_cast<int>(neighbors(v).size()); }

  // Edges with u < v in lexicographic order.
  EdgeList edges() const;
  // |E| / C(n, 2); zero for n < 2.
  double density() const;

  void check_vertex(int v) const;

  bool operator==(const Graph& o) const { return adj_ == o.adj_; }

 private:
  std::vector<std::vector<int>> adj_;
  std::size_t m_ = 0;
};

// Bijection vertex -> label in [0, n); labels carry the cyclic order.
class CyclicOrder {
 public:
  CyclicOrder() = default;
  explicit CyclicOrder(int n);  // identity
  static CyclicOrder from_labels(std::vector<int> label_of_vertex);
  static CyclicOrder random(int n, Rng& rng);

  int n() const { return static_cast<int>(label_.size()); }
  int label(int v) const { return label_[static_cast<std::size_t>(v)]; }
  int vertex(int label) const { return vertex_[static_cast<std::size_t>(label)]; }
  // Vertex whose label follows / precedes that of v, wrapping at n.
  int succ(int v) const;
  int pred(int v) const;

 private:
  std::vector<int> label_;
  std::vector<int> vertex_;
};

// min(|x - y|, n - |x - y|) on labels in [0, n).
int cyclic_distance(int n, int x, int y);
// Same, for two vertices compared through their labels.
int cyclic_distance(const CyclicOrder& o, int x, int y);

struct Arc {
  int from;
  int to;
  std::string label;
  auto operator<=>(const Arc&) const = default;
};

// Digraph with optional string labels; at most one arc per ordered pair per label.
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(int n);

  int n() const { return static_cast<int>(out_.size()); }
  std::size_t arc_count() const { return arcs_.size(); }

  bool add_arc(int u, int v, const std::string& label = {});
  bool remove_arc(int u, int v, const std::string& label = {});
  bool has_arc(int u, int v) const;  // under any label
  bool has_arc(int u, int v, const std::string& label) const;

  // Reverse an unlabelled arc u->v into v->u.
  void reverse(int u, int v);

  const std::vector<int>& out(int v) const { return out_[static_cast<std::size_t>(v)]; }
  const std::vector<int>& in(int v) const { return in_[static_cast<std::size_t>(v)]; }
  int out_degree(int v) const { return static_cast<int>(out(v).size()); }
  int in_degree(int v) const { return static_cast<int>(in(v).size()); }

  std::vector<Arc> arcs() const;
  // Underlying simple graph (arcs of every label, both directions collapsed).
  Graph underlying() const;

 private:
  void check_vertex(int v) const;
  std::vector<std::vector<int>> out_, in_;
  std::set<std::tuple<int, int, std::string>> arcs_;
};

VertexSet common_neighborhood(const Graph& g, std::span<const int> s);

struct TypicalityOptions {
  // Sizes k whose C(n, k) exceeds this are sampled instead of enumerated.
  double exhaustive_limit = 2e7;
  std::size_t samples_per_size = 20000;
};

struct TypicalityResult {
  bool typical = true;
  bool sampled = false;
  VertexSet witness;  // first violating set, empty if none
  std::size_t witness_count = 0;
  double lower = 0, upper = 0;  // bounds at the witness size
  std::size_t sets_checked = 0;
};

TypicalityResult is_typical(const Graph& g, double xi, int s, Rng& rng,
                            const TypicalityOptions& opts = {});
// Deterministic convenience overload (sampling, if any, uses a fixed stream).
TypicalityResult is_typical(const Graph& g, double xi, int s, const TypicalityOptions& opts = {});

Digraph random_orientation(const Graph& g, Rng& rng);
Graph independent_subsample(const Graph& g, double p, Rng& rng);

// Generators.
Graph complete_graph(int n);
Graph cycle_graph(int n);
Graph gnp(int n, double p, Rng& rng);

}  // namespace ringel
