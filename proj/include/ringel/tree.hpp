#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ringel/graph.hpp"
#include "ringel/params.hpp"
#include "ringel/rng.hpp"

namespace ringel {

using Adjacency = std::vector<std::vector<int>>;

class Tree {
 public:
  Tree() = default;
  // Validates connectivity and acyclicity.
  static Tree from_edges(int n, const EdgeList& edges);
  // parent[i] is the parent of i; exactly one entry is -1.
  static Tree from_parents(const std::vector<int>& parent);

  int size() const { return static_cast<int>(adj_.size()); }
  std::size_t edge_count() const { return edges_.size(); }
  const EdgeList& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
  const Adjacency& adjacency() const { return adj_; }
  int degree(int v) const { return static_cast<int>(neighbors(v).size()); }
  bool is_leaf(int v) const { return degree(v) == 1; }
  bool has_edge(int u, int v) const;
  // Parent array rooted at `root`.
  std::vector<int> parents(int root = 0) const;

 private:
  Adjacency adj_;
  EdgeList edges_;  // u < v, sorted
};

Tree path_tree(int vertices);
Tree star_tree(int leaves);
// Spine of `spine` vertices, each carrying `legs` pendant leaves.
Tree caterpillar(int spine, int legs);
// Centre 0 with `legs` paths of `leg_length` edges each.
Tree spider(int legs, int leg_length);
// Uniform labelled tree via a Pruefer sequence.
Tree random_tree(int vertices, Rng& rng);
// Random recursive tree: vertex i attaches to a uniform earlier vertex.
Tree random_recursive_tree(int vertices, Rng& rng);

// Maximal leaf star at a centre: the centre and all its leaf neighbours.
struct LeafStar {
  int center;
  std::vector<int> leaves;
  std::size_t size() const { return leaves.size(); }
};
// One star per vertex with at least one leaf neighbour (for the two-vertex
// tree, a single star centred at vertex 0).
std::vector<LeafStar> leaf_stars(const Tree& t);

// Closure of s under adding connected sets of at most k vertices that join
// components of T[S*]. The fixed point does not depend on the order in which
// merges are applied; this scans components in increasing order of their
// smallest vertex and grows them breadth first.
VertexSet k_span(const Tree& t, std::span<const int> s, int k);
// Same closure inside an arbitrary forest given by adjacency lists.
VertexSet k_span(const Adjacency& forest, std::span<const int> s, int k);

// Maximal paths whose internal vertices have degree two, in the order a depth
// first search from vertex 0 discovers them. Each is a vertex sequence.
std::vector<std::vector<int>> bare_segments(const Tree& t);

// Greedy vertex-disjoint bare paths with exactly `length` edges, cut from the
// segments above in order. `blocked` vertices are never used; when
// `inner_ends` is set, path ends must have degree at least two.
std::vector<std::vector<int>> extract_bare_paths(const Tree& t, int length, const std::vector<char>& blocked,
                                                 bool inner_ends = false);

enum class TreeCase { L, S, P };
const char* to_string(TreeCase c);

struct CaseTag {
  TreeCase kind = TreeCase::L;
  std::size_t outside_large = 0;  // vertices outside leaf stars of size >= Lambda
  std::size_t in_small = 0;       // vertices in leaf stars of size <= Lambda
  std::vector<std::vector<int>> paths;  // Case P witness
};

// Thresholds are taken relative to cfg.n, the host vertex count.
CaseTag classify_case(const Tree& t, const ParamConfig& cfg);

}  // namespace ringel
