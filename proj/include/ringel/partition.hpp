#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ringel/graph.hpp"
#include "ringel/params.hpp"
#include "ringel/tree.hpp"

namespace ringel {

// Exact maximum independent set of the forest induced on `vertices`.
VertexSet forest_max_independent_set(const Adjacency& forest, const VertexSet& vertices);

struct LayerClasses {
  VertexSet hi, lo, no;
  VertexSet lt_lambda, ge_lambda;     // split of hi by the size of the centre's group
  std::map<int, VertexSet> groups;    // centre a -> its neighbours in the layer (>= Delta of them)
};

enum class VertexClass { none, hi, lo, no };

struct TreePartition {
  TreeCase kind = TreeCase::S;
  VertexSet a_star, a_star_star, a0_prime, a0;
  std::vector<VertexSet> layers;        // layers[i-1] is A_i
  std::vector<LayerClasses> classes;    // parallel to layers
  std::vector<VertexSet> c_sets;        // independent sets found while layering, in discovery order
  int i_star = 0;

  EdgeList p_ex;                        // removed edges
  std::vector<LeafStar> ex_stars;       // Case S
  std::vector<std::vector<int>> ex_paths;  // Case P bare paths
  EdgeList ex_leaf_edges;               // Case P (attachment, leaf)

  EdgeList f_edges, f_prime_edges;
  Adjacency f_adj, f_prime_adj;
  std::vector<char> in_f;               // vertex has an F edge

  std::vector<int> order;               // vertices in increasing order
  std::vector<int> rank;                // position of each vertex in `order`
  std::vector<int> layer_of;            // 0 for A_0, i for A_i, -1 otherwise
  std::vector<VertexClass> class_of;
  std::vector<int> hi_center;           // centre of the group containing v, or -1

  std::vector<std::pair<int, int>> q_delta, q_lambda;  // (a, i), i one-based
  std::map<std::pair<int, int>, long> m_ai;
  std::map<int, long> m_a;
  long m = 0;

  // Earlier / later F'-neighbours.
  VertexSet earlier(int v) const;
  VertexSet later(int v) const;
};

// Runs the full partition for trees in Case S or P. Throws PartitionFailure
// when the removable part cannot be placed away from the high-degree core.
TreePartition tree_partition(const Tree& t, const CaseTag& tag, const ParamConfig& cfg);

// Structural checks; returns one message per violation.
std::vector<std::string> audit_partition(const Tree& t, const TreePartition& tp, const ParamConfig& cfg);

struct Label {
  int a;
  int i;
  int j;
  bool large;  // (a, i) has at least Lambda neighbours in A_i
  auto operator<=>(const Label&) const = default;
};

struct LabelScheme {
  bool empty = true;  // set when m == 0
  long m = 0;
  long m_small = 0, m_large = 0;
  double p_small = 0, p_large = 0;
  std::map<std::pair<int, int>, long> copies;  // (a, i) -> number of labels
  std::vector<Label> labels;
};

LabelScheme label_scheme(const TreePartition& tp, const ParamConfig& cfg);

// Largest-remainder apportionment: integers within one of weight_k * total / sum
// that add up to `total`. Ties go to the earlier entry.
std::vector<long> apportion(const std::vector<long>& weights, long total);

}  // namespace ringel
