#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ringel/embedding.hpp"
#include "ringel/graph.hpp"
#include "ringel/hypergraph.hpp"
#include "ringel/params.hpp"
#include "ringel/partition.hpp"
#include "ringel/rng.hpp"
#include "ringel/tree.hpp"

namespace ringel {

// Checkpoints of the pipeline, in the order they are reached.
enum class Clock { start, high_degrees, intervals, g0, a_star_star, a0, digraph, layer_before, layer_after, finished };
const char* to_string(Clock c);

// Cyclic run of labels start, start+1, ..., start+length-1 (mod n).
struct Interval {
  int start = 0;
  int length = 0;
  auto operator<=>(const Interval&) const = default;
};

// d_i = max(1, floor(d / (2s)^(i-1))) for i >= 1.
int interval_width(int d, int s, int i);
// The family cut at the points j, j + width, j + 2 width, ... of [0, n);
// j in [0, width).
std::vector<Interval> interval_family(int n, int width, int j);
// Empty when the family covers [0, n) exactly once, else a description.
std::string check_interval_partition(int n, const std::vector<Interval>& family);

// Sizes with n = m n_star + n0, n0 = n (mod m) closest to n Delta^-0.1, ties
// going to the smaller n0.
std::pair<int, int> split_sizes(int n, int m, double Delta);

// Shifts for the vertices of `core` (given in processing order) on the cycle
// [0, m): each is the first value at cyclic distance > 3d from all earlier
// shifts whose distance to each earlier forest neighbour differs from every
// distance already realised along a forest edge between earlier vertices.
// Throws AbortError when some vertex has no admissible value.
std::map<int, int> pick_shifts(const std::vector<int>& core, const Adjacency& forest, int m, int d);

// Named sets of ordered pairs. Pairs may appear under several names; the
// audit reports any pair that does.
struct ReserveBook {
  std::vector<std::string> names;
  std::vector<std::vector<std::pair<int, int>>> members;
  std::map<std::string, int> ids;

  int id(const std::string& name);  // creates on first use
  int find(const std::string& name) const;  // -1 when absent
  const std::vector<std::pair<int, int>>& of(const std::string& name) const;
};

struct Metric {
  std::string clock;
  int layer = 0;
  std::string name;
  double value = 0;
};

struct EmbeddingState {
  ParamConfig cfg;
  TreePartition tp;
  LabelScheme labels;
  CyclicOrder order;  // random identification of V(G) with [n]
  Embeddings emb;
  Clock clock = Clock::start;
  int layer = 0;

  // HIGH DEGREES
  std::map<int, int> shift;
  int n0 = 0, n_star = 0;
  std::vector<int> v_block, w_block;  // -1 for V_0 / W_0

  // INTERVALS
  std::vector<int> interval_i, interval_j;  // per w, Case P only
  std::vector<std::vector<Interval>> x_sets, y_sets;
  std::vector<long> t_min;  // per i
  bool intervals_degenerate = false;
  std::vector<char> xbar;  // [w * n + x]
  std::vector<double> pbar;

  // EMBED A_0 and DIGRAPH
  std::vector<int> u_part;    // colour h of each vertex
  std::vector<char> g1;       // [y * n + x]: arc y -> x
  ReserveBook arcs;           // labelled host pairs: G0 edges (u < v) and G_1 arcs
  ReserveBook jpairs;         // labelled (x, w) pairs
  std::vector<int> arc_label;  // [y * n + x], -1 if none
  std::vector<int> j_label;    // [x * n + w]
  std::vector<int> hstar_w;    // [y * n + x]: w(yx) or -1
  std::vector<int> hstar_centre;
  std::vector<char> hi_xw;    // [x * n + w]
  std::vector<std::pair<int, int>> twist_main, twist_pred;  // Case P split of G_ex
  long rainbow_deficit = 0;
  std::size_t nibble_labels = 0;

  double p1 = 0, p_ex = 0, p_ex_prime = 0, alpha_hi = 0;
  std::map<std::string, double> pair_prob;  // G-reserve name -> density
  std::map<std::string, double> class_alpha;  // J-reserve name -> alpha
  double table_arc_sum = 0, table_pair_sum = 0;

  std::vector<Metric> metrics;
  std::function<void(const EmbeddingState&)> on_checkpoint;

  int n() const { return emb.n(); }
  void mark(Clock c, int layer_index = 0);
  void record(const std::string& name, double value);
};

EmbeddingState make_state(const Graph& host, const Tree& tree, const TreePartition& tp, const ParamConfig& cfg,
                          Rng& rng);

void high_degrees(EmbeddingState& st, Rng& rng);
void intervals(EmbeddingState& st, Rng& rng);
void embed_a0(EmbeddingState& st, Rng& rng);
// Throws ConfigError, before drawing anything, when the per-arc or per-pair
// probability table would exceed one.
void digraph_allocate(EmbeddingState& st, Rng& rng);
void approx_decomposition(EmbeddingState& st, Rng& rng);

// Reserve names used by the allocation.
std::string pair_reserve_name(VertexClass g, int i, VertexClass g2, int i2);  // i2 = 0 for A_0
std::string class_reserve_name(const TreePartition& tp, int u);              // J_u

// Weighted hypergraph of one layer: vertices are the (u, w) slots, the J arcs
// and the G arcs; an edge per admissible placement (w, u, x).
struct LayerHypergraph {
  WeightedHypergraph h;
  struct Placement {
    int w, u, x;
  };
  std::vector<Placement> placements;  // parallel to h.edges()
  std::vector<int> slot_vertex;       // hypergraph vertex of each (u, w) slot, -1 if unused
  int slots = 0, j_vertices = 0, arc_vertices = 0;
};
LayerHypergraph build_layer_hypergraph(const EmbeddingState& st, int i);

// Observational statistics of a layer hypergraph and the state around it.
std::vector<Metric> instrument(const EmbeddingState& st, int i, const LayerHypergraph& lh);

// Structural audit of everything built so far.
std::vector<std::string> audit_state(const EmbeddingState& st);

}  // namespace ringel
