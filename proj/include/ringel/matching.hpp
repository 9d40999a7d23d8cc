#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ringel/graph.hpp"
#include "ringel/rng.hpp"

namespace ringel {

// Allowed edges b and forbidden-pattern edges z, both as (x, y) with
// x in [0, x_size) and y in [0, y_size).
struct BipartiteInstance {
  int x_size = 0;
  int y_size = 0;
  EdgeList b;
  EdgeList z;

  void validate() const;
  // Largest number of z edges at one vertex.
  int z_max_degree() const;
};

struct BipartiteMatching {
  std::vector<int> mate_x;  // y matched to x, or -1
  std::vector<int> mate_y;
  int size = 0;
  bool perfect = false;
  // Filled when no X-perfect matching exists: a set of X vertices and its
  // strictly smaller neighbourhood.
  VertexSet hall_violator;
  VertexSet neighbourhood;
};

// Hopcroft-Karp on left adjacency lists.
BipartiteMatching max_bipartite_matching(int x_size, int y_size, const std::vector<std::vector<int>>& adj);
BipartiteMatching max_bipartite_matching(const BipartiteInstance& inst);

// Number of 4-cycles alternating between matching edges and z edges.
long count_mzmz(const BipartiteInstance& inst, const std::vector<int>& mate_x);

struct SwitchingOptions {
  long repair_budget = 0;  // proposals allowed to reach MZMZ = 0; 0 picks 2000 n^2
  bool four_cycles = true;  // also propose alternating 4-cycle swaps
  bool check_monotone = false;  // recount MZMZ after every accepted move
  // Build cycles by walking b from a uniform x instead of drawing uniform
  // x tuples. Still symmetric (each cycle is proposed with the same total
  // probability in both directions), and far fewer rejections on sparse b.
  bool guided = false;
};

// The switching chain on perfect matchings of b. Moves swap an alternating
// 4- or 6-cycle and are rejected when they leave b or when a new matching edge
// closes an MZMZ.
class SwitchingChain {
 public:
  SwitchingChain(const BipartiteInstance& inst, Rng& rng, SwitchingOptions opts = {});

  // Runs moves until MZMZ = 0. Throws StuckError past the budget.
  void repair();
  // One proposal; returns whether it was applied.
  bool step();
  void run(long steps);

  const std::vector<int>& mate_x() const { return mate_x_; }
  long mzmz() const { return mzmz_; }
  long proposed() const { return proposed_; }
  long accepted() const { return accepted_; }
  long initial_mzmz() const { return initial_mzmz_; }
  long repair_moves() const { return repair_moves_; }

 private:
  bool in_b(int x, int y) const { return b_.count(edge_code(x, y)) > 0; }
  bool in_z(int x, int y) const { return z_.count(edge_code(x, y)) > 0; }
  std::uint64_t edge_code(int x, int y) const {
    return static_cast<std::uint64_t>(x) * static_cast<std::uint64_t>(inst_.y_size) + static_cast<std::uint64_t>(y);
  }
  // MZMZs through (x, y) if the matching were `mate_y`.
  long mzmz_at(int x, int y, const std::vector<int>& mate_y) const;
  bool try_cycle(const std::vector<int>& xs);

  const BipartiteInstance& inst_;
  Rng& rng_;
  SwitchingOptions opts_;
  std::unordered_set<std::uint64_t> b_, z_;
  std::vector<std::vector<int>> z_adj_, b_adj_;
  std::vector<int> mate_x_, mate_y_;
  long mzmz_ = 0, initial_mzmz_ = 0;
  long proposed_ = 0, accepted_ = 0, repair_moves_ = 0;
};

struct MatchSample {
  std::vector<int> mate_x;
  long accepted = 0;  // swaps applied during the mixing phase
  long initial_mzmz = 0;
  long repair_moves = 0;
  bool z_degree_warning = false;  // z max degree >= y_size^0.4
};

// Perfect matching with MZMZ = 0. `steps` < 0 picks 50 n log n.
MatchSample match_sample(const BipartiteInstance& inst, Rng& rng, long steps = -1, SwitchingOptions opts = {});

// Partition X and Y into about sqrt(n) random blocks of equal size and sample
// each block independently; retries the partition when a block has no perfect
// matching.
MatchSample match_sample_blocked(const BipartiteInstance& inst, Rng& rng, long steps_per_block = -1, int attempts = 20);

struct MarginalRow {
  int x, y;
  double freq;
  bool in_band;
};

struct MarginalReport {
  std::vector<MarginalRow> rows;  // one per b edge, in the order of inst.b
  double predicted = 0;           // (d(B) n)^-1
  double band_lo = 0, band_hi = 0;
  long samples = 0;
  std::size_t out_of_band = 0;
};

// Empirical edge marginals along one chain, sampling every `thin` proposals
// after an initial mixing run.
MarginalReport match_marginal_report(const BipartiteInstance& inst, Rng& rng, long samples, double alpha,
                                     long thin = -1);
void write_marginal_csv(std::ostream& os, const MarginalReport& r);

struct PairCondition {
  bool pass = false;
  bool degrees_ok = false;
  int min_degree = 0;
  long heavy_pairs = 0;  // ordered pairs x != x' with codegree >= (d + eps)^2 m
  double pair_limit = 0;
};

PairCondition pair_condition_check(const BipartiteInstance& inst, double eps, double d);

struct LabeledEdge {
  int x, y, label;
};

struct LabeledMultigraph {
  int x_size = 0, y_size = 0, labels = 0;
  std::vector<LabeledEdge> edges;
};

struct RainbowMatching {
  std::vector<int> edges;  // indices into mg.edges
  long deficit = 0;        // labels - |M|
  bool within_soft_bound = true;  // deficit <= labels^0.51
};

// Greedy, then augmenting exchanges of bounded depth. Every label is used at
// most once. Throws InputError if some label class is not a matching.
RainbowMatching rainbow_matching(const LabeledMultigraph& mg, int depth = 4);

}  // namespace ringel
