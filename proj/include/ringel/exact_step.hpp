#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ringel/embedder.hpp"
#include "ringel/embedding.hpp"
#include "ringel/graph.hpp"
#include "ringel/params.hpp"
#include "ringel/rng.hpp"
#include "ringel/tree.hpp"

namespace ringel {

// One line of a finisher's progress log.
struct ProgressRow {
  std::string step;
  long value = 0;  // imbalance or Sigma, depending on the finisher
  long moves = 0;
};
void write_progress_csv(std::ostream& os, const std::vector<ProgressRow>& rows);

struct OrientationTrace {
  std::vector<long> imbalance;  // before the first move, then after each move
  long resamples = 0;
  long exhaustive_scans = 0;
  long path_reversals = 0;  // other path lengths, used when no two-step path existed
};

// An orientation of g with out-degree targets[x] at every x, reached by
// reversing paths y -> z -> x from a surplus y to a deficit x (or a shortest
// directed surplus-to-deficit path when no such 2-path exists). Budget <= 0
// means 100 n log n moves. Throws InputError when the targets do not sum to
// |E(g)| and StuckError when neither kind of reversal exists or the budget runs out.
Digraph degree_target_orient(const Graph& g, const std::vector<int>& targets, Rng& rng,
                             OrientationTrace* trace = nullptr, long budget = 0);

// Whether copy w may send a leaf (or path vertex) to host vertex y.
using PairFilter = std::function<bool(int w, int y)>;

struct FinishReport {
  std::vector<ProgressRow> progress;
  long moves = 0;
  long violations = 0;  // bookkeeping identities that failed; always zero unless buggy
  std::vector<std::string> notes;
};

// The graph of host edges not yet consumed by any copy.
Graph free_graph(const Embeddings& emb);

// Every copy has placed all tree vertices except the leaves in `stars`, and
// the free edges are exactly what those leaves need. Orients the free graph
// so that each host vertex x has one out-arc per demanded leaf at x, then
// matches leaves to out-neighbours vertex by vertex.
FinishReport small_stars(Embeddings& emb, const std::vector<LeafStar>& stars, const PairFilter& allowed, Rng& rng,
                         const ParamConfig& cfg, OrientationTrace* trace = nullptr);

struct PathsInput {
  // The two removed leaves: (attachment, leaf).
  std::pair<int, int> leaf1{-1, -1}, leaf2{-1, -1};
  // Removed bare paths as tree vertex sequences; ends are already placed.
  std::vector<std::vector<int>> bare_paths;
  // Per copy, the reserved intervals (first host label, length). May be empty.
  std::vector<std::vector<Interval>> reserve;
  CyclicOrder order;
  int d = 1;
};

// Parity fixing with the two leaves, reservation of the long subpaths, random
// greedy embedding of the rest, and an exact path-system search for the
// reserved subpaths. Throws AbortError("paths", ...) naming the failing step.
FinishReport paths_parity_and_reserve(Embeddings& emb, const PathsInput& in, const PairFilter& allowed, Rng& rng,
                                      const ParamConfig& cfg, const SearchBudget& solver = {});

// Edges of bare path that copy w sets aside: 8 d + 2 per reserved interval.
long reserved_length(const PathsInput& in, int w);

// Host vertices whose free degree parity differs from the number of copies
// with a bare path end there.
VertexSet odd_vertices(const Embeddings& emb, const PathsInput& in);

struct LargeStarsReport : FinishReport {
  long sigma_initial = 0;
  long j_checks = 0;
  long j_two_cycles = 0;
  long sigma_steps_off = 0;  // moves whose Sigma change was not -2
  long disjointness_checks = 0;
  long disjointness_failures = 0;
};

// Case L from scratch on an empty host: embeds the forest left after removing
// stars of at least cfg.Lambda leaves, then hands each copy its star leaves
// through an orientation of the free graph repaired by xvz-moves. Throws
// AbortError("large_stars", ...) when a matching fails or no move is left.
LargeStarsReport large_stars(Embeddings& emb, const ParamConfig& cfg, Rng& rng);

// Copies of a decomposition with the given leaves left unplaced, for testing
// finishers on states whose completion is known to exist.
Embeddings strip_leaves(const Decomposition& dec, const VertexSet& leaves);

// Pipeline adapters. Copy w may use y only through a J_ex pair.
PairFilter jex_filter(const EmbeddingState& st);
FinishReport small_stars(EmbeddingState& st, Rng& rng);
FinishReport paths_parity_and_reserve(EmbeddingState& st, Rng& rng, const SearchBudget& solver = {});

}  // namespace ringel
