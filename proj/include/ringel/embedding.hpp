#pragma once

#include <string>
#include <vector>

#include "ringel/graph.hpp"
#include "ringel/matching.hpp"
#include "ringel/oracle.hpp"
#include "ringel/params.hpp"
#include "ringel/rng.hpp"
#include "ringel/tree.hpp"

namespace ringel {

// n partial copies of a tree in an n-vertex host, one per w in W = [0, n),
// with the host edges they have consumed. Placing u in copy w consumes the
// host edges to the images of every tree neighbour of u already placed in w.
class Embeddings {
 public:
  Embeddings() = default;
  Embeddings(Graph host, Tree tree);

  int n() const { return host_.n(); }
  const Graph& host() const { return host_; }
  const Tree& tree() const { return tree_; }

  int image(int w, int u) const { return phi_[idx(w, tree_.size(), u)]; }
  int preimage(int w, int x) const { return inv_[idx(w, n(), x)]; }
  bool placed(int w, int u) const { return image(w, u) >= 0; }
  bool in_image(int w, int x) const { return preimage(w, x) >= 0; }

  bool used(int x, int y) const { return used_[idx(x, n(), y)] != 0; }
  bool free_edge(int x, int y) const { return x != y && host_.has_edge(x, y) && !used(x, y); }
  long used_count() const { return used_count_; }

  // x is outside the image of w and joined by free edges to every placed
  // neighbour of u.
  bool can_place(int w, int u, int x) const;
  // Throws std::logic_error when can_place fails.
  void place(int w, int u, int x);
  // Images of the placed tree neighbours of u in copy w.
  std::vector<int> placed_neighbour_images(int w, int u) const;

  long placed_count() const { return placed_count_; }
  bool complete() const { return placed_count_ == static_cast<long>(n()) * tree_.size(); }

  // copies[w][u]; valid as a Decomposition only once complete().
  Decomposition to_decomposition() const;
  std::vector<std::vector<int>> copies() const;

 private:
  static std::size_t idx(int row, int width, int col) {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width) + static_cast<std::size_t>(col);
  }
  Graph host_;
  Tree tree_;
  std::vector<int> phi_;  // n x |V(T)|
  std::vector<int> inv_;  // n x n
  std::vector<char> used_;  // n x n, symmetric
  long used_count_ = 0;
  long placed_count_ = 0;
};

// Recomputes injectivity, adjacency and edge reuse from the images alone and
// compares the edge count with the running bookkeeping. One message per
// problem found.
std::vector<std::string> audit_embeddings(const Embeddings& e);

// MATCH: an MZMZ-free random perfect matching of `inst` (x side is W).
// Throws AbortError naming `where` when no perfect matching exists or the
// MZMZ repair stalls.
std::vector<int> match_or_abort(const BipartiteInstance& inst, Rng& rng, const ParamConfig& cfg,
                                const std::string& stage, const std::string& where);

}  // namespace ringel
