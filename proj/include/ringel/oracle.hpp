#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "ringel/graph.hpp"
#include "ringel/matching.hpp"
#include "ringel/tree.hpp"

namespace ringel {

// n copies of a tree in an n-vertex host; copies[w][u] is the image of tree
// vertex u in copy w.
struct Decomposition {
  Graph host;
  Tree tree;
  std::vector<std::vector<int>> copies;
};

enum class Violation { none, count, injectivity, adjacency, reuse, coverage };
const char* to_string(Violation v);

struct VerifyResult {
  bool ok = true;
  Violation kind = Violation::none;
  std::string detail;
  int copy = -1;
  std::pair<int, int> edge{-1, -1};
};

// Checks in order: copy count, injectivity, adjacency, edge-disjointness,
// exact coverage. Reports the first violation.
VerifyResult verify(const Decomposition& d);

struct SearchBudget {
  long max_nodes = 50'000'000;
  std::chrono::milliseconds wall{60'000};
  std::size_t edge_cap = 60;
};

enum class SearchStatus { found, none, budget };

struct BruteResult {
  SearchStatus status = SearchStatus::none;
  std::optional<Decomposition> decomposition;
  long nodes = 0;
};

// Exact cover of E(g) by copies of t. Throws InputError when |E(g)| is not
// n |E(t)| and BudgetExceeded (a refusal) when |E(g)| exceeds the edge cap.
BruteResult brute_decompose(const Graph& g, const Tree& t, const SearchBudget& budget = {});

// Maximum matching; on failure the Hall violator is filled in.
BipartiteMatching exact_perfect_matching(const BipartiteInstance& b);

struct PathDemand {
  int from, to, length;
};

struct PathSystem {
  std::vector<std::vector<std::vector<int>>> paths;  // per w, per demand, vertex sequence
};

// Exact search for path systems: for each w, vertex-disjoint paths with the
// demanded ends and lengths whose inner vertices avoid forbidden[w], together
// using every edge of g exactly once. Returns nullopt if none exists within
// the budget; `status` tells which.
std::optional<PathSystem> path_factor_solve(const Graph& g, const std::vector<std::vector<PathDemand>>& demands,
                                            const std::vector<VertexSet>& forbidden, const SearchBudget& budget = {},
                                            SearchStatus* status = nullptr);

// One representative of every isomorphism class of trees on `vertices` vertices.
std::vector<Tree> nonisomorphic_trees(int vertices);
// Canonical string of an unlabelled tree (AHU encoding at the centre).
std::string canonical_form(const Tree& t);

}  // namespace ringel
