#pragma once

#include <iosfwd>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "ringel/rng.hpp"

namespace ringel {

struct HyperEdge {
  std::vector<int> verts;  // sorted, distinct
  double w = 0;
};

// Edges of at most r vertices with positive weights. Weighted degrees are
// kept up to date as edges are added.
class WeightedHypergraph {
 public:
  WeightedHypergraph() = default;
  WeightedHypergraph(int vertices, int r);

  int vertices() const { return static_cast<int>(degree_.size()); }
  int rank() const { return r_; }
  std::size_t edge_count() const { return edges_.size(); }
  const HyperEdge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }
  const std::vector<HyperEdge>& edges() const { return edges_; }
  const std::vector<int>& incident(int v) const { return incident_[static_cast<std::size_t>(v)]; }

  int add_edge(std::vector<int> verts, double w);
  void set_weight(int e, double w);

  double weighted_degree(int v) const { return degree_[static_cast<std::size_t>(v)]; }
  // Sum over incident edges, ignoring the running total.
  double weighted_degree_scan(int v) const;
  double weighted_codegree(int u, int v) const;

  double max_degree() const;
  // Largest codegree over all pairs inside some edge, with the pair.
  double max_codegree(int* u = nullptr, int* v = nullptr) const;

 private:
  int r_ = 0;
  std::vector<HyperEdge> edges_;
  std::vector<std::vector<int>> incident_;
  std::vector<double> degree_;
};

struct LoadCheck {
  bool ok = true;
  std::string violation;
  int edge = -1, vertex = -1, u = -1, v = -1;
};

// Weight floor 1/C, degrees at most 1 and codegrees below C^-beta.
LoadCheck check_load(const WeightedHypergraph& h, double C, double beta, double slack = 1e-9);

// A test function on edge sets of size at most two: a value per edge and a
// value per listed pair of disjoint edges. f(I) is zero for every set that is
// not listed, so in particular for every non-matching.
class CleanFunction {
 public:
  CleanFunction(std::string name, std::size_t edges);
  static CleanFunction size(std::size_t edges);  // f(M) = |M|

  const std::string& name() const { return name_; }
  int ell() const { return pairs_.empty() ? 1 : 2; }
  void set_single(int e, double value);
  // Throws InputError if the two edges intersect.
  void set_pair(const WeightedHypergraph& h, int e, int f, double value);

  // Sum over sub-multisets of `matching` of size one and two.
  double evaluate(const std::vector<int>& matching) const;
  // Contribution of adding e to a set whose membership is `in`.
  double gain(int e, const std::vector<char>& in) const;
  // f(H, w): sum over listed sets of value times the product of weights.
  double expectation(const WeightedHypergraph& h, const std::vector<double>& w) const;
  // f_{e}(H, w): the part of the expectation from sets containing e.
  double expectation_through(const WeightedHypergraph& h, const std::vector<double>& w, int e) const;

 private:
  std::string name_;
  std::vector<double> single_;
  std::vector<std::vector<std::pair<int, double>>> pairs_by_edge_;
  std::vector<std::tuple<int, int, double>> pairs_;
};

struct FunctionReport {
  std::string name;
  double f_matching = 0;    // tracked while the matching grows
  double f_scratch = 0;     // recomputed on the final matching
  double f_expected = 0;    // f(H, w)
  double rel_dev = 0;
  double spread_ratio = 0;  // largest sampled f_{e}(H, w) / f(H, w)
};

struct NibbleOptions {
  int rounds = 300;
  double bite = 0.1;
  bool greedy = true;
  int spread_samples = 32;
};

struct NibbleResult {
  std::vector<int> matching;  // edge indices, in order of selection
  std::vector<int> covered_after_round;
  int greedy_added = 0;
  std::vector<FunctionReport> reports;
};

// Activation weights default to the edge weights of h.
NibbleResult nibble_match(const WeightedHypergraph& h, const std::vector<CleanFunction>& fs, Rng& rng,
                          const NibbleOptions& opts, const std::vector<double>* weights = nullptr);

// w'(e) = (1 - eps/2) w(e) / Q(e), Q(e) = max(1, largest w-degree of a vertex of e).
std::vector<double> normalized_weights(const WeightedHypergraph& h, double eps);

bool is_matching(const WeightedHypergraph& h, const std::vector<int>& edges);

// Union of `degree` random partitions of the vertices into r-sets, each edge
// of weight 1/degree. Edges that would repeat a pair are dropped, so
// codegrees stay at most 1/degree and degrees at most 1.
WeightedHypergraph near_regular_hypergraph(int vertices, int r, int degree, Rng& rng);

void write_report_csv(std::ostream& os, const std::vector<FunctionReport>& reports);

}  // namespace ringel
