#include "ringel/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <tuple>

#include "ringel/errors.hpp"

namespace ringel {

namespace {
std::size_t at(int v) { return static_cast<std::size_t>(v); }

bool intersect(const std::vector<int>& a, const std::vector<int>& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return true;
    if (a[i] < b[j]) ++i;
    else ++j;
  }
  return false;
}
}  // namespace

WeightedHypergraph::WeightedHypergraph(int vertices, int r)
    : r_(r), incident_(at(vertices)), degree_(at(vertices), 0.0) {
  if (vertices < 0 || r < 1) throw InputError("hypergraph needs vertices >= 0 and r >= 1");
}

int WeightedHypergraph::add_edge(std::vector<int> verts, double w) {
  std::sort(verts.begin(), verts.end());
  if (verts.empty() || static_cast<int>(verts.size()) > r_) throw InputError("hyperedge size outside [1, r]");
  if (std::adjacent_find(verts.begin(), verts.end()) != verts.end()) throw InputError("hyperedge repeats a vertex");
  if (verts.front() < 0 || verts.back() >= vertices()) throw InputError("hyperedge vertex out of range");
  if (!(w > 0)) throw InputError("hyperedge weight must be positive");
  const int id = static_cast<int>(edges_.size());
  for (int v : verts) {
    incident_[at(v)].push_back(id);
    degree_[at(v)] += w;
  }
  edges_.push_back({std::move(verts), w});
  return id;
}

void WeightedHypergraph::set_weight(int e, double w) {
  if (!(w > 0)) throw InputError("hyperedge weight must be positive");
  auto& ed = edges_[at(e)];
  for (int v : ed.verts) degree_[at(v)] += w - ed.w;
  ed.w = w;
}

double WeightedHypergraph::weighted_degree_scan(int v) const {
  double s = 0;
  for (int e : incident_[at(v)]) s += edges_[at(e)].w;
  return s;
}

double WeightedHypergraph::weighted_codegree(int u, int v) const {
  double s = 0;
  const auto& small = incident_[at(u)].size() < incident_[at(v)].size() ? incident_[at(u)] : incident_[at(v)];
  const int other = &small == &incident_[at(u)] ? v : u;
  for (int e : small) {
    const auto& vs = edges_[at(e)].verts;
    if (std::binary_search(vs.begin(), vs.end(), other)) s += edges_[at(e)].w;
  }
  return s;
}

double WeightedHypergraph::max_degree() const {
  double best = 0;
  for (double d : degree_) best = std::max(best, d);
  return best;
}

double WeightedHypergraph::max_codegree(int* bu, int* bv) const {
  std::unordered_map<std::uint64_t, double> co;
  for (const auto& e : edges_)
    for (std::size_t i = 0; i < e.verts.size(); ++i)
      for (std::size_t j = i + 1; j < e.verts.size(); ++j)
        co[(static_cast<std::uint64_t>(e.verts[i]) << 32) | static_cast<std::uint32_t>(e.verts[j])] += e.w;
  double best = 0;
  std::uint64_t key = 0;
  for (auto [k, w] : co)
    if (w > best || (w == best && k < key)) {
      best = w;
      key = k;
    }
  if (bu) *bu = best > 0 ? static_cast<int>(key >> 32) : -1;
  if (bv) *bv = best > 0 ? static_cast<int>(key & 0xffffffffULL) : -1;
  return best;
}

LoadCheck check_load(const WeightedHypergraph& h, double C, double beta, double slack) {
  LoadCheck lc;
  for (int e = 0; e < static_cast<int>(h.edge_count()); ++e)
    if (h.edge(e).w < 1.0 / C - slack) {
      lc.ok = false;
      lc.edge = e;
      lc.violation = "edge " + std::to_string(e) + " has weight below 1/C";
      return lc;
    }
  for (int v = 0; v < h.vertices(); ++v)
    if (h.weighted_degree(v) > 1 + slack) {
      lc.ok = false;
      lc.vertex = v;
      lc.violation = "vertex " + std::to_string(v) + " has weighted degree " + std::to_string(h.weighted_degree(v));
      return lc;
    }
  int u = -1, v = -1;
  double co = h.max_codegree(&u, &v);
  if (co >= std::pow(C, -beta)) {
    lc.ok = false;
    lc.u = u;
    lc.v = v;
    lc.violation = "pair " + std::to_string(u) + "," + std::to_string(v) + " has weighted codegree " + std::to_string(co);
  }
  return lc;
}

CleanFunction::CleanFunction(std::string name, std::size_t edges)
    : name_(std::move(name)), single_(edges, 0.0), pairs_by_edge_(edges) {}

CleanFunction CleanFunction::size(std::size_t edges) {
  CleanFunction f("size", edges);
  std::fill(f.single_.begin(), f.single_.end(), 1.0);
  return f;
}

void CleanFunction::set_single(int e, double value) {
  if (value < 0) throw InputError("clean functions are non-negative");
  single_.at(at(e)) = value;
}

void CleanFunction::set_pair(const WeightedHypergraph& h, int e, int f, double value) {
  if (value < 0) throw InputError("clean functions are non-negative");
  if (e == f || intersect(h.edge(e).verts, h.edge(f).verts))
    throw InputError("clean function must vanish on intersecting edges");
  pairs_by_edge_.at(at(e)).emplace_back(f, value);
  pairs_by_edge_.at(at(f)).emplace_back(e, value);
  pairs_.emplace_back(e, f, value);
}

double CleanFunction::evaluate(const std::vector<int>& matching) const {
  std::vector<char> in(single_.size(), 0);
  for (int e : matching) in[at(e)] = 1;
  double s = 0;
  for (int e : matching) s += single_[at(e)];
  for (auto [e, f, val] : pairs_)
    if (in[at(e)] && in[at(f)]) s += val;
  return s;
}

double CleanFunction::gain(int e, const std::vector<char>& in) const {
  double s = single_[at(e)];
  for (auto [f, val] : pairs_by_edge_[at(e)])
    if (in[at(f)]) s += val;
  return s;
}

double CleanFunction::expectation(const WeightedHypergraph& h, const std::vector<double>& w) const {
  (void)h;
  double s = 0;
  for (std::size_t e = 0; e < single_.size(); ++e) s += single_[e] * w[e];
  for (auto [e, f, val] : pairs_) s += val * w[at(e)] * w[at(f)];
  return s;
}

double CleanFunction::expectation_through(const WeightedHypergraph& h, const std::vector<double>& w, int e) const {
  (void)h;
  double s = single_[at(e)] * w[at(e)];
  for (auto [f, val] : pairs_by_edge_[at(e)]) s += val * w[at(e)] * w[at(f)];
  return s;
}

NibbleResult nibble_match(const WeightedHypergraph& h, const std::vector<CleanFunction>& fs, Rng& rng,
                          const NibbleOptions& opts, const std::vector<double>* weights) {
  if (opts.bite <= 0 || opts.bite > 1) throw InputError("nibble bite must lie in (0, 1]");
  if (opts.rounds < 0) throw InputError("nibble rounds must be non-negative");
  const std::size_t m = h.edge_count();
  std::vector<double> w(m);
  for (std::size_t e = 0; e < m; ++e) w[e] = weights ? (*weights)[e] : h.edge(static_cast<int>(e)).w;

  NibbleResult res;
  std::vector<char> covered(at(h.vertices()), 0), in(m, 0);
  std::vector<double> tracked(fs.size(), 0.0);
  int covered_count = 0;
  auto take = [&](int e) {
    for (std::size_t k = 0; k < fs.size(); ++k) tracked[k] += fs[k].gain(e, in);
    in[at(e)] = 1;
    res.matching.push_back(e);
    for (int v : h.edge(e).verts) {
      covered[at(v)] = 1;
      ++covered_count;
    }
  };
  auto alive = [&](int e) {
    for (int v : h.edge(e).verts)
      if (covered[at(v)]) return false;
    return true;
  };

  std::vector<int> live(m);
  for (std::size_t e = 0; e < m; ++e) live[e] = static_cast<int>(e);
  std::vector<int> hits(at(h.vertices()), 0);
  std::vector<int> active;
  for (int round = 0; round < opts.rounds && !live.empty(); ++round) {
    active.clear();
    for (int e : live)
      if (coin(rng, opts.bite * w[at(e)])) active.push_back(e);
    for (int e : active)
      for (int v : h.edge(e).verts) ++hits[at(v)];
    for (int e : active) {
      bool lone = true;
      for (int v : h.edge(e).verts) lone = lone && hits[at(v)] == 1;
      if (lone) take(e);
    }
    for (int e : active)
      for (int v : h.edge(e).verts) hits[at(v)] = 0;
    live.erase(std::remove_if(live.begin(), live.end(), [&](int e) { return !alive(e); }), live.end());
    res.covered_after_round.push_back(covered_count);
  }
  if (opts.greedy) {
    shuffle(live, rng);
    for (int e : live)
      if (alive(e)) {
        take(e);
        ++res.greedy_added;
      }
  }

  for (std::size_t k = 0; k < fs.size(); ++k) {
    FunctionReport r;
    r.name = fs[k].name();
    r.f_matching = tracked[k];
    r.f_scratch = fs[k].evaluate(res.matching);
    r.f_expected = fs[k].expectation(h, w);
    r.rel_dev = r.f_expected != 0 ? (r.f_matching - r.f_expected) / r.f_expected : 0;
    if (r.f_expected > 0 && m > 0)
      for (int s = 0; s < opts.spread_samples; ++s) {
        int e = uniform_index(rng, static_cast<int>(m));
        r.spread_ratio = std::max(r.spread_ratio, fs[k].expectation_through(h, w, e) / r.f_expected);
      }
    res.reports.push_back(std::move(r));
  }
  return res;
}

std::vector<double> normalized_weights(const WeightedHypergraph& h, double eps) {
  std::vector<double> out(h.edge_count());
  for (std::size_t e = 0; e < out.size(); ++e) {
    const auto& ed = h.edge(static_cast<int>(e));
    double q = 1;
    for (int v : ed.verts) q = std::max(q, h.weighted_degree(v));
    out[e] = (1 - 0.5 * eps) * ed.w / q;
  }
  return out;
}

bool is_matching(const WeightedHypergraph& h, const std::vector<int>& edges) {
  std::vector<char> seen(at(h.vertices()), 0);
  for (int e : edges)
    for (int v : h.edge(e).verts) {
      if (seen[at(v)]) return false;
      seen[at(v)] = 1;
    }
  return true;
}

WeightedHypergraph near_regular_hypergraph(int vertices, int r, int degree, Rng& rng) {
  if (r < 1 || degree < 1) throw InputError("near_regular_hypergraph: r and degree must be positive");
  WeightedHypergraph h(vertices, r);
  std::unordered_map<std::uint64_t, char> pairs;
  std::vector<int> perm(at(vertices));
  for (int i = 0; i < vertices; ++i) perm[at(i)] = i;
  for (int layer = 0; layer < degree; ++layer) {
    shuffle(perm, rng);
    for (int start = 0; start + r <= vertices; start += r) {
      std::vector<int> e(perm.begin() + start, perm.begin() + start + r);
      std::sort(e.begin(), e.end());
      bool fresh = true;
      for (std::size_t i = 0; i < e.size() && fresh; ++i)
        for (std::size_t j = i + 1; j < e.size() && fresh; ++j)
          fresh = !pairs.count((static_cast<std::uint64_t>(e[i]) << 32) | static_cast<std::uint32_t>(e[j]));
      if (!fresh) continue;
      for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = i + 1; j < e.size(); ++j)
          pairs[(static_cast<std::uint64_t>(e[i]) << 32) | static_cast<std::uint32_t>(e[j])] = 1;
      h.add_edge(std::move(e), 1.0 / degree);
    }
  }
  return h;
}

void write_report_csv(std::ostream& os, const std::vector<FunctionReport>& reports) {
  os << "f_name,f_M,f_expect,rel_dev\n";
  for (const auto& r : reports) os << r.name << ',' << r.f_matching << ',' << r.f_expected << ',' << r.rel_dev << '\n';
}

}  // namespace ringel
