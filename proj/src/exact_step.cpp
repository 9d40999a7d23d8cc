#include "ringel/exact_step.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>

#include "ringel/errors.hpp"
#include "ringel/matching.hpp"

namespace ringel {
namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }
std::size_t cell(int row, int n, int col) { return at(row) * at(n) + at(col); }

long move_budget(int n, const ParamConfig* cfg = nullptr) {
  const double m = std::max(n, 2);
  const double factor = cfg ? cfg->walk_budget_factor : 100;
  return static_cast<long>(factor * m * std::log(m)) + 1;
}

std::string num(long v) { return std::to_string(v); }

// Runs MATCH on a local instance and returns the y index chosen for every x.
std::vector<int> local_match(int x_size, int y_size, const std::vector<std::vector<int>>& nbrs, const EdgeList& z,
                             Rng& rng, const ParamConfig& cfg, const std::string& stage, const std::string& where) {
  if (x_size == 0) return {};
  if (x_size != y_size)
    throw AbortError(stage, where + ": " + num(x_size) + " demands against " + num(y_size) + " candidates");
  BipartiteInstance inst;
  inst.x_size = x_size;
  inst.y_size = y_size;
  for (int x = 0; x < x_size; ++x)
    for (int y : nbrs[at(x)]) inst.b.emplace_back(x, y);
  inst.z = z;
  return match_or_abort(inst, rng, cfg, stage, where);
}

}  // namespace

void write_progress_csv(std::ostream& os, const std::vector<ProgressRow>& rows) {
  os << "step,value,moves\n";
  for (const auto& r : rows) os << r.step << ',' << r.value << ',' << r.moves << '\n';
}

Digraph degree_target_orient(const Graph& g, const std::vector<int>& targets, Rng& rng, OrientationTrace* trace,
                             long budget) {
  const int n = g.n();
  if (static_cast<int>(targets.size()) != n) throw InputError("degree_target_orient: one target per vertex needed");
  long total = 0;
  for (int t : targets) {
    if (t < 0) throw InputError("degree_target_orient: negative target");
    total += t;
  }
  if (total != static_cast<long>(g.edge_count()))
    throw InputError("degree_target_orient: targets sum to " + num(total) + ", graph has " + num(static_cast<long>(g.edge_count())) +
                     " edges");
  if (budget <= 0) budget = move_budget(n);

  std::vector<char> dir(at(n) * at(n), 0);  // dir[u n + v]: arc u -> v
  std::vector<int> outdeg(at(n), 0);
  for (auto [u, v] : g.edges()) {
    if (coin(rng, 0.5)) std::swap(u, v);
    dir[cell(u, n, v)] = 1;
    ++outdeg[at(u)];
  }
  auto imbalance = [&] {
    long s = 0;
    for (int x = 0; x < n; ++x) s += std::abs(outdeg[at(x)] - targets[at(x)]);
    return s;
  };
  auto middles = [&](int x, int y) {
    std::vector<int> zs;
    for (int z : g.neighbors(y))
      if (dir[cell(y, n, z)] && dir[cell(z, n, x)]) zs.push_back(z);
    return zs;
  };

  long current = imbalance();
  if (trace) trace->imbalance.push_back(current);
  long moves = 0;
  while (current > 0) {
    if (moves >= budget) throw StuckError("degree_target_orient: move budget exhausted", current);
    std::vector<int> deficit, surplus;
    for (int x = 0; x < n; ++x) {
      if (outdeg[at(x)] < targets[at(x)]) deficit.push_back(x);
      if (outdeg[at(x)] > targets[at(x)]) surplus.push_back(x);
    }
    int x = -1, y = -1;
    std::vector<int> zs;
    for (int attempt = 0; attempt <= n && zs.empty(); ++attempt) {
      x = pick(rng, deficit);
      y = pick(rng, surplus);
      zs = middles(x, y);
      if (zs.empty() && trace) ++trace->resamples;
    }
    if (zs.empty()) {
      if (trace) ++trace->exhaustive_scans;
      std::vector<std::pair<int, int>> open;
      for (int a : deficit)
        for (int b : surplus)
          if (!middles(a, b).empty()) open.emplace_back(a, b);
      if (!open.empty()) {
        std::tie(x, y) = pick(rng, open);
        zs = middles(x, y);
      } else {
        // No two-step path anywhere: reverse a shortest directed path from
        // the surplus side to the deficit side instead.
        std::vector<int> from(at(n), -2);
        std::deque<int> queue;
        for (int b : surplus) {
          from[at(b)] = -1;
          queue.push_back(b);
        }
        int hit = -1;
        while (!queue.empty() && hit < 0) {
          const int v = queue.front();
          queue.pop_front();
          for (int u : g.neighbors(v))
            if (dir[cell(v, n, u)] && from[at(u)] == -2) {
              from[at(u)] = v;
              if (outdeg[at(u)] < targets[at(u)]) {
                hit = u;
                break;
              }
              queue.push_back(u);
            }
        }
        if (hit < 0) throw StuckError("degree_target_orient: no surplus vertex reaches a deficit vertex", current);
        for (int v = hit; from[at(v)] >= 0; v = from[at(v)]) {
          dir[cell(from[at(v)], n, v)] = 0;
          dir[cell(v, n, from[at(v)])] = 1;
          y = from[at(v)];
        }
        x = hit;
        if (trace) ++trace->path_reversals;
      }
    }
    if (zs.empty()) {
      // already reversed above
    } else {
      const int z = pick(rng, zs);
      dir[cell(y, n, z)] = 0;
      dir[cell(z, n, y)] = 1;
      dir[cell(z, n, x)] = 0;
      dir[cell(x, n, z)] = 1;
    }
    --outdeg[at(y)];
    ++outdeg[at(x)];
    current -= 2;
    ++moves;
    if (trace) trace->imbalance.push_back(current);
  }

  Digraph d(n);
  for (int u = 0; u < n; ++u)
    for (int v : g.neighbors(u))
      if (dir[cell(u, n, v)]) d.add_arc(u, v);
  return d;
}

Graph free_graph(const Embeddings& emb) {
  Graph g(emb.n());
  for (auto [u, v] : emb.host().edges())
    if (!emb.used(u, v)) g.add_edge(u, v);
  return g;
}

FinishReport small_stars(Embeddings& emb, const std::vector<LeafStar>& stars, const PairFilter& allowed, Rng& rng,
                         const ParamConfig& cfg, OrientationTrace* trace) {
  FinishReport rep;
  const int n = emb.n();
  if (stars.empty()) return rep;

  struct Demand {
    int leaf, w;
  };
  std::vector<std::vector<Demand>> demand(at(n));
  for (const auto& s : stars)
    for (int w = 0; w < n; ++w) {
      if (!emb.placed(w, s.center)) throw PipelineOrderError("small_stars: centre " + num(s.center) + " unplaced in copy " + num(w));
      for (int leaf : s.leaves)
        if (!emb.placed(w, leaf)) demand[at(emb.image(w, s.center))].push_back({leaf, w});
    }

  const Graph left = free_graph(emb);
  std::vector<int> targets(at(n));
  long total = 0;
  for (int x = 0; x < n; ++x) {
    targets[at(x)] = static_cast<int>(demand[at(x)].size());
    total += targets[at(x)];
    if (targets[at(x)] > left.degree(x))
      throw InfeasibleError("small_stars: " + num(targets[at(x)]) + " leaves demanded at " + num(x) + " with only " +
                            num(left.degree(x)) + " free edges");
  }
  if (total != static_cast<long>(left.edge_count()))
    throw InfeasibleError("small_stars: " + num(total) + " leaves demanded for " + num(static_cast<long>(left.edge_count())) +
                          " free edges");

  OrientationTrace local;
  OrientationTrace& tr = trace ? *trace : local;
  const std::size_t before = tr.imbalance.size();
  Digraph d;
  try {
    d = degree_target_orient(left, targets, rng, &tr, move_budget(n, &cfg));
  } catch (const StuckError& e) {
    throw AbortError("small_stars", std::string(e.what()) + " (imbalance " + num(e.residual) + ")");
  }
  for (std::size_t k = before; k < tr.imbalance.size(); ++k) {
    const long moves = static_cast<long>(k - before);
    rep.progress.push_back({"orient", tr.imbalance[k], moves});
    if (k > before && tr.imbalance[k - 1] - tr.imbalance[k] != 2) ++rep.violations;
  }
  rep.moves = static_cast<long>(tr.imbalance.size() - before) - 1;

  std::vector<int> xs(at(n));
  for (int x = 0; x < n; ++x) xs[at(x)] = x;
  for (int x : xs) {
    const auto& dem = demand[at(x)];
    const auto& outs = d.out(x);
    std::vector<std::vector<int>> nbrs(dem.size());
    for (std::size_t k = 0; k < dem.size(); ++k)
      for (std::size_t j = 0; j < outs.size(); ++j) {
        const int y = outs[j];
        if (!emb.in_image(dem[k].w, y) && allowed(dem[k].w, y)) nbrs[k].push_back(static_cast<int>(j));
      }
    const auto mate = local_match(static_cast<int>(dem.size()), static_cast<int>(outs.size()), nbrs, {}, rng, cfg,
                                  "small_stars", "leaves at " + num(x));
    for (std::size_t k = 0; k < dem.size(); ++k) emb.place(dem[k].w, dem[k].leaf, outs[at(mate[k])]);
    rep.progress.push_back({"match", static_cast<long>(dem.size()), rep.moves});
  }
  return rep;
}

VertexSet odd_vertices(const Embeddings& emb, const PathsInput& in) {
  const int n = emb.n();
  std::vector<int> ends(at(n), 0);
  for (const auto& path : in.bare_paths)
    for (int w = 0; w < n; ++w) {
      ++ends[at(emb.image(w, path.front()))];
      ++ends[at(emb.image(w, path.back()))];
    }
  const Graph left = free_graph(emb);
  VertexSet odd;
  for (int x = 0; x < n; ++x)
    if ((left.degree(x) - ends[at(x)]) % 2 != 0) odd.push_back(x);
  return odd;
}

namespace {

// Places `leaf` (attached at `anchor`) in each copy of `copies`, choosing
// images among `targets` through one MATCH.
void place_leaf(Embeddings& emb, int anchor, int leaf, const std::vector<int>& copies, const std::vector<int>& targets,
                const PairFilter& allowed, Rng& rng, const ParamConfig& cfg, const std::string& where) {
  std::map<int, int> index;
  for (std::size_t j = 0; j < targets.size(); ++j) index[targets[j]] = static_cast<int>(j);
  std::vector<std::vector<int>> nbrs(copies.size());
  EdgeList z;
  for (std::size_t k = 0; k < copies.size(); ++k) {
    const int w = copies[k];
    const int a = emb.image(w, anchor);
    for (std::size_t j = 0; j < targets.size(); ++j) {
      const int v = targets[j];
      if (allowed(w, v) && emb.can_place(w, leaf, v)) nbrs[k].push_back(static_cast<int>(j));
    }
    if (auto it = index.find(a); it != index.end()) z.emplace_back(static_cast<int>(k), it->second);
  }
  const auto mate = local_match(static_cast<int>(copies.size()), static_cast<int>(targets.size()), nbrs, z, rng, cfg,
                                "paths", where);
  for (std::size_t k = 0; k < copies.size(); ++k) {
    const int v = targets[at(mate[k])];
    if (!emb.can_place(copies[k], leaf, v))
      throw AbortError("paths", where + ": matched edge already used in copy " + num(copies[k]));
    emb.place(copies[k], leaf, v);
  }
}

}  // namespace

long reserved_length(const PathsInput& in, int w) {
  if (w < 0 || w >= static_cast<int>(in.reserve.size())) return 0;
  const int on = in.order.n();
  long total = 0;
  for (const auto& iv : in.reserve[at(w)]) {
    const int len = 8 * cyclic_distance(on, iv.start % on, (iv.start + iv.length - 1) % on);
    if (len > 0) total += len + 2;
  }
  return total;
}

FinishReport paths_parity_and_reserve(Embeddings& emb, const PathsInput& in, const PairFilter& allowed, Rng& rng,
                                      const ParamConfig& cfg, const SearchBudget& solver) {
  FinishReport rep;
  const int n = emb.n();
  for (auto [a, leaf] : {in.leaf1, in.leaf2})
    if (a < 0 || leaf < 0) throw InputError("paths: both removed leaves are required");

  // Step i: the odd set.
  const VertexSet odd = odd_vertices(emb, in);
  rep.progress.push_back({"odd", static_cast<long>(odd.size()), 0});
  if (odd.size() % 2 != 0) throw AbortError("paths", "internal inconsistency: odd set has odd size " + num(static_cast<long>(odd.size())));

  std::vector<int> all(at(n));
  for (int v = 0; v < n; ++v) all[at(v)] = v;

  // Step ii: the first leaf everywhere.
  place_leaf(emb, in.leaf1.first, in.leaf1.second, all, all, allowed, rng, cfg, "first leaf");

  // Steps iii-iv: the second leaf goes twice to half of the odd set and never
  // to the other half.
  const int half = static_cast<int>(odd.size()) / 2;
  VertexSet odd_kept = odd;
  shuffle(odd_kept, rng);
  odd_kept.resize(at(half));
  std::sort(odd_kept.begin(), odd_kept.end());
  std::vector<int> copies = all;
  shuffle(copies, rng);
  std::vector<int> first(copies.begin(), copies.begin() + half), rest(copies.begin() + half, copies.end());
  std::sort(first.begin(), first.end());
  std::sort(rest.begin(), rest.end());
  std::vector<char> in_odd(at(n), 0), kept(at(n), 0);
  for (int x : odd) in_odd[at(x)] = 1;
  for (int x : odd_kept) kept[at(x)] = 1;
  std::vector<int> others;
  for (int v = 0; v < n; ++v)
    if (!in_odd[at(v)] || kept[at(v)]) others.push_back(v);
  if (half > 0) place_leaf(emb, in.leaf2.first, in.leaf2.second, first, odd_kept, allowed, rng, cfg, "second leaf (odd half)");
  place_leaf(emb, in.leaf2.first, in.leaf2.second, rest, others, allowed, rng, cfg, "second leaf");
  rep.progress.push_back({"leaves", 2L * n, 0});

  // Step v: reserve a centred subpath of each long enough bare path.
  struct Reserved {
    int path, from, to;  // subpath positions
    int x, y_next;       // pinned host ends
  };
  std::vector<std::vector<Reserved>> reserved(at(n));
  std::vector<std::vector<PathDemand>> demands(at(n));
  long reserve_total = 0;
  for (int w = 0; w < n && w < static_cast<int>(in.reserve.size()); ++w) {
    std::vector<char> taken(in.bare_paths.size(), 0);
    for (const auto& iv : in.reserve[at(w)]) {
      const int on = in.order.n();
      const int x = in.order.vertex(iv.start % on);
      const int y = in.order.vertex((iv.start + iv.length - 1) % on);
      const int y_next = in.order.succ(y);
      const int len = 8 * cyclic_distance(on, in.order.label(x), in.order.label(y));
      if (len == 0) continue;
      int chosen = -1;
      for (std::size_t k = 0; k < in.bare_paths.size(); ++k)
        if (!taken[k] && static_cast<int>(in.bare_paths[k].size()) - 1 >= len + 2) {
          chosen = static_cast<int>(k);
          break;
        }
      if (chosen < 0)
        throw AbortError("paths", "reservation deficit in copy " + num(w) + ": no bare path of length " + num(len + 2));
      taken[at(chosen)] = 1;
      const int edges = static_cast<int>(in.bare_paths[at(chosen)].size()) - 1;
      const int from = (edges - len) / 2;
      reserved[at(w)].push_back({chosen, from, from + len, x, y_next});
      demands[at(w)].push_back({x, y_next, len});
      reserve_total += len + 2;
    }
  }
  rep.progress.push_back({"reserve", reserve_total, 0});

  // Pinned ends first, then the greedy walk along every bare path.
  std::vector<int> order = all;
  shuffle(order, rng);
  long greedy = 0;
  for (int w : order) {
    std::vector<std::pair<int, int>> skip(in.bare_paths.size(), {-1, -1});
    for (const auto& r : reserved[at(w)]) {
      const auto& path = in.bare_paths[at(r.path)];
      skip[at(r.path)] = {r.from, r.to};
      for (auto [pos, x] : {std::pair{r.from, r.x}, std::pair{r.to, r.y_next}}) {
        if (emb.placed(w, path[at(pos)]) || !emb.can_place(w, path[at(pos)], x))
          throw AbortError("paths", "reserved end " + num(x) + " unavailable in copy " + num(w));
        emb.place(w, path[at(pos)], x);
      }
    }
    for (std::size_t k = 0; k < in.bare_paths.size(); ++k) {
      const auto& path = in.bare_paths[k];
      for (std::size_t pos = 1; pos + 1 < path.size(); ++pos) {
        const int u = path[pos];
        if (emb.placed(w, u)) continue;
        if (skip[k].first >= 0 && static_cast<int>(pos) > skip[k].first && static_cast<int>(pos) < skip[k].second) continue;
        std::vector<int> cand;
        for (int z = 0; z < n; ++z)
          if (allowed(w, z) && emb.can_place(w, u, z)) cand.push_back(z);
        if (cand.empty())
          throw AbortError("paths", "greedy dead end at tree vertex " + num(u) + " in copy " + num(w));
        emb.place(w, u, pick(rng, cand));
        ++greedy;
      }
    }
  }
  rep.moves = greedy;
  rep.progress.push_back({"greedy", greedy, greedy});

  // What is left must split into the reserved paths: each vertex has free
  // degree of the same parity as the number of reserved ends on it.
  const Graph left = free_graph(emb);
  std::vector<int> ends(at(n), 0);
  for (const auto& dw : demands)
    for (const auto& dm : dw) {
      ++ends[at(dm.from)];
      ++ends[at(dm.to)];
    }
  for (int x = 0; x < n; ++x)
    if ((left.degree(x) - ends[at(x)]) % 2 != 0) {
      ++rep.violations;
      throw AbortError("paths", "internal inconsistency: free degree parity wrong at " + num(x));
    }
  if (left.edge_count() == 0 && reserve_total == 0) return rep;

  std::vector<VertexSet> forbidden(at(n));
  for (int w = 0; w < n; ++w)
    for (int x = 0; x < n; ++x)
      if (emb.in_image(w, x)) forbidden[at(w)].push_back(x);
  SearchStatus status{};
  std::optional<PathSystem> sys;
  try {
    sys = path_factor_solve(left, demands, forbidden, solver, &status);
  } catch (const InputError& e) {
    throw AbortError("paths", std::string("path systems: ") + e.what());
  } catch (const BudgetExceeded& e) {
    throw AbortError("paths", std::string("path systems: ") + e.what());
  }
  if (!sys) throw AbortError("paths", status == SearchStatus::budget ? "path systems: search budget exhausted" : "path systems: none exist");
  for (int w = 0; w < n; ++w)
    for (std::size_t k = 0; k < reserved[at(w)].size(); ++k) {
      const auto& r = reserved[at(w)][k];
      const auto& path = in.bare_paths[at(r.path)];
      const auto& hp = sys->paths[at(w)][k];
      for (int pos = r.from + 1; pos < r.to; ++pos) emb.place(w, path[at(pos)], hp[at(pos - r.from)]);
    }
  rep.progress.push_back({"path_systems", static_cast<long>(left.edge_count()), rep.moves});
  return rep;
}

// ---------------------------------------------------------------------------
// Large stars.

namespace {

struct DArc {
  int from, to, owner;
  bool moved = false;
};

class LargeStars {
 public:
  LargeStars(Embeddings& emb, const ParamConfig& cfg, Rng& rng, LargeStarsReport& rep)
      : emb_(emb), t_(emb.tree()), cfg_(cfg), rng_(rng), rep_(rep), n_(emb.n()) {}

  void run() {
    if (emb_.host().edge_count() != static_cast<std::size_t>(n_) * t_.edge_count())
      throw InputError("large_stars: host needs exactly n |E(T)| edges");
    if (emb_.placed_count() != 0) throw PipelineOrderError("large_stars: expects no copy started");
    find_stars();
    split_vertices();
    embed_forest();
    orient();
    repair();
    place_leaves();
  }

 private:
  void find_stars() {
    const int tn = t_.size();
    star_size_.assign(at(tn), 0);
    leaf_.assign(at(tn), 0);
    for (const auto& s : leaf_stars(t_)) {
      if (static_cast<double>(s.size()) >= cfg_.Lambda) stars_.push_back(s);
    }
    for (const auto& s : stars_) {
      star_size_[at(s.center)] = static_cast<int>(s.size());
      for (int l : s.leaves) leaf_[at(l)] = 1;
      total_star_ += static_cast<long>(s.size());
    }
    in_plus_.assign(at(tn), 0);
    for (int v = 0; v < tn; ++v)
      if (static_cast<double>(t_.neighbors(v).size()) >= cfg_.Lambda) in_plus_[at(v)] = 1;
    if (stars_.empty()) throw AbortError("large_stars", "no leaf star reaches " + std::to_string(cfg_.Lambda) + " leaves");
  }

  // Step i: W_1..W_3 and U^a_i.
  void split_vertices() {
    std::vector<int> ws(at(n_));
    for (int w = 0; w < n_; ++w) ws[at(w)] = w;
    shuffle(ws, rng_);
    w_part_.assign(at(n_), 0);
    for (int k = 0; k < n_; ++k) w_part_[at(ws[at(k)])] = k % 3;
    std::vector<double> weight;
    for (const auto& s : stars_) weight.push_back(static_cast<double>(s.size()));
    std::discrete_distribution<int> which(weight.begin(), weight.end());
    owner_.assign(at(n_), 0);
    u_part_.assign(at(n_), 0);
    for (int v = 0; v < n_; ++v) {
      owner_[at(v)] = stars_[at(which(rng_))].center;
      u_part_[at(v)] = uniform_index(rng_, 3);
    }
    long moved = 0;
    for (;;) {
      std::array<int, 3> wsz{}, usz{};
      for (int w = 0; w < n_; ++w) ++wsz[at(w_part_[at(w)])];
      for (int v = 0; v < n_; ++v) ++usz[at(u_part_[at(v)])];
      int over = -1, under = -1;
      for (int i = 0; i < 3; ++i) {
        if (usz[at(i)] > wsz[at(i)]) over = i;
        if (usz[at(i)] < wsz[at(i)]) under = i;
      }
      if (over < 0) break;
      std::vector<int> pool;
      for (int v = 0; v < n_; ++v)
        if (u_part_[at(v)] == over) pool.push_back(v);
      u_part_[at(pick(rng_, pool))] = under;
      ++moved;
    }
    rep_.progress.push_back({"rebalance", moved, 0});
  }

  bool in_j(int y, int x) const { return j_[cell(y, n_, x)] != 0; }

  void add_j(int y, int x) {
    if (!j_[cell(y, n_, x)]) {
      j_[cell(y, n_, x)] = 1;
      j_arcs_.emplace_back(y, x);
    }
  }

  // J arcs created by placing u at x in copy w.
  void update_j(int w, int u, int x) {
    const int a = owner_[at(x)];
    if (a != u && emb_.placed(w, a) && star_size_[at(a)] > 0) add_j(emb_.image(w, a), x);
    if (star_size_[at(u)] > 0)
      for (int v = 0; v < t_.size(); ++v)
        if (v != u && emb_.placed(w, v)) {
          const int y = emb_.image(w, v);
          if (owner_[at(y)] == u) add_j(x, y);
        }
  }

  void check_j() {
    ++rep_.j_checks;
    for (auto [y, x] : j_arcs_)
      if (in_j(x, y)) {
        ++rep_.j_two_cycles;
        rep_.notes.push_back("J 2-cycle " + num(y) + " <-> " + num(x));
        return;
      }
  }

  void place(int w, int u, int x) {
    if (!emb_.can_place(w, u, x)) throw AbortError("large_stars", "placement of " + num(u) + " at " + num(x) + " reuses an edge");
    emb_.place(w, u, x);
    update_j(w, u, x);
  }

  // Steps ii-iv.
  void embed_forest() {
    const int tn = t_.size();
    j_.assign(at(n_) * at(n_), 0);
    int root = -1;
    for (const auto& s : stars_)
      if (root < 0 || s.center < root) root = s.center;
    std::vector<int> order{root}, parent(at(tn), -1);
    std::vector<char> seen(at(tn), 0);
    seen[at(root)] = 1;
    for (std::size_t k = 0; k < order.size(); ++k)
      for (int v : t_.neighbors(order[k]))
        if (!seen[at(v)] && !leaf_[at(v)]) {
          seen[at(v)] = 1;
          parent[at(v)] = order[k];
          order.push_back(v);
        }

    for (int i = 0; i < 3; ++i) {
      std::vector<int> ws = part_copies(i), us = part_vertices(i);
      shuffle(us, rng_);
      for (std::size_t k = 0; k < ws.size(); ++k) place(ws[k], root, us[k]);
    }
    check_j();

    for (std::size_t k = 1; k < order.size(); ++k) {
      const int a = order[k];
      for (int i = 0; i < 3; ++i) {
        if (in_plus_[at(a)]) match_high(a, parent[at(a)], i);
        else match_low(a, parent[at(a)], i);
        check_j();
      }
    }
    rep_.progress.push_back({"forest", static_cast<long>(order.size()), 0});
  }

  std::vector<int> part_copies(int i) const {
    std::vector<int> out;
    for (int w = 0; w < n_; ++w)
      if (w_part_[at(w)] == i) out.push_back(w);
    return out;
  }
  std::vector<int> part_vertices(int i) const {
    std::vector<int> out;
    for (int v = 0; v < n_; ++v)
      if (u_part_[at(v)] == i) out.push_back(v);
    return out;
  }

  void match_low(int a, int prev, int i) {
    std::vector<int> ws = part_copies(i), us = part_vertices((i + 2) % 3);
    auto ok = [&](int w, int v) { return emb_.can_place(w, a, v); };
    const std::string where = "vertex " + num(a) + " part " + num(i + 1);
    while (us.size() < ws.size()) {
      std::vector<std::pair<std::size_t, int>> edges;
      for (std::size_t k = 0; k < ws.size(); ++k)
        for (int v : us)
          if (ok(ws[k], v)) edges.emplace_back(k, v);
      if (edges.empty()) throw AbortError("large_stars", where + ": no edge left while shrinking copies");
      auto [k, v] = pick(rng_, edges);
      place(ws[k], a, v);
      ws.erase(ws.begin() + static_cast<long>(k));
    }
    while (us.size() > ws.size()) us.erase(us.begin() + uniform_index(rng_, static_cast<int>(us.size())));
    run_match(a, prev, ws, us, ok, where);
  }

  void match_high(int a, int prev, int i) {
    std::vector<int> ws = part_copies(i), us = part_vertices(i);
    auto ok = [&](int w, int v) {
      if (!emb_.can_place(w, a, v)) return false;
      const int b = owner_[at(v)];
      if (emb_.placed(w, b) && in_j(v, emb_.image(w, b))) return false;
      if (star_size_[at(a)] > 0)
        for (int x = 0; x < n_; ++x)
          if (owner_[at(x)] == a && emb_.in_image(w, x) && in_j(x, v)) return false;
      return true;
    };
    run_match(a, prev, ws, us, ok, "vertex " + num(a) + " part " + num(i + 1));
  }

  template <class Ok>
  void run_match(int a, int prev, const std::vector<int>& ws, const std::vector<int>& us, Ok ok, const std::string& where) {
    std::map<int, int> index;
    for (std::size_t j = 0; j < us.size(); ++j) index[us[j]] = static_cast<int>(j);
    std::vector<std::vector<int>> nbrs(ws.size());
    EdgeList z;
    for (std::size_t k = 0; k < ws.size(); ++k) {
      const int w = ws[k];
      for (std::size_t j = 0; j < us.size(); ++j)
        if (ok(w, us[j])) nbrs[k].push_back(static_cast<int>(j));
      auto add_z = [&](int v) {
        if (auto it = index.find(v); it != index.end()) z.emplace_back(static_cast<int>(k), it->second);
      };
      add_z(emb_.image(w, prev));
      if (star_size_[at(a)] > 0)
        for (int x = 0; x < n_; ++x)
          if (owner_[at(x)] == a && emb_.in_image(w, x)) add_z(x);
    }
    const auto mate = local_match(static_cast<int>(ws.size()), static_cast<int>(us.size()), nbrs, z, rng_, cfg_,
                                  "large_stars", where);
    for (std::size_t k = 0; k < ws.size(); ++k) place(ws[k], a, us[at(mate[k])]);
  }

  // Step v.
  void orient() {
    // The copy in which centre a sits on y; a permutation since every centre
    // was matched perfectly in each part.
    holder_.assign(at(t_.size()) * at(n_), -1);
    for (const auto& s : stars_)
      for (int w = 0; w < n_; ++w) holder_[cell(s.center, n_, emb_.image(w, s.center))] = w;
    arc_id_.assign(at(n_) * at(n_), -1);
    od_.assign(at(n_) * at(n_), 0);
    occ_.assign(at(n_) * at(n_), 0);
    out_.assign(at(n_), {});
    long forced = 0;
    for (auto [x, y] : emb_.host().edges()) {
      if (emb_.used(x, y)) continue;
      bool toward_x;  // arc y -> x
      if (in_j(x, y)) toward_x = true, ++forced;
      else if (in_j(y, x)) toward_x = false, ++forced;
      else toward_x = coin(rng_, 0.5);
      const int from = toward_x ? y : x, to = toward_x ? x : y;
      const int w = holder_[cell(owner_[at(to)], n_, from)];
      if (w < 0) throw AbortError("large_stars", "no copy holds a centre at " + num(from));
      add_arc(from, to, w);
    }
    rep_.progress.push_back({"orient_forced", forced, 0});
    rep_.sigma_initial = sigma();
    rep_.progress.push_back({"sigma", rep_.sigma_initial, 0});
    check_disjoint_all();
  }

  void add_arc(int from, int to, int w) {
    const int id = static_cast<int>(arcs_.size());
    arcs_.push_back({from, to, w, false});
    arc_id_[cell(from, n_, to)] = id;
    out_[at(from)].push_back(id);
    ++od_[cell(w, n_, from)];
    ++occ_[cell(w, n_, to)];
  }

  int target(int w, int y) const {
    const int u = emb_.preimage(w, y);
    return u >= 0 ? star_size_[at(u)] : 0;
  }
  long term(int w, int y) const { return std::abs(od_[cell(w, n_, y)] - target(w, y)); }

  long sigma() const {
    long s = 0;
    for (const auto& st : stars_)
      for (int w = 0; w < n_; ++w) s += term(w, emb_.image(w, st.center));
    return s;
  }

  // Heads owned by a copy are distinct and avoid the forest image.
  void check_disjoint(int w) {
    ++rep_.disjointness_checks;
    for (int x = 0; x < n_; ++x) {
      const int c = occ_[cell(w, n_, x)];
      if (c > 1 || (c == 1 && emb_.in_image(w, x))) {
        ++rep_.disjointness_failures;
        return;
      }
    }
  }
  void check_disjoint_all() {
    for (int w = 0; w < n_; ++w) check_disjoint(w);
  }

  struct Move {
    int v, x, z;
    int a1, a2, a3, a4;  // arcs u'->v, v->x, x->u, u'->z
  };

  std::vector<Move> moves_for(int u, int w, int up, int wp) const {
    std::vector<Move> out;
    for (int a1 : out_[at(up)]) {
      const auto& e1 = arcs_[at(a1)];
      if (e1.moved) continue;
      const int v = e1.to, w_up = e1.owner;
      for (int a2 : out_[at(v)]) {
        const auto& e2 = arcs_[at(a2)];
        if (e2.moved) continue;
        const int x = e2.to, w_v = e2.owner;
        if (x == u || x == up) continue;
        const int a3 = arc_id_[cell(x, n_, u)];
        if (a3 < 0 || arcs_[at(a3)].moved) continue;
        const int w_x = arcs_[at(a3)].owner;
        if (emb_.in_image(w, x) || emb_.in_image(wp, v) || emb_.in_image(w_x, v) || emb_.in_image(w_v, up)) continue;
        if (v == u) continue;
        for (int a4 : out_[at(up)]) {
          const auto& e4 = arcs_[at(a4)];
          if (a4 == a1 || e4.moved || e4.owner != wp) continue;
          const int z = e4.to;
          if (emb_.in_image(w_up, z)) continue;
          out.push_back({v, x, z, a1, a2, a3, a4});
        }
      }
    }
    return out;
  }

  // Applies a move with the head-occupancy condition; returns false (and
  // leaves everything unchanged) when a new head is already taken.
  bool apply(const Move& m, int u, int w, int up) {
    auto& e1 = arcs_[at(m.a1)];
    auto& e2 = arcs_[at(m.a2)];
    auto& e3 = arcs_[at(m.a3)];
    auto& e4 = arcs_[at(m.a4)];
    const int w_up = e1.owner, w_v = e2.owner, w_x = e3.owner, wp = e4.owner;
    std::set<std::pair<int, int>> keys{{w, u}, {w_x, m.x}, {w_v, m.v}, {w_up, up}, {wp, up}};
    long before = 0;
    for (auto [ww, y] : keys) before += term(ww, y);

    auto shift = [&](DArc& e, int from, int to, int owner, int sign) {
      (void)e;
      od_[cell(owner, n_, from)] += sign;
      occ_[cell(owner, n_, to)] += sign;
    };
    shift(e1, up, m.v, w_up, -1);
    shift(e2, m.v, m.x, w_v, -1);
    shift(e3, m.x, u, w_x, -1);
    shift(e4, up, m.z, wp, -1);
    const bool free_heads = occ_[cell(w, n_, m.x)] == 0 && occ_[cell(w_x, n_, m.v)] == 0 &&
                            occ_[cell(w_v, n_, up)] == 0 && occ_[cell(w_up, n_, m.z)] == 0;
    if (!free_heads) {
      shift(e1, up, m.v, w_up, 1);
      shift(e2, m.v, m.x, w_v, 1);
      shift(e3, m.x, u, w_x, 1);
      shift(e4, up, m.z, wp, 1);
      return false;
    }
    // Reverse the cycle u' v x u and hand the arcs over.
    auto redirect = [&](int id, int from, int to, int owner) {
      auto& e = arcs_[at(id)];
      arc_id_[cell(e.from, n_, e.to)] = -1;
      auto& lst = out_[at(e.from)];
      lst.erase(std::find(lst.begin(), lst.end(), id));
      e = {from, to, owner, true};
      arc_id_[cell(from, n_, to)] = id;
      out_[at(from)].push_back(id);
      od_[cell(owner, n_, from)] += 1;
      occ_[cell(owner, n_, to)] += 1;
    };
    redirect(m.a3, u, m.x, w);
    redirect(m.a2, m.x, m.v, w_x);
    redirect(m.a1, m.v, up, w_v);
    redirect(m.a4, up, m.z, w_up);

    long after = 0;
    for (auto [ww, y] : keys) after += term(ww, y);
    if (after - before != -2) ++rep_.sigma_steps_off;
    for (int ww : {w, w_x, w_v, w_up}) check_disjoint(ww);
    return true;
  }

  // Step vi.
  void repair() {
    long s = rep_.sigma_initial;
    const long budget = move_budget(n_, &cfg_);
    while (s > 0) {
      if (rep_.moves >= budget) throw AbortError("large_stars", "move budget exhausted with Sigma " + num(s));
      std::vector<std::pair<int, int>> deficit, surplus;  // (w, image of centre)
      for (const auto& st : stars_)
        for (int w = 0; w < n_; ++w) {
          const int y = emb_.image(w, st.center);
          const int diff = od_[cell(w, n_, y)] - static_cast<int>(st.size());
          if (diff < 0) deficit.emplace_back(w, y);
          if (diff > 0) surplus.emplace_back(w, y);
        }
      bool done = false;
      auto attempt = [&](std::pair<int, int> lo, std::pair<int, int> hi) {
        auto cands = moves_for(lo.second, lo.first, hi.second, hi.first);
        shuffle(cands, rng_);
        for (const auto& m : cands)
          if (apply(m, lo.second, lo.first, hi.second)) return true;
        return false;
      };
      for (int k = 0; k < n_ && !done; ++k) done = attempt(pick(rng_, deficit), pick(rng_, surplus));
      if (!done) {
        auto lows = deficit, highs = surplus;
        shuffle(lows, rng_);
        shuffle(highs, rng_);
        for (std::size_t i = 0; i < lows.size() && !done; ++i)
          for (std::size_t j = 0; j < highs.size() && !done; ++j) done = attempt(lows[i], highs[j]);
      }
      if (!done)
        throw AbortError("large_stars", "no xvz-move left with Sigma " + num(s) + " (deficit copy " +
                                            num(deficit.front().first) + " at " + num(deficit.front().second) +
                                            ", surplus copy " + num(surplus.front().first) + " at " +
                                            num(surplus.front().second) + ")");
      ++rep_.moves;
      const long next = sigma();
      rep_.progress.push_back({"xvz", next, rep_.moves});
      s = next;
    }
  }

  void place_leaves() {
    for (const auto& st : stars_)
      for (int w = 0; w < n_; ++w) {
        const int y = emb_.image(w, st.center);
        std::vector<int> heads;
        for (int id : out_[at(y)])
          if (arcs_[at(id)].owner == w) heads.push_back(arcs_[at(id)].to);
        std::sort(heads.begin(), heads.end());
        for (std::size_t k = 0; k < st.leaves.size(); ++k) {
          if (!emb_.can_place(w, st.leaves[k], heads[k]))
            throw AbortError("large_stars", "leaf head " + num(heads[k]) + " already in copy " + num(w));
          emb_.place(w, st.leaves[k], heads[k]);
        }
      }
  }

  Embeddings& emb_;
  const Tree& t_;
  const ParamConfig& cfg_;
  Rng& rng_;
  LargeStarsReport& rep_;
  int n_;

  std::vector<LeafStar> stars_;
  std::vector<int> star_size_;
  std::vector<char> leaf_, in_plus_;
  long total_star_ = 0;
  std::vector<int> w_part_, u_part_, owner_;
  std::vector<char> j_;
  std::vector<std::pair<int, int>> j_arcs_;

  std::vector<int> holder_;
  std::vector<DArc> arcs_;
  std::vector<int> arc_id_, od_, occ_;
  std::vector<std::vector<int>> out_;
};

}  // namespace

LargeStarsReport large_stars(Embeddings& emb, const ParamConfig& cfg, Rng& rng) {
  LargeStarsReport rep;
  LargeStars(emb, cfg, rng, rep).run();
  return rep;
}

Embeddings strip_leaves(const Decomposition& dec, const VertexSet& leaves) {
  Embeddings emb(dec.host, dec.tree);
  std::vector<char> skip(at(dec.tree.size()), 0);
  for (int v : leaves) skip[at(v)] = 1;
  for (std::size_t w = 0; w < dec.copies.size(); ++w)
    for (int u = 0; u < dec.tree.size(); ++u)
      if (!skip[at(u)]) emb.place(static_cast<int>(w), u, dec.copies[w][at(u)]);
  return emb;
}

PairFilter jex_filter(const EmbeddingState& st) {
  const int id = st.jpairs.find("Jex");
  const int n = st.n();
  if (id < 0) return [](int, int) { return false; };
  std::vector<char> ok(at(n) * at(n), 0);
  for (auto [x, w] : st.jpairs.of("Jex")) ok[cell(w, n, x)] = 1;
  return [ok = std::move(ok), n](int w, int y) { return ok[cell(w, n, y)] != 0; };
}

FinishReport small_stars(EmbeddingState& st, Rng& rng) {
  if (st.tp.kind != TreeCase::S) throw PipelineOrderError("small_stars applies to Case S");
  if (st.clock != Clock::finished) throw PipelineOrderError("small_stars needs the approximate decomposition");
  return small_stars(st.emb, st.tp.ex_stars, jex_filter(st), rng, st.cfg);
}

FinishReport paths_parity_and_reserve(EmbeddingState& st, Rng& rng, const SearchBudget& solver) {
  if (st.tp.kind != TreeCase::P) throw PipelineOrderError("paths applies to Case P");
  if (st.clock != Clock::finished) throw PipelineOrderError("paths needs the approximate decomposition");
  PathsInput in;
  if (st.tp.ex_leaf_edges.size() != 2) throw InputError("paths: expected two removed leaves");
  in.leaf1 = st.tp.ex_leaf_edges[0];
  in.leaf2 = st.tp.ex_leaf_edges[1];
  in.bare_paths = st.tp.ex_paths;
  in.reserve = st.y_sets;
  in.order = st.order;
  in.d = st.cfg.d;
  return paths_parity_and_reserve(st.emb, in, jex_filter(st), rng, st.cfg, solver);
}

}  // namespace ringel
