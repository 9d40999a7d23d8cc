#include "ringel/matching.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "ringel/errors.hpp"

namespace ringel {

namespace {

std::size_t at(int v) { return static_cast<std::size_t>(v); }

std::vector<std::vector<int>> left_adjacency(const BipartiteInstance& inst) {
  std::vector<std::vector<int>> adj(at(inst.x_size));
  for (auto [x, y] : inst.b) adj[at(x)].push_back(y);
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return adj;
}

double n_log_n(int n) { return n * std::log(std::max(n, 2)); }

}  // namespace

void BipartiteInstance::validate() const {
  if (x_size < 0 || y_size < 0) throw InputError("bipartite instance: negative part size");
  for (const EdgeList* es : {&b, &z})
    for (auto [x, y] : *es)
      if (x < 0 || x >= x_size || y < 0 || y >= y_size)
        throw InputError("bipartite instance: edge (" + std::to_string(x) + "," + std::to_string(y) + ") out of range");
}

int BipartiteInstance::z_max_degree() const {
  std::vector<int> dx(at(x_size), 0), dy(at(y_size), 0);
  int best = 0;
  for (auto [x, y] : z) {
    best = std::max({best, ++dx[at(x)], ++dy[at(y)]});
  }
  return best;
}

BipartiteMatching max_bipartite_matching(int x_size, int y_size, const std::vector<std::vector<int>>& adj) {
  BipartiteMatching m;
  m.mate_x.assign(at(x_size), -1);
  m.mate_y.assign(at(y_size), -1);
  const int inf = std::numeric_limits<int>::max();
  std::vector<int> dist(at(x_size));
  std::vector<std::size_t> it(at(x_size));

  auto bfs = [&] {
    std::deque<int> q;
    bool found = false;
    for (int x = 0; x < x_size; ++x) {
      if (m.mate_x[at(x)] < 0) {
        dist[at(x)] = 0;
        q.push_back(x);
      } else {
        dist[at(x)] = inf;
      }
    }
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      for (int y : adj[at(x)]) {
        int x2 = m.mate_y[at(y)];
        if (x2 < 0) found = true;
        else if (dist[at(x2)] == inf) {
          dist[at(x2)] = dist[at(x)] + 1;
          q.push_back(x2);
        }
      }
    }
    return found;
  };
  // Iterative DFS along the layered graph.
  auto augment = [&](int root) {
    std::vector<int> path{root};
    while (!path.empty()) {
      int x = path.back();
      bool advanced = false;
      for (; it[at(x)] < adj[at(x)].size(); ++it[at(x)]) {
        int y = adj[at(x)][it[at(x)]];
        int x2 = m.mate_y[at(y)];
        if (x2 < 0) {
          // Flip the path.
          for (std::size_t k = path.size(); k-- > 0;) {
            int px = path[k];
            int py = adj[at(px)][it[at(px)]];
            m.mate_y[at(py)] = px;
            m.mate_x[at(px)] = py;
          }
          return true;
        }
        if (dist[at(x2)] == dist[at(x)] + 1) {
          path.push_back(x2);
          advanced = true;
          break;
        }
      }
      if (!advanced) {
        dist[at(x)] = inf;
        path.pop_back();
        if (!path.empty()) ++it[at(path.back())];
      }
    }
    return false;
  };
  while (bfs()) {
    std::fill(it.begin(), it.end(), 0);
    for (int x = 0; x < x_size; ++x)
      if (m.mate_x[at(x)] < 0 && augment(x)) ++m.size;
  }
  m.perfect = m.size == x_size && x_size == y_size;

  if (m.size < x_size) {
    // Alternating reachability from every unmatched X vertex.
    std::vector<char> sx(at(x_size), 0), sy(at(y_size), 0);
    std::deque<int> q;
    for (int x = 0; x < x_size; ++x)
      if (m.mate_x[at(x)] < 0) {
        sx[at(x)] = 1;
        q.push_back(x);
      }
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      for (int y : adj[at(x)]) {
        if (sy[at(y)]) continue;
        sy[at(y)] = 1;
        int x2 = m.mate_y[at(y)];
        if (x2 >= 0 && !sx[at(x2)]) {
          sx[at(x2)] = 1;
          q.push_back(x2);
        }
      }
    }
    for (int x = 0; x < x_size; ++x)
      if (sx[at(x)]) m.hall_violator.push_back(x);
    for (int y = 0; y < y_size; ++y)
      if (sy[at(y)]) m.neighbourhood.push_back(y);
  }
  return m;
}

BipartiteMatching max_bipartite_matching(const BipartiteInstance& inst) {
  inst.validate();
  return max_bipartite_matching(inst.x_size, inst.y_size, left_adjacency(inst));
}

long count_mzmz(const BipartiteInstance& inst, const std::vector<int>& mate_x) {
  std::unordered_set<std::uint64_t> z;
  std::vector<std::vector<int>> zx(at(inst.x_size));
  auto code = [&](int x, int y) { return static_cast<std::uint64_t>(x) * static_cast<std::uint64_t>(inst.y_size) + static_cast<std::uint64_t>(y); };
  for (auto [x, y] : inst.z) {
    if (z.insert(code(x, y)).second) zx[at(x)].push_back(y);
  }
  std::vector<int> mate_y(at(inst.y_size), -1);
  for (int x = 0; x < inst.x_size; ++x)
    if (mate_x[at(x)] >= 0) mate_y[at(mate_x[at(x)])] = x;
  long twice = 0;
  for (int x = 0; x < inst.x_size; ++x) {
    int y = mate_x[at(x)];
    if (y < 0) continue;
    for (int y2 : zx[at(x)]) {
      int x2 = mate_y[at(y2)];
      if (x2 >= 0 && x2 != x && z.count(code(x2, y))) ++twice;
    }
  }
  return twice / 2;
}

SwitchingChain::SwitchingChain(const BipartiteInstance& inst, Rng& rng, SwitchingOptions opts)
    : inst_(inst), rng_(rng), opts_(opts) {
  inst.validate();
  if (inst.x_size != inst.y_size) throw InputError("switching chain needs equal part sizes");
  for (auto [x, y] : inst.b) b_.insert(edge_code(x, y));
  z_adj_.resize(at(inst.x_size));
  for (auto [x, y] : inst.z)
    if (z_.insert(edge_code(x, y)).second) z_adj_[at(x)].push_back(y);
  if (opts_.guided) b_adj_ = left_adjacency(inst);
  auto m = max_bipartite_matching(inst);
  if (!m.perfect)
    throw InfeasibleError("no perfect matching: " + std::to_string(m.hall_violator.size()) + " X vertices see only " +
                              std::to_string(m.neighbourhood.size()) + " Y vertices",
                          m.hall_violator, m.neighbourhood);
  mate_x_ = std::move(m.mate_x);
  mate_y_ = std::move(m.mate_y);
  mzmz_ = initial_mzmz_ = count_mzmz(inst, mate_x_);
}

long SwitchingChain::mzmz_at(int x, int y, const std::vector<int>& mate_y) const {
  long c = 0;
  for (int y2 : z_adj_[at(x)]) {
    int x2 = mate_y[at(y2)];
    if (x2 >= 0 && x2 != x && in_z(x2, y)) ++c;
  }
  return c;
}

bool SwitchingChain::try_cycle(const std::vector<int>& xs) {
  const std::size_t k = xs.size();
  std::vector<int> ys(k);
  for (std::size_t i = 0; i < k; ++i) ys[i] = mate_x_[at(xs[i])];
  for (std::size_t i = 0; i < k; ++i)
    if (!in_b(xs[i], ys[(i + 1) % k])) return false;

  // MZMZs destroyed: pairs in the current matching that touch a removed edge.
  std::vector<std::pair<int, int>> gone;
  for (std::size_t i = 0; i < k; ++i) {
    int x = xs[i], y = ys[i];
    for (int y2 : z_adj_[at(x)]) {
      int x2 = mate_y_[at(y2)];
      if (x2 >= 0 && x2 != x && in_z(x2, y)) gone.emplace_back(std::min(x, x2), std::max(x, x2));
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    mate_x_[at(xs[i])] = ys[(i + 1) % k];
    mate_y_[at(ys[(i + 1) % k])] = xs[i];
  }
  bool fresh = false;
  for (std::size_t i = 0; i < k && !fresh; ++i) fresh = mzmz_at(xs[i], ys[(i + 1) % k], mate_y_) > 0;
  if (fresh) {
    for (std::size_t i = 0; i < k; ++i) {
      mate_x_[at(xs[i])] = ys[i];
      mate_y_[at(ys[i])] = xs[i];
    }
    return false;
  }
  std::sort(gone.begin(), gone.end());
  gone.erase(std::unique(gone.begin(), gone.end()), gone.end());
  const long before = mzmz_;
  mzmz_ -= static_cast<long>(gone.size());
  if (opts_.check_monotone) {
    long exact = count_mzmz(inst_, mate_x_);
    if (exact != mzmz_ || exact > before) throw std::logic_error("switching move increased MZMZ");
  }
  return true;
}

bool SwitchingChain::step() {
  ++proposed_;
  const int n = inst_.x_size;
  int k = 3;
  if (opts_.four_cycles && (n < 3 || coin(rng_, 0.5))) k = 2;
  if (n < k) return false;
  std::vector<int> xs;
  if (opts_.guided) {
    xs.push_back(uniform_index(rng_, n));
    while (static_cast<int>(xs.size()) < k) {
      const auto& nb = b_adj_[at(xs.back())];
      if (nb.empty()) return false;
      const int x = mate_y_[at(pick(rng_, nb))];
      if (std::find(xs.begin(), xs.end(), x) != xs.end()) return false;
      xs.push_back(x);
    }
    bool ok = try_cycle(xs);
    accepted_ += ok;
    return ok;
  }
  while (static_cast<int>(xs.size()) < k) {
    int x = uniform_index(rng_, n);
    if (std::find(xs.begin(), xs.end(), x) == xs.end()) xs.push_back(x);
  }
  bool ok = try_cycle(xs);
  accepted_ += ok;
  return ok;
}

void SwitchingChain::run(long steps) {
  for (long s = 0; s < steps; ++s) step();
}

void SwitchingChain::repair() {
  const int n = inst_.x_size;
  const long budget = opts_.repair_budget > 0 ? opts_.repair_budget : 2000L * n * n + 1000;
  long spent = 0;
  while (mzmz_ > 0) {
    if (spent++ >= budget) throw StuckError("MZMZ repair did not finish within " + std::to_string(budget) + " proposals", mzmz_);
    repair_moves_ += step();
  }
}

MatchSample match_sample(const BipartiteInstance& inst, Rng& rng, long steps, SwitchingOptions opts) {
  SwitchingChain chain(inst, rng, opts);
  chain.repair();
  const long accepted_before = chain.accepted();
  if (steps < 0) steps = static_cast<long>(std::ceil(50 * n_log_n(inst.x_size)));
  chain.run(steps);
  MatchSample s;
  s.mate_x = chain.mate_x();
  s.accepted = chain.accepted() - accepted_before;
  s.initial_mzmz = chain.initial_mzmz();
  s.repair_moves = chain.repair_moves();
  s.z_degree_warning = inst.x_size > 0 && inst.z_max_degree() >= std::pow(inst.y_size, 0.4);
  return s;
}

MatchSample match_sample_blocked(const BipartiteInstance& inst, Rng& rng, long steps_per_block, int attempts) {
  inst.validate();
  if (inst.x_size != inst.y_size) throw InputError("blocked sampler needs equal part sizes");
  const int n = inst.x_size;
  const int q = std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(n)))));
  std::unordered_set<std::uint64_t> zset;
  auto code = [&](int x, int y) { return static_cast<std::uint64_t>(x) * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(y); };
  for (auto [x, y] : inst.z) zset.insert(code(x, y));
  for (int attempt = 0; attempt < attempts; ++attempt) {
    std::vector<int> px(at(n)), py(at(n));
    for (int i = 0; i < n; ++i) px[at(i)] = py[at(i)] = i;
    shuffle(px, rng);
    shuffle(py, rng);
    std::vector<int> bx(at(n)), by(at(n)), lx(at(n)), ly(at(n));
    std::vector<int> sizes(at(q), 0);
    for (int i = 0; i < n; ++i) {
      int blk = static_cast<int>(static_cast<long>(i) * q / n);
      bx[at(px[at(i)])] = by[at(py[at(i)])] = blk;
      lx[at(px[at(i)])] = ly[at(py[at(i)])] = sizes[at(blk)]++;
    }
    std::vector<BipartiteInstance> parts(at(q));
    std::vector<std::vector<int>> back_x(at(q)), back_y(at(q));
    for (int blk = 0; blk < q; ++blk) {
      parts[at(blk)].x_size = parts[at(blk)].y_size = sizes[at(blk)];
      back_x[at(blk)].resize(at(sizes[at(blk)]));
      back_y[at(blk)].resize(at(sizes[at(blk)]));
    }
    for (int v = 0; v < n; ++v) {
      back_x[at(bx[at(v)])][at(lx[at(v)])] = v;
      back_y[at(by[at(v)])][at(ly[at(v)])] = v;
    }
    for (auto [x, y] : inst.b)
      if (bx[at(x)] == by[at(y)]) parts[at(bx[at(x)])].b.emplace_back(lx[at(x)], ly[at(y)]);
    for (auto [x, y] : inst.z)
      if (bx[at(x)] == by[at(y)]) parts[at(bx[at(x)])].z.emplace_back(lx[at(x)], ly[at(y)]);
    bool feasible = true;
    for (const auto& p : parts) feasible = feasible && max_bipartite_matching(p).perfect;
    if (!feasible) continue;
    MatchSample out;
    out.mate_x.assign(at(n), -1);
    for (int blk = 0; blk < q; ++blk) {
      auto s = match_sample(parts[at(blk)], rng, steps_per_block);
      for (int lxv = 0; lxv < sizes[at(blk)]; ++lxv)
        out.mate_x[at(back_x[at(blk)][at(lxv)])] = back_y[at(blk)][at(s.mate_x[at(lxv)])];
      out.accepted += s.accepted;
      out.repair_moves += s.repair_moves;
    }
    // Blocks are sampled separately, so MZMZs across blocks are possible.
    out.initial_mzmz = count_mzmz(inst, out.mate_x);
    if (out.initial_mzmz > 0) continue;
    out.z_degree_warning = n > 0 && inst.z_max_degree() >= std::pow(n, 0.4);
    return out;
  }
  throw InfeasibleError("blocked sampler: no block partition with perfect, MZMZ-free block matchings in " +
                        std::to_string(attempts) + " attempts");
}

MarginalReport match_marginal_report(const BipartiteInstance& inst, Rng& rng, long samples, double alpha, long thin) {
  SwitchingChain chain(inst, rng);
  chain.repair();
  const int n = inst.x_size;
  if (thin < 0) thin = std::max(10L, static_cast<long>(std::ceil(n_log_n(n))));
  chain.run(10 * thin);
  std::unordered_map<std::uint64_t, long> hits;
  auto code = [&](int x, int y) { return static_cast<std::uint64_t>(x) * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(y); };
  for (long s = 0; s < samples; ++s) {
    chain.run(thin);
    for (int x = 0; x < n; ++x) ++hits[code(x, chain.mate_x()[at(x)])];
  }
  MarginalReport r;
  r.samples = samples;
  const double dens = n > 0 ? static_cast<double>(inst.b.size()) / (static_cast<double>(n) * n) : 0;
  r.predicted = dens > 0 ? 1.0 / (dens * n) : 0;
  r.band_lo = (1 - std::pow(alpha, 0.98)) * r.predicted;
  r.band_hi = (1 + std::pow(alpha, 0.98)) * r.predicted;
  for (auto [x, y] : inst.b) {
    auto f = hits.find(code(x, y));
    double freq = f == hits.end() ? 0.0 : static_cast<double>(f->second) / static_cast<double>(samples);
    bool ok = freq >= r.band_lo && freq <= r.band_hi;
    r.out_of_band += !ok;
    r.rows.push_back({x, y, freq, ok});
  }
  return r;
}

void write_marginal_csv(std::ostream& os, const MarginalReport& r) {
  os << "x,y,freq,predicted,band_lo,band_hi,in_band\n";
  for (const auto& row : r.rows)
    os << row.x << ',' << row.y << ',' << row.freq << ',' << r.predicted << ',' << r.band_lo << ',' << r.band_hi << ','
       << (row.in_band ? 1 : 0) << '\n';
}

PairCondition pair_condition_check(const BipartiteInstance& inst, double eps, double d) {
  inst.validate();
  const int m = inst.x_size;
  const std::size_t words = (at(inst.y_size) + 63) / 64;
  std::vector<std::vector<std::uint64_t>> rows(at(m), std::vector<std::uint64_t>(words, 0));
  for (auto [x, y] : inst.b) rows[at(x)][at(y) / 64] |= 1ULL << (y % 64);
  PairCondition pc;
  pc.min_degree = m > 0 ? std::numeric_limits<int>::max() : 0;
  for (const auto& r : rows) {
    int deg = 0;
    for (auto w : r) deg += __builtin_popcountll(w);
    pc.min_degree = std::min(pc.min_degree, deg);
  }
  pc.degrees_ok = pc.min_degree > (d - eps) * m;
  const double heavy = (d + eps) * (d + eps) * m;
  for (int x = 0; x < m; ++x)
    for (int x2 = x + 1; x2 < m; ++x2) {
      int co = 0;
      for (std::size_t w = 0; w < words; ++w) co += __builtin_popcountll(rows[at(x)][w] & rows[at(x2)][w]);
      if (co >= heavy) pc.heavy_pairs += 2;
    }
  pc.pair_limit = 2 * eps * m * m;
  pc.pass = pc.degrees_ok && static_cast<double>(pc.heavy_pairs) <= pc.pair_limit;
  return pc;
}

namespace {

struct RainbowState {
  const LabeledMultigraph& mg;
  std::vector<int> at_x, at_y, at_label;  // edge index or -1
  std::vector<std::vector<int>> by_label;
  long nodes = 0;

  void put(int e) {
    const auto& ed = mg.edges[at(e)];
    at_x[at(ed.x)] = at_y[at(ed.y)] = at_label[at(ed.label)] = e;
  }
  void take(int e) {
    const auto& ed = mg.edges[at(e)];
    at_x[at(ed.x)] = at_y[at(ed.y)] = at_label[at(ed.label)] = -1;
  }

  // Place some edge of `label`, displacing at most the edges in its way and
  // re-placing their labels recursively.
  bool insert(int label, int depth, std::vector<char>& busy) {
    if (++nodes > 200000) return false;
    busy[at(label)] = 1;
    for (int e : by_label[at(label)]) {
      const auto& ed = mg.edges[at(e)];
      int c1 = at_x[at(ed.x)], c2 = at_y[at(ed.y)];
      if (c1 < 0 && c2 < 0) {
        put(e);
        busy[at(label)] = 0;
        return true;
      }
      if (depth == 0) continue;
      std::vector<int> displaced;
      for (int c : {c1, c2})
        if (c >= 0 && std::find(displaced.begin(), displaced.end(), c) == displaced.end()) displaced.push_back(c);
      bool blocked = false;
      for (int c : displaced) blocked = blocked || busy[at(mg.edges[at(c)].label)];
      if (blocked) continue;
      auto sx = at_x, sy = at_y, sl = at_label;
      for (int c : displaced) take(c);
      put(e);
      bool ok = true;
      for (int c : displaced) ok = ok && insert(mg.edges[at(c)].label, depth - 1, busy);
      if (ok) {
        busy[at(label)] = 0;
        return true;
      }
      at_x = std::move(sx);
      at_y = std::move(sy);
      at_label = std::move(sl);
    }
    busy[at(label)] = 0;
    return false;
  }
};

}  // namespace

RainbowMatching rainbow_matching(const LabeledMultigraph& mg, int depth) {
  RainbowState st{mg, std::vector<int>(at(mg.x_size), -1), std::vector<int>(at(mg.y_size), -1),
                  std::vector<int>(at(mg.labels), -1), std::vector<std::vector<int>>(at(mg.labels)), 0};
  {
    std::vector<std::vector<char>> seen_x(at(mg.labels)), seen_y(at(mg.labels));
    for (std::size_t e = 0; e < mg.edges.size(); ++e) {
      const auto& ed = mg.edges[e];
      if (ed.x < 0 || ed.x >= mg.x_size || ed.y < 0 || ed.y >= mg.y_size || ed.label < 0 || ed.label >= mg.labels)
        throw InputError("rainbow matching: edge " + std::to_string(e) + " out of range");
      auto& sx = seen_x[at(ed.label)];
      auto& sy = seen_y[at(ed.label)];
      if (sx.empty()) {
        sx.assign(at(mg.x_size), 0);
        sy.assign(at(mg.y_size), 0);
      }
      if (sx[at(ed.x)]++ || sy[at(ed.y)]++)
        throw InputError("rainbow matching: label " + std::to_string(ed.label) + " is not a matching");
      st.by_label[at(ed.label)].push_back(static_cast<int>(e));
    }
  }
  for (std::size_t e = 0; e < mg.edges.size(); ++e) {
    const auto& ed = mg.edges[e];
    if (st.at_x[at(ed.x)] < 0 && st.at_y[at(ed.y)] < 0 && st.at_label[at(ed.label)] < 0) st.put(static_cast<int>(e));
  }
  std::vector<char> busy(at(mg.labels), 0);
  for (int l = 0; l < mg.labels; ++l)
    if (st.at_label[at(l)] < 0) {
      st.nodes = 0;
      st.insert(l, depth, busy);
    }
  RainbowMatching r;
  for (int l = 0; l < mg.labels; ++l)
    if (st.at_label[at(l)] >= 0) r.edges.push_back(st.at_label[at(l)]);
  std::sort(r.edges.begin(), r.edges.end());
  r.deficit = mg.labels - static_cast<long>(r.edges.size());
  r.within_soft_bound = static_cast<double>(r.deficit) <= std::pow(std::max(mg.labels, 1), 0.51);
  return r;
}

}  // namespace ringel
