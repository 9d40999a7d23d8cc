#include "ringel/embedder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "ringel/errors.hpp"
#include "ringel/matching.hpp"

namespace ringel {

namespace {

std::size_t at(int v) { return static_cast<std::size_t>(v); }
std::size_t cell(int row, int n, int col) { return at(row) * at(n) + at(col); }

const char* class_tag(VertexClass c) {
  switch (c) {
    case VertexClass::hi: return "hi";
    case VertexClass::lo: return "lo";
    case VertexClass::no: return "no";
    default: return "a0";
  }
}

std::string fmt_num(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

// Union-find over a small local index range.
struct Dsu {
  std::vector<int> parent;
  explicit Dsu(std::size_t k) : parent(k) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[at(x)] != x) x = parent[at(x)] = parent[at(parent[at(x)])];
    return x;
  }
  void join(int a, int b) {
    a = find(a), b = find(b);
    if (a != b) parent[at(std::max(a, b))] = std::min(a, b);
  }
};

std::vector<int> core_in_order(const TreePartition& tp, const VertexSet& part) {
  std::vector<char> in(tp.rank.size(), 0);
  for (int v : part) in[at(v)] = 1;
  std::vector<int> out;
  for (int v : tp.order)
    if (in[at(v)]) out.push_back(v);
  return out;
}

int label_of_pair(const EmbeddingState& st, int y, int x) { return st.arc_label[cell(y, st.n(), x)]; }

}  // namespace

const char* to_string(Clock c) {
  switch (c) {
    case Clock::start: return "start";
    case Clock::high_degrees: return "high_degrees";
    case Clock::intervals: return "intervals";
    case Clock::g0: return "g0";
    case Clock::a_star_star: return "a_star_star";
    case Clock::a0: return "a0";
    case Clock::digraph: return "digraph";
    case Clock::layer_before: return "layer_before";
    case Clock::layer_after: return "layer_after";
    case Clock::finished: return "finished";
  }
  return "?";
}

int interval_width(int d, int s, int i) {
  const double w = d / std::pow(2.0 * s, i - 1);
  return std::max(1, static_cast<int>(std::floor(w + 1e-12)));
}

std::vector<Interval> interval_family(int n, int width, int j) {
  if (n <= 0 || width <= 0 || j < 0 || j >= std::min(width, n))
    throw InputError("interval_family: need 0 <= j < min(width, n)");
  std::vector<int> points;
  for (long p = j; p < n; p += width) points.push_back(static_cast<int>(p));
  std::vector<Interval> out;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const int next = k + 1 < points.size() ? points[k + 1] : points[0] + n;
    out.push_back({points[k], next - points[k]});
  }
  return out;
}

std::string check_interval_partition(int n, const std::vector<Interval>& family) {
  std::vector<int> hits(at(n), 0);
  for (const auto& iv : family) {
    if (iv.length <= 0) return "empty interval at " + std::to_string(iv.start);
    for (int t = 0; t < iv.length; ++t) ++hits[at((iv.start + t) % n)];
  }
  for (int z = 0; z < n; ++z)
    if (hits[at(z)] != 1) return "label " + std::to_string(z) + " covered " + std::to_string(hits[at(z)]) + " times";
  return {};
}

std::pair<int, int> split_sizes(int n, int m, double Delta) {
  if (m <= 0) return {n, 0};
  const double target = n * std::pow(Delta, -0.1);
  int best = n % m;
  for (int n0 = n % m; n0 <= n; n0 += m)
    if (std::abs(n0 - target) < std::abs(best - target)) best = n0;
  return {best, (n - best) / m};
}

std::map<int, int> pick_shifts(const std::vector<int>& core, const Adjacency& forest, int m, int d) {
  std::map<int, int> x;
  std::set<int> realised;  // distances along forest edges among placed vertices
  for (std::size_t k = 0; k < core.size(); ++k) {
    const int a = core[k];
    std::vector<int> earlier_nb;
    for (int b : forest[at(a)])
      if (x.count(b)) earlier_nb.push_back(b);
    int chosen = -1;
    for (int v = 0; v < m && chosen < 0; ++v) {
      bool ok = true;
      for (const auto& [b, xb] : x)
        if (cyclic_distance(m, v, xb) <= 3 * d) ok = false;
      for (int b : earlier_nb)
        if (realised.count(cyclic_distance(m, v, x[b]))) ok = false;
      if (ok) chosen = v;
    }
    if (chosen < 0)
      throw AbortError("high_degrees", "no admissible shift for core vertex " + std::to_string(a) + " (" +
                                           std::to_string(k) + " placed, m = " + std::to_string(m) +
                                           ", d = " + std::to_string(d) + ")");
    x[a] = chosen;
    for (int b : earlier_nb) realised.insert(cyclic_distance(m, chosen, x[b]));
  }
  return x;
}

int ReserveBook::id(const std::string& name) {
  auto it = ids.find(name);
  if (it != ids.end()) return it->second;
  const int k = static_cast<int>(names.size());
  names.push_back(name);
  members.emplace_back();
  ids[name] = k;
  return k;
}

int ReserveBook::find(const std::string& name) const {
  auto it = ids.find(name);
  return it == ids.end() ? -1 : it->second;
}

const std::vector<std::pair<int, int>>& ReserveBook::of(const std::string& name) const {
  static const std::vector<std::pair<int, int>> none;
  const int k = find(name);
  return k < 0 ? none : members[at(k)];
}

void EmbeddingState::mark(Clock c, int layer_index) {
  clock = c;
  layer = layer_index;
  if (on_checkpoint) on_checkpoint(*this);
}

void EmbeddingState::record(const std::string& name, double value) {
  metrics.push_back({to_string(clock), layer, name, value});
}

std::string pair_reserve_name(VertexClass g, int i, VertexClass g2, int i2) {
  if (i2 == 0) return std::string("G:") + class_tag(g) + ":" + std::to_string(i) + ":0";
  return std::string("G:") + class_tag(g) + "-" + class_tag(g2) + ":" + std::to_string(i) + ":" + std::to_string(i2);
}

std::string class_reserve_name(const TreePartition& tp, int u) {
  const int i = tp.layer_of[at(u)];
  switch (tp.class_of[at(u)]) {
    case VertexClass::hi: return "Jhi:" + std::to_string(tp.hi_center[at(u)]) + ":" + std::to_string(i);
    case VertexClass::lo: return "Jlo:" + std::to_string(i);
    case VertexClass::no: return "Jno:" + std::to_string(i);
    default: return {};
  }
}

EmbeddingState make_state(const Graph& host, const Tree& tree, const TreePartition& tp, const ParamConfig& cfg,
                          Rng& rng) {
  if (host.n() != cfg.n) throw InputError("make_state: config n differs from host size");
  EmbeddingState st;
  st.cfg = cfg;
  st.tp = tp;
  st.labels = label_scheme(tp, cfg);
  st.order = CyclicOrder::random(host.n(), rng);
  st.emb = Embeddings(host, tree);
  const auto nn = at(host.n()) * at(host.n());
  st.arc_label.assign(nn, -1);
  st.j_label.assign(nn, -1);
  return st;
}

void high_degrees(EmbeddingState& st, Rng& rng) {
  if (st.clock != Clock::start) throw PipelineOrderError("high_degrees must run first");
  const int n = st.n();
  const auto& tp = st.tp;
  st.v_block.assign(at(n), -1);
  st.w_block.assign(at(n), -1);
  if (tp.a_star.empty()) {
    st.n0 = n;
    st.mark(Clock::high_degrees);
    return;
  }
  const int m = static_cast<int>(tp.m);
  if (m <= 0) throw AbortError("high_degrees", "core present but no labels (m = 0)");
  const auto core = core_in_order(tp, tp.a_star);
  st.shift = pick_shifts(core, tp.f_adj, m, st.cfg.d);
  std::tie(st.n0, st.n_star) = split_sizes(n, m, st.cfg.Delta);
  st.record("n0", st.n0);
  st.record("n_star", st.n_star);

  std::vector<int> v0, w0;
  std::vector<std::vector<int>> vb(at(m)), wb(at(m));
  for (auto [blocks, zero, parts] : {std::tuple{&st.v_block, &v0, &vb}, std::tuple{&st.w_block, &w0, &wb}}) {
    auto perm = random_subset(rng, n, n);
    shuffle(perm, rng);
    for (int k = 0; k < n; ++k) {
      const int v = perm[at(k)];
      if (k < st.n0) {
        zero->push_back(v);
      } else {
        const int b = (k - st.n0) / std::max(1, st.n_star);
        (*blocks)[at(v)] = b;
        (*parts)[at(b)].push_back(v);
      }
    }
    std::sort(zero->begin(), zero->end());
    for (auto& p : *parts) std::sort(p.begin(), p.end());
  }

  std::vector<int> pos(at(n), -1);
  for (int a : core) {
    auto run_block = [&](const std::vector<int>& ws, const std::vector<int>& vs, const std::string& where) {
      if (ws.empty()) return;
      for (std::size_t k = 0; k < vs.size(); ++k) pos[at(vs[k])] = static_cast<int>(k);
      BipartiteInstance inst;
      inst.x_size = inst.y_size = static_cast<int>(ws.size());
      for (std::size_t i = 0; i < ws.size(); ++i) {
        const int w = ws[i];
        for (std::size_t k = 0; k < vs.size(); ++k)
          if (st.emb.can_place(w, a, vs[k])) inst.b.emplace_back(static_cast<int>(i), static_cast<int>(k));
        for (int y : st.emb.placed_neighbour_images(w, a))
          if (pos[at(y)] >= 0) inst.z.emplace_back(static_cast<int>(i), pos[at(y)]);
      }
      const auto mate = match_or_abort(inst, rng, st.cfg, "high_degrees", where);
      for (std::size_t i = 0; i < ws.size(); ++i) st.emb.place(ws[i], a, vs[at(mate[i])]);
      for (int v : vs) pos[at(v)] = -1;
    };
    const std::string tag = "core vertex " + std::to_string(a);
    run_block(w0, v0, tag + ", block 0");
    for (int b = 0; b < m; ++b)
      run_block(wb[at(b)], vb[at((st.shift.at(a) + b) % m)], tag + ", block " + std::to_string(b + 1));
  }
  st.mark(Clock::high_degrees);
}

void intervals(EmbeddingState& st, Rng& rng) {
  if (st.clock != Clock::high_degrees) throw PipelineOrderError("intervals needs high_degrees");
  const int n = st.n();
  const auto& tp = st.tp;
  st.xbar.assign(at(n) * at(n), 1);
  for (int w = 0; w < n; ++w)
    for (int a : tp.a_star)
      if (st.emb.placed(w, a)) st.xbar[cell(w, n, st.emb.image(w, a))] = 0;
  st.x_sets.assign(at(n), {});
  st.y_sets.assign(at(n), {});
  auto finish_pbar = [&] {
    st.pbar.assign(at(n), 0);
    for (int w = 0; w < n; ++w) {
      long c = 0;
      for (int x = 0; x < n; ++x) c += st.xbar[cell(w, n, x)];
      st.pbar[at(w)] = static_cast<double>(c) / n;
    }
  };
  if (tp.kind == TreeCase::S) {
    finish_pbar();
    st.mark(Clock::intervals);
    return;
  }

  const int levels = 2 * st.cfg.s + 1;
  const double keep = (1 - st.cfg.eta_plus) * static_cast<double>(tp.p_ex.size()) / n;
  st.interval_i.assign(at(n), 0);
  st.interval_j.assign(at(n), 0);
  std::vector<std::vector<char>> hit_core(at(n));  // labels of phi_w(A*)
  for (int w = 0; w < n; ++w) {
    auto& hc = hit_core[at(w)];
    hc.assign(at(n), 0);
    for (int a : tp.a_star)
      if (st.emb.placed(w, a)) hc[at(st.order.label(st.emb.image(w, a)))] = 1;
    const int i = 1 + uniform_index(rng, levels);
    const int width = interval_width(st.cfg.d, st.cfg.s, i);
    const int j = uniform_index(rng, std::min(width, n));
    st.interval_i[at(w)] = i;
    st.interval_j[at(w)] = j;
    const auto fam = interval_family(n, width, j);
    const int f = static_cast<int>(fam.size());
    std::vector<char> chosen(at(f));
    for (auto& c : chosen) c = coin(rng, 0.5);
    for (int k = 0; k < f; ++k) {
      const bool isolated = chosen[at(k)] && !chosen[at((k + f - 1) % f)] && !chosen[at((k + 1) % f)];
      if (!isolated || !coin(rng, keep)) continue;
      const Interval iv = fam[at(k)];
      st.x_sets[at(w)].push_back(iv);
      for (int t = 0; t <= iv.length; ++t) st.xbar[cell(w, n, st.order.vertex((iv.start + t) % n))] = 0;
    }
  }
  finish_pbar();

  // Equalise: drop intervals meeting the core image, then thin every
  // interval down to the least popular one at its level.
  for (int w = 0; w < n; ++w)
    for (const auto& iv : st.x_sets[at(w)]) {
      bool meets = false;
      for (int t = 0; t < iv.length && !meets; ++t) meets = hit_core[at(w)][at((iv.start + t) % n)];
      if (!meets) st.y_sets[at(w)].push_back(iv);
    }
  st.t_min.assign(at(levels + 1), 0);
  st.intervals_degenerate = true;
  for (int i = 1; i <= levels; ++i) {
    std::vector<std::vector<int>> holders(at(n));  // by start label
    for (int w = 0; w < n; ++w)
      if (st.interval_i[at(w)] == i)
        for (const auto& iv : st.y_sets[at(w)]) holders[at(iv.start)].push_back(w);
    long t = holders.empty() ? 0 : static_cast<long>(holders[0].size());
    for (const auto& h : holders) t = std::min(t, static_cast<long>(h.size()));
    st.t_min[at(i)] = t;
    if (t > 0) st.intervals_degenerate = false;
    for (int z = 0; z < n; ++z) {
      auto& h = holders[at(z)];
      if (static_cast<long>(h.size()) <= t) continue;
      shuffle(h, rng);
      for (std::size_t k = static_cast<std::size_t>(t); k < h.size(); ++k) {
        auto& ys = st.y_sets[at(h[k])];
        ys.erase(std::remove_if(ys.begin(), ys.end(), [&](const Interval& iv) { return iv.start == z; }), ys.end());
      }
    }
  }
  long xs = 0, ys = 0;
  for (int w = 0; w < n; ++w) xs += static_cast<long>(st.x_sets[at(w)].size()), ys += static_cast<long>(st.y_sets[at(w)].size());
  st.record("x_intervals", static_cast<double>(xs));
  st.record("y_intervals", static_cast<double>(ys));
  st.record("intervals_degenerate", st.intervals_degenerate ? 1 : 0);
  st.mark(Clock::intervals);
}

void embed_a0(EmbeddingState& st, Rng& rng) {
  if (st.clock != Clock::intervals) throw PipelineOrderError("embed_a0 needs intervals");
  const int n = st.n();
  const auto& cfg = st.cfg;
  const int g0 = st.arcs.id("G0");
  const double keep = std::min(1.0, cfg.p0 / cfg.p);
  for (int u = 0; u < n; ++u)
    for (int v : st.emb.host().neighbors(u)) {
      if (v <= u || !st.emb.free_edge(u, v) || !coin(rng, keep)) continue;
      st.arcs.members[at(g0)].emplace_back(u, v);
      st.arc_label[cell(u, n, v)] = st.arc_label[cell(v, n, u)] = g0;
    }
  const int j0 = st.jpairs.id("J0");
  std::vector<std::vector<int>> j0_of(at(n));
  for (int w = 0; w < n; ++w) {
    const double q = st.pbar[at(w)] > 0 ? std::min(1.0, cfg.p0 / st.pbar[at(w)]) : 0.0;
    for (int x = 0; x < n; ++x) {
      if (!st.xbar[cell(w, n, x)] || !coin(rng, q)) continue;
      st.jpairs.members[at(j0)].emplace_back(x, w);
      st.j_label[cell(x, n, w)] = j0;
      j0_of[at(w)].push_back(x);
    }
  }
  st.record("g0_edges", static_cast<double>(st.arcs.members[at(g0)].size()));
  st.record("j0_pairs", static_cast<double>(st.jpairs.members[at(j0)].size()));
  st.mark(Clock::g0);

  auto embed_part = [&](const VertexSet& part) {
    for (int a : core_in_order(st.tp, part)) {
      BipartiteInstance inst;
      inst.x_size = inst.y_size = n;
      for (int w = 0; w < n; ++w) {
        const auto nb = st.emb.placed_neighbour_images(w, a);
        for (int x : j0_of[at(w)]) {
          if (!st.emb.can_place(w, a, x)) continue;
          bool in_g0 = true;
          for (int y : nb) in_g0 = in_g0 && label_of_pair(st, x, y) == g0;
          if (in_g0) inst.b.emplace_back(w, x);
        }
        for (int y : nb) inst.z.emplace_back(w, y);
      }
      const auto mate = match_or_abort(inst, rng, cfg, "embed_a0", "vertex " + std::to_string(a));
      for (int w = 0; w < n; ++w) st.emb.place(w, a, mate[at(w)]);
    }
  };
  embed_part(st.tp.a_star_star);
  st.mark(Clock::a_star_star);
  embed_part(st.tp.a0_prime);
  st.mark(Clock::a0);
}

namespace {

// Matchings M^h for one of the two label classes: y <-> w per colour h.
struct ColourMatchings {
  int n = 0;
  std::vector<int> w_of_y, y_of_w, centre;  // [h * n + .]
  std::vector<int> layer;
  void init(int m, int n_) {
    n = n_;
    w_of_y.assign(at(m) * at(n), -1);
    y_of_w.assign(at(m) * at(n), -1);
    centre.assign(at(m) * at(n), -1);
    layer.assign(at(m) * at(n), -1);
  }
  void add(int h, int y, int w, int a, int i) {
    if (w_of_y[cell(h, n, y)] >= 0 || y_of_w[cell(h, n, w)] >= 0)
      throw std::logic_error("colour class is not a matching");
    w_of_y[cell(h, n, y)] = w;
    y_of_w[cell(h, n, w)] = y;
    centre[cell(h, n, y)] = a;
    layer[cell(h, n, y)] = i;
  }
};

}  // namespace

void digraph_allocate(EmbeddingState& st, Rng& rng) {
  if (st.clock != Clock::a0) throw PipelineOrderError("digraph_allocate needs embed_a0");
  const int n = st.n();
  const auto& cfg = st.cfg;
  const auto& tp = st.tp;
  const int istar = tp.i_star;
  const int m = static_cast<int>(tp.m);

  // Probability table, checked before drawing anything.
  std::map<std::string, long> counts;
  for (auto [u, v] : tp.f_prime_edges) {
    int lu = tp.layer_of[at(u)], lv = tp.layer_of[at(v)];
    if (lu <= 0 && lv <= 0) continue;
    if (lu == lv) throw std::logic_error("forest edge inside one layer");
    if (lu < lv) std::swap(u, v), std::swap(lu, lv);
    ++counts[pair_reserve_name(tp.class_of[at(u)], lu, lv > 0 ? tp.class_of[at(v)] : VertexClass::none, lv)];
  }
  const VertexClass kinds[] = {VertexClass::hi, VertexClass::lo, VertexClass::no};
  st.pair_prob.clear();
  for (int i = 1; i <= istar; ++i)
    for (VertexClass g : kinds) {
      for (int i2 = 1; i2 < i; ++i2)
        for (VertexClass g2 : kinds) {
          const auto name = pair_reserve_name(g, i, g2, i2);
          st.pair_prob[name] = static_cast<double>(counts[name]) / n + cfg.p_min;
        }
      const auto name = pair_reserve_name(g, i, VertexClass::none, 0);
      st.pair_prob[name] = static_cast<double>(counts[name]) / n + cfg.p_min;
    }
  st.class_alpha.clear();
  for (int i = 1; i <= istar; ++i) {
    st.class_alpha["Jlo:" + std::to_string(i)] = static_cast<double>(tp.classes[at(i - 1)].lo.size()) / n;
    st.class_alpha["Jno:" + std::to_string(i)] = static_cast<double>(tp.classes[at(i - 1)].no.size()) / n;
  }
  st.p1 = cfg.p - cfg.p0;
  st.p_ex = static_cast<double>(tp.p_ex.size()) / n;
  st.p_ex_prime = tp.kind == TreeCase::P ? (7.0 / 8 - cfg.eta_plus) * st.p_ex : cfg.p_ex_prime_factor * st.p_ex;
  st.alpha_hi = m > 0 ? std::pow(cfg.Delta, 0.2) * m / n : 0.0;
  const double pbar_min = st.pbar.empty() ? 0 : *std::min_element(st.pbar.begin(), st.pbar.end());
  double pair_total = 0;
  for (const auto& [name, p] : st.pair_prob) pair_total += p;
  double alpha_total = 0;
  for (const auto& [name, a] : st.class_alpha) alpha_total += a;
  if (st.p1 <= 0) throw ConfigError("probability table: p - p0 must be positive");
  if (pbar_min <= 0) throw ConfigError("probability table: some copy has no available vertices");
  st.table_arc_sum = 2 / st.p1 * (st.p_ex + pair_total + istar * cfg.p_max) +
                     (m > 0 ? 2 * st.alpha_hi / (st.p1 * pbar_min) : 0.0);
  const double denom = pbar_min * st.p1 - 2 * st.alpha_hi;
  if (denom <= 0)
    throw ConfigError("probability table: p1 * min pbar_w = " + fmt_num(pbar_min * st.p1) +
                      " does not exceed 2 alpha_hi = " + fmt_num(2 * st.alpha_hi));
  st.table_pair_sum = (st.p_ex_prime + alpha_total + istar * cfg.p_max) / denom;
  st.record("table_arc_sum", st.table_arc_sum);
  st.record("table_pair_sum", st.table_pair_sum);
  if (st.table_arc_sum > 1 + 1e-12)
    throw ConfigError("probability table: arc options sum to " + fmt_num(st.table_arc_sum) +
                      " > 1 (p_ex = " + fmt_num(st.p_ex) + ", pair densities " + fmt_num(pair_total) +
                      ", layers " + std::to_string(istar) + ", p_max = " + fmt_num(cfg.p_max) +
                      "); lower p_max or p_min, or raise p0");
  if (st.table_pair_sum > 1 + 1e-12)
    throw ConfigError("probability table: pair options sum to " + fmt_num(st.table_pair_sum) + " > 1");

  // Colour classes from the core embedding.
  ColourMatchings large, small;
  st.u_part.assign(at(n), 0);
  std::vector<int> w0;
  std::vector<std::vector<int>> wb(at(std::max(m, 0)));
  if (m > 0) {
    large.init(m, n);
    small.init(m, n);
    for (int w = 0; w < n; ++w) {
      if (st.w_block[at(w)] < 0) w0.push_back(w);
      else wb[at(st.w_block[at(w)])].push_back(w);
    }
    std::vector<int> large_ids, small_ids;
    for (std::size_t k = 0; k < st.labels.labels.size(); ++k)
      (st.labels.labels[k].large ? large_ids : small_ids).push_back(static_cast<int>(k));
    auto add_blocks = [&](ColourMatchings& cm, int vstar, int wstar, const Label& lab) {
      (void)vstar;
      for (int h = 0; h < m; ++h)
        for (int w : wb[at((wstar + h) % m)]) cm.add(h, st.emb.image(w, lab.a), w, lab.a, lab.i);
    };
    if (!large_ids.empty()) {
      LabeledMultigraph mg;
      mg.x_size = mg.y_size = m;
      mg.labels = static_cast<int>(large_ids.size());
      for (std::size_t l = 0; l < large_ids.size(); ++l) {
        const auto& lab = st.labels.labels[at(large_ids[l])];
        for (int ws = 0; ws < m; ++ws) mg.edges.push_back({(st.shift.at(lab.a) + ws) % m, ws, static_cast<int>(l)});
      }
      const auto rm = rainbow_matching(mg);
      st.rainbow_deficit = rm.deficit;
      for (int e : rm.edges) {
        const auto& ed = mg.edges[at(e)];
        add_blocks(large, ed.x, ed.y, st.labels.labels[at(large_ids[at(ed.label)])]);
      }
    }
    if (!small_ids.empty()) {
      WeightedHypergraph h(2 * m + static_cast<int>(small_ids.size()), 3);
      std::vector<std::tuple<int, int, int>> triples;
      for (std::size_t l = 0; l < small_ids.size(); ++l) {
        const auto& lab = st.labels.labels[at(small_ids[l])];
        for (int ws = 0; ws < m; ++ws) {
          const int vs = (st.shift.at(lab.a) + ws) % m;
          h.add_edge({vs, m + ws, 2 * m + static_cast<int>(l)}, 1.0 / m);
          triples.emplace_back(vs, ws, static_cast<int>(l));
        }
      }
      NibbleOptions opts;
      opts.rounds = cfg.nibble_rounds();
      opts.bite = cfg.bite;
      const auto res = nibble_match(h, {CleanFunction::size(h.edge_count())}, rng, opts);
      st.nibble_labels = res.matching.size();
      for (int e : res.matching) {
        auto [vs, ws, l] = triples[at(e)];
        add_blocks(small, vs, ws, st.labels.labels[at(small_ids[at(l)])]);
      }
    }
    st.record("rainbow_deficit", static_cast<double>(st.rainbow_deficit));
    st.record("small_labels_matched", static_cast<double>(st.nibble_labels));

    for (int x = 0; x < n; ++x) st.u_part[at(x)] = uniform_index(rng, m);
    for (const bool is_large : {false, true}) {
      std::vector<int> ids;
      for (std::size_t k = 0; k < st.labels.labels.size(); ++k)
        if (st.labels.labels[k].large == is_large) ids.push_back(static_cast<int>(k));
      auto perm = random_subset(rng, m, m);
      shuffle(perm, rng);
      for (std::size_t k = 0; k < ids.size() && k < perm.size(); ++k) {
        const auto& lab = st.labels.labels[at(ids[k])];
        for (int w : w0) (is_large ? large : small).add(perm[k], st.emb.image(w, lab.a), w, lab.a, lab.i);
      }
    }
  }

  // Orientation of the remaining near edges.
  st.g1.assign(at(n) * at(n), 0);
  const int g0 = st.arcs.find("G0");
  std::vector<std::vector<int>> in_nb(at(n));
  for (int x = 0; x < n; ++x)
    for (int y : st.emb.host().neighbors(x)) {
      if (y <= x || !st.emb.free_edge(x, y) || st.arc_label[cell(x, n, y)] == g0) continue;
      if (cyclic_distance(st.order, x, y) <= 3 * cfg.d) continue;  // close pairs stay out
      const bool fwd = coin(rng, 0.5);
      const int from = fwd ? x : y, to = fwd ? y : x;
      st.g1[cell(from, n, to)] = 1;
    }
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x)
      if (st.g1[cell(y, n, x)]) in_nb[at(x)].push_back(y);

  // Candidate high arcs: colour each component of D^h_x.
  st.hstar_w.assign(at(n) * at(n), -1);
  st.hstar_centre.assign(at(n) * at(n), -1);
  std::vector<int> hstar_layer(at(n) * at(n), -1);
  st.hi_xw.assign(at(n) * at(n), 0);
  if (m > 0) {
    std::vector<int> local(at(n), -1);
    for (int x = 0; x < n; ++x) {
      const int h = st.u_part[at(x)];
      const auto& ys = in_nb[at(x)];
      for (std::size_t k = 0; k < ys.size(); ++k) local[at(ys[k])] = static_cast<int>(k);
      Dsu dsu(ys.size());
      for (int y : ys) {
        const int w = large.w_of_y[cell(h, n, y)];
        if (w < 0 || !st.xbar[cell(w, n, x)]) continue;
        const int y2 = small.y_of_w[cell(h, n, w)];
        if (y2 >= 0 && y2 != y && local[at(y2)] >= 0) dsu.join(local[at(y)], local[at(y2)]);
      }
      std::vector<int> colour(ys.size(), -1);
      for (std::size_t k = 0; k < ys.size(); ++k) {
        const int root = dsu.find(static_cast<int>(k));
        if (colour[at(root)] < 0) colour[at(root)] = coin(rng, st.labels.p_large) ? 1 : 0;
        const auto& cm = colour[at(root)] ? large : small;
        const int y = ys[k];
        const int w = cm.w_of_y[cell(h, n, y)];
        if (w < 0 || !st.xbar[cell(w, n, x)]) continue;
        st.hstar_w[cell(y, n, x)] = w;
        st.hstar_centre[cell(y, n, x)] = cm.centre[cell(h, n, y)];
        hstar_layer[cell(y, n, x)] = cm.layer[cell(h, n, y)];
        st.hi_xw[cell(x, n, w)] = 1;
      }
      for (int y : ys) local[at(y)] = -1;
    }
  }

  // Exclusive arc reserves.
  std::vector<std::pair<int, double>> options;  // reserve id, probability
  options.emplace_back(st.arcs.id("Gex"), 2 * st.p_ex / st.p1);
  for (const auto& [name, p] : st.pair_prob) options.emplace_back(st.arcs.id(name), 2 * p / st.p1);
  for (int i = 1; i <= istar; ++i) options.emplace_back(st.arcs.id("Gleft:" + std::to_string(i)), 2 * cfg.p_max / st.p1);
  double fixed_total = 0;
  for (const auto& o : options) fixed_total += o.second;
  const int h_id = st.arcs.id("H");
  long h_arcs = 0;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      if (!st.g1[cell(y, n, x)]) continue;
      double r = uniform01(rng);
      int chosen = -1;
      for (const auto& [id, p] : options) {
        if (r < p) {
          chosen = id;
          break;
        }
        r -= p;
      }
      const int w = st.hstar_w[cell(y, n, x)];
      if (chosen < 0 && w >= 0 && st.j_label[cell(x, n, w)] < 0 &&
          r < 2 * st.alpha_hi / (st.p1 * st.pbar[at(w)])) {
        chosen = h_id;
        const int jid = st.jpairs.id("Jhi:" + std::to_string(st.hstar_centre[cell(y, n, x)]) + ":" +
                                     std::to_string(hstar_layer[cell(y, n, x)]));
        st.jpairs.members[at(jid)].emplace_back(x, w);
        st.j_label[cell(x, n, w)] = jid;
        ++h_arcs;
      }
      if (chosen < 0) continue;
      st.arcs.members[at(chosen)].emplace_back(y, x);
      st.arc_label[cell(y, n, x)] = chosen;
    }
  (void)fixed_total;

  // Exclusive pair reserves.
  std::vector<std::pair<int, double>> pair_options;  // reserve id, numerator
  pair_options.emplace_back(st.jpairs.id("Jex"), st.p_ex_prime);
  for (const auto& [name, a] : st.class_alpha) pair_options.emplace_back(st.jpairs.id(name), a);
  for (int i = 1; i <= istar; ++i) pair_options.emplace_back(st.jpairs.id("Jleft:" + std::to_string(i)), cfg.p_max);
  for (int x = 0; x < n; ++x)
    for (int w = 0; w < n; ++w) {
      if (!st.xbar[cell(w, n, x)] || st.j_label[cell(x, n, w)] >= 0) continue;
      const double pxw = st.pbar[at(w)] * st.p1 - 2 * st.alpha_hi * st.hi_xw[cell(x, n, w)];
      double r = uniform01(rng) * pxw;
      for (const auto& [id, num] : pair_options) {
        if (r < num) {
          st.jpairs.members[at(id)].emplace_back(x, w);
          st.j_label[cell(x, n, w)] = id;
          break;
        }
        r -= num;
      }
    }

  if (tp.kind == TreeCase::P)
    for (auto [y, x] : st.arcs.of("Gex")) {
      if (coin(rng, 7.0 / 8)) st.twist_main.emplace_back(y, x);
      else st.twist_pred.emplace_back(y, st.order.pred(x));
    }

  st.record("g1_arcs", static_cast<double>(std::count(st.g1.begin(), st.g1.end(), 1)));
  st.record("h_arcs", static_cast<double>(h_arcs));
  st.record("jex_pairs", static_cast<double>(st.jpairs.of("Jex").size()));
  st.mark(Clock::digraph);
}

LayerHypergraph build_layer_hypergraph(const EmbeddingState& st, int i) {
  const int n = st.n();
  const auto& tp = st.tp;
  LayerHypergraph lh;
  if (i < 1 || i > tp.i_star) return lh;
  const auto& layer = tp.layers[at(i - 1)];
  const auto& lc = tp.classes[at(i - 1)];
  std::unordered_map<std::uint64_t, int> jv, av;
  std::vector<std::vector<int>> edges;
  std::vector<double> weights;
  lh.slot_vertex.assign(layer.size() * at(n), -1);
  int next = 0;
  auto vertex_of = [&](std::unordered_map<std::uint64_t, int>& map, std::uint64_t key, int& counter) {
    auto [it, fresh] = map.emplace(key, next);
    if (fresh) ++next, ++counter;
    return it->second;
  };
  for (std::size_t k = 0; k < layer.size(); ++k) {
    const int u = layer[k];
    const int jid = st.jpairs.find(class_reserve_name(tp, u));
    if (jid < 0) continue;
    std::size_t class_size = 0;
    switch (tp.class_of[at(u)]) {
      case VertexClass::hi: class_size = lc.groups.at(tp.hi_center[at(u)]).size(); break;
      case VertexClass::lo: class_size = lc.lo.size(); break;
      case VertexClass::no: class_size = lc.no.size(); break;
      default: continue;
    }
    const auto earlier = tp.earlier(u);
    std::vector<int> reserve_of(earlier.size());
    double weight = 1.0 / static_cast<double>(class_size);
    bool usable = true;
    for (std::size_t e = 0; e < earlier.size(); ++e) {
      const int v = earlier[e];
      const int lv = tp.layer_of[at(v)];
      const auto name = pair_reserve_name(tp.class_of[at(u)], i, lv > 0 ? tp.class_of[at(v)] : VertexClass::none, lv);
      auto it = st.pair_prob.find(name);
      if (it == st.pair_prob.end()) {
        usable = false;
        break;
      }
      weight /= it->second;
      reserve_of[e] = st.arcs.find(name);
    }
    if (!usable) continue;
    for (auto [x, w] : st.jpairs.members[at(jid)]) {
      if (!st.emb.can_place(w, u, x)) continue;
      std::vector<int> verts;
      bool ok = true;
      std::vector<std::uint64_t> arc_keys;
      for (std::size_t e = 0; e < earlier.size() && ok; ++e) {
        const int y = st.emb.image(w, earlier[e]);
        ok = y >= 0 && reserve_of[e] >= 0 && st.arc_label[cell(y, n, x)] == reserve_of[e];
        if (ok) arc_keys.push_back(static_cast<std::uint64_t>(cell(y, n, x)));
      }
      if (!ok) continue;
      int& slot = lh.slot_vertex[k * at(n) + at(w)];
      if (slot < 0) slot = next++, ++lh.slots;
      verts.push_back(slot);
      verts.push_back(vertex_of(jv, static_cast<std::uint64_t>(cell(x, n, w)), lh.j_vertices));
      for (auto key : arc_keys) verts.push_back(vertex_of(av, key, lh.arc_vertices));
      edges.push_back(std::move(verts));
      weights.push_back(weight);
      lh.placements.push_back({w, u, x});
    }
  }
  int rank = 2;
  for (const auto& e : edges) rank = std::max(rank, static_cast<int>(e.size()));
  lh.h = WeightedHypergraph(next, rank);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto verts = edges[e];
    std::sort(verts.begin(), verts.end());
    lh.h.add_edge(std::move(verts), weights[e]);
  }
  return lh;
}

std::vector<Metric> instrument(const EmbeddingState& st, int i, const LayerHypergraph& lh) {
  std::vector<Metric> out;
  auto put = [&](const std::string& name, double v) { out.push_back({to_string(st.clock), i, name, v}); };
  const auto& h = lh.h;
  const int nv = h.vertices();
  put("hyper_edges", static_cast<double>(h.edge_count()));
  put("hyper_vertices", nv);

  std::vector<char> is_slot(at(nv), 0);
  for (int s : lh.slot_vertex)
    if (s >= 0) is_slot[at(s)] = 1;
  double gap = 0, slot_max = 0, slot_min = nv ? 1e300 : 0, slot_sum = 0, other_max = 0;
  for (int v = 0; v < nv; ++v) {
    const double d = h.weighted_degree(v);
    gap = std::max(gap, std::abs(d - h.weighted_degree_scan(v)));
    if (is_slot[at(v)]) {
      slot_max = std::max(slot_max, d);
      slot_min = std::min(slot_min, d);
      slot_sum += d;
    } else {
      other_max = std::max(other_max, d);
    }
  }
  put("omega_incremental_gap", gap);
  put("omega_slot_max", slot_max);
  put("omega_slot_min", lh.slots ? slot_min : 0);
  put("omega_slot_mean", lh.slots ? slot_sum / lh.slots : 0);
  put("omega_other_max", other_max);

  const auto wp = normalized_weights(h, st.cfg.eps_at(i));
  std::vector<double> dp(at(nv), 0);
  for (std::size_t e = 0; e < h.edge_count(); ++e)
    for (int v : h.edge(static_cast<int>(e)).verts) dp[at(v)] += wp[e];
  double dp_max = 0, dp_slot_min = nv ? 1e300 : 0;
  for (int v = 0; v < nv; ++v) {
    dp_max = std::max(dp_max, dp[at(v)]);
    if (is_slot[at(v)]) dp_slot_min = std::min(dp_slot_min, dp[at(v)]);
  }
  put("omega_prime_max", dp_max);
  put("omega_prime_slot_min", lh.slots ? dp_slot_min : 0);

  std::unordered_map<std::uint64_t, double> co;
  for (const auto& e : h.edges())
    for (std::size_t a = 0; a < e.verts.size(); ++a)
      for (std::size_t b = a + 1; b < e.verts.size(); ++b) co[edge_key(e.verts[a], e.verts[b])] += e.w;
  double co_max = 0;
  for (const auto& [k, v] : co) co_max = std::max(co_max, v);
  put("omega_codegree_max", co_max);

  // Bad arcs of the lo class, the vertices carrying many of them, and the
  // later neighbours those vertices reach.
  const int n = st.n();
  const auto& tp = st.tp;
  long jbad = 0;
  std::vector<long> jbad_at(at(n), 0);
  if (i >= 1 && i <= tp.i_star && !st.g1.empty()) {
    std::vector<char> in_a0p(tp.rank.size(), 0);
    for (int v : tp.a0_prime) in_a0p[at(v)] = 1;
    std::vector<int> anchors;  // A'_0 anchor of each u in A'_i, with multiplicity
    for (int u : tp.classes[at(i - 1)].lo)
      for (int v : tp.earlier(u))
        if (tp.layer_of[at(v)] == 0 && in_a0p[at(v)]) anchors.push_back(v);
    const double tol = st.cfg.xi_prime * n;
    for (auto [x, w] : st.jpairs.of("Jlo:" + std::to_string(i))) {
      long hits = 0, size = 0;
      for (int v : anchors) {
        const int y = st.emb.image(w, v);
        if (y < 0) continue;
        ++size;
        hits += st.g1[cell(y, n, x)];
      }
      if (std::abs(static_cast<double>(hits) - st.p1 * static_cast<double>(size)) > tol) ++jbad, ++jbad_at[at(x)];
    }
  }
  const double cut = std::pow(st.cfg.delta, 3) * n;
  std::vector<int> bad_vertices;
  for (int x = 0; x < n; ++x)
    if (static_cast<double>(jbad_at[at(x)]) > cut) bad_vertices.push_back(x);
  long abad_max = 0;
  if (!bad_vertices.empty())
    for (int w = 0; w < n; ++w) {
      std::set<int> hit;
      for (int x : bad_vertices) {
        const int u = st.emb.preimage(w, x);
        if (u < 0) continue;
        for (int v : tp.later(u))
          if (tp.class_of[at(v)] == VertexClass::lo || tp.class_of[at(v)] == VertexClass::no) hit.insert(v);
      }
      abad_max = std::max(abad_max, static_cast<long>(hit.size()));
    }
  put("j_bad", static_cast<double>(jbad));
  put("bad_vertices", static_cast<double>(bad_vertices.size()));
  put("a_bad_max", static_cast<double>(abad_max));
  return out;
}

void approx_decomposition(EmbeddingState& st, Rng& rng) {
  if (st.clock != Clock::digraph) throw PipelineOrderError("approx_decomposition needs digraph_allocate");
  const int n = st.n();
  const auto& tp = st.tp;
  for (int i = 1; i <= tp.i_star; ++i) {
    st.mark(Clock::layer_before, i);
    const auto lh = build_layer_hypergraph(st, i);
    for (auto& m : instrument(st, i, lh)) st.metrics.push_back(std::move(m));
    const auto wp = normalized_weights(lh.h, st.cfg.eps_at(i));
    NibbleOptions opts;
    opts.rounds = st.cfg.nibble_rounds();
    opts.bite = st.cfg.bite;
    opts.spread_samples = 0;
    const auto res = nibble_match(lh.h, {}, rng, opts, &wp);
    for (int e : res.matching) {
      const auto& pl = lh.placements[at(e)];
      st.emb.place(pl.w, pl.u, pl.x);
    }
    st.record("matched", static_cast<double>(res.matching.size()));
    st.record("slots", static_cast<double>(tp.layers[at(i - 1)].size()) * n);

    // Leftover placements through the layer's own reserves.
    const int jleft = st.jpairs.find("Jleft:" + std::to_string(i));
    const int gleft = st.arcs.find("Gleft:" + std::to_string(i));
    const int h_id = st.arcs.find("H");
    for (int a : core_in_order(tp, tp.layers[at(i - 1)])) {
      std::vector<int> wa;
      for (int w = 0; w < n; ++w)
        if (!st.emb.placed(w, a)) wa.push_back(w);
      if (wa.empty()) continue;
      auto va = random_subset(rng, n, static_cast<int>(wa.size()));
      std::vector<int> pos(at(n), -1);
      for (std::size_t k = 0; k < va.size(); ++k) pos[at(va[k])] = static_cast<int>(k);
      const auto earlier = tp.earlier(a);
      const int centre = tp.hi_center[at(a)];
      BipartiteInstance inst;
      inst.x_size = inst.y_size = static_cast<int>(wa.size());
      for (std::size_t r = 0; r < wa.size(); ++r) {
        const int w = wa[r];
        for (std::size_t k = 0; k < va.size(); ++k) {
          const int x = va[k];
          if (jleft < 0 || st.j_label[cell(x, n, w)] != jleft || !st.emb.can_place(w, a, x)) continue;
          bool ok = true;
          for (int b : earlier) {
            const int y = st.emb.image(w, b);
            if (y < 0) continue;
            ok = ok && gleft >= 0 && (st.arc_label[cell(y, n, x)] == gleft || st.arc_label[cell(x, n, y)] == gleft);
          }
          if (ok && centre >= 0) {
            const int y = st.emb.image(w, centre);
            const int lab = st.arc_label[cell(y, n, x)];
            const int rev = st.arc_label[cell(x, n, y)];
            ok = (lab >= 0 && (lab == gleft || lab == h_id)) || (rev >= 0 && (rev == gleft || rev == h_id));
          }
          if (ok) inst.b.emplace_back(static_cast<int>(r), static_cast<int>(k));
        }
        for (int y : st.emb.placed_neighbour_images(w, a))
          if (pos[at(y)] >= 0) inst.z.emplace_back(static_cast<int>(r), pos[at(y)]);
      }
      const auto mate = match_or_abort(inst, rng, st.cfg, "approx_decomposition",
                                       "layer " + std::to_string(i) + ", vertex " + std::to_string(a));
      for (std::size_t r = 0; r < wa.size(); ++r) st.emb.place(wa[r], a, va[at(mate[r])]);
    }

    // Unused degree left in each reserve that fed this layer.
    long leftover = 0;
    const std::string tag = ":" + std::to_string(i) + ":";
    for (std::size_t k = 0; k < st.arcs.names.size(); ++k) {
      const auto& name = st.arcs.names[k];
      if (name.rfind("G:", 0) != 0 || name.find(tag) == std::string::npos) continue;
      std::vector<long> deg(at(n), 0);
      for (auto [y, x] : st.arcs.members[k])
        if (!st.emb.used(y, x)) ++deg[at(x)], ++deg[at(y)];
      leftover = std::max(leftover, *std::max_element(deg.begin(), deg.end()));
    }
    st.record("leftover_degree_max", static_cast<double>(leftover));
    st.record("leftover_degree_bound", 5 * std::pow(st.cfg.eps, 0.8) * n);
    st.mark(Clock::layer_after, i);
  }
  st.mark(Clock::finished, st.layer);
}

std::vector<std::string> audit_state(const EmbeddingState& st) {
  auto bad = audit_embeddings(st.emb);
  const int n = st.n();
  const auto& tp = st.tp;

  // Arc reserves: one label per host pair, G_1 arcs only (G0 aside).
  const int g0 = st.arcs.find("G0");
  std::unordered_map<std::uint64_t, int> seen;
  for (std::size_t k = 0; k < st.arcs.names.size(); ++k)
    for (auto [y, x] : st.arcs.members[k]) {
      auto [it, fresh] = seen.emplace(edge_key(y, x), static_cast<int>(k));
      if (!fresh)
        bad.push_back("host pair " + std::to_string(y) + "-" + std::to_string(x) + " in reserves " +
                      st.arcs.names[at(it->second)] + " and " + st.arcs.names[k]);
      if (static_cast<int>(k) != g0 && (st.g1.empty() || !st.g1[cell(y, n, x)]))
        bad.push_back("reserve " + st.arcs.names[k] + " holds a non-G1 arc " + std::to_string(y) + "->" +
                      std::to_string(x));
      if (st.arc_label[cell(y, n, x)] != static_cast<int>(k)) bad.push_back("arc label table out of step");
    }
  if (!st.g1.empty() && g0 >= 0)
    for (auto [u, v] : st.arcs.members[at(g0)])
      if (st.g1[cell(u, n, v)] || st.g1[cell(v, n, u)]) bad.push_back("G0 edge also oriented into G1");

  // Pair reserves: one label per (x, w), always inside the available set.
  std::unordered_map<std::uint64_t, int> seen_pairs;
  for (std::size_t k = 0; k < st.jpairs.names.size(); ++k)
    for (auto [x, w] : st.jpairs.members[k]) {
      auto [it, fresh] = seen_pairs.emplace(static_cast<std::uint64_t>(cell(x, n, w)), static_cast<int>(k));
      if (!fresh)
        bad.push_back("pair (" + std::to_string(x) + "," + std::to_string(w) + ") in " +
                      st.jpairs.names[at(it->second)] + " and " + st.jpairs.names[k]);
      if (st.xbar.empty() || !st.xbar[cell(w, n, x)])
        bad.push_back("pair (" + std::to_string(x) + "," + std::to_string(w) + ") outside the available set");
    }

  // Interval families.
  if (!st.interval_i.empty()) {
    const int levels = 2 * st.cfg.s + 1;
    for (int i = 1; i <= levels; ++i) {
      const int width = interval_width(st.cfg.d, st.cfg.s, i);
      std::vector<int> starts(at(n), 0), ends(at(n), 0);
      for (int j = 0; j < std::min(width, n); ++j) {
        const auto fam = interval_family(n, width, j);
        const auto msg = check_interval_partition(n, fam);
        if (!msg.empty()) bad.push_back("interval family (" + std::to_string(i) + "," + std::to_string(j) + "): " + msg);
        for (const auto& iv : fam) {
          ++starts[at(iv.start)];
          ++ends[at((iv.start + iv.length) % n)];
        }
      }
      for (int z = 0; z < n; ++z)
        if (starts[at(z)] != 1 || ends[at(z)] != 1)
          bad.push_back("level " + std::to_string(i) + ": label " + std::to_string(z) + " starts " +
                        std::to_string(starts[at(z)]) + " and ends " + std::to_string(ends[at(z)]) + " intervals");
      if (at(i) < st.t_min.size()) {
        std::vector<long> holders(at(n), 0);
        for (int w = 0; w < n; ++w)
          if (st.interval_i[at(w)] == i)
            for (const auto& iv : st.y_sets[at(w)]) ++holders[at(iv.start)];
        for (int z = 0; z < n; ++z)
          if (holders[at(z)] != st.t_min[at(i)])
            bad.push_back("level " + std::to_string(i) + ": interval at " + std::to_string(z) + " kept by " +
                          std::to_string(holders[at(z)]) + " copies, expected " + std::to_string(st.t_min[at(i)]));
      }
    }
    for (int w = 0; w < n; ++w) {
      const auto fam = interval_family(n, interval_width(st.cfg.d, st.cfg.s, st.interval_i[at(w)]), st.interval_j[at(w)]);
      for (const auto& iv : st.x_sets[at(w)])
        if (std::find(fam.begin(), fam.end(), iv) == fam.end()) bad.push_back("X_w interval outside its family");
      for (const auto& iv : st.y_sets[at(w)])
        if (std::find(st.x_sets[at(w)].begin(), st.x_sets[at(w)].end(), iv) == st.x_sets[at(w)].end())
          bad.push_back("Y_w interval not in X_w");
    }
  }

  // Shift constraints, by exhaustive pair scan.
  if (!st.shift.empty()) {
    const int m = static_cast<int>(tp.m);
    const auto core = core_in_order(tp, tp.a_star);
    for (std::size_t k = 0; k < core.size(); ++k)
      for (std::size_t l = 0; l < k; ++l)
        if (cyclic_distance(m, st.shift.at(core[k]), st.shift.at(core[l])) <= 3 * st.cfg.d)
          bad.push_back("shifts of " + std::to_string(core[k]) + " and " + std::to_string(core[l]) + " too close");
  }
  return bad;
}

}  // namespace ringel
