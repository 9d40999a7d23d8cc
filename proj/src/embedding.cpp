#include "ringel/embedding.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "ringel/errors.hpp"

namespace ringel {

Embeddings::Embeddings(Graph host, Tree tree) : host_(std::move(host)), tree_(std::move(tree)) {
  const auto n = static_cast<std::size_t>(host_.n());
  phi_.assign(n * static_cast<std::size_t>(tree_.size()), -1);
  inv_.assign(n * n, -1);
  used_.assign(n * n, 0);
}

bool Embeddings::can_place(int w, int u, int x) const {
  if (x < 0 || x >= n() || in_image(w, x) || placed(w, u)) return false;
  for (int b : tree_.neighbors(u)) {
    const int y = image(w, b);
    if (y >= 0 && !free_edge(x, y)) return false;
  }
  return true;
}

void Embeddings::place(int w, int u, int x) {
  if (!can_place(w, u, x))
    throw std::logic_error("cannot place tree vertex " + std::to_string(u) + " at " + std::to_string(x) +
                           " in copy " + std::to_string(w));
  for (int b : tree_.neighbors(u)) {
    const int y = image(w, b);
    if (y < 0) continue;
    used_[idx(x, n(), y)] = used_[idx(y, n(), x)] = 1;
    ++used_count_;
  }
  phi_[idx(w, tree_.size(), u)] = x;
  inv_[idx(w, n(), x)] = u;
  ++placed_count_;
}

std::vector<int> Embeddings::placed_neighbour_images(int w, int u) const {
  std::vector<int> out;
  for (int b : tree_.neighbors(u))
    if (placed(w, b)) out.push_back(image(w, b));
  return out;
}

std::vector<std::vector<int>> Embeddings::copies() const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(n()));
  for (int w = 0; w < n(); ++w)
    for (int u = 0; u < tree_.size(); ++u) out[static_cast<std::size_t>(w)].push_back(image(w, u));
  return out;
}

Decomposition Embeddings::to_decomposition() const { return {host_, tree_, copies()}; }

std::vector<std::string> audit_embeddings(const Embeddings& e) {
  std::vector<std::string> bad;
  const int n = e.n();
  const Tree& t = e.tree();
  std::unordered_map<std::uint64_t, int> owner;
  long edges = 0;
  for (int w = 0; w < n; ++w) {
    std::vector<int> seen(static_cast<std::size_t>(n), -1);
    for (int u = 0; u < t.size(); ++u) {
      const int x = e.image(w, u);
      if (x < 0) continue;
      if (seen[static_cast<std::size_t>(x)] >= 0)
        bad.push_back("copy " + std::to_string(w) + " maps " + std::to_string(seen[static_cast<std::size_t>(x)]) +
                      " and " + std::to_string(u) + " to " + std::to_string(x));
      seen[static_cast<std::size_t>(x)] = u;
      if (e.preimage(w, x) != u) bad.push_back("inverse map out of step in copy " + std::to_string(w));
    }
    for (auto [a, b] : t.edges()) {
      const int x = e.image(w, a), y = e.image(w, b);
      if (x < 0 || y < 0) continue;
      ++edges;
      if (!e.host().has_edge(x, y)) {
        bad.push_back("copy " + std::to_string(w) + " maps tree edge to non-edge " + std::to_string(x) + "-" +
                      std::to_string(y));
        continue;
      }
      auto [it, fresh] = owner.emplace(edge_key(x, y), w);
      if (!fresh)
        bad.push_back("host edge " + std::to_string(x) + "-" + std::to_string(y) + " used by copies " +
                      std::to_string(it->second) + " and " + std::to_string(w));
      if (!e.used(x, y)) bad.push_back("embedded edge " + std::to_string(x) + "-" + std::to_string(y) + " not marked used");
    }
  }
  if (edges != e.used_count())
    bad.push_back("used-edge count " + std::to_string(e.used_count()) + " differs from embedded edges " +
                  std::to_string(edges));
  return bad;
}

std::vector<int> match_or_abort(const BipartiteInstance& inst, Rng& rng, const ParamConfig& cfg,
                                const std::string& stage, const std::string& where) {
  const int n = std::max(inst.x_size, 2);
  const double nlogn = n * std::log(static_cast<double>(n));
  SwitchingOptions opts;
  opts.repair_budget = static_cast<long>(cfg.walk_budget_factor * nlogn) * 10 + 1000;
  opts.guided = true;
  try {
    return match_sample(inst, rng, static_cast<long>(cfg.match_steps_factor * nlogn), opts).mate_x;
  } catch (const InfeasibleError& e) {
    throw AbortError(stage, where + ": " + e.what());
  } catch (const StuckError& e) {
    throw AbortError(stage, where + ": " + e.what());
  }
}

}  // namespace ringel
