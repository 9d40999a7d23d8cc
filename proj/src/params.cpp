#include "ringel/params.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "ringel/errors.hpp"

namespace ringel {

ParamConfig ParamConfig::desk(int n, double p) {
  ParamConfig cfg;
  cfg.n = n;
  cfg.p = p;
  cfg.derive();
  return cfg;
}

void ParamConfig::derive() {
  const double nn = std::max(n, 1);
  Delta = std::pow(nn, c);
  Lambda = std::pow(nn, 1 - c);
  d = std::max(1, static_cast<int>(std::ceil(std::pow(nn, 0.6))));
  const int ip = i_plus();
  eps_i.resize(static_cast<std::size_t>(ip));
  for (int i = 1; i <= ip; ++i) eps_i[static_cast<std::size_t>(i - 1)] = eps * std::pow(2.0, i - ip);
}

int ParamConfig::i_plus() const { return std::max(1, static_cast<int>(std::ceil(7 * std::log(1 / eps)))); }

int ParamConfig::nibble_rounds() const {
  return rounds > 0 ? rounds : static_cast<int>(std::ceil(30 / bite));
}

double ParamConfig::eps_at(int i) const {
  if (eps_i.empty()) return eps;
  i = std::clamp(i, 1, static_cast<int>(eps_i.size()));
  return eps_i[static_cast<std::size_t>(i - 1)];
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("parameter constraint violated: " + what);
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

}  // namespace

void ParamConfig::validate() const {
  require(n >= 1, "n >= 1 (got " + std::to_string(n) + ")");
  require(p > 0 && p <= 1, "0 < p <= 1 (got " + num(p) + ")");
  require(xi > 0 && xi < xi_prime && xi_prime < 1, "0 < xi < xi' < 1");
  require(c_prime > 0 && c_prime < c && c < 1, "0 < c' < c < 1");
  require(Delta >= 1 && Delta < Lambda, "1 <= Delta < Lambda (got " + num(Delta) + ", " + num(Lambda) + ")");
  require(D > 1, "D > 1");
  require(delta > 0 && delta < 1, "0 < delta < 1");
  require(p_min > 0 && p_min < 1, "0 < p_min < 1");
  require(!eps_i.empty(), "eps_i populated (call derive())");
  for (std::size_t i = 0; i < eps_i.size(); ++i) {
    require(eps_i[i] > 0, "eps_" + std::to_string(i + 1) + " > 0");
    if (i > 0) require(eps_i[i - 1] < eps_i[i], "eps_i strictly increasing");
  }
  require(eps_i.back() <= p_max, "eps_{i+} <= p_max (got " + num(eps_i.back()) + " > " + num(p_max) + ")");
  require(p_max <= eps, "p_max <= eps (got " + num(p_max) + " > " + num(eps) + ")");
  require(eps < p0, "eps < p0 (got " + num(eps) + " >= " + num(p0) + ")");
  require(p0 < eta_minus, "p0 < eta_minus (got " + num(p0) + " >= " + num(eta_minus) + ")");
  require(eta_minus < p_minus, "eta_minus < p_minus");
  require(p_minus < eta_plus, "p_minus < eta_plus");
  require(eta_plus < p_plus, "eta_plus < p_plus");
  require(p_plus < p, "p_plus < p (got " + num(p_plus) + " >= " + num(p) + "); lower the p_* chain for sparse hosts");
  require(s >= 1 && eta_plus < 1.0 / s, "eta_plus < 1/s");
  require(K >= 1, "K >= 1");
  require(d >= 1, "d >= 1");
  require(bite > 0 && bite <= 1, "0 < bite <= 1");
  require(rounds >= 0, "rounds >= 0");
  require(match_steps_factor >= 0, "match_steps_factor >= 0");
  require(walk_budget_factor > 0, "walk_budget_factor > 0");
  require(p_ex_prime_factor >= 1, "p_ex_prime_factor >= 1");
}

std::vector<std::string> ParamConfig::warnings() const {
  std::vector<std::string> w;
  if (1 / D >= delta) w.push_back("1/D >= delta: D^-1 << delta not honoured");
  if (delta >= p_min) w.push_back("delta >= p_min: delta << p_min not honoured");
  if (!eps_i.empty() && p_min >= eps_i.front()) w.push_back("p_min >= eps_1: p_min << eps_1 not honoured");
  if (Delta <= D) w.push_back("Delta <= D: degree-D core contains the degree-Delta core");
  if (xi_prime >= 1.0 / K) w.push_back("xi' >= 1/K");
  return w;
}

}  // namespace ringel
