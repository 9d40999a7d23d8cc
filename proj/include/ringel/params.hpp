#pragma once

#include <string>
#include <vector>

namespace ringel {

// Concrete values for the whole parameter chain plus the knobs of the
// randomized subroutines. `desk(n, p)` gives the defaults used at n in the
// hundreds to tens of thousands; every field can be overridden afterwards.
struct ParamConfig {
  int n = 0;       // host vertex count
  double p = 0.5;  // host density

  double xi = 0.005;
  double xi_prime = 0.008;
  double c = 0.25;
  double c_prime = 0.1;
  double Delta = 1;   // n^c
  double Lambda = 1;  // n^(1-c)
  double D = 16;
  double delta = 0.01;
  double p_min = 1e-4;
  std::vector<double> eps_i;  // eps_1 .. eps_{i_plus}, geometric
  double p_max = 0.05;
  double eps = 0.05;
  double p0 = 0.1;
  double eta_minus = 0.11;
  double p_minus = 0.13;
  double eta_plus = 0.15;
  double p_plus = 0.2;
  int K = 4;
  int d = 1;  // ceil(n^0.6)
  int s = 4;

  // Subroutine knobs.
  double bite = 0.1;
  int rounds = 0;                   // 0 means ceil(30 / bite)
  double match_steps_factor = 50;   // switching steps = factor * n log n
  double walk_budget_factor = 100;  // orientation walks / xvz moves: factor * n log n
  double p_ex_prime_factor = 2;     // Case S reserve: p'_ex = factor * p_ex (capped)

  static ParamConfig desk(int n, double p);

  // Recompute the n-dependent fields (Delta, Lambda, d, eps_i) after n or c changed.
  void derive();

  int i_plus() const;          // ceil(7 ln(1/eps))
  int nibble_rounds() const;   // rounds, or the default derived from bite
  double eps_at(int i) const;  // eps_i for i in [1, i_plus], clamped

  // Throws ConfigError naming the first broken constraint.
  void validate() const;
  // Orderings of the asymptotic chain that the desk defaults do not honour.
  std::vector<std::string> warnings() const;
};

}  // namespace ringel
