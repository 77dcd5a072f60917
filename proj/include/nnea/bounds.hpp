#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace nnea {

enum class BoundKind {
  ChernoffLower,
  ChernoffUpper1,
  ChernoffUpper2,
  Chebyshev,
  Markov,
  TakeoverGrowthA,
  TakeoverGrowthB,
  UpgradeProbA,
};

const std::vector<BoundKind>& bound_kinds();
std::string to_string(BoundKind kind);
BoundKind bound_kind_from_string(const std::string& name);

struct BoundCheck {
  BoundKind kind = BoundKind::ChernoffLower;
  std::map<std::string, double> params;
  double exact = 0.0;
  double bound = 0.0;
  bool lower_bound = false;  // true when `bound` must sit below `exact`
  bool vacuous = false;      // the bound carries no information
  bool satisfied = false;
};

// exact binomial tails in long double; thresholds are real-valued and
// resolved to the integer lattice with a 1e-12 nudge
long double binom_tail_ge(std::int64_t k0, std::int64_t m, long double p);
long double binom_tail_le(std::int64_t k1, std::int64_t m, long double p);

// P[X < (1-psi) m p] vs exp(-m p psi^2 / 2), for 0 < psi < 1
BoundCheck chernoff_lower(std::int64_t m, double p, double psi);
// P[X > (1+psi) m p] vs exp(-m p psi^2 / 4), for 0 < psi <= 2e-1
BoundCheck chernoff_upper1(std::int64_t m, double p, double psi);
// P[X > (1+psi) m p] vs (e^psi / (1+psi)^(1+psi))^(m p), for psi > 0
BoundCheck chernoff_upper2(std::int64_t m, double p, double psi);
// P[|X - m p| >= r sd] vs 1/r^2
BoundCheck chebyshev_binomial(std::int64_t m, double p, double r);
// P[X >= a] vs m p / a
BoundCheck markov_binomial(std::int64_t m, double p, double a);

// probability that Bin(X, h) newcomers exceed c h X, against the
// second-moment lower bound 1 - (1-h) / ((1-c)^2 X h); the side only labels
// which schema family the group sits on
BoundCheck takeover_growth(char side, std::int64_t X, double h, double c);

// probability that at least one of `count` mutations upgrades a genome whose
// trailing gap is rho: 1 - (1 - (1/n)(1-1/n)^rho)^count
long double upgrade_probability(int n, int rho, std::int64_t count);
// checks 1/u <= 1 + e^2 n / count
BoundCheck upgrade_prob_A(int n, int rho, std::int64_t count);

// dispatch by kind with named parameters, as read from a cases file
BoundCheck run_bound_case(BoundKind kind,
                          const std::map<std::string, double>& params);

struct BoundSweepConfig {
  int tuples_per_kind = 1000;
  std::uint64_t seed = 1;
};

// deterministic randomized sweep across all kinds; every returned check has
// been evaluated, violations are the entries with satisfied == false
std::vector<BoundCheck> sweep_bound_checks(const BoundSweepConfig& cfg);

}  // namespace nnea
