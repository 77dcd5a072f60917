#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "nnea/problems.hpp"

namespace nnea {

// full-state model of the N=1 process on n-bit genomes: propose by
// independent bit flips at rate 1/n, accept when fitness does not drop,
// rejected proposals fold into the self-loop; the optimum absorbs
class ChainModel {
 public:
  static ChainModel build(ProblemKind kind, int n);

  ProblemKind kind() const { return kind_; }
  int n() const { return n_; }
  std::int64_t states() const { return S_; }
  std::uint64_t optimum() const { return opt_; }
  std::int64_t fitness_of(std::uint64_t x) const;

  // one transition row including the self-loop; O(2^n)
  std::vector<double> transition_row(std::uint64_t x) const;

  // expected steps until the optimum enters, one entry per state; solved
  // lazily once and cached
  const std::vector<long double>& expected_steps();
  long double expected_from(std::uint64_t x);
  long double expected_from_uniform();

  // max over non-absorbed states of |E[x] - 1 - sum_y P(x,y) E[y]|, the
  // one-step recurrence the solution must satisfy
  long double recurrence_residual();

  struct CdfResult {
    std::vector<double> cdf;  // cdf[t] = P(hit within t steps), t = 0..T
    long double partial_mean = 0.0L;  // sum of t * P(hit at step t), t <= T
    long double mass = 0.0L;          // cdf[T]
  };
  CdfResult hitting_cdf_uniform(std::int64_t T);
  CdfResult hitting_cdf_from(std::uint64_t x, std::int64_t T);

  // exact one-step decrease of a candidate distance function V, and the
  // hitting-time guarantee V implies when the decrease clears c_l
  struct PotentialReport {
    bool applicable = false;      // min_drift >= c_l
    long double min_drift = 0.0L;  // over non-absorbed states
    long double max_drift = 0.0L;
    // max over states of E[steps] - V(x)/c_l; <= 0 when the guarantee holds
    long double max_excess = 0.0L;
    long double max_equality_gap = 0.0L;  // max |E[steps] - V(x)/c_l|
  };
  PotentialReport check_potential(const std::vector<long double>& V,
                                  long double c_l);

 private:
  ChainModel() = default;

  CdfResult hitting_cdf_from_impl(const std::uint64_t* start, std::int64_t T);
  void solve();
  std::vector<long double> residual_vector(const std::vector<long double>& V,
                                           long double* max_abs) const;
  void solve_level_system(int lev, const std::vector<double>& rhs,
                          std::vector<double>& out, bool allow_factor_reuse);
  void sweep_levels(const std::vector<double>& rhs_base, bool constant_one,
                    std::vector<long double>& into, bool reuse_factors);

  ProblemKind kind_ = ProblemKind::OneMax;
  int n_ = 0;
  std::int64_t S_ = 0;
  std::uint64_t opt_ = 0;
  std::vector<std::int32_t> fit_;
  std::vector<std::vector<std::uint32_t>> levels_;  // ascending fitness
  std::vector<std::int32_t> level_of_;
  std::vector<double> pow_d_;        // (1/n)^d (1-1/n)^(n-d)
  std::vector<long double> pow_ld_;
  std::vector<double> self_p_;       // P(x,x)
  std::vector<long double> V_;
  bool solved_ = false;
  long double residual_after_solve_ = 0.0L;

  struct LevelFactors;
  std::shared_ptr<LevelFactors> factors_;
  bool keep_factors_ = false;
};

}  // namespace nnea
