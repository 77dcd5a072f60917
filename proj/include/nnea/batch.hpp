#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "nnea/config.hpp"
#include "nnea/decomposition.hpp"
#include "nnea/population.hpp"

namespace nnea {

struct TrialRecord {
  std::int64_t trial = 0;
  std::uint64_t stream_seed = 0;
  bool hit = false;
  std::int64_t tau = -1;  // selection steps executed when the optimum first
                          // entered the population; 0 means present at init
  std::int64_t generations = 0;   // selection steps executed in total
  std::int64_t evaluations = 0;   // offspring evaluations consumed
  std::int64_t first_s0_gen = -1;
  std::int64_t first_sstar_gen = -1;
  std::int64_t full_s0_gen = -1;
  bool early_aborted = false;
  PopClass initial_class = PopClass::E0;
  int initial_rho = -1;
  std::vector<Segment> segments;  // trapzeros only, when kept
};

// one run under the per-trial stream derived from (cfg.seed, trial_index);
// stops on optimum, exhausted budget, or the deep-trap abort when enabled
TrialRecord run_trial(const ExperimentConfig& cfg, std::int64_t trial_index,
                      bool keep_segments);

struct RateEstimate {
  std::int64_t successes = 0;
  std::int64_t trials = 0;
  std::int64_t budget = 0;
  double p_hat = 0.0;
  double wilson_lo = 0.0;
  double wilson_hi = 1.0;
};

// fraction of trials that hit the optimum within the evaluation budget,
// with a Wilson 95% interval; the budget may be tighter than the one the
// trials ran under
RateEstimate estimate_solvable_rate(const std::vector<TrialRecord>& records,
                                    std::int64_t budget);

struct BatchResult {
  ExperimentConfig cfg;
  std::vector<TrialRecord> records;
  RateEstimate rate;
  double mean_tau_hits = 0.0;  // over hits only; 0 when there were none
  double sd_tau_hits = 0.0;
  std::int64_t early_aborts = 0;
};

BatchResult run_batch(const ExperimentConfig& cfg, int workers,
                      bool keep_segments);

// right-continuous step points (t, fraction of all trials with tau <= t);
// censored trials never contribute
std::vector<std::pair<std::int64_t, double>> hitting_ecdf(
    const std::vector<TrialRecord>& records);

// grid of (n, N) cells sharing every other setting; each cell runs under its
// own seed derived from the base seed and the cell coordinates, so results
// do not depend on cell order
std::vector<BatchResult> run_sweep(
    const ExperimentConfig& base, const std::vector<std::pair<int, int>>& grid,
    int workers);

std::vector<std::pair<int, int>> parse_grid(const std::string& grid);

}  // namespace nnea
