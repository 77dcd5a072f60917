#include "nnea/batch.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <thread>

#include "nnea/errors.hpp"
#include "nnea/stats.hpp"

namespace nnea {

namespace {

// deep-trap abort: every member sits in the zeros schema with the whole
// block already zero, so leaving through the ones schema needs an L-bit
// jump; the chance any remaining generation does so is at most N * n^-L
bool population_locked(const PopulationState& st, const ProblemSpec& ps) {
  for (size_t i = 0; i < st.members.size(); ++i) {
    if (!fitness_in_s0(st.fitness[i], ps.n)) return false;
    if (st.members[i].leading_zeros() < ps.L) return false;
  }
  return true;
}

}  // namespace

TrialRecord run_trial(const ExperimentConfig& cfg, std::int64_t trial_index,
                      bool keep_segments) {
  const ProblemSpec ps = ProblemSpec::make(cfg.problem, cfg.n);
  Rng rng = Rng::for_stream(cfg.seed, static_cast<std::uint64_t>(trial_index));

  TrialRecord rec;
  rec.trial = trial_index;
  rec.stream_seed =
      Rng::stream_seed(cfg.seed, static_cast<std::uint64_t>(trial_index));

  PopulationState pop = initialize_population(ps, cfg.N, rng);
  const bool track = cfg.problem == ProblemKind::TrapZeros;
  EventTimeline timeline(cfg.N, cfg.epsilon);

  auto note = [&](const Observation& ob) {
    timeline.record_generation(pop.generation, ob);
    if (pop.generation == 1) {
      rec.initial_class = ob.cls;
      rec.initial_rho = ob.rho;
    }
  };
  if (track) note(observe_population(pop, ps));

  if (pop.best_fitness() == ps.optimum_fitness) {
    rec.hit = true;
    rec.tau = 0;
  }

  StepWorkspace ws;
  std::int64_t evals = 0;
  while (!rec.hit) {
    if (evals + cfg.N > cfg.eval_budget) break;
    step_population(pop, ps, rng, ws);
    evals += cfg.N;
    bool locked = false;
    if (track) {
      const Observation ob = observe_population(pop, ps);
      note(ob);
      locked = cfg.early_abort && ob.s0_members == cfg.N &&
               population_locked(pop, ps);
    }
    if (pop.best_fitness() == ps.optimum_fitness) {
      rec.hit = true;
      rec.tau = pop.generation - 1;
    } else if (locked) {
      rec.early_aborted = true;
      break;
    }
  }
  rec.generations = pop.generation - 1;
  rec.evaluations = evals;
  if (track) {
    timeline.finish();
    rec.first_s0_gen = timeline.first_s0_gen();
    rec.first_sstar_gen = timeline.first_sstar_gen();
    rec.full_s0_gen = timeline.full_s0_gen();
    if (keep_segments) rec.segments = timeline.segments();
  }
  return rec;
}

BatchResult run_batch(const ExperimentConfig& cfg, int workers,
                      bool keep_segments) {
  if (workers < 1) throw ConfigError("workers must be >= 1");
  BatchResult res;
  res.cfg = cfg;
  res.records.resize(static_cast<size_t>(cfg.trials));

  // the per-trial streams make results independent of scheduling
  std::atomic<std::int64_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::int64_t t = next.fetch_add(1);
      if (t >= cfg.trials) return;
      res.records[static_cast<size_t>(t)] =
          run_trial(cfg, t, keep_segments);
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<double> taus;
  for (const auto& r : res.records) {
    if (r.hit) taus.push_back(static_cast<double>(r.tau));
    if (r.early_aborted) ++res.early_aborts;
  }
  res.rate = estimate_solvable_rate(res.records, cfg.eval_budget);
  if (!taus.empty()) res.mean_tau_hits = mean_of(taus);
  if (taus.size() >= 2) res.sd_tau_hits = sample_sd(taus);
  return res;
}

RateEstimate estimate_solvable_rate(const std::vector<TrialRecord>& records,
                                    std::int64_t budget) {
  if (records.empty()) {
    throw ConfigError("cannot estimate a rate from zero trials");
  }
  if (budget < 1) throw ConfigError("budget must be positive");
  RateEstimate rate;
  rate.trials = static_cast<std::int64_t>(records.size());
  rate.budget = budget;
  for (const auto& r : records) {
    if (r.hit && r.evaluations <= budget) ++rate.successes;
  }
  rate.p_hat =
      static_cast<double>(rate.successes) / static_cast<double>(rate.trials);
  const WilsonInterval w = wilson95(rate.successes, rate.trials);
  rate.wilson_lo = w.lo;
  rate.wilson_hi = w.hi;
  return rate;
}

std::vector<std::pair<std::int64_t, double>> hitting_ecdf(
    const std::vector<TrialRecord>& records) {
  std::vector<std::int64_t> taus;
  for (const auto& r : records)
    if (r.hit) taus.push_back(r.tau);
  std::sort(taus.begin(), taus.end());
  std::vector<std::pair<std::int64_t, double>> pts;
  const double m = static_cast<double>(records.size());
  size_t i = 0;
  while (i < taus.size()) {
    size_t j = i;
    while (j < taus.size() && taus[j] == taus[i]) ++j;
    pts.emplace_back(taus[i], static_cast<double>(j) / m);
    i = j;
  }
  return pts;
}

std::vector<BatchResult> run_sweep(const ExperimentConfig& base,
                                   const std::vector<std::pair<int, int>>& grid,
                                   int workers) {
  if (grid.empty()) throw ConfigError("sweep grid is empty");
  std::vector<BatchResult> cells;
  cells.reserve(grid.size());
  for (const auto& [n, N] : grid) {
    ExperimentConfig cfg = base;
    cfg.n = n;
    cfg.N = N;
    cfg.eval_budget = 0;  // rescale the default budget per n
    if (base.eval_budget != 0) cfg.eval_budget = base.eval_budget;
    std::uint64_t s = base.seed ^ (0x9e3779b97f4a7c15ULL *
                                   static_cast<std::uint64_t>(n));
    s ^= 0xc2b2ae3d27d4eb4fULL * static_cast<std::uint64_t>(N);
    cfg.seed = splitmix64_next(s);
    cfg.finalize();
    cells.push_back(run_batch(cfg, workers, true));
  }
  return cells;
}

std::vector<std::pair<int, int>> parse_grid(const std::string& grid) {
  std::vector<std::pair<int, int>> out;
  size_t pos = 0;
  while (pos < grid.size()) {
    size_t comma = grid.find(',', pos);
    if (comma == std::string::npos) comma = grid.size();
    const std::string item = grid.substr(pos, comma - pos);
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw ConfigError("grid cell '" + item + "' is not n:N");
    int n = 0, N = 0;
    auto [p1, e1] =
        std::from_chars(item.data(), item.data() + colon, n);
    auto [p2, e2] = std::from_chars(item.data() + colon + 1,
                                    item.data() + item.size(), N);
    if (e1 != std::errc() || p1 != item.data() + colon || e2 != std::errc() ||
        p2 != item.data() + item.size() || n < 1 || N < 1)
      throw ConfigError("grid cell '" + item + "' is not n:N");
    out.emplace_back(n, N);
    pos = comma + 1;
  }
  if (out.empty()) throw ConfigError("sweep grid is empty");
  return out;
}

}  // namespace nnea
