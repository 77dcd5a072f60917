#include "nnea/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "nnea/errors.hpp"
#include "nnea/stats.hpp"

namespace nnea {

std::string to_string(PopClass c) {
  switch (c) {
    case PopClass::E0: return "E0";
    case PopClass::A: return "A";
    case PopClass::B: return "B";
  }
  return "?";
}

Observation observe_population(const PopulationState& st,
                               const ProblemSpec& ps) {
  if (ps.kind != ProblemKind::TrapZeros)
    throw ConfigError("population decomposition is defined on trapzeros only");
  const int n = ps.n;
  const int L = ps.L;
  Observation ob;
  std::int64_t best = -1, best_s1 = -1, best_s0 = -1;
  for (size_t i = 0; i < st.fitness.size(); ++i) {
    const std::int64_t f = st.fitness[i];
    best = std::max(best, f);
    if (fitness_in_s0(f, n)) {
      ++ob.s0_members;
      best_s0 = std::max(best_s0, f);
    } else if (fitness_in_s1(f, n, L)) {
      best_s1 = std::max(best_s1, f);
      if (fitness_in_sstar(f, n, L)) ob.any_sstar = true;
    }
  }
  ob.best_fitness = best;

  // multiplicity and metric of each side's internal leader; ones or zeros
  // after the two prefix positions come straight from the popcount since the
  // prefix contributes exactly two ones (A side) or none (B side)
  for (size_t i = 0; i < st.fitness.size(); ++i) {
    const std::int64_t f = st.fitness[i];
    if (best_s1 >= 0 && f == best_s1 && fitness_in_s1(f, n, L)) {
      ++ob.best_s1_count;
      const int ones = st.members[i].popcount() - 2;
      if (ob.best_s1_rho < 0 || ones < ob.best_s1_rho) ob.best_s1_rho = ones;
    } else if (best_s0 >= 0 && f == best_s0 && fitness_in_s0(f, n)) {
      ++ob.best_s0_count;
      const int zeros = (n - 2) - st.members[i].popcount();
      if (ob.best_s0_rho < 0 || zeros < ob.best_s0_rho) ob.best_s0_rho = zeros;
    }
  }

  if (best >= 0 && fitness_in_s0(best, n)) {
    ob.cls = PopClass::B;
    ob.rho = ob.best_s0_rho;
    ob.loib_count = ob.best_s0_count;
  } else if (best >= 0 && fitness_in_s1(best, n, L)) {
    ob.cls = PopClass::A;
    ob.rho = ob.best_s1_rho;
    ob.loia_count = ob.best_s1_count;
  } else {
    ob.cls = PopClass::E0;
    ob.rho = -1;
  }
  return ob;
}

EventTimeline::EventTimeline(int N, double epsilon) : N_(N) {
  if (N < 1) throw ConfigError("event timeline needs N >= 1");
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw ConfigError("takeover fraction must be in (0, 1]");
  threshold_ = static_cast<int>(
      std::ceil(epsilon * static_cast<double>(N) - 1e-12));
  if (threshold_ < 1) threshold_ = 1;
}

void EventTimeline::record_generation(std::int64_t gen,
                                      const Observation& ob) {
  if (gen != last_gen_ + 1)
    throw std::logic_error("timeline generations must arrive consecutively");
  last_gen_ = gen;

  if (ob.s0_members > 0 && first_s0_ < 0) first_s0_ = gen;
  if (ob.any_sstar && first_sstar_ < 0) first_sstar_ = gen;
  if (ob.s0_members == N_ && full_s0_ < 0) full_s0_ = gen;

  const PopClass side = ob.cls;
  const int rho = side == PopClass::E0 ? -1 : ob.rho;

  bool open = !segments_.empty() && segments_.back().exit_gen < 0;
  if (open &&
      (segments_.back().side != side || segments_.back().rho != rho)) {
    Segment& s = segments_.back();
    s.exit_gen = gen;
    if (s.side != side)
      s.exit_kind = 's';
    else
      s.exit_kind = rho > s.rho ? 'u' : 'd';
    if (s.exit_kind == 'u' && s.takeover_gen < 0) s.takeover_gen = gen;
    open = false;
  }
  if (!open) {
    Segment s;
    s.side = side;
    s.rho = rho;
    s.entry_gen = gen;
    segments_.push_back(s);
  }

  Segment& s = segments_.back();
  const int count = side == PopClass::A   ? ob.loia_count
                    : side == PopClass::B ? ob.loib_count
                                          : 0;
  s.max_count = std::max(s.max_count, count);
  if (side != PopClass::E0 && s.takeover_gen < 0 && count >= threshold_)
    s.takeover_gen = gen;
}

void EventTimeline::finish() {
  if (!segments_.empty() && segments_.back().exit_gen < 0)
    segments_.back().exit_kind = 'e';
}

std::vector<TakeoverRow> summarize_takeovers(
    const std::vector<std::vector<Segment>>& per_trial_segments) {
  struct Acc {
    std::int64_t entries = 0;
    std::vector<double> etas;
    std::vector<double> phis;
  };
  std::map<std::pair<int, int>, Acc> acc;
  for (const auto& segs : per_trial_segments) {
    for (const auto& s : segs) {
      if (s.side == PopClass::E0) continue;
      Acc& a = acc[{static_cast<int>(s.side), s.rho}];
      ++a.entries;
      if (s.takeover_gen >= 0) {
        a.etas.push_back(static_cast<double>(s.takeover_gen - s.entry_gen));
        if (s.exit_kind == 'u')
          a.phis.push_back(static_cast<double>(s.exit_gen - s.takeover_gen));
      }
    }
  }
  std::vector<TakeoverRow> rows;
  rows.reserve(acc.size());
  for (auto& [key, a] : acc) {
    TakeoverRow r;
    r.side = static_cast<PopClass>(key.first);
    r.rho = key.second;
    r.entries = a.entries;
    r.takeovers = static_cast<std::int64_t>(a.etas.size());
    if (!a.etas.empty()) {
      r.eta_mean = mean_of(a.etas);
      r.eta_p50 = quantile(a.etas, 0.5);
      r.eta_p90 = quantile(a.etas, 0.9);
      r.eta_p99 = quantile(a.etas, 0.99);
      r.eta_max = static_cast<std::int64_t>(
          *std::max_element(a.etas.begin(), a.etas.end()));
    }
    r.phi_count = static_cast<std::int64_t>(a.phis.size());
    if (!a.phis.empty()) {
      r.phi_mean = mean_of(a.phis);
      r.phi_max = static_cast<std::int64_t>(
          *std::max_element(a.phis.begin(), a.phis.end()));
    }
    rows.push_back(r);
  }
  return rows;
}

}  // namespace nnea
