#pragma once

#include <cstdint>
#include <vector>

#include "nnea/population.hpp"
#include "nnea/problems.hpp"

namespace nnea {

// coarse location of the whole population, named by its best member:
// A = best is in the ones-prefix schema, B = best is in the zeros-prefix
// schema, E0 = neither schema holds the best member
enum class PopClass : std::int8_t { E0, A, B };

std::string to_string(PopClass c);

// per-generation summary used by the event timeline
struct Observation {
  PopClass cls = PopClass::E0;
  // class metric: fewest ones after the prefix over best A members, or
  // fewest zeros after the prefix over best B members; -1 for E0
  int rho = -1;
  int loia_count = 0;  // best-fitness members in the ones schema (class A)
  int loib_count = 0;  // best-fitness members in the zeros schema (class B)
  // side-internal leaders, tracked regardless of which side owns the best
  int best_s1_count = 0;
  int best_s1_rho = -1;
  int best_s0_count = 0;
  int best_s0_rho = -1;
  int s0_members = 0;
  bool any_sstar = false;
  std::int64_t best_fitness = -1;
};

Observation observe_population(const PopulationState& st,
                               const ProblemSpec& ps);

// maximal run of generations with a constant (class, metric) label
struct Segment {
  PopClass side = PopClass::E0;
  int rho = -1;
  std::int64_t entry_gen = 0;
  std::int64_t takeover_gen = -1;  // first generation the leader count
                                   // reached ceil(epsilon*N), if any
  std::int64_t exit_gen = -1;      // unset when the run ended inside
  char exit_kind = 'e';  // 'u' metric up, 'd' metric down, 's' side or class
                         // change, 'e' end of run
  int max_count = 0;
};

// folds per-generation observations into segments and takeover marks; a
// metric-raising exit that never reached the count threshold counts as taken
// over at the exit itself
class EventTimeline {
 public:
  EventTimeline(int N, double epsilon);

  void record_generation(std::int64_t gen, const Observation& ob);
  void finish();

  const std::vector<Segment>& segments() const { return segments_; }
  std::int64_t first_s0_gen() const { return first_s0_; }
  std::int64_t first_sstar_gen() const { return first_sstar_; }
  std::int64_t full_s0_gen() const { return full_s0_; }
  int threshold() const { return threshold_; }

 private:
  int N_ = 0;
  int threshold_ = 0;
  std::int64_t last_gen_ = 0;
  std::int64_t first_s0_ = -1;
  std::int64_t first_sstar_ = -1;
  std::int64_t full_s0_ = -1;
  std::vector<Segment> segments_;
};

// per (side, metric) aggregate over many runs' segments
struct TakeoverRow {
  PopClass side = PopClass::E0;
  int rho = -1;
  std::int64_t entries = 0;     // segments observed at this label
  std::int64_t takeovers = 0;   // of those, how many reached the threshold
  double eta_mean = 0.0;        // generations from entry to takeover
  double eta_p50 = 0.0;
  double eta_p90 = 0.0;
  double eta_p99 = 0.0;
  std::int64_t eta_max = 0;
  std::int64_t phi_count = 0;   // takeover-to-exit waits (metric-up exits)
  double phi_mean = 0.0;
  std::int64_t phi_max = 0;
};

std::vector<TakeoverRow> summarize_takeovers(
    const std::vector<std::vector<Segment>>& per_trial_segments);

}  // namespace nnea
