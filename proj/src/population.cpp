#include "nnea/population.hpp"

#include <algorithm>
#include <cmath>

#include "nnea/errors.hpp"

namespace nnea {

std::int64_t PopulationState::best_fitness() const {
  std::int64_t best = fitness.front();
  for (auto f : fitness)
    if (f > best) best = f;
  return best;
}

void mutate_in_place(Genome& g, Rng& rng) {
  const int n = g.size();
  if (n == 1) {
    g.flip(0);
    return;
  }
  const double denom = std::log1p(-1.0 / static_cast<double>(n));
  std::int64_t pos = -1;
  for (;;) {
    const double jump = std::log(rng.uniform01_oc()) / denom;
    if (jump >= static_cast<double>(n - 1 - pos)) break;
    pos += 1 + static_cast<std::int64_t>(jump);
    g.flip(static_cast<int>(pos));
  }
}

PopulationState initialize_population(const ProblemSpec& ps, int N, Rng& rng) {
  if (N < 1) throw ConfigError("population size must be >= 1");
  PopulationState st;
  st.n = ps.n;
  st.N = N;
  st.generation = 1;
  st.members.reserve(static_cast<size_t>(N));
  st.fitness.reserve(static_cast<size_t>(N));
  for (int i = 0; i < N; ++i) {
    Genome g(ps.n);
    g.fill_random(rng);
    st.fitness.push_back(evaluate(ps, g));
    st.members.push_back(std::move(g));
  }
  return st;
}

void select_order(const std::vector<std::int64_t>& offspring_fitness,
                  const std::vector<std::int64_t>& parent_fitness,
                  std::vector<int>& order) {
  const int N = static_cast<int>(parent_fitness.size());
  order.resize(static_cast<size_t>(2 * N));
  for (int i = 0; i < 2 * N; ++i) order[static_cast<size_t>(i)] = i;
  auto fit = [&](int id) {
    return id < N ? offspring_fitness[static_cast<size_t>(id)]
                  : parent_fitness[static_cast<size_t>(id - N)];
  };
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const std::int64_t fa = fit(a), fb = fit(b);
    if (fa != fb) return fa > fb;
    const bool oa = a < N, ob = b < N;
    if (oa != ob) return oa;  // offspring edge out parents on ties
    return a % N < b % N;
  });
}

void step_population(PopulationState& st, const ProblemSpec& ps, Rng& rng,
                     StepWorkspace& ws) {
  const int N = st.N;
  ws.offspring.resize(static_cast<size_t>(N));
  ws.offspring_fitness.resize(static_cast<size_t>(N));
  for (int i = 0; i < N; ++i) {
    ws.offspring[static_cast<size_t>(i)] = st.members[static_cast<size_t>(i)];
    mutate_in_place(ws.offspring[static_cast<size_t>(i)], rng);
    ws.offspring_fitness[static_cast<size_t>(i)] =
        evaluate(ps, ws.offspring[static_cast<size_t>(i)]);
  }
  select_order(ws.offspring_fitness, st.fitness, ws.order);
  ws.next_members.resize(static_cast<size_t>(N));
  ws.next_fitness.resize(static_cast<size_t>(N));
  for (int k = 0; k < N; ++k) {
    const int id = ws.order[static_cast<size_t>(k)];
    if (id < N) {
      ws.next_members[static_cast<size_t>(k)] =
          std::move(ws.offspring[static_cast<size_t>(id)]);
      ws.next_fitness[static_cast<size_t>(k)] =
          ws.offspring_fitness[static_cast<size_t>(id)];
    } else {
      ws.next_members[static_cast<size_t>(k)] =
          std::move(st.members[static_cast<size_t>(id - N)]);
      ws.next_fitness[static_cast<size_t>(k)] =
          st.fitness[static_cast<size_t>(id - N)];
    }
  }
  st.members.swap(ws.next_members);
  st.fitness.swap(ws.next_fitness);
  ++st.generation;
}

}  // namespace nnea
