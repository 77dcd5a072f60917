#pragma once

#include <cstdint>
#include <vector>

#include "nnea/bitgenome.hpp"
#include "nnea/problems.hpp"
#include "nnea/rng.hpp"

namespace nnea {

struct PopulationState {
  int n = 0;
  int N = 0;
  std::int64_t generation = 0;  // the initial population is generation 1
  std::vector<Genome> members;
  std::vector<std::int64_t> fitness;

  std::int64_t best_fitness() const;
};

// flips each bit independently with probability 1/n, implemented by sampling
// geometric gaps between flips so the cost is O(flips), not O(n)
void mutate_in_place(Genome& g, Rng& rng);

PopulationState initialize_population(const ProblemSpec& ps, int N, Rng& rng);

// survivor order over 2N candidates, ids 0..N-1 = offspring i, N..2N-1 =
// parent id-N: higher fitness first, then offspring before parents, then
// lower original index; the first N ids survive
void select_order(const std::vector<std::int64_t>& offspring_fitness,
                  const std::vector<std::int64_t>& parent_fitness,
                  std::vector<int>& order);

// reusable buffers so a long run does not allocate per generation
struct StepWorkspace {
  std::vector<Genome> offspring;
  std::vector<std::int64_t> offspring_fitness;
  std::vector<Genome> next_members;
  std::vector<std::int64_t> next_fitness;
  std::vector<int> order;
};

// one generation: each parent spawns one mutated offspring, and truncation
// keeps the best N of the 2N candidates under the order above
void step_population(PopulationState& st, const ProblemSpec& ps, Rng& rng,
                     StepWorkspace& ws);

}  // namespace nnea
