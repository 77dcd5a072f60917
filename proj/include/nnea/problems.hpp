#pragma once

#include <cstdint>
#include <string>

#include "nnea/bitgenome.hpp"

namespace nnea {

enum class ProblemKind { TrapZeros, OneMax };

ProblemKind problem_from_string(const std::string& name);
std::string to_string(ProblemKind kind);

// deceptive-prefix block length: floor(ln(n)^2) + 2
int block_length(int n);

// membership by prefix shape; SStar means the whole block of ones is present
enum class SchemaClass : std::int8_t { Prefix01, Prefix10, S1NonStar, S0, SStar };

std::string to_string(SchemaClass c);

struct ProblemSpec {
  ProblemKind kind = ProblemKind::TrapZeros;
  int n = 0;
  int L = 0;  // block length; 0 for OneMax
  std::int64_t optimum_fitness = 0;

  static ProblemSpec make(ProblemKind kind, int n);
};

std::int64_t onemax_fitness(const Genome& g);
std::int64_t trapzeros_fitness(const Genome& g, int L);
std::int64_t evaluate(const ProblemSpec& ps, const Genome& g);

SchemaClass classify_schema(const Genome& g, int L);

// the five classes occupy pairwise disjoint fitness bands, so membership is
// recoverable from a cached fitness value alone:
//   Prefix01 {0} | Prefix10 {1} | S1NonStar [n+2, n+L-1] | S0 [2n+2, 3n]
//   | SStar [3n+L, 4n]
SchemaClass classify_from_fitness(std::int64_t f, int n, int L);

inline bool fitness_in_s0(std::int64_t f, int n) {
  return f >= 2 * static_cast<std::int64_t>(n) + 2 &&
         f <= 3 * static_cast<std::int64_t>(n);
}

inline bool fitness_in_sstar(std::int64_t f, int n, int L) {
  return f >= 3 * static_cast<std::int64_t>(n) + L &&
         f <= 4 * static_cast<std::int64_t>(n);
}

inline bool fitness_in_s1_nonstar(std::int64_t f, int n, int L) {
  return f >= static_cast<std::int64_t>(n) + 2 &&
         f <= static_cast<std::int64_t>(n) + L - 1;
}

// either branch of the ones-prefix schema
inline bool fitness_in_s1(std::int64_t f, int n, int L) {
  return fitness_in_s1_nonstar(f, n, L) || fitness_in_sstar(f, n, L);
}

}  // namespace nnea
