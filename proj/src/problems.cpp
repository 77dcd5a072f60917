#include "nnea/problems.hpp"

#include <cmath>

#include "nnea/errors.hpp"

namespace nnea {

ProblemKind problem_from_string(const std::string& name) {
  if (name == "trapzeros") return ProblemKind::TrapZeros;
  if (name == "onemax") return ProblemKind::OneMax;
  throw ConfigError("unknown problem '" + name +
                    "' (expected trapzeros or onemax)");
}

std::string to_string(ProblemKind kind) {
  return kind == ProblemKind::TrapZeros ? "trapzeros" : "onemax";
}

std::string to_string(SchemaClass c) {
  switch (c) {
    case SchemaClass::Prefix01: return "prefix01";
    case SchemaClass::Prefix10: return "prefix10";
    case SchemaClass::S1NonStar: return "s1";
    case SchemaClass::S0: return "s0";
    case SchemaClass::SStar: return "sstar";
  }
  return "?";
}

int block_length(int n) {
  if (n < 3) throw ConfigError("block length needs n >= 3");
  const double ln = std::log(static_cast<double>(n));
  return static_cast<int>(std::floor(ln * ln)) + 2;
}

ProblemSpec ProblemSpec::make(ProblemKind kind, int n) {
  ProblemSpec ps;
  ps.kind = kind;
  ps.n = n;
  if (kind == ProblemKind::OneMax) {
    if (n < 1) throw ConfigError("onemax needs n >= 1");
    ps.L = 0;
    ps.optimum_fitness = n;
  } else {
    if (n < 3) throw ConfigError("trapzeros needs n >= 3");
    ps.L = block_length(n);
    if (ps.L > n)
      throw ConfigError("block length exceeds n; no valid optimum block");
    ps.optimum_fitness = 4 * static_cast<std::int64_t>(n);
  }
  return ps;
}

std::int64_t onemax_fitness(const Genome& g) { return g.popcount(); }

std::int64_t trapzeros_fitness(const Genome& g, int L) {
  const std::int64_t n = g.size();
  const bool b1 = g.bit(0);
  const bool b2 = g.bit(1);
  if (b1 && b2) {
    const int lo = g.leading_ones();
    return (lo >= L ? 3 * n : n) + lo;
  }
  if (!b1 && !b2) return 2 * n + g.leading_zeros();
  return b1 ? 1 : 0;
}

std::int64_t evaluate(const ProblemSpec& ps, const Genome& g) {
  return ps.kind == ProblemKind::OneMax ? onemax_fitness(g)
                                        : trapzeros_fitness(g, ps.L);
}

SchemaClass classify_schema(const Genome& g, int L) {
  const bool b1 = g.bit(0);
  const bool b2 = g.bit(1);
  if (b1 && b2)
    return g.leading_ones() >= L ? SchemaClass::SStar : SchemaClass::S1NonStar;
  if (!b1 && !b2) return SchemaClass::S0;
  return b1 ? SchemaClass::Prefix10 : SchemaClass::Prefix01;
}

SchemaClass classify_from_fitness(std::int64_t f, int n, int L) {
  if (f == 0) return SchemaClass::Prefix01;
  if (f == 1) return SchemaClass::Prefix10;
  if (fitness_in_s1_nonstar(f, n, L)) return SchemaClass::S1NonStar;
  if (fitness_in_s0(f, n)) return SchemaClass::S0;
  if (fitness_in_sstar(f, n, L)) return SchemaClass::SStar;
  throw ConfigError("fitness value " + std::to_string(f) +
                    " is outside every class band for n=" + std::to_string(n));
}

}  // namespace nnea
