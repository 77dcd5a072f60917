#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "nnea/bitgenome.hpp"
#include "nnea/errors.hpp"
#include "nnea/exact_chain.hpp"
#include "nnea/problems.hpp"

using namespace nnea;
using doctest::Approx;

namespace {

std::uint64_t state_of(const char* bits) {
  return Genome::from_string(bits).as_uint();
}

// mutation kernel spelled out: d flips cost (1/n)^d (1-1/n)^(n-d), a proposal
// is kept iff fitness does not drop, everything else returns to x
std::vector<double> naive_row(const ChainModel& c, std::uint64_t x) {
  const int n = c.n();
  const double p = 1.0 / static_cast<double>(n);
  std::vector<double> row(static_cast<size_t>(c.states()), 0.0);
  double acc = 0.0;
  for (std::uint64_t y = 0; y < static_cast<std::uint64_t>(c.states()); ++y) {
    if (y == x) continue;
    const int d = std::popcount(x ^ y);
    const double q = std::pow(p, d) * std::pow(1.0 - p, n - d);
    if (c.fitness_of(y) >= c.fitness_of(x)) {
      row[static_cast<size_t>(y)] = q;
      acc += q;
    }
  }
  row[static_cast<size_t>(x)] = 1.0 - acc;
  return row;
}

}  // namespace

TEST_CASE("two-bit chain rows by hand") {
  ChainModel c = ChainModel::build(ProblemKind::OneMax, 2);
  CHECK(c.states() == 4);
  CHECK(c.n() == 2);
  CHECK(c.optimum() == state_of("11"));

  const auto from00 = c.transition_row(state_of("00"));
  for (const double v : from00) CHECK(v == Approx(0.25).epsilon(1e-15));

  const auto from01 = c.transition_row(state_of("01"));
  CHECK(from01[state_of("01")] == Approx(0.5).epsilon(1e-15));
  CHECK(from01[state_of("10")] == Approx(0.25).epsilon(1e-15));
  CHECK(from01[state_of("11")] == Approx(0.25).epsilon(1e-15));
  CHECK(from01[state_of("00")] == 0.0);

  const auto fromtop = c.transition_row(state_of("11"));
  CHECK(fromtop[state_of("11")] == 1.0);

  CHECK(c.expected_from(state_of("00")) == Approx(4.0).epsilon(1e-12));
  CHECK(c.expected_from(state_of("01")) == Approx(4.0).epsilon(1e-12));
  CHECK(c.expected_from(state_of("11")) == 0.0);
  CHECK(c.expected_from_uniform() == Approx(3.0).epsilon(1e-12));

  const ChainModel::CdfResult cdf = c.hitting_cdf_uniform(5);
  REQUIRE(cdf.cdf.size() == 6);
  const double want[6] = {0.25,       0.4375,       0.578125,
                          0.68359375, 0.7626953125, 0.822021484375};
  for (int t = 0; t <= 5; ++t)
    CHECK(cdf.cdf[static_cast<size_t>(t)] ==
          Approx(want[t]).epsilon(1e-14));
  CHECK(static_cast<double>(cdf.mass) == Approx(want[5]).epsilon(1e-14));
}

TEST_CASE("rows sum to one and match the naive kernel") {
  ChainModel c4 = ChainModel::build(ProblemKind::OneMax, 4);
  for (std::uint64_t x = 0; x < 16; ++x) {
    const auto row = c4.transition_row(x);
    const auto ref = naive_row(c4, x);
    double sum = 0.0;
    for (size_t y = 0; y < row.size(); ++y) {
      CHECK(row[y] == Approx(ref[y]).epsilon(1e-13));
      sum += row[y];
    }
    CHECK(sum == Approx(1.0).epsilon(1e-13));
  }

  ChainModel c6 = ChainModel::build(ProblemKind::TrapZeros, 6);
  for (std::uint64_t x = 0; x < 64; ++x) {
    const auto row = c6.transition_row(x);
    const auto ref = naive_row(c6, x);
    for (size_t y = 0; y < row.size(); ++y)
      CHECK(row[y] == Approx(ref[y]).epsilon(1e-13));
  }
}

TEST_CASE("fitness table matches an independent bit-twiddling version") {
  for (const int n : {8, 10}) {
    CAPTURE(n);
    ChainModel c = ChainModel::build(ProblemKind::TrapZeros, n);
    const int L = block_length(n);
    for (std::uint64_t x = 0; x < (1ULL << n); ++x) {
      const bool b0 = (x & 1) != 0;
      const bool b1 = (x & 2) != 0;
      std::int64_t want;
      if (b0 && b1) {
        const int lo = std::countr_one(x);
        want = (lo >= L ? 3 * n : n) + lo;
      } else if (!b0 && !b1) {
        const int lz = x == 0 ? n : std::countr_zero(x);
        want = 2 * n + lz;
      } else {
        want = b0 ? 1 : 0;
      }
      REQUIRE(c.fitness_of(x) == want);
    }
  }
}

TEST_CASE("onemax expected hitting times at n=4 and n=8") {
  ChainModel c4 = ChainModel::build(ProblemKind::OneMax, 4);
  CHECK(static_cast<double>(c4.expected_from(0)) ==
        Approx(13.949385669227567).epsilon(1e-10));
  CHECK(static_cast<double>(c4.expected_from_uniform()) ==
        Approx(11.025760560622222).epsilon(1e-10));

  ChainModel c8 = ChainModel::build(ProblemKind::OneMax, 8);
  CHECK(static_cast<double>(c8.expected_from(0)) ==
        Approx(40.618737782504056).epsilon(1e-10));
  CHECK(static_cast<double>(c8.expected_from_uniform()) ==
        Approx(34.184916893413629).epsilon(1e-10));
  CHECK(static_cast<double>(c8.recurrence_residual()) <= 1e-9);
}

TEST_CASE("trap chain at n=8: expectations, cdf and conditional mean") {
  ChainModel c = ChainModel::build(ProblemKind::TrapZeros, 8);
  CHECK(static_cast<double>(c.expected_from(0)) ==
        Approx(262172.56130910199).epsilon(1e-9));
  CHECK(static_cast<double>(c.expected_from_uniform()) ==
        Approx(167654.29705377261).epsilon(1e-9));
  CHECK(static_cast<double>(c.recurrence_residual()) <= 1e-9);

  const ChainModel::CdfResult cdf = c.hitting_cdf_uniform(1280);
  REQUIRE(cdf.cdf.size() == 1281);
  CHECK(cdf.cdf[0] == Approx(0.00390625).epsilon(1e-12));
  CHECK(cdf.cdf[100] == Approx(0.34543407575715823).epsilon(1e-10));
  CHECK(cdf.cdf[1280] == Approx(0.36362062355642738).epsilon(1e-10));
  const double conditional =
      static_cast<double>(cdf.partial_mean / cdf.mass);
  CHECK(conditional == Approx(45.916519635404995).epsilon(1e-9));
}

TEST_CASE("trap chain at n=10 expected hitting times") {
  ChainModel c = ChainModel::build(ProblemKind::TrapZeros, 10);
  CHECK(static_cast<double>(c.expected_from(0)) ==
        Approx(10000048.325471591).epsilon(1e-9));
  CHECK(static_cast<double>(c.expected_from_uniform()) ==
        Approx(6427130.2139220815).epsilon(1e-9));
  CHECK(static_cast<double>(c.recurrence_residual()) <= 1e-9);
}

TEST_CASE("point-start cdfs average to the uniform one") {
  ChainModel c = ChainModel::build(ProblemKind::OneMax, 4);
  const ChainModel::CdfResult uni = c.hitting_cdf_uniform(3);
  std::vector<long double> avg(4, 0.0L);
  long double avg_pm = 0.0L, avg_mass = 0.0L;
  for (std::uint64_t x = 0; x < 16; ++x) {
    const ChainModel::CdfResult one = c.hitting_cdf_from(x, 3);
    REQUIRE(one.cdf.size() == 4);
    for (size_t t = 0; t < 4; ++t) avg[t] += one.cdf[t] / 16.0L;
    avg_pm += one.partial_mean / 16.0L;
    avg_mass += one.mass / 16.0L;
  }
  for (size_t t = 0; t < 4; ++t)
    CHECK(static_cast<double>(avg[t]) ==
          Approx(uni.cdf[t]).epsilon(1e-12));
  CHECK(static_cast<double>(avg_pm) ==
        Approx(static_cast<double>(uni.partial_mean)).epsilon(1e-12));
  CHECK(static_cast<double>(avg_mass) ==
        Approx(static_cast<double>(uni.mass)).epsilon(1e-12));

  // a start on the optimum hits at time zero with certainty
  const ChainModel::CdfResult top = c.hitting_cdf_from(15, 2);
  CHECK(top.cdf[0] == 1.0);
  CHECK(static_cast<double>(top.partial_mean) == 0.0);
}

TEST_CASE("the solved hitting time is its own unit-drift potential") {
  ChainModel c = ChainModel::build(ProblemKind::TrapZeros, 8);
  const std::vector<long double> V = c.expected_steps();

  const auto unit = c.check_potential(V, 1.0L);
  CHECK(unit.applicable);
  CHECK(static_cast<double>(unit.min_drift) == Approx(1.0).epsilon(1e-9));
  CHECK(static_cast<double>(unit.max_drift) == Approx(1.0).epsilon(1e-9));
  CHECK(static_cast<double>(unit.max_excess) <= 1e-9);
  CHECK(static_cast<double>(unit.max_equality_gap) <= 1e-9);

  std::vector<long double> W = V;
  for (auto& w : W) w *= 2.0L;
  const auto doubled = c.check_potential(W, 2.0L);
  CHECK(doubled.applicable);
  CHECK(static_cast<double>(doubled.min_drift) == Approx(2.0).epsilon(1e-9));
  CHECK(static_cast<double>(doubled.max_excess) <= 1e-9);

  const auto toosteep = c.check_potential(V, 1.5L);
  CHECK_FALSE(toosteep.applicable);

  CHECK_THROWS_AS(c.check_potential({1.0L, 2.0L}, 1.0L), ConfigError);
  CHECK_THROWS_AS(c.check_potential(V, 0.0L), ConfigError);
}

TEST_CASE("resource and range guards") {
  CHECK_THROWS_AS(ChainModel::build(ProblemKind::TrapZeros, 17), ResourceError);
  CHECK_THROWS_AS(ChainModel::build(ProblemKind::OneMax, 40), ResourceError);

  ChainModel c = ChainModel::build(ProblemKind::OneMax, 2);
  CHECK_THROWS_AS(c.expected_from(4), ConfigError);
  CHECK_THROWS_AS(c.hitting_cdf_from(4, 3), ConfigError);
  CHECK_THROWS_AS(c.hitting_cdf_uniform(-1), ConfigError);
}
