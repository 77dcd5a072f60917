#include "nnea/bounds.hpp"

#include <cmath>

#include "nnea/errors.hpp"
#include "nnea/rng.hpp"

namespace nnea {

namespace {

constexpr long double kLatticeNudge = 1e-12L;
constexpr long double kProbMargin = 1e-12L;

// smallest integer strictly greater than a
std::int64_t first_int_gt(long double a) {
  return static_cast<std::int64_t>(floorl(a + kLatticeNudge)) + 1;
}
// smallest integer >= a
std::int64_t first_int_ge(long double a) {
  return static_cast<std::int64_t>(ceill(a - kLatticeNudge));
}
// largest integer strictly less than a
std::int64_t last_int_lt(long double a) {
  return static_cast<std::int64_t>(ceill(a - kLatticeNudge)) - 1;
}
// largest integer <= a
std::int64_t last_int_le(long double a) {
  return static_cast<std::int64_t>(floorl(a + kLatticeNudge));
}

long double binom_log_pmf(std::int64_t k, std::int64_t m, long double p) {
  return lgammal(static_cast<long double>(m) + 1.0L) -
         lgammal(static_cast<long double>(k) + 1.0L) -
         lgammal(static_cast<long double>(m - k) + 1.0L) +
         static_cast<long double>(k) * logl(p) +
         static_cast<long double>(m - k) * log1pl(-p);
}

std::int64_t binom_mode(std::int64_t m, long double p) {
  const auto mode =
      static_cast<std::int64_t>(floorl((static_cast<long double>(m) + 1.0L) * p));
  return std::min(mode, m);
}

// sum of pmf over k0..m; terms must decay upward, so callers route here only
// when k0 is at or above the mode
long double binom_sum_up(std::int64_t k0, std::int64_t m, long double p) {
  long double term = expl(binom_log_pmf(k0, m, p));
  long double sum = 0.0L;
  long double carry = 0.0L;
  for (std::int64_t k = k0; k <= m; ++k) {
    const long double y = term - carry;
    const long double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
    if (term < sum * 1e-25L) break;
    term *= p * static_cast<long double>(m - k) /
            ((1.0L - p) * static_cast<long double>(k + 1));
  }
  return sum;
}

// sum of pmf over 0..k1; terms must decay downward (k1 at or below the mode)
long double binom_sum_down(std::int64_t k1, std::int64_t m, long double p) {
  long double term = expl(binom_log_pmf(k1, m, p));
  long double sum = 0.0L;
  long double carry = 0.0L;
  for (std::int64_t k = k1; k >= 0; --k) {
    const long double y = term - carry;
    const long double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
    if (term < sum * 1e-25L) break;
    term *= static_cast<long double>(k) * (1.0L - p) /
            (p * static_cast<long double>(m - k + 1));
  }
  return sum;
}

void require_binomial(std::int64_t m, double p) {
  if (m < 1) throw ConfigError("binomial count must be at least 1");
  if (!(p > 0.0) || !(p < 1.0)) {
    throw ConfigError("binomial success probability must lie in (0, 1)");
  }
}

}  // namespace

long double binom_tail_ge(std::int64_t k0, std::int64_t m, long double p) {
  if (k0 <= 0) return 1.0L;
  if (k0 > m) return 0.0L;
  if (k0 > binom_mode(m, p)) return binom_sum_up(k0, m, p);
  return 1.0L - binom_sum_down(k0 - 1, m, p);
}

long double binom_tail_le(std::int64_t k1, std::int64_t m, long double p) {
  if (k1 < 0) return 0.0L;
  if (k1 >= m) return 1.0L;
  if (k1 < binom_mode(m, p)) return binom_sum_down(k1, m, p);
  return 1.0L - binom_sum_up(k1 + 1, m, p);
}

const std::vector<BoundKind>& bound_kinds() {
  static const std::vector<BoundKind> kinds = {
      BoundKind::ChernoffLower,   BoundKind::ChernoffUpper1,
      BoundKind::ChernoffUpper2,  BoundKind::Chebyshev,
      BoundKind::Markov,          BoundKind::TakeoverGrowthA,
      BoundKind::TakeoverGrowthB, BoundKind::UpgradeProbA,
  };
  return kinds;
}

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::ChernoffLower: return "ChernoffLower";
    case BoundKind::ChernoffUpper1: return "ChernoffUpper1";
    case BoundKind::ChernoffUpper2: return "ChernoffUpper2";
    case BoundKind::Chebyshev: return "Chebyshev";
    case BoundKind::Markov: return "Markov";
    case BoundKind::TakeoverGrowthA: return "TakeoverGrowthA";
    case BoundKind::TakeoverGrowthB: return "TakeoverGrowthB";
    case BoundKind::UpgradeProbA: return "UpgradeProbA";
  }
  throw ConfigError("unknown bound kind");
}

BoundKind bound_kind_from_string(const std::string& name) {
  for (const BoundKind kind : bound_kinds()) {
    if (to_string(kind) == name) return kind;
  }
  throw ConfigError("unknown bound kind: " + name);
}

namespace {

BoundCheck finish_upper(BoundCheck check, long double exact,
                        long double bound) {
  check.exact = static_cast<double>(exact);
  check.bound = static_cast<double>(bound);
  check.lower_bound = false;
  check.vacuous = bound >= 1.0L;
  check.satisfied = check.vacuous || exact <= bound + kProbMargin;
  return check;
}

BoundCheck finish_lower(BoundCheck check, long double exact,
                        long double bound) {
  check.exact = static_cast<double>(exact);
  check.bound = static_cast<double>(bound);
  check.lower_bound = true;
  check.vacuous = bound <= 0.0L;
  check.satisfied = check.vacuous || exact >= bound - kProbMargin;
  return check;
}

}  // namespace

BoundCheck chernoff_lower(std::int64_t m, double p, double psi) {
  require_binomial(m, p);
  if (!(psi > 0.0) || !(psi < 1.0)) {
    throw ConfigError("chernoff lower tail needs 0 < psi < 1");
  }
  const long double mean = static_cast<long double>(m) * p;
  const long double thr = (1.0L - static_cast<long double>(psi)) * mean;
  const long double exact = binom_tail_le(last_int_lt(thr), m, p);
  const long double bound =
      expl(-mean * static_cast<long double>(psi) * psi / 2.0L);
  BoundCheck check;
  check.kind = BoundKind::ChernoffLower;
  check.params = {{"m", static_cast<double>(m)}, {"p", p}, {"psi", psi}};
  return finish_upper(check, exact, bound);
}

BoundCheck chernoff_upper1(std::int64_t m, double p, double psi) {
  require_binomial(m, p);
  const double limit = 2.0 * std::exp(1.0) - 1.0;
  if (!(psi > 0.0) || psi > limit) {
    throw ConfigError("chernoff exponential upper tail needs 0 < psi <= 2e-1");
  }
  const long double mean = static_cast<long double>(m) * p;
  const long double thr = (1.0L + static_cast<long double>(psi)) * mean;
  const long double exact = binom_tail_ge(first_int_gt(thr), m, p);
  const long double bound =
      expl(-mean * static_cast<long double>(psi) * psi / 4.0L);
  BoundCheck check;
  check.kind = BoundKind::ChernoffUpper1;
  check.params = {{"m", static_cast<double>(m)}, {"p", p}, {"psi", psi}};
  return finish_upper(check, exact, bound);
}

BoundCheck chernoff_upper2(std::int64_t m, double p, double psi) {
  require_binomial(m, p);
  if (!(psi > 0.0)) {
    throw ConfigError("chernoff poisson upper tail needs psi > 0");
  }
  const long double mean = static_cast<long double>(m) * p;
  const long double lpsi = psi;
  const long double thr = (1.0L + lpsi) * mean;
  const long double exact = binom_tail_ge(first_int_gt(thr), m, p);
  const long double bound =
      expl(mean * (lpsi - (1.0L + lpsi) * log1pl(lpsi)));
  BoundCheck check;
  check.kind = BoundKind::ChernoffUpper2;
  check.params = {{"m", static_cast<double>(m)}, {"p", p}, {"psi", psi}};
  return finish_upper(check, exact, bound);
}

BoundCheck chebyshev_binomial(std::int64_t m, double p, double r) {
  require_binomial(m, p);
  if (!(r > 0.0)) throw ConfigError("chebyshev needs r > 0");
  const long double mean = static_cast<long double>(m) * p;
  const long double sd = sqrtl(mean * (1.0L - static_cast<long double>(p)));
  const long double half = static_cast<long double>(r) * sd;
  const long double exact = binom_tail_ge(first_int_ge(mean + half), m, p) +
                            binom_tail_le(last_int_le(mean - half), m, p);
  const long double bound = 1.0L / (static_cast<long double>(r) * r);
  BoundCheck check;
  check.kind = BoundKind::Chebyshev;
  check.params = {{"m", static_cast<double>(m)}, {"p", p}, {"r", r}};
  return finish_upper(check, exact, bound);
}

BoundCheck markov_binomial(std::int64_t m, double p, double a) {
  require_binomial(m, p);
  if (!(a > 0.0)) throw ConfigError("markov needs a > 0");
  const long double mean = static_cast<long double>(m) * p;
  const long double exact = binom_tail_ge(first_int_ge(a), m, p);
  const long double bound = mean / static_cast<long double>(a);
  BoundCheck check;
  check.kind = BoundKind::Markov;
  check.params = {{"m", static_cast<double>(m)}, {"p", p}, {"a", a}};
  return finish_upper(check, exact, bound);
}

BoundCheck takeover_growth(char side, std::int64_t X, double h, double c) {
  if (side != 'A' && side != 'B') {
    throw ConfigError("takeover growth side must be A or B");
  }
  if (X < 1) throw ConfigError("takeover growth needs X >= 1");
  if (!(h > 0.0) || !(h < 1.0)) {
    throw ConfigError("takeover growth needs 0 < h < 1");
  }
  if (!(c > 0.0) || !(c < 1.0)) {
    throw ConfigError("takeover growth needs 0 < c < 1");
  }
  const long double thr = static_cast<long double>(c) * h * X;
  const long double exact = binom_tail_ge(first_int_gt(thr), X, h);
  const long double bound =
      1.0L - (1.0L - static_cast<long double>(h)) /
                 ((1.0L - static_cast<long double>(c)) * (1.0L - c) * X * h);
  BoundCheck check;
  check.kind = side == 'A' ? BoundKind::TakeoverGrowthA
                           : BoundKind::TakeoverGrowthB;
  check.params = {{"X", static_cast<double>(X)}, {"h", h}, {"c", c}};
  return finish_lower(check, exact, bound);
}

long double upgrade_probability(int n, int rho, std::int64_t count) {
  if (n < 2) throw ConfigError("upgrade probability needs n >= 2");
  if (rho < 0 || rho > n - 2) {
    throw ConfigError("upgrade probability needs 0 <= rho <= n - 2");
  }
  if (count < 1) throw ConfigError("upgrade probability needs count >= 1");
  const long double q = 1.0L / n;
  const long double single = q * powl(1.0L - q, static_cast<long double>(rho));
  return -expm1l(static_cast<long double>(count) * log1pl(-single));
}

BoundCheck upgrade_prob_A(int n, int rho, std::int64_t count) {
  const long double u = upgrade_probability(n, rho, count);
  const long double exact = 1.0L / u;
  const long double e2 = expl(2.0L);
  const long double bound =
      1.0L + e2 * n / static_cast<long double>(count);
  BoundCheck check;
  check.kind = BoundKind::UpgradeProbA;
  check.params = {{"n", static_cast<double>(n)},
                  {"rho", static_cast<double>(rho)},
                  {"count", static_cast<double>(count)}};
  check.exact = static_cast<double>(exact);
  check.bound = static_cast<double>(bound);
  check.lower_bound = false;
  check.vacuous = false;
  check.satisfied = exact <= bound * (1.0L + kProbMargin);
  return check;
}

namespace {

double want(const std::map<std::string, double>& params,
            const std::string& key, BoundKind kind) {
  const auto it = params.find(key);
  if (it == params.end()) {
    throw ConfigError("bound case " + to_string(kind) +
                      " is missing parameter '" + key + "'");
  }
  return it->second;
}

std::int64_t want_int(const std::map<std::string, double>& params,
                      const std::string& key, BoundKind kind) {
  const double v = want(params, key, kind);
  const auto iv = static_cast<std::int64_t>(std::llround(v));
  if (std::abs(v - static_cast<double>(iv)) > 1e-9) {
    throw ConfigError("bound case parameter '" + key +
                      "' must be an integer");
  }
  return iv;
}

}  // namespace

BoundCheck run_bound_case(BoundKind kind,
                          const std::map<std::string, double>& params) {
  switch (kind) {
    case BoundKind::ChernoffLower:
      return chernoff_lower(want_int(params, "m", kind), want(params, "p", kind),
                            want(params, "psi", kind));
    case BoundKind::ChernoffUpper1:
      return chernoff_upper1(want_int(params, "m", kind),
                             want(params, "p", kind),
                             want(params, "psi", kind));
    case BoundKind::ChernoffUpper2:
      return chernoff_upper2(want_int(params, "m", kind),
                             want(params, "p", kind),
                             want(params, "psi", kind));
    case BoundKind::Chebyshev:
      return chebyshev_binomial(want_int(params, "m", kind),
                                want(params, "p", kind),
                                want(params, "r", kind));
    case BoundKind::Markov:
      return markov_binomial(want_int(params, "m", kind),
                             want(params, "p", kind), want(params, "a", kind));
    case BoundKind::TakeoverGrowthA:
      return takeover_growth('A', want_int(params, "X", kind),
                             want(params, "h", kind), want(params, "c", kind));
    case BoundKind::TakeoverGrowthB:
      return takeover_growth('B', want_int(params, "X", kind),
                             want(params, "h", kind), want(params, "c", kind));
    case BoundKind::UpgradeProbA:
      return upgrade_prob_A(static_cast<int>(want_int(params, "n", kind)),
                            static_cast<int>(want_int(params, "rho", kind)),
                            want_int(params, "count", kind));
  }
  throw ConfigError("unknown bound kind");
}

std::vector<BoundCheck> sweep_bound_checks(const BoundSweepConfig& cfg) {
  if (cfg.tuples_per_kind < 1) {
    throw ConfigError("sweep needs at least one tuple per kind");
  }
  std::vector<BoundCheck> out;
  out.reserve(static_cast<std::size_t>(cfg.tuples_per_kind) *
              bound_kinds().size());
  std::uint64_t stream = 0;
  for (const BoundKind kind : bound_kinds()) {
    Rng rng = Rng::for_stream(cfg.seed, stream++);
    for (int i = 0; i < cfg.tuples_per_kind; ++i) {
      const auto m =
          1 + static_cast<std::int64_t>(rng.uniform01() * 2000.0);
      const double p = 0.005 + 0.99 * rng.uniform01();
      switch (kind) {
        case BoundKind::ChernoffLower:
          out.push_back(chernoff_lower(m, p, 0.001 + 0.998 * rng.uniform01()));
          break;
        case BoundKind::ChernoffUpper1:
          out.push_back(chernoff_upper1(
              m, p, (2.0 * std::exp(1.0) - 1.0) * rng.uniform01_oc()));
          break;
        case BoundKind::ChernoffUpper2:
          out.push_back(chernoff_upper2(m, p, 6.0 * rng.uniform01_oc()));
          break;
        case BoundKind::Chebyshev:
          out.push_back(chebyshev_binomial(m, p, 0.5 + 19.5 * rng.uniform01()));
          break;
        case BoundKind::Markov: {
          const double mean = static_cast<double>(m) * p;
          out.push_back(
              markov_binomial(m, p, (0.1 + 2.9 * rng.uniform01()) * mean));
          break;
        }
        case BoundKind::TakeoverGrowthA:
        case BoundKind::TakeoverGrowthB: {
          const auto X =
              1 + static_cast<std::int64_t>(rng.uniform01() * 500.0);
          const double h = 0.01 + 0.98 * rng.uniform01();
          const double c = 0.001 + 0.998 * rng.uniform01();
          out.push_back(takeover_growth(
              kind == BoundKind::TakeoverGrowthA ? 'A' : 'B', X, h, c));
          break;
        }
        case BoundKind::UpgradeProbA: {
          const int n = 3 + static_cast<int>(rng.uniform01() * 1997.0);
          const int rho = static_cast<int>(rng.uniform01() * (n - 1));
          const auto count =
              1 + static_cast<std::int64_t>(rng.uniform01() * 9999.0);
          out.push_back(upgrade_prob_A(n, std::min(rho, n - 2), count));
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace nnea
