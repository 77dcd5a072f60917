#include "nnea/stats.hpp"

#include <algorithm>
#include <cmath>

#include "nnea/errors.hpp"

namespace nnea {

WilsonInterval wilson95(std::int64_t successes, std::int64_t trials) {
  if (trials <= 0) throw ConfigError("wilson95 needs trials >= 1");
  if (successes < 0 || successes > trials)
    throw ConfigError("wilson95 needs 0 <= successes <= trials");
  const double z = 1.96;
  const double nT = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / nT;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nT;
  const double center = p + z2 / (2.0 * nT);
  const double half = z * std::sqrt(p * (1.0 - p) / nT + z2 / (4.0 * nT * nT));
  WilsonInterval w;
  w.lo = (center - half) / denom;
  w.hi = (center + half) / denom;
  if (w.lo < 0.0) w.lo = 0.0;
  if (w.hi > 1.0) w.hi = 1.0;
  // at the boundary the interval endpoint is exact; the two rounding paths
  // above can disagree by an ulp, so pin it
  if (successes == 0) w.lo = 0.0;
  if (successes == trials) w.hi = 1.0;
  return w;
}

double dkw_epsilon(std::int64_t m, double alpha) {
  if (m <= 0 || alpha <= 0.0 || alpha >= 1.0)
    throw ConfigError("dkw_epsilon needs m >= 1 and alpha in (0,1)");
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(m)));
}

double chi2_critical_001(int df) {
  static const double table[40] = {
      10.827566170662733, 13.815510557964274, 16.266236196238129,
      18.466826952903169, 20.515005652432873, 22.457744484825323,
      24.321886347856854, 26.124481558376139, 27.877164871256568,
      29.588298445074422, 31.264133620239985, 32.909490407360209,
      34.52817897487089,  36.123273680398128, 37.697298218353829,
      39.252354790768464, 40.790216706902527, 42.312396331679963,
      43.820195964517531, 45.314746618125859, 46.797038041561315,
      48.26794229083518,  49.7282324664315,   51.178597777377391,
      52.619655776172834, 54.051962388576641, 55.476020205745208,
      56.892285393353625, 58.301173489794905, 59.703064304429937,
      61.098306081058126, 62.487219057088474, 63.870098522344946,
      65.247217460942437, 66.618828843701039, 67.985167626024236,
      69.346452496241199, 70.702887411505031, 72.054662951987794,
      73.401957518991026};
  if (df < 1 || df > 40)
    throw ConfigError("chi2_critical_001 covers df in [1, 40]");
  return table[df - 1];
}

GofResult chi2_gof(const std::vector<std::int64_t>& counts,
                   const std::vector<double>& probs, int estimated_params,
                   double min_expected) {
  if (counts.size() != probs.size() || counts.empty())
    throw ConfigError("chi2_gof needs matching non-empty counts and probs");
  std::int64_t total = 0;
  for (auto c : counts) total += c;
  if (total <= 0) throw ConfigError("chi2_gof needs a positive sample size");

  // pool from the high end until each remaining cell is well populated
  std::vector<double> expected;
  std::vector<double> observed;
  expected.reserve(counts.size());
  for (size_t i = 0; i < counts.size(); ++i) {
    expected.push_back(probs[i] * static_cast<double>(total));
    observed.push_back(static_cast<double>(counts[i]));
  }
  while (expected.size() > 1 && expected.back() < min_expected) {
    expected[expected.size() - 2] += expected.back();
    observed[observed.size() - 2] += observed.back();
    expected.pop_back();
    observed.pop_back();
  }
  // a sparse leading cell can remain; merge it forward
  while (expected.size() > 1 && expected.front() < min_expected) {
    expected[1] += expected[0];
    observed[1] += observed[0];
    expected.erase(expected.begin());
    observed.erase(observed.begin());
  }

  GofResult r;
  r.bins_used = static_cast<int>(expected.size());
  r.df = r.bins_used - 1 - estimated_params;
  if (r.df < 1)
    throw ConfigError("chi2_gof has no degrees of freedom left after pooling");
  for (size_t i = 0; i < expected.size(); ++i) {
    const double d = observed[i] - expected[i];
    r.stat += d * d / expected[i];
  }
  r.critical = chi2_critical_001(r.df);
  r.pass = r.stat <= r.critical;
  return r;
}

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) throw ConfigError("mean of empty sample");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_sd(const std::vector<double>& xs) {
  if (xs.size() < 2) throw ConfigError("sample sd needs at least two points");
  const double m = mean_of(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) throw ConfigError("quantile of empty sample");
  if (q < 0.0 || q > 1.0) throw ConfigError("quantile level must be in [0,1]");
  std::sort(xs.begin(), xs.end());
  const auto m = static_cast<double>(xs.size());
  auto rank = static_cast<size_t>(std::ceil(q * m));
  if (rank > 0) --rank;
  return xs[rank];
}

}  // namespace nnea
