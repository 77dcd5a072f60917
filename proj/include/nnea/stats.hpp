#pragma once

#include <cstdint>
#include <vector>

namespace nnea {

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};

// 95% score interval (z = 1.96); well-behaved at 0 and k successes
WilsonInterval wilson95(std::int64_t successes, std::int64_t trials);

// two-sided band half-width for an m-sample empirical CDF at confidence
// 1 - alpha: sqrt(ln(2/alpha) / (2m))
double dkw_epsilon(std::int64_t m, double alpha);

// upper-tail critical value of chi-square at alpha = 0.001, df in [1, 40]
double chi2_critical_001(int df);

struct GofResult {
  double stat = 0.0;
  int df = 0;
  double critical = 0.0;
  bool pass = false;
  int bins_used = 0;  // after pooling sparse tails
};

// Pearson test of observed counts against cell probabilities. Cells are
// pooled from the high end until every expected count reaches min_expected.
// estimated_params reduces the degrees of freedom.
GofResult chi2_gof(const std::vector<std::int64_t>& counts,
                   const std::vector<double>& probs, int estimated_params,
                   double min_expected = 5.0);

double mean_of(const std::vector<double>& xs);
double sample_sd(const std::vector<double>& xs);

// order statistic at level q in [0,1] by the nearest-rank rule
double quantile(std::vector<double> xs, double q);

}  // namespace nnea
