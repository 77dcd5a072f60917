#include "nnea/exact_chain.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <map>
#include <optional>

#include "nnea/bitgenome.hpp"
#include "nnea/errors.hpp"

namespace nnea {

namespace {

constexpr int kMaxChainBits = 16;
constexpr std::size_t kLuMaxDim = 2048;
constexpr std::size_t kKeepFactorEntries = std::size_t{16} << 20;

// in-place tensor transform: w[x] = sum_y q^d(x,y) r^(n-d) v[y], built from
// the 2x2 kernel [[r, q], [q, r]] applied once per bit
template <class Scalar>
void distance_transform(std::vector<Scalar>& v, int n, Scalar q, Scalar r) {
  const std::size_t S = v.size();
  for (int b = 0; b < n; ++b) {
    const std::size_t half = std::size_t{1} << b;
    for (std::size_t base = 0; base < S; base += half << 1) {
      for (std::size_t i = base; i < base + half; ++i) {
        const Scalar a = v[i];
        const Scalar c = v[i + half];
        v[i] = r * a + q * c;
        v[i + half] = q * a + r * c;
      }
    }
  }
}

struct KahanLd {
  long double sum = 0.0L;
  long double carry = 0.0L;
  void add(long double x) {
    const long double y = x - carry;
    const long double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

struct ChainModel::LevelFactors {
  std::vector<std::optional<Eigen::PartialPivLU<Eigen::MatrixXd>>> lu;
};

ChainModel ChainModel::build(ProblemKind kind, int n) {
  if (n > kMaxChainBits) {
    throw ResourceError("exact chain limited to n <= " +
                        std::to_string(kMaxChainBits) + ", got n = " +
                        std::to_string(n));
  }
  const ProblemSpec spec = ProblemSpec::make(kind, n);

  ChainModel m;
  m.kind_ = kind;
  m.n_ = n;
  m.S_ = std::int64_t{1} << n;

  m.fit_.resize(static_cast<std::size_t>(m.S_));
  std::map<std::int32_t, std::vector<std::uint32_t>> by_fitness;
  for (std::int64_t x = 0; x < m.S_; ++x) {
    const auto f = static_cast<std::int32_t>(
        evaluate(spec, Genome::from_uint(n, static_cast<std::uint64_t>(x))));
    m.fit_[static_cast<std::size_t>(x)] = f;
    by_fitness[f].push_back(static_cast<std::uint32_t>(x));
  }
  m.level_of_.resize(static_cast<std::size_t>(m.S_));
  for (auto& [f, states] : by_fitness) {
    const auto lev = static_cast<std::int32_t>(m.levels_.size());
    for (std::uint32_t x : states) m.level_of_[x] = lev;
    m.levels_.push_back(std::move(states));
  }
  assert(m.levels_.back().size() == 1);
  m.opt_ = m.levels_.back().front();

  const long double q = 1.0L / n;
  const long double r = 1.0L - q;
  m.pow_ld_.resize(static_cast<std::size_t>(n) + 1);
  m.pow_d_.resize(static_cast<std::size_t>(n) + 1);
  for (int d = 0; d <= n; ++d) {
    m.pow_ld_[static_cast<std::size_t>(d)] =
        powl(q, static_cast<long double>(d)) *
        powl(r, static_cast<long double>(n - d));
    m.pow_d_[static_cast<std::size_t>(d)] =
        static_cast<double>(m.pow_ld_[static_cast<std::size_t>(d)]);
  }

  // accepted proposal mass per state, accumulated level by level from the
  // top so acc[x] = sum over y with f(y) >= f(x) of pow[d(x,y)]
  std::vector<long double> ind(static_cast<std::size_t>(m.S_), 0.0L);
  std::vector<long double> acc(static_cast<std::size_t>(m.S_), 0.0L);
  std::vector<long double> w;
  for (auto lev = static_cast<std::int64_t>(m.levels_.size()) - 1; lev >= 0;
       --lev) {
    for (std::uint32_t x : m.levels_[static_cast<std::size_t>(lev)]) {
      ind[x] = 1.0L;
    }
    w = ind;
    distance_transform(w, n, q, r);
    for (std::uint32_t x : m.levels_[static_cast<std::size_t>(lev)]) {
      acc[x] = w[x];
    }
  }
  m.self_p_.resize(static_cast<std::size_t>(m.S_));
  for (std::int64_t x = 0; x < m.S_; ++x) {
    const auto i = static_cast<std::size_t>(x);
    m.self_p_[i] = static_cast<double>(1.0L - acc[i] + m.pow_ld_[0]);
  }
  return m;
}

std::int64_t ChainModel::fitness_of(std::uint64_t x) const {
  assert(static_cast<std::int64_t>(x) < S_);
  return fit_[static_cast<std::size_t>(x)];
}

std::vector<double> ChainModel::transition_row(std::uint64_t x) const {
  std::vector<double> row(static_cast<std::size_t>(S_), 0.0);
  const std::int32_t fx = fit_[static_cast<std::size_t>(x)];
  for (std::int64_t y = 0; y < S_; ++y) {
    const auto yi = static_cast<std::size_t>(y);
    if (static_cast<std::uint64_t>(y) == x) {
      row[yi] = self_p_[static_cast<std::size_t>(x)];
    } else if (fit_[yi] >= fx) {
      row[yi] = pow_d_[static_cast<std::size_t>(
          std::popcount(x ^ static_cast<std::uint64_t>(y)))];
    }
  }
  return row;
}

// applies the transition matrix once in long double: out[x] = sum_y P(x,y) v[y]
static std::vector<long double> apply_transition_ld(
    int n, const std::vector<std::int32_t>& fit,
    const std::vector<std::vector<std::uint32_t>>& levels,
    const std::vector<long double>& pow_ld, const std::vector<long double>& v) {
  const auto S = v.size();
  std::vector<long double> out(S, 0.0L);
  if (n <= 13) {
    // direct rows with compensated sums; the self-loop mass is rebuilt
    // exactly as one minus the accepted off-state mass
    for (std::size_t x = 0; x < S; ++x) {
      const std::int32_t fx = fit[x];
      KahanLd flow;
      KahanLd accepted;
      for (std::size_t y = 0; y < S; ++y) {
        if (y == x || fit[y] < fx) continue;
        const long double p =
            pow_ld[static_cast<std::size_t>(std::popcount(x ^ y))];
        flow.add(p * v[y]);
        accepted.add(p);
      }
      out[x] = flow.sum + (1.0L - accepted.sum) * v[x];
    }
    return out;
  }
  // masked transforms, one per fitness level from the top down: after adding
  // level lev the transform of the mask gives sum over y with f(y) >= f(lev)
  const long double q = 1.0L / n;
  const long double r = 1.0L - q;
  std::vector<long double> mask(S, 0.0L);
  std::vector<long double> w;
  std::vector<long double> accmask(S, 0.0L);
  std::vector<long double> aw;
  for (auto lev = static_cast<std::int64_t>(levels.size()) - 1; lev >= 0;
       --lev) {
    for (std::uint32_t x : levels[static_cast<std::size_t>(lev)]) {
      mask[x] = v[x];
      accmask[x] = 1.0L;
    }
    w = mask;
    distance_transform(w, n, q, r);
    aw = accmask;
    distance_transform(aw, n, q, r);
    for (std::uint32_t x : levels[static_cast<std::size_t>(lev)]) {
      // w[x] already holds pow[0]*v[x]; add the rejected mass kept in place
      out[x] = w[x] + (1.0L - aw[x]) * v[x];
    }
  }
  return out;
}

void ChainModel::solve_level_system(int lev, const std::vector<double>& rhs,
                                    std::vector<double>& out,
                                    bool allow_factor_reuse) {
  const auto& states = levels_[static_cast<std::size_t>(lev)];
  const std::size_t m = states.size();
  out.assign(m, 0.0);
  if (m == 1) {
    const double diag = 1.0 - self_p_[states[0]];
    out[0] = rhs[0] / diag;
    return;
  }
  if (m <= kLuMaxDim) {
    Eigen::Map<const Eigen::VectorXd> b(rhs.data(),
                                        static_cast<Eigen::Index>(m));
    if (allow_factor_reuse && factors_ &&
        static_cast<std::size_t>(lev) < factors_->lu.size() &&
        factors_->lu[static_cast<std::size_t>(lev)].has_value()) {
      Eigen::VectorXd sol = factors_->lu[static_cast<std::size_t>(lev)]->solve(b);
      std::copy(sol.data(), sol.data() + m, out.begin());
      return;
    }
    Eigen::MatrixXd A(static_cast<Eigen::Index>(m),
                      static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
      const std::uint64_t xi = states[i];
      for (std::size_t j = 0; j < m; ++j) {
        if (i == j) {
          A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
              1.0 - self_p_[states[i]];
        } else {
          const auto d = static_cast<std::size_t>(
              std::popcount(xi ^ static_cast<std::uint64_t>(states[j])));
          A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
              -pow_d_[d];
        }
      }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    Eigen::VectorXd sol = lu.solve(b);
    std::copy(sol.data(), sol.data() + m, out.begin());
    if (keep_factors_) {
      if (!factors_) factors_ = std::make_shared<LevelFactors>();
      if (factors_->lu.size() < levels_.size()) {
        factors_->lu.resize(levels_.size());
      }
      factors_->lu[static_cast<std::size_t>(lev)] = std::move(lu);
    }
    return;
  }

  // Jacobi sweeps for a level too large to factor; the off-diagonal action
  // is one masked transform over the hypercube per sweep
  const double q = 1.0 / n_;
  const double r = 1.0 - q;
  const auto S = static_cast<std::size_t>(S_);
  std::vector<double> cur(m);
  std::vector<double> diag(m);
  for (std::size_t i = 0; i < m; ++i) {
    diag[i] = 1.0 - self_p_[states[i]];
    cur[i] = rhs[i] / diag[i];
  }
  std::vector<double> mask(S);
  const double p0 = pow_d_[0];
  for (int sweep = 0; sweep < 500; ++sweep) {
    std::fill(mask.begin(), mask.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i) mask[states[i]] = cur[i];
    distance_transform(mask, n_, q, r);
    double delta = 0.0;
    double scale = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double off = mask[states[i]] - p0 * cur[i];
      const double next = (rhs[i] + off) / diag[i];
      delta = std::max(delta, std::abs(next - cur[i]));
      scale = std::max(scale, std::abs(next));
      cur[i] = next;
    }
    if (delta <= 4e-16 * scale) break;
  }
  out = cur;
}

void ChainModel::sweep_levels(const std::vector<double>& rhs_base,
                              bool constant_one, std::vector<long double>& into,
                              bool reuse_factors) {
  const auto S = static_cast<std::size_t>(S_);
  const double q = 1.0 / n_;
  const double r = 1.0 - q;
  std::vector<double> vacc(S, 0.0);  // solved values of strictly higher levels
  std::vector<double> w;
  std::vector<double> rhs;
  std::vector<double> out;
  for (auto lev = static_cast<std::int64_t>(levels_.size()) - 1; lev >= 0;
       --lev) {
    const auto& states = levels_[static_cast<std::size_t>(lev)];
    if (lev == static_cast<std::int64_t>(levels_.size()) - 1) {
      for (std::uint32_t x : states) into[x] = 0.0L;
      continue;  // absorbing top level
    }
    w = vacc;
    distance_transform(w, n_, q, r);
    rhs.resize(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
      const double base = constant_one ? 1.0 : rhs_base[states[i]];
      rhs[i] = base + w[states[i]];
    }
    solve_level_system(static_cast<int>(lev), rhs, out, reuse_factors);
    for (std::size_t i = 0; i < states.size(); ++i) {
      into[states[i]] = static_cast<long double>(out[i]);
      vacc[states[i]] = out[i];
    }
  }
}

std::vector<long double> ChainModel::residual_vector(
    const std::vector<long double>& V, long double* max_abs) const {
  const auto S = static_cast<std::size_t>(S_);
  std::vector<long double> flow =
      apply_transition_ld(n_, fit_, levels_, pow_ld_, V);
  std::vector<long double> resid(S, 0.0L);
  long double worst = 0.0L;
  for (std::size_t x = 0; x < S; ++x) {
    if (x == static_cast<std::size_t>(opt_)) continue;
    resid[x] = 1.0L + flow[x] - V[x];
    worst = std::max(worst, fabsl(resid[x]));
  }
  if (max_abs != nullptr) *max_abs = worst;
  return resid;
}

void ChainModel::solve() {
  if (solved_) return;
  const auto S = static_cast<std::size_t>(S_);

  std::size_t factor_entries = 0;
  for (const auto& states : levels_) {
    if (states.size() <= kLuMaxDim) {
      factor_entries += states.size() * states.size();
    }
  }
  keep_factors_ = factor_entries <= kKeepFactorEntries;

  V_.assign(S, 0.0L);
  sweep_levels({}, /*constant_one=*/true, V_, /*reuse_factors=*/false);

  // iterative refinement: residuals in long double, corrections pushed
  // through the same level pipeline; stop only once comfortably inside the
  // final guard so a borderline first solve still gets corrected
  std::vector<double> resid_d(S);
  std::vector<long double> corr(S, 0.0L);
  auto guard_for = [](long double vmax) {
    return std::max(1e-9L, vmax * 1e-17L);
  };
  for (int pass = 0; pass < 3; ++pass) {
    long double max_resid = 0.0L;
    std::vector<long double> resid = residual_vector(V_, &max_resid);
    long double vmax = 0.0L;
    for (std::size_t x = 0; x < S; ++x) vmax = std::max(vmax, fabsl(V_[x]));
    if (max_resid < 0.25L * guard_for(vmax)) break;
    for (std::size_t x = 0; x < S; ++x) {
      resid_d[x] = static_cast<double>(resid[x]);
    }
    std::fill(corr.begin(), corr.end(), 0.0L);
    sweep_levels(resid_d, /*constant_one=*/false, corr,
                 /*reuse_factors=*/true);
    for (std::size_t x = 0; x < S; ++x) V_[x] += corr[x];
  }
  residual_after_solve_ = 0.0L;
  residual_vector(V_, &residual_after_solve_);

  long double vmax = 0.0L;
  for (std::size_t x = 0; x < S; ++x) vmax = std::max(vmax, fabsl(V_[x]));
  if (residual_after_solve_ > guard_for(vmax)) {
    throw ResourceError("chain solve did not reach the residual target");
  }
  solved_ = true;
}

const std::vector<long double>& ChainModel::expected_steps() {
  solve();
  return V_;
}

long double ChainModel::expected_from(std::uint64_t x) {
  solve();
  if (static_cast<std::int64_t>(x) >= S_) {
    throw ConfigError("state index out of range");
  }
  return V_[static_cast<std::size_t>(x)];
}

long double ChainModel::expected_from_uniform() {
  solve();
  KahanLd total;
  for (const long double v : V_) total.add(v);
  return total.sum / static_cast<long double>(S_);
}

long double ChainModel::recurrence_residual() {
  solve();
  return residual_after_solve_;
}

ChainModel::CdfResult ChainModel::hitting_cdf_from_impl(
    const std::uint64_t* start, std::int64_t T) {
  if (T < 0) throw ConfigError("horizon must be nonnegative");
  const auto S = static_cast<std::size_t>(S_);
  std::vector<double> s(S, 1.0);
  s[static_cast<std::size_t>(opt_)] = 0.0;

  const bool dense = S <= 1024;
  std::vector<double> P;
  if (dense) {
    P.resize(S * S);
    for (std::size_t x = 0; x < S; ++x) {
      const std::vector<double> row = transition_row(x);
      std::copy(row.begin(), row.end(), P.begin() + static_cast<std::ptrdiff_t>(x * S));
    }
  }

  const double q = 1.0 / n_;
  const double r = 1.0 - q;
  auto survival_value = [&](const std::vector<double>& vec) -> long double {
    if (start != nullptr) return vec[static_cast<std::size_t>(*start)];
    KahanLd total;
    for (const double v : vec) total.add(v);
    return total.sum / static_cast<long double>(S_);
  };

  CdfResult res;
  res.cdf.resize(static_cast<std::size_t>(T) + 1);
  long double prev_f = 1.0L - survival_value(s);
  res.cdf[0] = static_cast<double>(prev_f);
  KahanLd pmean;

  std::vector<double> next(S);
  std::vector<double> mask(dense ? 0 : S);
  std::vector<double> w;
  for (std::int64_t t = 1; t <= T; ++t) {
    if (dense) {
      for (std::size_t x = 0; x < S; ++x) {
        const double* row = P.data() + x * S;
        double acc = 0.0;
        for (std::size_t y = 0; y < S; ++y) acc += row[y] * s[y];
        next[x] = acc;
      }
    } else {
      std::fill(next.begin(), next.end(), 0.0);
      std::fill(mask.begin(), mask.end(), 0.0);
      for (auto lev = static_cast<std::int64_t>(levels_.size()) - 1; lev >= 0;
           --lev) {
        for (std::uint32_t x : levels_[static_cast<std::size_t>(lev)]) {
          mask[x] = s[x];
        }
        w = mask;
        distance_transform(w, n_, q, r);
        for (std::uint32_t x : levels_[static_cast<std::size_t>(lev)]) {
          // the transform already carries pow[0]*s[x]; add the rejected mass
          next[x] = w[x] + (self_p_[x] - pow_d_[0]) * s[x];
        }
      }
    }
    next[static_cast<std::size_t>(opt_)] = 0.0;
    s.swap(next);
    const long double f = 1.0L - survival_value(s);
    res.cdf[static_cast<std::size_t>(t)] = static_cast<double>(f);
    pmean.add(static_cast<long double>(t) * (f - prev_f));
    prev_f = f;
  }
  res.partial_mean = pmean.sum;
  res.mass = prev_f;
  return res;
}

ChainModel::CdfResult ChainModel::hitting_cdf_uniform(std::int64_t T) {
  return hitting_cdf_from_impl(nullptr, T);
}

ChainModel::CdfResult ChainModel::hitting_cdf_from(std::uint64_t x,
                                                   std::int64_t T) {
  if (static_cast<std::int64_t>(x) >= S_) {
    throw ConfigError("state index out of range");
  }
  return hitting_cdf_from_impl(&x, T);
}

ChainModel::PotentialReport ChainModel::check_potential(
    const std::vector<long double>& V, long double c_l) {
  if (static_cast<std::int64_t>(V.size()) != S_) {
    throw ConfigError("potential vector has the wrong length");
  }
  if (!(c_l > 0.0L)) throw ConfigError("drift floor must be positive");
  solve();

  const std::vector<long double> flow =
      apply_transition_ld(n_, fit_, levels_, pow_ld_, V);
  PotentialReport rep;
  bool first = true;
  for (std::int64_t x = 0; x < S_; ++x) {
    if (static_cast<std::uint64_t>(x) == opt_) continue;
    const auto i = static_cast<std::size_t>(x);
    const long double drift = V[i] - flow[i];
    const long double excess = V_[i] - V[i] / c_l;
    if (first) {
      rep.min_drift = rep.max_drift = drift;
      rep.max_excess = excess;
      first = false;
    } else {
      rep.min_drift = std::min(rep.min_drift, drift);
      rep.max_drift = std::max(rep.max_drift, drift);
      rep.max_excess = std::max(rep.max_excess, excess);
    }
    rep.max_equality_gap = std::max(rep.max_equality_gap, fabsl(excess));
  }
  rep.applicable = rep.min_drift >= c_l - 1e-9L;
  return rep;
}

}  // namespace nnea
