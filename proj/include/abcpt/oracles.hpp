// Copyright 2026 The abcpt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ABCPT_ORACLES_HPP
#define ABCPT_ORACLES_HPP

// Independent reference computations used by the test suites and by the
// `validate` command. Nothing here calls into the sampler code paths it is
// used to check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "abcpt/rng.hpp"

namespace abcpt::oracle {

/// Composite Simpson rule with `intervals` (rounded up to even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, std::size_t intervals) {
  if (intervals % 2 == 1) ++intervals;
  const double h = (b - a) / static_cast<double>(intervals);
  double s = f(a) + f(b);
  for (std::size_t k = 1; k < intervals; ++k) s += f(a + h * static_cast<double>(k)) * (k % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// One randomized exchange instance: per-chain tolerances, cached distances
/// and likelihood values f(z_k | theta_k) of the current payloads.
struct ExchangeInstance {
  std::vector<double> epsilons;
  std::vector<double> distances;
  std::vector<double> likelihoods;
  std::size_t i = 0;
  std::size_t j = 1;
};

/// Draws a valid instance (every chain inside its own tolerance). Likelihood
/// values are powers of two so products are exact, and some distances are
/// placed exactly on a lower tolerance to exercise the strict inequality.
inline ExchangeInstance random_exchange_instance(Rng& rng) {
  ExchangeInstance inst;
  const std::size_t n = 2 + uniform_index(rng, 7);
  double eps = 0.01 + uniform01(rng);
  for (std::size_t k = 0; k < n; ++k) {
    inst.epsilons.push_back(eps);
    eps *= 1.0 + 2.0 * uniform01(rng) + 1e-3;
  }
  for (std::size_t k = 0; k < n; ++k) {
    double d = uniform01(rng) * inst.epsilons[k];
    if (k > 0 && uniform01(rng) < 0.1) d = inst.epsilons[uniform_index(rng, k)];
    if (uniform01(rng) < 0.05) d = 0.0;
    inst.distances.push_back(d);
    inst.likelihoods.push_back(std::ldexp(1.0, static_cast<int>(uniform_index(rng, 41)) - 20));
  }
  const std::size_t a = uniform_index(rng, n);
  std::size_t b = uniform_index(rng, n - 1);
  if (b >= a) ++b;
  inst.i = std::min(a, b);
  inst.j = std::max(a, b);
  return inst;
}

/// Metropolis acceptance probability of swapping payloads i and j under the
/// product target prod_k f(z_k | theta_k) 1{rho_k < eps_k}, evaluated term by
/// term over all chains. The pair proposal is symmetric so q cancels.
inline double exchange_metropolis_ratio(const ExchangeInstance& inst) {
  const std::size_t n = inst.epsilons.size();
  std::vector<std::size_t> payload(n);
  for (std::size_t k = 0; k < n; ++k) payload[k] = k;
  std::vector<std::size_t> swapped = payload;
  std::swap(swapped[inst.i], swapped[inst.j]);
  auto target = [&](const std::vector<std::size_t>& who) {
    double v = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t p = who[k];
      const double indicator = inst.distances[p] < inst.epsilons[k] ? 1.0 : 0.0;
      v *= inst.likelihoods[p] * indicator;
    }
    return v;
  };
  const double current = target(payload);
  const double proposed = target(swapped);
  return std::min(1.0, proposed / current);
}

/// Probability that a birth-death walk started at one case, stepping up with
/// probability alpha / (alpha + delta), hits 0 before `stop_size`
/// (gambler's ruin).
inline double ruin_extinction_probability(double alpha, double delta, std::size_t stop_size) {
  const double r = delta / alpha;
  const auto s = static_cast<double>(stop_size);
  if (r == 1.0) return 1.0 - 1.0 / s;
  return 1.0 - (1.0 - r) / (1.0 - std::pow(r, s));
}

/// Same probability by first-step analysis: solves
/// e_x = p e_{x+1} + q e_{x-1}, e_0 = 1, e_S = 0 with the Thomas algorithm.
inline double first_step_extinction_probability(double alpha, double delta, std::size_t stop_size) {
  const double p = alpha / (alpha + delta);
  const double q = 1.0 - p;
  const std::size_t m = stop_size - 1;  // unknowns e_1 .. e_{S-1}
  if (m == 0) return 0.0;
  // -q e_{x-1} + e_x - p e_{x+1} = 0, with the boundary e_0 = 1 moved right.
  std::vector<double> c(m), d(m);
  double b = 1.0;
  c[0] = -p / b;
  d[0] = q / b;
  for (std::size_t x = 1; x < m; ++x) {
    const double denom = 1.0 - (-q) * c[x - 1];
    c[x] = -p / denom;
    d[x] = (0.0 - (-q) * d[x - 1]) / denom;
  }
  std::vector<double> e(m);
  e[m - 1] = d[m - 1];
  for (std::size_t x = m - 1; x-- > 0;) e[x] = d[x] - c[x] * e[x + 1];
  return e[0];
}

/// Kolmogorov-Smirnov statistic of a sample against a continuous CDF.
inline double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const auto n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t k = 0; k < sample.size(); ++k) {
    const double f = cdf(sample[k]);
    d = std::max({d, static_cast<double>(k + 1) / n - f, f - static_cast<double>(k) / n});
  }
  return d;
}

/// Asymptotic p-value of the one-sample KS statistic (Stephens' correction).
inline double ks_pvalue(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

/// Two-sample KS p-value.
inline double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  std::size_t ia = 0, ib = 0;
  double d = 0.0;
  while (ia < a.size() && ib < b.size()) {
    const double x = std::min(a[ia], b[ib]);
    while (ia < a.size() && a[ia] <= x) ++ia;
    while (ib < b.size() && b[ib] <= x) ++ib;
    d = std::max(d, std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
  }
  const auto ne = static_cast<std::size_t>(std::max(1.0, na * nb / (na + nb)));
  return ks_pvalue(d, ne);
}

/// Upper-tail probability of a chi-square statistic.
inline double chi_square_pvalue(double statistic, double dof) {
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), statistic));
}

/// Pearson chi-square p-value for observed counts against expected counts.
inline double chi_square_gof_pvalue(std::span<const double> observed, std::span<const double> expected,
                                    std::size_t fitted_params = 0) {
  double stat = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k)
    stat += (observed[k] - expected[k]) * (observed[k] - expected[k]) / expected[k];
  return chi_square_pvalue(stat, static_cast<double>(observed.size() - 1 - fitted_params));
}

/// Sample mean and its standard error.
struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

inline MeanSe mean_se(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  const double var = ss / static_cast<double>(v.size() - 1);
  return {m, std::sqrt(var / static_cast<double>(v.size()))};
}

}  // namespace abcpt::oracle

#endif  // ABCPT_ORACLES_HPP
