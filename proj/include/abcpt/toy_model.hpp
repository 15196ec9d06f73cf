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

#ifndef ABCPT_TOY_MODEL_HPP
#define ABCPT_TOY_MODEL_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "abcpt/error.hpp"
#include "abcpt/model.hpp"
#include "abcpt/normal.hpp"
#include "abcpt/rng.hpp"

namespace abcpt {

/// x | theta ~ sum_k weight_k N(theta + shift_k, sd_k^2), theta ~ U(prior_lo, prior_hi).
struct ToyOptions {
  std::array<double, 3> weights{0.45, 0.45, 0.1};
  std::array<double, 3> shifts{0.0, 0.0, -5.0};
  std::array<double, 3> sds{1.0, 0.1, 1.0};
  double observation = 0.0;
  double prior_lo = -10.0;
  double prior_hi = 10.0;
  /// Kernel standard deviation at temperature 1; scaled by sqrt(T).
  double kernel_sd = 0.15;

  /// Two-component variant without the mode at 5.
  static ToyOptions standard() {
    ToyOptions o;
    o.weights = {0.5, 0.5, 0.0};
    return o;
  }
};

/// Gaussian-mixture toy model with S(x) = x and rho(x, z) = |z - x|.
class ToyModel {
 public:
  static constexpr std::size_t dimension = 1;
  using Params = ParameterVector<1>;
  using Dataset = double;
  using Summary = double;

  explicit ToyModel(ToyOptions options = {}) : opt_(options) {
    double total = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      if (opt_.weights[k] < 0.0 || !(opt_.sds[k] > 0.0)) throw InvalidArgument("toy mixture needs w >= 0, sd > 0");
      total += opt_.weights[k];
    }
    if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("toy mixture weights must sum to 1");
    if (!(opt_.prior_lo < opt_.prior_hi)) throw InvalidArgument("toy prior bounds must satisfy lo < hi");
    if (!(opt_.kernel_sd > 0.0)) throw InvalidArgument("toy kernel sd must be positive");
  }

  const ToyOptions& options() const noexcept { return opt_; }

  Params prior_sample(Rng& rng) const {
    return {std::uniform_real_distribution<double>(opt_.prior_lo, opt_.prior_hi)(rng)};
  }

  double prior_log_density(const Params& theta) const {
    if (theta[0] < opt_.prior_lo || theta[0] > opt_.prior_hi) return -std::numeric_limits<double>::infinity();
    return -std::log(opt_.prior_hi - opt_.prior_lo);
  }

  /// Index of the mixture component a uniform u falls in.
  std::size_t component(double u) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < 2; ++k) {
      acc += opt_.weights[k];
      if (u < acc) return k;
    }
    return 2;
  }

  Dataset simulate(const Params& theta, Rng& rng) const {
    const std::size_t k = component(uniform01(rng));
    return theta[0] + opt_.shifts[k] + opt_.sds[k] * standard_normal(rng);
  }

  Summary summarize(const Dataset& z) const { return z; }
  double distance(const Summary& a, const Summary& b) const { return std::abs(a - b); }
  const Summary& observed_summary() const { return opt_.observation; }

  double kernel_sd(double temperature) const { return opt_.kernel_sd * std::sqrt(temperature); }

  Params propose(const Params& theta, double temperature, Rng& rng) const {
    return {theta[0] + kernel_sd(temperature) * standard_normal(rng)};
  }

  double proposal_log_density(const Params& to, const Params& from, double temperature) const {
    return normal_log_pdf(to[0], from[0], kernel_sd(temperature));
  }

  /// Likelihood f(x_obs | theta) of the mixture.
  double likelihood(double theta) const {
    double f = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      const double sd = opt_.sds[k];
      f += opt_.weights[k] * normal_pdf((opt_.observation - theta - opt_.shifts[k]) / sd) / sd;
    }
    return f;
  }

  /// P(|z - x_obs| < epsilon | theta), the unnormalized epsilon-posterior
  /// under the flat prior.
  double hit_probability(double theta, double epsilon) const {
    double p = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      const double centre = opt_.observation - theta - opt_.shifts[k];
      const double sd = opt_.sds[k];
      p += opt_.weights[k] * normal_interval((centre - epsilon) / sd, (centre + epsilon) / sd);
    }
    return p;
  }

  /// Breakpoints that bracket every mixture feature on the prior support,
  /// used to split quadrature.
  std::vector<double> quadrature_breaks() const {
    std::vector<double> pts{opt_.prior_lo, opt_.prior_hi};
    for (std::size_t k = 0; k < 3; ++k) {
      const double c = opt_.observation - opt_.shifts[k];
      for (double m : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}) {
        pts.push_back(c - m * opt_.sds[k]);
        pts.push_back(c + m * opt_.sds[k]);
      }
    }
    std::vector<double> out;
    for (double p : pts)
      if (p >= opt_.prior_lo && p <= opt_.prior_hi) out.push_back(p);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// Adaptive Gauss-Kronrod integral of f over [a, b] within the prior support.
  template <class F>
  double integrate(F&& f, double a, double b) const {
    a = std::max(a, opt_.prior_lo);
    b = std::min(b, opt_.prior_hi);
    if (!(a < b)) return 0.0;
    std::vector<double> cuts{a};
    for (double p : quadrature_breaks())
      if (p > a && p < b) cuts.push_back(p);
    cuts.push_back(b);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
      total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, cuts[k], cuts[k + 1], 12, 1e-11);
    return total;
  }

 private:
  ToyOptions opt_;
};

/// Exact posterior pi(theta | x_obs): the likelihood restricted to the prior
/// support and normalized by quadrature.
class ToyExactPosterior {
 public:
  explicit ToyExactPosterior(const ToyModel& model) : model_(model) {
    normalizer_ = model_.integrate([this](double t) { return model_.likelihood(t); }, model_.options().prior_lo,
                                   model_.options().prior_hi);
  }

  double normalizer() const noexcept { return normalizer_; }

  double density(double theta) const {
    if (theta < model_.options().prior_lo || theta > model_.options().prior_hi) return 0.0;
    return model_.likelihood(theta) / normalizer_;
  }

  /// Posterior probability of [a, b].
  double mass(double a, double b) const {
    return model_.integrate([this](double t) { return density(t); }, a, b);
  }

 private:
  ToyModel model_;
  double normalizer_ = 1.0;
};

/// Unnormalized epsilon-approximate posterior: the hit probability inside the
/// prior support, zero outside.
inline double toy_eps_posterior_unnormalized(const ToyModel& model, double theta, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  if (theta < model.options().prior_lo || theta > model.options().prior_hi) return 0.0;
  return model.hit_probability(theta, epsilon);
}

/// Normalized epsilon-approximate posterior for a fixed epsilon.
class ToyEpsPosterior {
 public:
  ToyEpsPosterior(const ToyModel& model, double epsilon) : model_(model), epsilon_(epsilon) {
    if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
    const double w = model_.options().prior_hi - model_.options().prior_lo;
    normalizer_ = model_.integrate([this](double t) { return model_.hit_probability(t, epsilon_); },
                                   model_.options().prior_lo, model_.options().prior_hi);
    acceptance_ = normalizer_ / w;
  }

  double epsilon() const noexcept { return epsilon_; }
  double normalizer() const noexcept { return normalizer_; }
  /// Rejection-ABC acceptance probability: integral of prior * hit probability.
  double acceptance_probability() const noexcept { return acceptance_; }

  double unnormalized(double theta) const { return toy_eps_posterior_unnormalized(model_, theta, epsilon_); }
  double density(double theta) const { return unnormalized(theta) / normalizer_; }
  double cdf(double theta) const {
    return model_.integrate([this](double t) { return density(t); }, model_.options().prior_lo, theta);
  }
  double mass(double a, double b) const {
    return model_.integrate([this](double t) { return density(t); }, a, b);
  }

 private:
  ToyModel model_;
  double epsilon_;
  double normalizer_ = 1.0;
  double acceptance_ = 0.0;
};

}  // namespace abcpt

#endif  // ABCPT_TOY_MODEL_HPP
