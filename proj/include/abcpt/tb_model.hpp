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

#ifndef ABCPT_TB_MODEL_HPP
#define ABCPT_TB_MODEL_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "abcpt/error.hpp"
#include "abcpt/model.hpp"
#include "abcpt/normal.hpp"
#include "abcpt/rng.hpp"

namespace abcpt {

/// Per-case yearly rates of the birth-death-mutation process.
struct TbParams {
  double alpha = 0.0;      // birth (transmission)
  double delta = 0.0;      // death or recovery
  double theta_mut = 0.0;  // marker mutation

  ParameterVector<3> to_vector() const { return {alpha, delta, theta_mut}; }
  static TbParams from_vector(const ParameterVector<3>& v) { return {v[0], v[1], v[2]}; }
};

// ---------------------------------------------------------------------------
// Genotype clusters

/// Multiset of genotype cluster sizes of a sample, kept in descending order.
class ClusterConfiguration {
 public:
  ClusterConfiguration() = default;
  explicit ClusterConfiguration(std::vector<std::uint32_t> sizes) : sizes_(std::move(sizes)) {
    for (auto s : sizes_) {
      if (s == 0) throw InvalidArgument("cluster sizes must be positive");
      n_ += s;
    }
    std::sort(sizes_.begin(), sizes_.end(), std::greater<>());
  }

  /// Builds from (size, multiplicity) pairs, e.g. {{30, 1}, {1, 282}}.
  static ClusterConfiguration from_size_counts(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs) {
    std::vector<std::uint32_t> sizes;
    for (auto [size, count] : pairs) sizes.insert(sizes.end(), count, size);
    return ClusterConfiguration(std::move(sizes));
  }

  const std::vector<std::uint32_t>& sizes() const noexcept { return sizes_; }
  std::size_t sample_size() const noexcept { return n_; }

  /// (size, multiplicity) pairs in descending size order.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> size_counts() const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (auto s : sizes_) {
      if (!out.empty() && out.back().first == s) ++out.back().second;
      else out.emplace_back(s, 1);
    }
    return out;
  }

  bool operator==(const ClusterConfiguration&) const = default;

 private:
  std::vector<std::uint32_t> sizes_;
  std::size_t n_ = 0;
};

/// The San Francisco IS6110 data: 473 isolates in 326 genotypes,
/// 30^1 23^1 15^1 10^1 8^1 5^2 4^4 3^13 2^20 1^282.
inline ClusterConfiguration san_francisco_clusters() {
  return ClusterConfiguration::from_size_counts(
      {{30, 1}, {23, 1}, {15, 1}, {10, 1}, {8, 1}, {5, 2}, {4, 4}, {3, 13}, {2, 20}, {1, 282}});
}

/// Reads "size count" pairs, one per line; '#' starts a comment.
inline ClusterConfiguration read_cluster_configuration(std::istream& in) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long long size = 0, count = 0;
    if (!(ls >> size)) continue;
    std::string rest;
    if (!(ls >> count) || (ls >> rest) || size < 1 || count < 1)
      throw InvalidArgument("cluster file line " + std::to_string(line_no) +
                            ": expected two positive integers \"size count\"");
    pairs.emplace_back(static_cast<std::uint32_t>(size), static_cast<std::uint32_t>(count));
  }
  if (pairs.empty()) throw InvalidArgument("cluster file holds no clusters");
  return ClusterConfiguration::from_size_counts(pairs);
}

/// Number of distinct genotypes in the sample.
inline std::size_t stat_g(const ClusterConfiguration& c) { return c.sizes().size(); }

/// Gene diversity 1 - sum (n_i / n)^2.
inline double stat_H(const ClusterConfiguration& c) {
  const double n = static_cast<double>(c.sample_size());
  std::uint64_t sum_sq = 0;
  for (auto s : c.sizes()) sum_sq += static_cast<std::uint64_t>(s) * s;
  return 1.0 - static_cast<double>(sum_sq) / (n * n);
}

// ---------------------------------------------------------------------------
// Birth-death-mutation simulator

enum class EpidemicEvent : std::uint8_t { birth, death, mutation };

/// Live cases and their genotypes. Genotype ids are handed out in creation
/// order and never reused; counts live in a slot array recycled through a
/// free list, so storage tracks the live genotypes only.
class EpidemicPopulation {
 public:
  EpidemicPopulation() { reset(); }

  void reset() {
    cases_.assign(1, 0);
    slot_count_.assign(1, 1);
    slot_id_.assign(1, 0);
    free_.clear();
    genotypes_ever_ = 1;
  }

  std::size_t total_cases() const noexcept { return cases_.size(); }
  std::uint64_t genotypes_ever() const noexcept { return genotypes_ever_; }
  std::size_t live_genotypes() const noexcept { return slot_count_.size() - free_.size(); }

  /// genotype id -> number of live cases.
  std::map<std::uint64_t, std::uint32_t> genotype_counts() const {
    std::map<std::uint64_t, std::uint32_t> out;
    for (std::size_t s = 0; s < slot_count_.size(); ++s)
      if (slot_count_[s] > 0) out[slot_id_[s]] = slot_count_[s];
    return out;
  }

  /// Genotype slot of every live case; slots index `slot_count`.
  const std::vector<std::uint32_t>& case_slots() const noexcept { return cases_; }
  std::size_t slot_capacity() const noexcept { return slot_count_.size(); }

  void apply(EpidemicEvent event, std::size_t case_index) {
    const std::uint32_t slot = cases_[case_index];
    switch (event) {
      case EpidemicEvent::birth:
        cases_.push_back(slot);
        ++slot_count_[slot];
        break;
      case EpidemicEvent::death:
        cases_[case_index] = cases_.back();
        cases_.pop_back();
        release(slot);
        break;
      case EpidemicEvent::mutation:
        release(slot);
        cases_[case_index] = acquire();
        break;
    }
  }

  /// Builds a population from explicit genotype counts (testing, subsampling).
  static EpidemicPopulation from_counts(const std::vector<std::uint32_t>& counts) {
    EpidemicPopulation p;
    p.cases_.clear();
    p.slot_count_.clear();
    p.slot_id_.clear();
    for (std::uint32_t g = 0; g < counts.size(); ++g) {
      if (counts[g] == 0) throw InvalidArgument("genotype counts must be positive");
      p.slot_count_.push_back(counts[g]);
      p.slot_id_.push_back(g);
      p.cases_.insert(p.cases_.end(), counts[g], g);
    }
    p.genotypes_ever_ = counts.size();
    return p;
  }

 private:
  void release(std::uint32_t slot) {
    if (--slot_count_[slot] == 0) free_.push_back(slot);
  }

  std::uint32_t acquire() {
    std::uint32_t slot;
    if (!free_.empty()) {
      slot = free_.back();
      free_.pop_back();
      slot_count_[slot] = 1;
      slot_id_[slot] = genotypes_ever_;
    } else {
      slot = static_cast<std::uint32_t>(slot_count_.size());
      slot_count_.push_back(1);
      slot_id_.push_back(genotypes_ever_);
    }
    ++genotypes_ever_;
    return slot;
  }

  std::vector<std::uint32_t> cases_;
  std::vector<std::uint32_t> slot_count_;
  std::vector<std::uint64_t> slot_id_;
  std::vector<std::uint32_t> free_;
  std::uint64_t genotypes_ever_ = 1;
};

struct NoEventObserver {
  void operator()(EpidemicEvent, const EpidemicPopulation&) const noexcept {}
};

/// Runs the embedded jump chain of the birth-death-mutation process from a
/// single case of the ancestral genotype. Each event hits a case chosen
/// uniformly; its type is birth, death or mutation with probabilities
/// proportional to (alpha, delta, theta_mut). Returns the population once it
/// reaches `stop_size` cases, or nullopt on extinction.
template <class Observer = NoEventObserver>
std::optional<EpidemicPopulation> simulate_epidemic(const TbParams& params, std::size_t stop_size,
                                                    std::uint64_t max_events, Rng& rng,
                                                    Observer&& observe = {}) {
  if (stop_size < 1) throw InvalidArgument("stop_size must be >= 1");
  if (!(params.alpha >= 0.0) || !(params.delta >= 0.0) || !(params.theta_mut >= 0.0))
    throw InvalidArgument("epidemic rates must be nonnegative");
  const double total = params.alpha + params.delta + params.theta_mut;
  EpidemicPopulation pop;
  if (pop.total_cases() == stop_size) return pop;
  if (!(total > 0.0)) throw MaxEventsExceeded(max_events);
  const double p_birth = params.alpha / total;
  const double p_birth_or_death = (params.alpha + params.delta) / total;

  for (std::uint64_t events = 0; events < max_events; ++events) {
    const double u = uniform01(rng);
    const EpidemicEvent event = u < p_birth            ? EpidemicEvent::birth
                                : u < p_birth_or_death ? EpidemicEvent::death
                                                       : EpidemicEvent::mutation;
    pop.apply(event, uniform_index(rng, pop.total_cases()));
    observe(event, static_cast<const EpidemicPopulation&>(pop));
    if (pop.total_cases() == 0) return std::nullopt;
    if (pop.total_cases() == stop_size) return pop;
  }
  throw MaxEventsExceeded(max_events);
}

/// Clusters among n cases drawn uniformly without replacement.
inline ClusterConfiguration subsample_cases(const EpidemicPopulation& population, std::size_t n, Rng& rng) {
  const auto& cases = population.case_slots();
  if (n > cases.size())
    throw InvalidArgument("cannot sample " + std::to_string(n) + " cases from a population of " +
                          std::to_string(cases.size()));
  std::vector<std::uint32_t> picked;
  picked.reserve(n);
  std::sample(cases.begin(), cases.end(), std::back_inserter(picked), n, rng);
  std::vector<std::uint32_t> per_slot(population.slot_capacity(), 0);
  for (auto s : picked) ++per_slot[s];
  std::vector<std::uint32_t> sizes;
  for (auto c : per_slot)
    if (c > 0) sizes.push_back(c);
  return ClusterConfiguration(std::move(sizes));
}

// ---------------------------------------------------------------------------
// Model binding

enum class KernelTempering { matrix_power, entrywise };

struct TbOptions {
  ClusterConfiguration observed = san_francisco_clusters();
  std::size_t stop_size = 10000;
  std::uint64_t max_events = 500'000'000;
  double rate_max = 5.0;
  double mutation_prior_mean = 0.198;
  double mutation_prior_sd = 0.06735;
  Eigen::Matrix3d sigma = (Eigen::Matrix3d() << 0.25, 0.225, 0.0, 0.225, 0.25, 0.0, 0.0, 0.0, 0.000225).finished();
  KernelTempering tempering = KernelTempering::matrix_power;
};

/// Summary (g, H) of a sample; nullopt stands for an extinct epidemic.
using TbSummary = std::optional<std::array<double, 2>>;

/// Sigma^(1/T) as the symmetric matrix power V diag(lambda^(1/T)) V^T.
inline Eigen::Matrix3d spd_power(const Eigen::Matrix3d& sigma, double exponent) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(sigma);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0)
    throw InvalidArgument("kernel covariance must be symmetric positive definite");
  const Eigen::Vector3d powered = eig.eigenvalues().array().pow(exponent).matrix();
  return eig.eigenvectors() * powered.asDiagonal() * eig.eigenvectors().transpose();
}

/// Covariance of the kernel at `temperature`.
inline Eigen::Matrix3d tempered_covariance(const Eigen::Matrix3d& sigma, double temperature,
                                           KernelTempering mode = KernelTempering::matrix_power) {
  if (!(temperature >= 1.0)) throw InvalidArgument("temperature must be >= 1");
  if (mode == KernelTempering::matrix_power) return spd_power(sigma, 1.0 / temperature);
  Eigen::Matrix3d out;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      const double v = sigma(r, c);
      out(r, c) = v == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(v), 1.0 / temperature), v);
    }
  return out;
}

/// Epidemiological transforms of (alpha, delta).
struct TbDerived {
  double transmission_rate = 0.0;
  double doubling_time = 0.0;       // +inf when alpha == delta
  double reproductive_value = 0.0;  // +inf when delta == 0
};

inline TbDerived tb_derived_params(const TbParams& p) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  TbDerived d;
  d.transmission_rate = p.alpha - p.delta;
  d.doubling_time = d.transmission_rate == 0.0 ? inf : std::numbers::ln2 / d.transmission_rate;
  d.reproductive_value = p.delta == 0.0 ? inf : p.alpha / p.delta;
  return d;
}

/// Tuberculosis transmission model: birth-death-mutation epidemic simulated
/// to `stop_size` cases, subsampled to the observed sample size, summarized
/// by (g, H) and compared with |g - g_obs| / n + |H - H_obs|.
class TbModel {
 public:
  static constexpr std::size_t dimension = 3;
  using Params = ParameterVector<3>;
  using Dataset = std::optional<ClusterConfiguration>;
  using Summary = TbSummary;

  explicit TbModel(TbOptions options = {}) : opt_(std::move(options)) {
    if (opt_.observed.sample_size() == 0) throw InvalidArgument("observed configuration is empty");
    if (opt_.stop_size < opt_.observed.sample_size())
      throw InvalidArgument("stop_size must be at least the observed sample size");
    if (!(opt_.mutation_prior_sd > 0.0) || !(opt_.rate_max > 0.0)) throw InvalidArgument("invalid TB prior");
    if (!opt_.sigma.isApprox(opt_.sigma.transpose(), 0.0)) throw InvalidArgument("kernel covariance must be symmetric");
    spd_power(opt_.sigma, 1.0);  // SPD check
    observed_summary_ = summarize(Dataset(opt_.observed));
    log_mutation_mass_ = std::log(normal_sf(-opt_.mutation_prior_mean / opt_.mutation_prior_sd));
  }

  const TbOptions& options() const noexcept { return opt_; }
  std::size_t sample_size() const noexcept { return opt_.observed.sample_size(); }

  Params prior_sample(Rng& rng) const {
    std::uniform_real_distribution<double> rate(0.0, opt_.rate_max);
    double a = 0.0, b = 0.0;
    do {
      a = rate(rng);
      b = rate(rng);
    } while (a == b);
    std::normal_distribution<double> mutation(opt_.mutation_prior_mean, opt_.mutation_prior_sd);
    double m = -1.0;
    while (m < 0.0) m = mutation(rng);
    return {std::max(a, b), std::min(a, b), m};
  }

  double prior_log_density(const Params& p) const {
    const double alpha = p[0], delta = p[1], mu = p[2];
    if (!(delta >= 0.0 && alpha > delta && alpha <= opt_.rate_max && mu >= 0.0))
      return -std::numeric_limits<double>::infinity();
    return std::log(2.0 / (opt_.rate_max * opt_.rate_max)) +
           normal_log_pdf(mu, opt_.mutation_prior_mean, opt_.mutation_prior_sd) - log_mutation_mass_;
  }

  Dataset simulate(const Params& p, Rng& rng) const {
    auto population = simulate_epidemic(TbParams::from_vector(p), opt_.stop_size, opt_.max_events, rng);
    if (!population) return std::nullopt;
    return subsample_cases(*population, sample_size(), rng);
  }

  Summary summarize(const Dataset& z) const {
    if (!z) return std::nullopt;
    return std::array<double, 2>{static_cast<double>(stat_g(*z)), stat_H(*z)};
  }

  double distance(const Summary& a, const Summary& b) const {
    if (!a || !b) return std::numeric_limits<double>::infinity();
    return std::abs((*a)[0] - (*b)[0]) / static_cast<double>(sample_size()) + std::abs((*a)[1] - (*b)[1]);
  }

  const Summary& observed_summary() const noexcept { return observed_summary_; }

  Eigen::Matrix3d kernel_covariance(double temperature) const {
    return tempered_covariance(opt_.sigma, temperature, opt_.tempering);
  }

  Params propose(const Params& p, double temperature, Rng& rng) const {
    const Eigen::Matrix3d cov = kernel_covariance(temperature);
    Eigen::LLT<Eigen::Matrix3d> llt(cov);
    if (llt.info() != Eigen::Success) throw InvalidArgument("tempered kernel covariance is not positive definite");
    const Eigen::Vector3d z(standard_normal(rng), standard_normal(rng), standard_normal(rng));
    const Eigen::Vector3d step = llt.matrixL() * z;
    return {p[0] + step[0], p[1] + step[1], p[2] + step[2]};
  }

  double proposal_log_density(const Params& to, const Params& from, double temperature) const {
    const Eigen::Matrix3d cov = kernel_covariance(temperature);
    Eigen::LLT<Eigen::Matrix3d> llt(cov);
    const Eigen::Vector3d diff(to[0] - from[0], to[1] - from[1], to[2] - from[2]);
    const Eigen::Vector3d w = llt.matrixL().solve(diff);
    const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    return -0.5 * w.squaredNorm() - 0.5 * log_det - 1.5 * std::log(2.0 * std::numbers::pi);
  }

 private:
  TbOptions opt_;
  Summary observed_summary_;
  double log_mutation_mass_ = 0.0;
};

}  // namespace abcpt

#endif  // ABCPT_TB_MODEL_HPP
