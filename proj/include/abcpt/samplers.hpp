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

#ifndef ABCPT_SAMPLERS_HPP
#define ABCPT_SAMPLERS_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "abcpt/error.hpp"
#include "abcpt/model.hpp"
#include "abcpt/rng.hpp"
#include "abcpt/trace.hpp"

namespace abcpt {

template <Model M>
struct RejectionResult {
  std::vector<typename M::Params> samples;
  std::uint64_t proposals_used = 0;

  double acceptance_rate() const {
    return proposals_used == 0 ? 0.0
                               : static_cast<double>(samples.size()) / static_cast<double>(proposals_used);
  }
};

/// Draws one (theta, z) from the prior predictive conditioned on
/// distance < epsilon. Returns the state and the attempts spent.
template <Model M>
std::pair<ChainState<M>, std::uint64_t> rejection_draw(const M& model, double epsilon, Rng& rng,
                                                       std::optional<std::uint64_t> attempt_cap = {}) {
  for (std::uint64_t attempt = 1;; ++attempt) {
    if (attempt_cap && attempt > *attempt_cap) throw RejectionCapExceeded(epsilon, *attempt_cap);
    auto theta = model.prior_sample(rng);
    auto state = make_state(model, theta, model.simulate(theta, rng));
    if (state.distance < epsilon) return {std::move(state), attempt};
  }
}

/// Standard rejection ABC: `count` prior draws whose simulated summaries land
/// within `epsilon` of the observation. The cap bounds the total number of
/// attempts across all samples.
template <Model M>
RejectionResult<M> abc_rejection(const M& model, double epsilon, std::size_t count, Rng& rng,
                                 std::optional<std::uint64_t> attempt_cap = {}) {
  if (!(epsilon > 0.0)) throw InvalidArgument("abc_rejection: epsilon must be positive");
  if (count < 1) throw InvalidArgument("abc_rejection: count must be >= 1");
  RejectionResult<M> out;
  out.samples.reserve(count);
  while (out.samples.size() < count) {
    if (attempt_cap && out.proposals_used >= *attempt_cap) throw RejectionCapExceeded(epsilon, *attempt_cap);
    auto theta = model.prior_sample(rng);
    const auto summary = model.summarize(model.simulate(theta, rng));
    ++out.proposals_used;
    if (model.distance(summary, model.observed_summary()) < epsilon) out.samples.push_back(theta);
  }
  return out;
}

/// Fixed-budget variant: exactly `proposals` attempts, however many accept.
template <Model M>
RejectionResult<M> abc_rejection_budget(const M& model, double epsilon, std::uint64_t proposals, Rng& rng) {
  if (!(epsilon > 0.0)) throw InvalidArgument("abc_rejection: epsilon must be positive");
  RejectionResult<M> out;
  for (; out.proposals_used < proposals; ++out.proposals_used) {
    auto theta = model.prior_sample(rng);
    const auto summary = model.summarize(model.simulate(theta, rng));
    if (model.distance(summary, model.observed_summary()) < epsilon) out.samples.push_back(theta);
  }
  return out;
}

/// In-place ABC-MCMC move at tolerance `epsilon` with the kernel tempered by
/// `temperature`. Accepts with probability
/// min(1, pi(t') q(t|t') / (pi(t) q(t'|t))) * 1{rho(S(z'), S(x)) < epsilon}.
/// A proposal with zero prior density is rejected before simulating.
template <Model M>
bool local_move(const M& model, ChainState<M>& state, double epsilon, double temperature, Rng& rng) {
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  const double log_prior_current = model.prior_log_density(state.theta);
  if (!(log_prior_current > neg_inf))
    throw ContractViolation("local move started from a point with zero prior density");

  auto proposal = model.propose(state.theta, temperature, rng);
  const double log_prior_proposal = model.prior_log_density(proposal);
  if (!(log_prior_proposal > neg_inf)) return false;

  auto dataset = model.simulate(proposal, rng);
  auto summary = model.summarize(dataset);
  const double distance = model.distance(summary, model.observed_summary());
  if (!(distance < epsilon)) return false;

  const double log_ratio = log_prior_proposal - log_prior_current +
                           model.proposal_log_density(state.theta, proposal, temperature) -
                           model.proposal_log_density(proposal, state.theta, temperature);
  if (log_ratio < 0.0 && !(std::log(uniform01(rng)) < log_ratio)) return false;

  state.theta = proposal;
  state.dataset = std::move(dataset);
  state.summary = std::move(summary);
  state.distance = distance;
  return true;
}

template <Model M>
struct LocalMoveOutcome {
  bool accepted = false;
  ChainState<M> new_state;
};

template <Model M>
LocalMoveOutcome<M> abc_mcmc_step(const ChainState<M>& state, const M& model, double epsilon,
                                  double temperature, Rng& rng) {
  if (!(state.distance < epsilon))
    throw ContractViolation("abc_mcmc_step: current state is outside the tolerance");
  LocalMoveOutcome<M> out{false, state};
  out.accepted = local_move(model, out.new_state, epsilon, temperature, rng);
  return out;
}

template <Model M>
struct ChainRun {
  Trace trace;
  std::uint64_t burn_in = 0;
  std::uint64_t thinning = 1;
  std::vector<ChainState<M>> final_states;

  /// Post-burn-in, thinned draws of the chain of interest.
  Samples primary_samples() const { return trace.samples(0, burn_in, thinning); }
};

/// Plain ABC-MCMC (temperature 1) for `iterations` steps from `init`.
template <Model M>
ChainRun<M> abc_mcmc_run(const M& model, double epsilon, std::uint64_t iterations,
                         std::uint64_t burn_in, ChainState<M> init, Rng& rng,
                         std::uint64_t thinning = 1) {
  if (!(init.distance < epsilon))
    throw ContractViolation("abc_mcmc_run: initial state is outside the tolerance");
  if (iterations > 0 && burn_in >= iterations)
    throw InvalidArgument("abc_mcmc_run: burn_in must be smaller than iterations");
  if (thinning < 1) throw InvalidArgument("abc_mcmc_run: thinning must be >= 1");
  ChainRun<M> run{Trace(1, M::dimension), burn_in, thinning, {}};
  run.trace.reserve(iterations);
  for (std::uint64_t t = 0; t < iterations; ++t) {
    const std::uint8_t accepted = local_move(model, init, epsilon, 1.0, rng) ? 1 : 0;
    run.trace.append_iteration(init.theta, std::span<const std::uint8_t>(&accepted, 1));
  }
  run.final_states.push_back(std::move(init));
  return run;
}

}  // namespace abcpt

#endif  // ABCPT_SAMPLERS_HPP
