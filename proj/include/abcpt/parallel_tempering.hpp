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

#ifndef ABCPT_PARALLEL_TEMPERING_HPP
#define ABCPT_PARALLEL_TEMPERING_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "abcpt/config.hpp"
#include "abcpt/error.hpp"
#include "abcpt/model.hpp"
#include "abcpt/rings.hpp"
#include "abcpt/rng.hpp"
#include "abcpt/samplers.hpp"
#include "abcpt/schedule.hpp"
#include "abcpt/trace.hpp"
#include "abcpt/worker_pool.hpp"

namespace abcpt {

/// Exchange acceptance test: the candidate distance must be strictly below
/// the lower chain's tolerance.
struct StrictlyBelow {
  constexpr bool operator()(double distance, double epsilon) const noexcept { return distance < epsilon; }
};

/// Draws chain i's starting point by rejection ABC at eps_i, using chain i's
/// own stream. `attempts`, when given, receives the attempts spent per chain.
template <Model M>
std::vector<ChainState<M>> pt_initialize(const PtConfig& config, const M& model, std::span<Rng> streams,
                                         std::vector<std::uint64_t>* attempts = nullptr,
                                         WorkerPool* pool = nullptr) {
  const std::size_t n = config.n_chains();
  require(streams.size() >= n, "pt_initialize: one stream per chain is required");
  std::vector<ChainState<M>> states(n);
  std::vector<std::uint64_t> spent(n, 0);
  auto init_one = [&](std::size_t k) {
    auto [state, used] = rejection_draw(model, config.tolerances[k], streams[k], config.rejection_cap);
    state.level = k;
    states[k] = std::move(state);
    spent[k] = used;
  };
  if (pool != nullptr) {
    pool->run(n, init_one);
  } else {
    for (std::size_t k = 0; k < n; ++k) init_one(k);
  }
  if (attempts != nullptr) *attempts = std::move(spent);
  return states;
}

/// Proposes swapping the payloads of levels i < j. The move is accepted iff
/// chain j's cached distance is below eps_i; the model is never consulted.
template <Model M, class Predicate = StrictlyBelow>
bool pt_exchange_attempt(std::vector<ChainState<M>>& states, const ToleranceSchedule& tolerances,
                         std::size_t i, std::size_t j, Predicate accepts = {}) {
  if (!(i < j) || j >= states.size())
    throw ContractViolation("pt_exchange_attempt: need i < j < N, got (" + std::to_string(i) + ", " +
                            std::to_string(j) + ")");
  if (!accepts(states[j].distance, tolerances[i])) return false;
  swap_payload(states[i], states[j]);
  return true;
}

/// Unordered pair {i, j} uniform over the n(n-1)/2 pairs, returned with i < j.
inline std::pair<std::size_t, std::size_t> draw_pair(Rng& rng, std::size_t n) {
  const std::size_t a = uniform_index(rng, n);
  std::size_t b = uniform_index(rng, n - 1);
  if (b >= a) ++b;
  return std::minmax(a, b);
}

struct ExchangePhaseStats {
  std::size_t accepted = 0;
  std::size_t skipped = 0;
};

/// `proposals` pairs drawn uniformly with replacement, each tried in turn
/// against the current (possibly already swapped) states.
template <Model M, class Predicate = StrictlyBelow>
ExchangePhaseStats pt_exchange_phase_uniform(std::vector<ChainState<M>>& states,
                                             const ToleranceSchedule& tolerances, std::size_t proposals,
                                             Rng& selection, std::uint32_t iteration,
                                             std::vector<ExchangeEvent>& events, Predicate accepts = {}) {
  require(states.size() >= 2, "exchange phase needs at least 2 chains");
  ExchangePhaseStats stats;
  for (std::size_t p = 0; p < proposals; ++p) {
    const auto [i, j] = draw_pair(selection, states.size());
    const bool ok = pt_exchange_attempt(states, tolerances, i, j, accepts);
    stats.accepted += ok ? 1 : 0;
    events.push_back({iteration, static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(j), ok});
  }
  return stats;
}

/// Zero-based ring holding the chain's current distance.
template <Model M>
std::size_t chain_ring_index(const ChainState<M>& state, const RingPartition& rings) {
  return rings.ring_of(state.distance);
}

/// Scratch space for the ring exchange phase, reusable across iterations.
struct RingMembership {
  std::vector<std::vector<std::size_t>> members;
  std::vector<std::size_t> eligible;

  template <Model M>
  void assign(const std::vector<ChainState<M>>& states, const RingPartition& rings) {
    members.resize(rings.ring_count());
    for (auto& m : members) m.clear();
    for (std::size_t k = 0; k < states.size(); ++k) members[chain_ring_index(states[k], rings)].push_back(k);
    eligible.clear();
    for (std::size_t r = 0; r < members.size(); ++r)
      if (members[r].size() >= 2) eligible.push_back(r);
  }
};

/// Ring-restricted exchange phase. Each proposal picks a ring uniformly among
/// those holding at least two chains, then a pair uniformly inside it. With no
/// eligible ring the proposal is skipped.
///
/// Membership is assigned once per phase: an exchange only swaps payloads of
/// two chains from the same ring, so every chain's ring is unchanged by it.
template <Model M, class Predicate = StrictlyBelow>
ExchangePhaseStats pt_exchange_phase_rings(std::vector<ChainState<M>>& states,
                                           const ToleranceSchedule& tolerances, const RingPartition& rings,
                                           std::size_t proposals, Rng& selection, std::uint32_t iteration,
                                           std::vector<ExchangeEvent>& events, RingMembership& scratch,
                                           Predicate accepts = {}) {
  require(states.size() >= 2, "exchange phase needs at least 2 chains");
  scratch.assign(states, rings);
  ExchangePhaseStats stats;
  if (scratch.eligible.empty()) {
    stats.skipped = proposals;
    return stats;
  }
  for (std::size_t p = 0; p < proposals; ++p) {
    const auto& ring = scratch.members[scratch.eligible[uniform_index(selection, scratch.eligible.size())]];
    const auto [a, b] = draw_pair(selection, ring.size());
    const std::size_t i = ring[a];
    const std::size_t j = ring[b];
    const bool ok = pt_exchange_attempt(states, tolerances, i, j, accepts);
    stats.accepted += ok ? 1 : 0;
    events.push_back({iteration, static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(j), ok});
  }
  return stats;
}

template <Model M, class Predicate = StrictlyBelow>
ExchangePhaseStats pt_exchange_phase_rings(std::vector<ChainState<M>>& states,
                                           const ToleranceSchedule& tolerances, const RingPartition& rings,
                                           std::size_t proposals, Rng& selection, std::uint32_t iteration,
                                           std::vector<ExchangeEvent>& events, Predicate accepts = {}) {
  RingMembership scratch;
  return pt_exchange_phase_rings(states, tolerances, rings, proposals, selection, iteration, events, scratch,
                                 accepts);
}

template <Model M>
struct PtRun {
  Trace trace;
  std::uint64_t burn_in = 0;
  std::uint64_t thinning = 1;
  std::vector<ChainState<M>> final_states;
  std::optional<RingPartition> rings;
  std::vector<std::uint64_t> init_attempts;

  Samples primary_samples() const { return trace.samples(0, burn_in, thinning); }
};

/// Checks that every chain holds a state inside its own tolerance with an
/// up-to-date cached distance.
template <Model M>
void check_chain_invariants(const M& model, const std::vector<ChainState<M>>& states,
                            const ToleranceSchedule& tolerances) {
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (!(states[k].distance < tolerances[k]))
      throw ContractViolation("chain " + std::to_string(k + 1) + " holds a state outside its tolerance");
    if (!state_consistent(model, states[k]))
      throw ContractViolation("chain " + std::to_string(k + 1) + " has a stale cached distance");
  }
}

/// ABC-PT. Each iteration moves every chain locally (independently, possibly
/// on several workers) and then runs one exchange phase on the coordinator.
/// Results depend only on the config, never on `options.workers`.
template <Model M>
PtRun<M> run_abc_pt(const PtConfig& config, const M& model, const ExecutionOptions& options = {}) {
  config.validate();
  const std::size_t n = config.n_chains();
  const std::size_t dim = M::dimension;
  auto streams = rng_streams(config.master_seed, n);
  Rng& selection = streams[n];
  WorkerPool pool(std::min(options.workers, n));

  PtRun<M> run;
  run.burn_in = config.burn_in;
  run.thinning = config.thinning;
  if (config.ring_count) run.rings = ring_partition(config.tolerances, *config.ring_count);
  auto states = pt_initialize(config, model, std::span<Rng>(streams).first(n), &run.init_attempts, &pool);

  run.trace = Trace(n, dim);
  run.trace.reserve(config.iterations);
  std::vector<std::uint8_t> flags(n, 0);
  std::vector<double> block(n * dim);
  std::vector<ExchangeEvent> events;
  events.reserve(config.exchanges());
  RingMembership membership;

  const std::function<void(std::size_t)> local = [&](std::size_t k) {
    flags[k] = local_move(model, states[k], config.tolerances[k], config.temperatures[k], streams[k]) ? 1 : 0;
  };

  for (std::uint64_t t = 0; t < config.iterations; ++t) {
    pool.run(n, local);

    if (!config.independent_chains()) {
      events.clear();
      const auto iteration = static_cast<std::uint32_t>(t);
      if (run.rings) {
        const auto stats = pt_exchange_phase_rings(states, config.tolerances, *run.rings, config.exchanges(),
                                                   selection, iteration, events, membership);
        run.trace.add_skipped_exchanges(stats.skipped);
      } else {
        pt_exchange_phase_uniform(states, config.tolerances, config.exchanges(), selection, iteration, events);
      }
      for (const auto& e : events) run.trace.append_exchange(e);
    }

    if (options.check_invariants) check_chain_invariants(model, states, config.tolerances);

    for (std::size_t k = 0; k < n; ++k) std::copy(states[k].theta.begin(), states[k].theta.end(), block.begin() + k * dim);
    run.trace.append_iteration(block, flags);
  }
  run.final_states = std::move(states);
  return run;
}

}  // namespace abcpt

#endif  // ABCPT_PARALLEL_TEMPERING_HPP
