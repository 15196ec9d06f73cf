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

#ifndef ABCPT_MODEL_HPP
#define ABCPT_MODEL_HPP

#include <array>
#include <concepts>
#include <cstddef>
#include <utility>

#include "abcpt/rng.hpp"

namespace abcpt {

template <std::size_t D>
using ParameterVector = std::array<double, D>;

/// What a generative model must provide to be sampled likelihood-free.
///
/// `proposal_log_density(to, from, T)` is log q_T(to | from). Kernels need not
/// be symmetric; the local move keeps the full Hastings ratio. Every member is
/// called concurrently from several chains, so implementations must be
/// read-only after construction.
template <class M>
concept Model = requires(const M& m, Rng& rng, const typename M::Params& theta,
                         const typename M::Dataset& z, const typename M::Summary& s,
                         double temperature) {
  { M::dimension } -> std::convertible_to<std::size_t>;
  requires std::same_as<typename M::Params, ParameterVector<M::dimension>>;
  { m.prior_sample(rng) } -> std::same_as<typename M::Params>;
  { m.prior_log_density(theta) } -> std::convertible_to<double>;
  { m.simulate(theta, rng) } -> std::same_as<typename M::Dataset>;
  { m.summarize(z) } -> std::same_as<typename M::Summary>;
  { m.distance(s, s) } -> std::convertible_to<double>;
  { m.propose(theta, temperature, rng) } -> std::same_as<typename M::Params>;
  { m.proposal_log_density(theta, theta, temperature) } -> std::convertible_to<double>;
  { m.observed_summary() } -> std::convertible_to<const typename M::Summary&>;
};

/// One tempered chain's current point: parameter, the dataset simulated from
/// it, that dataset's summary and the cached distance to the observation.
/// `level` is the zero-based chain order and never moves during exchanges.
template <Model M>
struct ChainState {
  typename M::Params theta{};
  typename M::Dataset dataset{};
  typename M::Summary summary{};
  double distance = 0.0;
  std::size_t level = 0;

  /// Exchanges the payload (theta, dataset, summary, distance) but not the
  /// level.
  friend void swap_payload(ChainState& a, ChainState& b) noexcept {
    using std::swap;
    swap(a.theta, b.theta);
    swap(a.dataset, b.dataset);
    swap(a.summary, b.summary);
    swap(a.distance, b.distance);
  }
};

template <Model M>
ChainState<M> make_state(const M& model, typename M::Params theta, typename M::Dataset dataset,
                         std::size_t level = 0) {
  ChainState<M> state;
  state.theta = theta;
  state.summary = model.summarize(dataset);
  state.distance = model.distance(state.summary, model.observed_summary());
  state.dataset = std::move(dataset);
  state.level = level;
  return state;
}

/// True when the cached summary and distance still match the dataset.
template <Model M>
bool state_consistent(const M& model, const ChainState<M>& state) {
  const auto summary = model.summarize(state.dataset);
  return summary == state.summary &&
         model.distance(summary, model.observed_summary()) == state.distance;
}

}  // namespace abcpt

#endif  // ABCPT_MODEL_HPP
