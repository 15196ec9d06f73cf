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

#ifndef ABCPT_CONFIG_HPP
#define ABCPT_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "abcpt/error.hpp"
#include "abcpt/schedule.hpp"

namespace abcpt {

/// Full specification of one ABC-PT run.
struct PtConfig {
  ToleranceSchedule tolerances;
  TemperatureSchedule temperatures;
  std::uint64_t iterations = 0;
  std::uint64_t burn_in = 0;
  std::uint64_t thinning = 1;
  /// Exchange proposals per iteration; defaults to the number of chains. Zero
  /// turns the run into independent ABC-MCMC chains.
  std::optional<std::size_t> exchanges_per_iteration;
  /// Number of rings; absent means pairs are drawn uniformly over all chains.
  std::optional<std::size_t> ring_count;
  std::uint64_t master_seed = 0;
  /// Attempt cap for the rejection sampler that initializes each chain.
  std::uint64_t rejection_cap = 10'000'000;

  std::size_t n_chains() const noexcept { return tolerances.size(); }
  std::size_t exchanges() const noexcept { return exchanges_per_iteration.value_or(n_chains()); }
  bool independent_chains() const noexcept { return exchanges() == 0; }

  void validate() const {
    const std::size_t n = n_chains();
    if (n < 2) throw InvalidArgument("ABC-PT needs at least 2 chains");
    if (temperatures.size() != n)
      throw InvalidArgument("temperature schedule has " + std::to_string(temperatures.size()) +
                            " levels, tolerance schedule has " + std::to_string(n));
    if (!(burn_in < iterations)) throw InvalidArgument("burn_in must be smaller than iterations");
    if (thinning < 1) throw InvalidArgument("thinning must be >= 1");
    if (ring_count && (*ring_count < 1 || *ring_count > n))
      throw InvalidArgument("ring count must lie in [1, N]");
    if (iterations > UINT32_MAX) throw InvalidArgument("iterations must fit in 32 bits");
    if (n > UINT16_MAX) throw InvalidArgument("too many chains");
    if (rejection_cap < 1) throw InvalidArgument("rejection cap must be >= 1");
  }
};

/// Knobs that change how a run executes but never what it computes.
struct ExecutionOptions {
  std::size_t workers = 1;
  /// Sweep every chain after each iteration and fault if a cached distance is
  /// stale or outside its tolerance.
  bool check_invariants = false;
};

}  // namespace abcpt

#endif  // ABCPT_CONFIG_HPP
