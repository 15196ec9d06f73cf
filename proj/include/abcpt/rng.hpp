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

#ifndef ABCPT_RNG_HPP
#define ABCPT_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace abcpt {

using Rng = std::mt19937_64;

/// Stream `index` of the family rooted at `master_seed`. The engine state
/// depends only on the pair, so a stream is reproducible regardless of which
/// thread consumes it.
inline Rng make_stream(std::uint64_t master_seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32),
                    0x61626370u};  // "abcp"
  return Rng(seq);
}

/// Streams 0..n_chains-1 drive the chains; stream n_chains drives pair and
/// ring selection.
inline std::vector<Rng> rng_streams(std::uint64_t master_seed, std::size_t n_chains) {
  std::vector<Rng> streams;
  streams.reserve(n_chains + 1);
  for (std::size_t k = 0; k <= n_chains; ++k) streams.push_back(make_stream(master_seed, k));
  return streams;
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline double standard_normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

/// Uniform integer in [0, n).
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace abcpt

#endif  // ABCPT_RNG_HPP
