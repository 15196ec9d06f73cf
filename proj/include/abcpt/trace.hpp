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

#ifndef ABCPT_TRACE_HPP
#define ABCPT_TRACE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "abcpt/error.hpp"

namespace abcpt {

/// Row-major block of parameter draws, one row per sample.
struct Samples {
  std::size_t dimension = 1;
  std::vector<double> values;

  std::size_t size() const noexcept { return dimension == 0 ? 0 : values.size() / dimension; }
  bool empty() const noexcept { return values.empty(); }
  std::span<const double> row(std::size_t k) const {
    return std::span<const double>(values).subspan(k * dimension, dimension);
  }
  std::vector<double> coordinate(std::size_t c) const {
    std::vector<double> out;
    out.reserve(size());
    for (std::size_t k = 0; k < size(); ++k) out.push_back(values[k * dimension + c]);
    return out;
  }
  template <class Row>
  void push_back(const Row& r) {
    values.insert(values.end(), std::begin(r), std::end(r));
  }
};

/// One proposed exchange between chain levels i < j (zero-based).
struct ExchangeEvent {
  std::uint32_t iteration = 0;
  std::uint16_t i = 0;
  std::uint16_t j = 0;
  bool accepted = false;

  bool operator==(const ExchangeEvent&) const = default;
};

/// Complete history of a run. Every iteration is stored; burn-in and thinning
/// are applied only when samples are extracted.
class Trace {
 public:
  Trace() = default;
  Trace(std::size_t n_chains, std::size_t dimension) : n_chains_(n_chains), dimension_(dimension) {}

  std::size_t n_chains() const noexcept { return n_chains_; }
  std::size_t dimension() const noexcept { return dimension_; }
  std::uint64_t iterations() const noexcept { return iterations_; }

  void reserve(std::uint64_t iterations) {
    thetas_.reserve(iterations * n_chains_ * dimension_);
    accepted_.reserve(iterations * n_chains_);
  }

  /// Appends one iteration. `thetas` holds n_chains rows of `dimension`
  /// values, `accepted` one local-move flag per chain.
  void append_iteration(std::span<const double> thetas, std::span<const std::uint8_t> accepted) {
    require(thetas.size() == n_chains_ * dimension_, "append_iteration: theta block size");
    require(accepted.size() == n_chains_, "append_iteration: flag block size");
    thetas_.insert(thetas_.end(), thetas.begin(), thetas.end());
    accepted_.insert(accepted_.end(), accepted.begin(), accepted.end());
    ++iterations_;
  }

  void append_exchange(const ExchangeEvent& e) {
    require(e.i < e.j && e.j < n_chains_, "append_exchange: need i < j < N");
    exchanges_.push_back(e);
  }
  void add_skipped_exchanges(std::uint64_t n) noexcept { skipped_ += n; }

  double theta(std::uint64_t iteration, std::size_t chain, std::size_t coord = 0) const {
    return thetas_[(iteration * n_chains_ + chain) * dimension_ + coord];
  }
  bool local_accepted(std::uint64_t iteration, std::size_t chain) const {
    return accepted_[iteration * n_chains_ + chain] != 0;
  }
  std::span<const ExchangeEvent> exchanges() const noexcept { return exchanges_; }
  /// Ring-mode proposals that found no ring with two members.
  std::uint64_t skipped_exchanges() const noexcept { return skipped_; }

  std::span<const double> raw_thetas() const noexcept { return thetas_; }
  std::span<const std::uint8_t> raw_accepted() const noexcept { return accepted_; }

  /// Draws of one chain after discarding `burn_in` iterations and keeping
  /// every `thin`-th of the rest.
  Samples samples(std::size_t chain, std::uint64_t burn_in = 0, std::uint64_t thin = 1) const {
    require(chain < n_chains_, "samples: chain out of range");
    require(thin >= 1, "samples: thinning must be >= 1");
    Samples out;
    out.dimension = dimension_;
    for (std::uint64_t t = burn_in; t < iterations_; t += thin) {
      const auto* first = thetas_.data() + (t * n_chains_ + chain) * dimension_;
      out.values.insert(out.values.end(), first, first + dimension_);
    }
    return out;
  }

  /// One coordinate of one chain as a plain series.
  std::vector<double> series(std::size_t chain, std::size_t coord = 0, std::uint64_t burn_in = 0,
                             std::uint64_t thin = 1) const {
    return samples(chain, burn_in, thin).coordinate(coord);
  }

  bool operator==(const Trace&) const = default;

  /// Reassembles a trace from its stored arrays (used by deserialization).
  static Trace from_parts(std::size_t n_chains, std::size_t dimension, std::uint64_t iterations,
                          std::vector<double> thetas, std::vector<std::uint8_t> accepted,
                          std::vector<ExchangeEvent> exchanges, std::uint64_t skipped) {
    if (thetas.size() != iterations * n_chains * dimension || accepted.size() != iterations * n_chains)
      throw InvalidArgument("trace arrays do not match the declared shape");
    Trace t(n_chains, dimension);
    t.iterations_ = iterations;
    t.thetas_ = std::move(thetas);
    t.accepted_ = std::move(accepted);
    for (const auto& e : exchanges)
      if (!(e.i < e.j && e.j < n_chains)) throw InvalidArgument("trace exchange entry with i >= j");
    t.exchanges_ = std::move(exchanges);
    t.skipped_ = skipped;
    return t;
  }

 private:
  std::size_t n_chains_ = 0;
  std::size_t dimension_ = 0;
  std::uint64_t iterations_ = 0;
  std::vector<double> thetas_;
  std::vector<std::uint8_t> accepted_;
  std::vector<ExchangeEvent> exchanges_;
  std::uint64_t skipped_ = 0;

};

}  // namespace abcpt

#endif  // ABCPT_TRACE_HPP
