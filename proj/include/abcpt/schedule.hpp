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

#ifndef ABCPT_SCHEDULE_HPP
#define ABCPT_SCHEDULE_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "abcpt/error.hpp"

namespace abcpt {

/// Geometric progression of `count` values from `lo` to `hi` inclusive.
inline std::vector<double> log_spaced_schedule(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > 0.0) || !std::isfinite(lo) || !std::isfinite(hi))
    throw InvalidArgument("log_spaced_schedule: bounds must be positive and finite");
  if (hi < lo) throw InvalidArgument("log_spaced_schedule: hi < lo");
  if (count == 0) throw InvalidArgument("log_spaced_schedule: count must be >= 1");
  if (count == 1) {
    if (lo != hi) throw InvalidArgument("log_spaced_schedule: a single level needs lo == hi");
    return {lo};
  }
  const double log_lo = std::log(lo);
  const double step = (std::log(hi) - log_lo) / static_cast<double>(count - 1);
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = std::exp(log_lo + step * static_cast<double>(k));
  out.front() = lo;
  out.back() = hi;
  return out;
}

/// Strictly increasing positive tolerance levels, eps[0] belongs to the chain
/// of interest.
class ToleranceSchedule {
 public:
  ToleranceSchedule() = default;
  explicit ToleranceSchedule(std::vector<double> epsilons) : eps_(std::move(epsilons)) {
    if (eps_.empty()) throw InvalidArgument("tolerance schedule is empty");
    for (std::size_t k = 0; k < eps_.size(); ++k) {
      if (!(eps_[k] > 0.0) || !std::isfinite(eps_[k]))
        throw InvalidArgument("tolerance levels must be positive and finite");
      if (k > 0 && !(eps_[k - 1] < eps_[k]))
        throw InvalidArgument("tolerance levels must be strictly increasing (level " +
                              std::to_string(k + 1) + ")");
    }
  }

  static ToleranceSchedule log_spaced(double lo, double hi, std::size_t count) {
    return ToleranceSchedule(log_spaced_schedule(lo, hi, count));
  }

  std::size_t size() const noexcept { return eps_.size(); }
  double operator[](std::size_t k) const { return eps_[k]; }
  double front() const { return eps_.front(); }
  double back() const { return eps_.back(); }
  std::span<const double> values() const noexcept { return eps_; }

  bool operator==(const ToleranceSchedule&) const = default;

 private:
  std::vector<double> eps_;
};

/// Nondecreasing temperatures with temps[0] == 1.
class TemperatureSchedule {
 public:
  TemperatureSchedule() = default;
  explicit TemperatureSchedule(std::vector<double> temps) : temps_(std::move(temps)) {
    if (temps_.empty()) throw InvalidArgument("temperature schedule is empty");
    if (temps_.front() != 1.0) throw InvalidArgument("first temperature must be exactly 1");
    for (std::size_t k = 1; k < temps_.size(); ++k) {
      if (!std::isfinite(temps_[k]) || temps_[k] < temps_[k - 1])
        throw InvalidArgument("temperatures must be finite and nondecreasing (level " +
                              std::to_string(k + 1) + ")");
    }
  }

  static TemperatureSchedule log_spaced(double hi, std::size_t count) {
    return TemperatureSchedule(log_spaced_schedule(1.0, hi, count));
  }

  std::size_t size() const noexcept { return temps_.size(); }
  double operator[](std::size_t k) const { return temps_[k]; }
  std::span<const double> values() const noexcept { return temps_; }

  bool operator==(const TemperatureSchedule&) const = default;

 private:
  std::vector<double> temps_;
};

}  // namespace abcpt

#endif  // ABCPT_SCHEDULE_HPP
