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

#ifndef ABCPT_RINGS_HPP
#define ABCPT_RINGS_HPP

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "abcpt/error.hpp"
#include "abcpt/schedule.hpp"

namespace abcpt {

/// Partition of the distance range [0, eps_N] into K rings
/// [b0, b1], (b1, b2], ..., (b_{K-1}, b_K] with b0 = 0 and b_K = eps_N.
class RingPartition {
 public:
  RingPartition() = default;
  RingPartition(std::vector<double> boundaries, std::vector<std::size_t> group_sizes)
      : bounds_(std::move(boundaries)), sizes_(std::move(group_sizes)) {}

  std::size_t ring_count() const noexcept { return sizes_.size(); }
  std::span<const double> boundaries() const noexcept { return bounds_; }
  /// Number of tolerance levels assigned to each ring.
  std::span<const std::size_t> group_sizes() const noexcept { return sizes_; }

  /// Zero-based ring containing `distance`.
  std::size_t ring_of(double distance) const {
    if (!(distance >= 0.0) || distance > bounds_.back())
      throw ContractViolation("ring_of: distance " + std::to_string(distance) +
                              " outside [0, eps_N]");
    const auto interior_begin = bounds_.begin() + 1;
    const auto interior_end = bounds_.end() - 1;
    return static_cast<std::size_t>(std::lower_bound(interior_begin, interior_end, distance) -
                                    interior_begin);
  }

 private:
  std::vector<double> bounds_;
  std::vector<std::size_t> sizes_;
};

/// Groups the tolerance levels into K consecutive groups (the lowest groups
/// take the remainder when K does not divide N) and places each interior
/// boundary at the midpoint between the neighbouring group edges.
inline RingPartition ring_partition(const ToleranceSchedule& tolerances, std::size_t rings) {
  const std::size_t n = tolerances.size();
  if (rings < 1) throw InvalidArgument("ring count must be >= 1");
  if (rings > n)
    throw InvalidArgument("ring count " + std::to_string(rings) + " exceeds the " +
                          std::to_string(n) + " tolerance levels");
  std::vector<std::size_t> sizes(rings, n / rings);
  for (std::size_t k = 0; k < n % rings; ++k) ++sizes[k];

  std::vector<double> bounds;
  bounds.reserve(rings + 1);
  bounds.push_back(0.0);
  std::size_t next = 0;
  for (std::size_t k = 0; k + 1 < rings; ++k) {
    next += sizes[k];
    bounds.push_back(0.5 * (tolerances[next - 1] + tolerances[next]));
  }
  bounds.push_back(tolerances.back());
  return RingPartition(std::move(bounds), std::move(sizes));
}

}  // namespace abcpt

#endif  // ABCPT_RINGS_HPP
