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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "abcpt/rings.hpp"
#include "abcpt/rng.hpp"
#include "abcpt/schedule.hpp"

namespace abcpt {
namespace {

const std::vector<double> kToyLadder = {0.025,  0.0342, 0.0468, 0.0639, 0.0874, 0.1196, 0.1635, 0.2236,
                                         0.3058, 0.4182, 0.5719, 0.7820, 1.0694, 1.4625, 2.0};

TEST(LogSpacedSchedule, ReproducesToyToleranceSequence) {
  const auto eps = log_spaced_schedule(0.025, 2.0, 15);
  ASSERT_EQ(eps.size(), kToyLadder.size());
  for (std::size_t k = 0; k < eps.size(); ++k) EXPECT_NEAR(eps[k], kToyLadder[k], 5e-5) << "level " << k;
}

TEST(LogSpacedSchedule, DegenerateAndMidpoint) {
  EXPECT_EQ(log_spaced_schedule(1.0, 1.0, 5), std::vector<double>(5, 1.0));
  const auto v = log_spaced_schedule(1.0, 4.0, 3);
  EXPECT_DOUBLE_EQ(v[0], 1.0);
  EXPECT_NEAR(v[1], 2.0, 1e-15);
  EXPECT_DOUBLE_EQ(v[2], 4.0);
  EXPECT_EQ(log_spaced_schedule(3.0, 3.0, 1), std::vector<double>{3.0});
}

TEST(LogSpacedSchedule, RejectsBadBounds) {
  EXPECT_THROW(log_spaced_schedule(0.0, 1.0, 3), InvalidArgument);
  EXPECT_THROW(log_spaced_schedule(-1.0, 1.0, 3), InvalidArgument);
  EXPECT_THROW(log_spaced_schedule(2.0, 1.0, 3), InvalidArgument);
  EXPECT_THROW(log_spaced_schedule(1.0, 2.0, 1), InvalidArgument);
  EXPECT_THROW(log_spaced_schedule(1.0, 2.0, 0), InvalidArgument);
}

TEST(LogSpacedSchedule, ConstantRatioProperty) {
  Rng rng = make_stream(7, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const double lo = std::exp(-8.0 + 10.0 * uniform01(rng));
    const double hi = lo * std::exp(6.0 * uniform01(rng));
    const std::size_t n = 2 + uniform_index(rng, 40);
    const auto v = log_spaced_schedule(lo, hi, n);
    const double ratio = std::pow(hi / lo, 1.0 / static_cast<double>(n - 1));
    for (std::size_t k = 1; k < n; ++k) EXPECT_LT(std::abs(v[k] / v[k - 1] / ratio - 1.0), 1e-12);
  }
}

TEST(ToleranceSchedule, EnforcesStrictMonotonicity) {
  EXPECT_NO_THROW(ToleranceSchedule({0.1, 0.2, 0.3}));
  EXPECT_THROW(ToleranceSchedule({0.1, 0.1, 0.3}), InvalidArgument);
  EXPECT_THROW(ToleranceSchedule({0.2, 0.1}), InvalidArgument);
  EXPECT_THROW(ToleranceSchedule({0.0, 0.1}), InvalidArgument);
  EXPECT_THROW(ToleranceSchedule(std::vector<double>{}), InvalidArgument);
  // Explicit non-log-spaced schedules are accepted.
  EXPECT_NO_THROW(ToleranceSchedule({0.01, 0.03, 0.045, 0.06, 0.075, 0.09, 0.1}));
}

TEST(TemperatureSchedule, FirstIsOneAndNondecreasing) {
  EXPECT_NO_THROW(TemperatureSchedule({1.0, 1.0, 2.0}));
  EXPECT_THROW(TemperatureSchedule({1.5, 2.0}), InvalidArgument);
  EXPECT_THROW(TemperatureSchedule({1.0, 3.0, 2.0}), InvalidArgument);
  const auto t = TemperatureSchedule::log_spaced(4.0, 15);
  EXPECT_EQ(t[0], 1.0);
  EXPECT_EQ(t[14], 4.0);
}

TEST(RingPartition, ToyScheduleThreeRings) {
  const auto rings = ring_partition(ToleranceSchedule::log_spaced(0.025, 2.0, 15), 3);
  const auto b = rings.boundaries();
  ASSERT_EQ(b.size(), 4u);
  EXPECT_EQ(b[0], 0.0);
  // Midpoints of the unrounded schedule: (eps5 + eps6) / 2 and (eps10 + eps11) / 2.
  const auto eps = log_spaced_schedule(0.025, 2.0, 15);
  EXPECT_DOUBLE_EQ(b[1], 0.5 * (eps[4] + eps[5]));
  EXPECT_DOUBLE_EQ(b[2], 0.5 * (eps[9] + eps[10]));
  EXPECT_NEAR(b[1], 0.1035, 5e-5);
  EXPECT_NEAR(b[2], 0.4950, 5e-5);
  EXPECT_NEAR(b[1], 0.103, 0.001);
  EXPECT_NEAR(b[2], 0.495, 0.001);
  EXPECT_EQ(b[3], 2.0);
}

TEST(RingPartition, SingleRingAndHandMidpoints) {
  const auto one = ring_partition(ToleranceSchedule({0.5, 1.0, 3.0}), 1);
  EXPECT_EQ(std::vector<double>(one.boundaries().begin(), one.boundaries().end()), (std::vector<double>{0.0, 3.0}));
  const auto three = ring_partition(ToleranceSchedule({1.0, 2.0, 4.0}), 3);
  EXPECT_EQ(std::vector<double>(three.boundaries().begin(), three.boundaries().end()),
            (std::vector<double>{0.0, 1.5, 3.0, 4.0}));
}

TEST(RingPartition, RemainderGoesToLowestGroups) {
  const auto rings = ring_partition(ToleranceSchedule::log_spaced(1.0, 10.0, 7), 3);
  EXPECT_EQ(std::vector<std::size_t>(rings.group_sizes().begin(), rings.group_sizes().end()),
            (std::vector<std::size_t>{3, 2, 2}));
  EXPECT_THROW(ring_partition(ToleranceSchedule({1.0, 2.0}), 3), InvalidArgument);
  EXPECT_THROW(ring_partition(ToleranceSchedule({1.0, 2.0}), 0), InvalidArgument);
}

TEST(RingPartition, BoundaryRuleIsHalfOpenAbove) {
  const auto rings = ring_partition(ToleranceSchedule({1.0, 2.0, 4.0}), 3);
  EXPECT_EQ(rings.ring_of(0.0), 0u);
  EXPECT_EQ(rings.ring_of(1.5), 0u);
  EXPECT_EQ(rings.ring_of(std::nextafter(1.5, 2.0)), 1u);
  EXPECT_EQ(rings.ring_of(3.0), 1u);
  EXPECT_EQ(rings.ring_of(3.5), 2u);
  EXPECT_EQ(rings.ring_of(4.0), 2u);
  EXPECT_THROW(rings.ring_of(4.0001), ContractViolation);
  EXPECT_THROW(rings.ring_of(-1e-9), ContractViolation);
}

TEST(RingPartition, PropertyEveryLevelInExactlyOneContiguousRing) {
  Rng rng = make_stream(11, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 30);
    std::vector<double> eps;
    double e = 0.001 + uniform01(rng);
    for (std::size_t k = 0; k < n; ++k) {
      eps.push_back(e);
      e += 1e-6 + uniform01(rng);
    }
    const std::size_t k_rings = 1 + uniform_index(rng, n);
    const auto rings = ring_partition(ToleranceSchedule(eps), k_rings);
    const auto b = rings.boundaries();
    ASSERT_EQ(b.size(), k_rings + 1);
    for (std::size_t r = 0; r + 1 < b.size(); ++r) EXPECT_LT(b[r], b[r + 1]);
    const auto sizes = rings.group_sizes();
    std::size_t lo = n, hi = 0, total = 0;
    for (auto s : sizes) {
      lo = std::min(lo, s);
      hi = std::max(hi, s);
      total += s;
    }
    EXPECT_EQ(total, n);
    EXPECT_LE(hi - lo, 1u);
    // Levels fall in their own group's ring, in order.
    std::size_t level = 0;
    for (std::size_t r = 0; r < sizes.size(); ++r)
      for (std::size_t s = 0; s < sizes[r]; ++s, ++level) EXPECT_EQ(rings.ring_of(eps[level]), r);
  }
}

}  // namespace
}  // namespace abcpt
