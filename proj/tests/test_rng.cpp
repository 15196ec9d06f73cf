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

#include "abcpt/parallel_tempering.hpp"
#include "abcpt/rng.hpp"
#include "abcpt/toy_model.hpp"
#include "test_support.hpp"

namespace abcpt {
namespace {

TEST(RngStreams, SameSeedAndIndexGiveSameSequence) {
  Rng a = make_stream(42, 3);
  Rng b = make_stream(42, 3);
  for (int k = 0; k < 1000; ++k) ASSERT_EQ(a(), b());
}

TEST(RngStreams, FamilyHasOneStreamPerChainPlusSelection) {
  const auto streams = rng_streams(5, 15);
  ASSERT_EQ(streams.size(), 16u);
  Rng again = make_stream(5, 15);
  Rng copy = streams[15];
  EXPECT_EQ(copy(), again());
}

TEST(RngStreams, DistinctIndicesAreUncorrelated) {
  Rng a = make_stream(42, 0);
  Rng b = make_stream(42, 1);
  Rng c = make_stream(43, 0);
  const int n = 100000;
  auto corr = [&](Rng& x, Rng& y) {
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (int k = 0; k < n; ++k) {
      const double u = uniform01(x), v = uniform01(y);
      sx += u;
      sy += v;
      sxx += u * u;
      syy += v * v;
      sxy += u * v;
    }
    const double cov = sxy / n - (sx / n) * (sy / n);
    return cov / std::sqrt((sxx / n - sx * sx / n / n) * (syy / n - sy * sy / n / n));
  };
  EXPECT_LT(std::abs(corr(a, b)), 0.01);
  EXPECT_LT(std::abs(corr(a, c)), 0.01);
}

TEST(RngStreams, TracesIndependentOfWorkerCount) {
  ToyModel toy;
  auto config = testing::toy_paper_config(3000, 500, 99);
  config.ring_count = 3;
  ExecutionOptions one{1, false};
  ExecutionOptions eight{8, false};
  const auto a = run_abc_pt(config, toy, one);
  const auto b = run_abc_pt(config, toy, eight);
  EXPECT_TRUE(a.trace == b.trace);
  for (std::size_t k = 0; k < a.final_states.size(); ++k)
    EXPECT_EQ(a.final_states[k].distance, b.final_states[k].distance);
}

}  // namespace
}  // namespace abcpt
