// Copyright 2026 The ducb Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <stdexcept>

#include <gtest/gtest.h>

#include "ducb/batch.hpp"
#include "test_util.hpp"

namespace ducb {
namespace {

TEST(ParallelMap, ResultsInInputOrder) {
  const auto out = parallel_map(1000, 4, [](std::size_t i) { return i * i; });
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], i * i);
  EXPECT_EQ(out, serial_map(1000, [](std::size_t i) { return i * i; }));
}

TEST(ParallelMap, RethrowsLowestIndexError) {
  try {
    parallel_map(100, 3, [](std::size_t i) -> int {
      if (i == 17 || i == 60) throw std::runtime_error(std::to_string(i));
      return 0;
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "17");
  }
}

TEST(ParallelMap, Empty) {
  EXPECT_TRUE(parallel_map(0, 2, [](std::size_t i) { return i; }).empty());
}

TEST(RunSeeds, ParallelMatchesSerial) {
  const auto c = testing::single_config(4, 20000, 0.3);
  const auto p = testing::make_profiles({0.2, 0.5, 0.7, 0.6}, {0.9, 0.8, 0.5, 1.0});
  const auto bids = bids_of(p);
  const auto seeds = seed_range(10, 12);
  const auto a = run_seeds(MechanismKind::kDeltaUcbSingle, c, p, bids, seeds, 4);
  const auto b = run_seeds_serial(MechanismKind::kDeltaUcbSingle, c, p, bids, seeds);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].total_delta_regret, b[i].total_delta_regret);
    EXPECT_EQ(a[i].total_revenue, b[i].total_revenue);
    EXPECT_EQ(a[i].per_agent_utility, b[i].per_agent_utility);
    EXPECT_EQ(a[i].winners, b[i].winners);
  }
}

TEST(RunSeeds, SeedSelectsRealization) {
  const auto c = testing::single_config(3, 5000, 0.4);
  const auto p = testing::make_profiles({0.2, 0.5, 0.7}, {1, 1, 1});
  const auto direct = run_single_slot(c, p, bids_of(p), draw_realization(c, p, 77));
  const auto batched = run_seed(MechanismKind::kDeltaUcbSingle, c, p, bids_of(p), 77);
  EXPECT_EQ(direct.summary.total_revenue, batched.total_revenue);
  EXPECT_EQ(direct.summary.total_delta_regret, batched.total_delta_regret);
}

TEST(SeedRange, Consecutive) {
  EXPECT_EQ(seed_range(5, 3), (std::vector<std::uint64_t>{5, 6, 7}));
}

TEST(DefaultMechanism, BySlots) {
  EXPECT_EQ(default_mechanism(testing::single_config(2, 10, 0.1)), MechanismKind::kDeltaUcbSingle);
  EXPECT_EQ(default_mechanism(testing::multi_config(2, {1.0, 0.5}, 10, 0.1)),
            MechanismKind::kDeltaUcbMulti);
}

}  // namespace
}  // namespace ducb
