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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "ducb/core.hpp"
#include "test_util.hpp"

namespace ducb {
namespace {

AuctionConfig base() {
  AuctionConfig c;
  c.num_agents = 5;
  c.num_slots = 1;
  c.horizon = 1000;
  c.delta = 0.1;
  c.v_max = 1.0;
  return c;
}

std::string error_of(const AuctionConfig& c) {
  try {
    validate_config(c);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(ValidateConfig, AcceptsPlainSingleSlot) {
  const AuctionConfig c = validate_config(base());
  ASSERT_EQ(c.prominences.size(), 1u);
  EXPECT_EQ(c.prominences[0], 1.0);
}

TEST(ValidateConfig, RejectsMoreSlotsThanAgents) {
  AuctionConfig c = base();
  c.num_agents = 2;
  c.num_slots = 3;
  c.lambdas = {0.8, 0.5};
  EXPECT_EQ(error_of(c), "num_slots exceeds num_agents");
}

TEST(ValidateConfig, RejectsNonPositiveDelta) {
  AuctionConfig c = base();
  c.delta = 0.0;
  EXPECT_EQ(error_of(c), "delta must be positive");
  c.delta = -1.0;
  EXPECT_EQ(error_of(c), "delta must be positive");
}

TEST(ValidateConfig, RejectsOtherBadFields) {
  AuctionConfig c = base();
  c.num_agents = 0;
  EXPECT_EQ(error_of(c), "num_agents must be positive");
  c = base();
  c.horizon = 0;
  EXPECT_EQ(error_of(c), "horizon must be at least 1");
  c = base();
  c.v_max = 0.0;
  EXPECT_EQ(error_of(c), "v_max must be positive");
}

TEST(ValidateConfig, MultiSlotNeedsProminences) {
  AuctionConfig c = base();
  c.num_slots = 2;
  EXPECT_FALSE(error_of(c).empty());
  c.prominences = {1.0, 0.5};
  EXPECT_EQ(error_of(c), "");
  c.prominences = {0.9, 0.5};
  EXPECT_FALSE(error_of(c).empty());
  c.prominences = {1.0, 1.2};
  EXPECT_FALSE(error_of(c).empty());
  c.prominences = {1.0, 0.0};
  EXPECT_FALSE(error_of(c).empty());
}

TEST(ValidateConfig, DerivesProminencesFromLambdas) {
  AuctionConfig c = base();
  c.num_slots = 3;
  c.lambdas = {0.8, 0.5};
  const AuctionConfig v = validate_config(c);
  ASSERT_EQ(v.prominences.size(), 3u);
  EXPECT_DOUBLE_EQ(v.prominences[1], 0.8);
  EXPECT_DOUBLE_EQ(v.prominences[2], 0.4);
}

TEST(ValidateConfig, ErrorNamesField) {
  AuctionConfig c = base();
  c.delta = 0;
  try {
    validate_config(c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "delta");
  }
}

TEST(ValidateProfiles, ChecksRanges) {
  const AuctionConfig c = validate_config(base());
  auto p = testing::make_profiles({0.1, 0.2, 0.3, 0.4, 0.5}, {1, 1, 1, 1, 1});
  EXPECT_NO_THROW(validate_profiles(c, p));
  p[2].ctr = 1.5;
  EXPECT_THROW(validate_profiles(c, p), ConfigError);
  p[2].ctr = 0.3;
  p[0].valuation = 2.0;
  EXPECT_THROW(validate_profiles(c, p), ConfigError);
  p.pop_back();
  EXPECT_THROW(validate_profiles(c, p), ConfigError);
}

TEST(ValidateBids, BidsAboveVmaxRejected) {
  const AuctionConfig c = validate_config(base());
  EXPECT_NO_THROW(validate_bids(c, std::vector<double>{0, 0.5, 1, 1, 0.2}));
  EXPECT_THROW(validate_bids(c, std::vector<double>{0, 0.5, 1.01, 1, 0.2}), ConfigError);
  EXPECT_THROW(validate_bids(c, std::vector<double>{0, -0.1, 1, 1, 0.2}), ConfigError);
  EXPECT_THROW(validate_bids(c, std::vector<double>{0, 1}), ConfigError);
}

TEST(ExplorationBudget, SingleAgentUnitThreshold) {
  const double delta = std::sqrt(8.0);
  EXPECT_NEAR(raw_exploration_budget(1, 1.0, delta, 1.0), 1.0, 1e-12);
  EXPECT_EQ(exploration_budget(1, 1.0, delta, 1.0), 1);
}

TEST(ExplorationBudget, FlooredAtNumAgents) {
  EXPECT_DOUBLE_EQ(raw_exploration_budget(2, 1.0, 4.0, 1.0), 1.0);
  EXPECT_EQ(exploration_budget(2, 1.0, 4.0, 1.0), 2);
}

TEST(ExplorationBudget, IntegralThresholdGetsOneMorePull) {
  // Threshold 8 per agent; each agent needs strictly more than 8 pulls.
  EXPECT_DOUBLE_EQ(raw_exploration_budget(2, 1.0, 1.0, 1.0), 16.0);
  EXPECT_EQ(exploration_budget(2, 1.0, 1.0, 1.0), 18);
}

TEST(ExplorationBudget, NaturalLogOfE) {
  EXPECT_EQ(std::log(std::numbers::e), 1.0);
}

TEST(ExplorationBudget, EveryAgentStrictlyAboveThreshold) {
  for (std::size_t k = 1; k <= 7; ++k) {
    for (double delta : {0.05, 0.1, 0.2, 0.3, 0.7, 1.0}) {
      for (double t : {10.0, 1e3, 1e5}) {
        const double logt = std::log(t);
        const double thr = exploration_threshold(1.0, delta, logt);
        const std::int64_t u = exploration_budget(k, 1.0, delta, logt);
        EXPECT_EQ(u % static_cast<std::int64_t>(k), 0);
        EXPECT_GT(static_cast<double>(u / static_cast<std::int64_t>(k)), thr);
        EXPECT_LE(static_cast<double>(u / static_cast<std::int64_t>(k)), thr + 1.0);
      }
    }
  }
}

TEST(ExplorationBudget, Monotone) {
  const std::vector<double> deltas = {0.05, 0.1, 0.2, 0.4, 0.8};
  const std::vector<double> vmaxes = {0.5, 1.0, 2.0};
  const std::vector<double> horizons = {10.0, 1e3, 1e5, 1e7};
  for (std::size_t k = 1; k <= 6; ++k) {
    for (std::size_t a = 0; a < deltas.size(); ++a) {
      for (std::size_t b = 0; b < vmaxes.size(); ++b) {
        for (std::size_t c = 0; c < horizons.size(); ++c) {
          const auto u = exploration_budget(k, vmaxes[b], deltas[a], std::log(horizons[c]));
          if (a + 1 < deltas.size()) {
            EXPECT_GE(u, exploration_budget(k, vmaxes[b], deltas[a + 1], std::log(horizons[c])));
          }
          if (b + 1 < vmaxes.size()) {
            EXPECT_LE(u, exploration_budget(k, vmaxes[b + 1], deltas[a], std::log(horizons[c])));
          }
          if (c + 1 < horizons.size()) {
            EXPECT_LE(u, exploration_budget(k, vmaxes[b], deltas[a], std::log(horizons[c + 1])));
          }
          EXPECT_LE(u, exploration_budget(k + 1, vmaxes[b], deltas[a], std::log(horizons[c])));
        }
      }
    }
  }
}

TEST(ExplorationBudget, SaturatesInsteadOfOverflowing) {
  const auto u = exploration_budget(10, 1.0, 1e-12, std::log(1e9));
  EXPECT_GT(u, 0);
}

TEST(ExplorationBudget, ConfigOverloadUsesLogHorizon) {
  const AuctionConfig c = testing::single_config(5, 100000, 0.2);
  EXPECT_EQ(exploration_budget(c), exploration_budget(5, 1.0, 0.2, std::log(1e5)));
  EXPECT_EQ(exploration_budget(c), 5 * 2303);
}

TEST(LearnerState, InitialIndicesUndefined) {
  const LearnerState s = LearnerState::initial(3, 100, 9);
  EXPECT_EQ(s.num_agents(), 3u);
  EXPECT_FALSE(s.all_pulled());
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_TRUE(std::isnan(s.ucb[i]));
    EXPECT_TRUE(std::isnan(s.lcb[i]));
    EXPECT_EQ(s.pull_count[i], 0);
  }
  EXPECT_EQ(s.phase, Phase::kExploration);
  EXPECT_FALSE(s.frozen_order.has_value());
}

TEST(LearnerState, BytesDistinguishStates) {
  LearnerState a = LearnerState::initial(3, 100, 9);
  LearnerState b = a;
  EXPECT_EQ(a.to_bytes(), b.to_bytes());
  b.empirical_ctr[1] = 0.5;
  EXPECT_NE(a.to_bytes(), b.to_bytes());
  b = a;
  b.frozen_order = std::vector<AgentId>{2};
  EXPECT_NE(a.to_bytes(), b.to_bytes());
}

TEST(RoundRecord, Accessors) {
  RoundRecord r;
  r.slots = {{1, 3, 1, 0.25}, {2, 1, 0, 0.0}};
  EXPECT_TRUE(r.allocated(3));
  EXPECT_FALSE(r.allocated(2));
  EXPECT_EQ(r.click_of(3), 1);
  EXPECT_EQ(r.click_of(2), 0);
  EXPECT_DOUBLE_EQ(r.payment_of(3), 0.25);
  EXPECT_DOUBLE_EQ(r.revenue(), 0.25);
}

TEST(Phase, Names) {
  EXPECT_STREQ(phase_name(Phase::kExploration), "exploration");
  EXPECT_STREQ(phase_name(Phase::kExploitation), "exploitation");
}

}  // namespace
}  // namespace ducb
