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

#include <algorithm>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "ducb/environment.hpp"
#include "ducb/mechanism.hpp"
#include "ducb/mechanism_multi.hpp"
#include "ducb/metrics.hpp"
#include "ducb/rng.hpp"
#include "test_util.hpp"

namespace ducb {
namespace {

using testing::make_profiles;

SlotModel model_of(std::vector<double> gammas) {
  SlotModel m;
  m.prominences = std::move(gammas);
  return m;
}

// Externality of the agent at `slot`: the others' weighted scores when it is
// removed and everyone below moves up, minus their weighted scores now.
double externality_oracle(std::size_t slot, std::vector<double> sorted_scores,
                          const std::vector<double>& gammas) {
  const std::size_t m = gammas.size();
  auto weighted = [&](const std::vector<double>& s, std::size_t skip) {
    double total = 0.0;
    std::size_t pos = 0;
    for (std::size_t r = 0; r < s.size() && pos < m; ++r) {
      if (r == skip) {
        ++pos;
        continue;
      }
      total += gammas[pos] * s[r];
      ++pos;
    }
    return total;
  };
  const double with = weighted(sorted_scores, slot - 1);
  sorted_scores.erase(sorted_scores.begin() + static_cast<std::ptrdiff_t>(slot - 1));
  const double without = weighted(sorted_scores, static_cast<std::size_t>(-1));
  return without - with;
}

TEST(GammasFromLambdas, Products) {
  EXPECT_EQ(gammas_from_lambdas(std::vector<double>{0.5}, 2).prominences,
            (std::vector<double>{1.0, 0.5}));
  EXPECT_EQ(gammas_from_lambdas(std::vector<double>{1.0, 1.0, 1.0}, 4).prominences,
            (std::vector<double>{1.0, 1.0, 1.0, 1.0}));
  const auto g = gammas_from_lambdas(std::vector<double>{0.8, 0.5}, 3).prominences;
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g[0], 1.0);
  EXPECT_DOUBLE_EQ(g[1], 0.8);
  EXPECT_DOUBLE_EQ(g[2], 0.4);
}

TEST(GammasFromLambdas, RejectsBadTransitions) {
  EXPECT_THROW(gammas_from_lambdas(std::vector<double>{1.2}, 2), ConfigError);
  EXPECT_THROW(gammas_from_lambdas(std::vector<double>{0.0}, 2), ConfigError);
  EXPECT_THROW(gammas_from_lambdas(std::vector<double>{}, 2), ConfigError);
}

TEST(MultiExplorationAllocation, ShiftedRotation) {
  auto row = [](std::int64_t t) {
    return std::vector<AgentId>{multi_exploration_allocation(t, 1, 3),
                                multi_exploration_allocation(t, 2, 3),
                                multi_exploration_allocation(t, 3, 3)};
  };
  EXPECT_EQ(row(1), (std::vector<AgentId>{1, 2, 3}));
  EXPECT_EQ(row(2), (std::vector<AgentId>{2, 3, 1}));
  EXPECT_EQ(row(4), (std::vector<AgentId>{1, 2, 3}));
  EXPECT_THROW(multi_exploration_allocation(1, 4, 3), std::out_of_range);
}

TEST(MultiExplorationAllocation, DistinctWithinRound) {
  for (std::size_t k = 1; k <= 8; ++k) {
    for (std::size_t m = 1; m <= k; ++m) {
      for (std::int64_t t = 1; t <= 20; ++t) {
        std::set<AgentId> seen;
        for (std::size_t s = 1; s <= m; ++s) seen.insert(multi_exploration_allocation(t, s, k));
        EXPECT_EQ(seen.size(), m);
      }
    }
  }
}

TEST(MultiExplorationStep, FullRotationPullsEveryone) {
  const ClickRealization r = testing::constant_realization(3, 3, 30, 1);
  LearnerState s = LearnerState::initial(3, 30, 9);
  const SlotModel model = model_of({1.0, 0.5, 0.25});
  for (std::int64_t t = 1; t <= 5; ++t) {
    multi_exploration_step(s, r, model, t);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(s.pull_count[i], t);
  }
}

TEST(MultiExplorationStep, UnobservedSlotRecordsNoClick) {
  ClickRealization r = testing::constant_realization(2, 2, 10, 1);
  r.observation_row(2)[0] = 0;
  LearnerState s = LearnerState::initial(2, 10, 4);
  const RoundRecord rec = multi_exploration_step(s, r, model_of({1.0, 0.5}), 1);
  EXPECT_EQ(rec.slots[1].agent, 2u);
  EXPECT_EQ(rec.slots[1].click, 0);
  EXPECT_EQ(s.empirical_ctr[1], 0.0);
  EXPECT_EQ(rec.slots[0].click, 1);
  EXPECT_EQ(rec.slots[0].payment, 0.0);
  EXPECT_EQ(rec.slots[1].payment, 0.0);
}

TEST(MultiExplorationStep, ClickWeightedByProminence) {
  const ClickRealization r = testing::constant_realization(2, 2, 10, 1);
  LearnerState s = LearnerState::initial(2, 10, 4);
  multi_exploration_step(s, r, model_of({1.0, 0.5}), 1);
  EXPECT_EQ(s.empirical_ctr[0], 1.0);
  EXPECT_EQ(s.empirical_ctr[1], 2.0);
}

TEST(MultiExplorationStep, PullCountsAfterBudget) {
  Rng rng(2);
  for (int n = 0; n < 50; ++n) {
    const std::size_t k = rng.integer(2, 7);
    const std::size_t m = rng.integer(1, k);
    const std::int64_t u = static_cast<std::int64_t>(k * rng.integer(1, 20));
    const ClickRealization r = testing::constant_realization(k, std::max<std::size_t>(m, 2), u, 1);
    LearnerState s = LearnerState::initial(k, u, u);
    const SlotModel model = model_of(std::vector<double>(m, 1.0));
    for (std::int64_t t = 1; t <= u; ++t) multi_exploration_step(s, r, model, t);
    for (std::size_t i = 0; i < k; ++i) {
      EXPECT_EQ(s.pull_count[i], u * static_cast<std::int64_t>(m) / static_cast<std::int64_t>(k));
    }
  }
}

TEST(MultiSlotPayment, SingleSlotCollapsesToRunnerUpScore) {
  const std::vector<AgentId> ranking = {2, 1, 3};
  const std::vector<double> scores = {0.5, 0.9, 0.1};
  EXPECT_DOUBLE_EQ(multi_slot_payment(1, ranking, model_of({1.0}), scores), 0.5);
}

TEST(MultiSlotPayment, LastSlotWithNoCompetitionIsFree) {
  const std::vector<AgentId> ranking = {1, 2};
  const std::vector<double> scores = {0.9, 0.5};
  EXPECT_EQ(multi_slot_payment(2, ranking, model_of({1.0, 0.5}), scores), 0.0);
}

TEST(MultiSlotPayment, TwoSlotExample) {
  const std::vector<AgentId> ranking = {1, 2, 3};
  const std::vector<double> scores = {0.9, 0.6, 0.4};
  const SlotModel model = model_of({1.0, 0.5});
  EXPECT_NEAR(multi_slot_payment(1, ranking, model, scores), 0.5, 1e-15);
  EXPECT_NEAR(multi_slot_payment(2, ranking, model, scores), 0.2, 1e-15);
}

TEST(MultiSlotPayment, MatchesExternalityOracle) {
  Rng rng(8);
  for (int n = 0; n < 2000; ++n) {
    const std::size_t k = rng.integer(1, 8);
    const std::size_t m = rng.integer(1, std::min<std::size_t>(k, 5));
    std::vector<double> g(m, 1.0);
    for (std::size_t s = 1; s < m; ++s) g[s] = g[s - 1] * rng.uniform(0.05, 1.0);
    std::vector<double> scores(k);
    for (auto& x : scores) x = rng.uniform(0.0, 1.5);
    std::vector<AgentId> ranking(k);
    std::iota(ranking.begin(), ranking.end(), 1);
    std::ranges::stable_sort(ranking, [&](AgentId a, AgentId b) {
      return scores[a - 1] > scores[b - 1];
    });
    std::vector<double> sorted;
    for (AgentId a : ranking) sorted.push_back(scores[a - 1]);
    for (std::size_t s = 1; s <= m; ++s) {
      EXPECT_NEAR(multi_slot_payment(s, ranking, model_of(g), scores),
                  externality_oracle(s, sorted, g), 1e-12);
    }
  }
}

TEST(RankAgents, TelescopingAndMonotone) {
  Rng rng(9);
  for (int n = 0; n < 2000; ++n) {
    const std::size_t k = rng.integer(2, 8);
    const std::size_t m = rng.integer(1, std::min<std::size_t>(k, 5));
    std::vector<double> g(m, 1.0);
    for (std::size_t s = 1; s < m; ++s) g[s] = g[s - 1] * rng.uniform(0.05, 1.0);
    LearnerState learner = LearnerState::initial(k, 100, k);
    std::vector<double> bids(k);
    for (std::size_t i = 0; i < k; ++i) {
      learner.pull_count[i] = 3;
      learner.ucb[i] = rng.uniform(0.0, 1.5);
      bids[i] = rng.uniform();
    }
    const SlotModel model = model_of(g);
    const MultiSlotOutcome o = rank_agents(learner, bids, model);
    ASSERT_EQ(o.payments_per_click.size(), m);
    auto score = [&](std::size_t rank) {
      return rank <= k ? learner.ucb[o.ranking[rank - 1] - 1] * bids[o.ranking[rank - 1] - 1]
                       : 0.0;
    };
    for (std::size_t s = 1; s < m; ++s) {
      EXPECT_NEAR(o.payments_per_click[s - 1] - o.payments_per_click[s],
                  (model.gamma(s) - model.gamma(s + 1)) * score(s + 1), 1e-12);
      EXPECT_GE(o.payments_per_click[s - 1], o.payments_per_click[s]);
    }
    for (std::size_t r = 1; r < k; ++r) EXPECT_GE(score(r), score(r + 1));
  }
}

TEST(MultiExploitationStep, PayPerClickPerSlot) {
  ClickRealization r = testing::constant_realization(3, 2, 10, 0);
  r.intrinsic_row(1)[4] = 1;
  r.intrinsic_row(2)[4] = 1;
  r.observation_row(1)[4] = 1;
  r.observation_row(2)[4] = 1;
  MultiSlotOutcome o;
  o.ranking = {1, 2, 3};
  o.payments_per_click = {0.5, 0.2};
  const RoundRecord quiet = multi_exploitation_step(o, r, 4);
  EXPECT_EQ(quiet.revenue(), 0.0);
  const RoundRecord both = multi_exploitation_step(o, r, 5);
  EXPECT_DOUBLE_EQ(both.slots[0].payment, 0.5);
  EXPECT_DOUBLE_EQ(both.slots[1].payment, 0.2);
  EXPECT_FALSE(both.allocated(3));
}

TEST(RunMultiSlot, FrozenRankingAfterExploration) {
  const auto c = testing::multi_config(4, {1.0, 0.6}, 20000, 0.3);
  const auto p = make_profiles({0.9, 0.6, 0.35, 0.1}, {1, 1, 1, 1});
  const ClickRealization r = draw_realization(c, p, 5);
  RunOptions opt;
  opt.keep_rounds = true;
  const RunResult res = run_multi_slot(c, p, bids_of(p), r, opt);
  const std::int64_t u = exploration_budget(c);
  ASSERT_LT(u, c.horizon);
  for (const auto& rec : res.rounds) {
    ASSERT_EQ(rec.slots.size(), 2u);
    EXPECT_NE(rec.slots[0].agent, rec.slots[1].agent);
    if (rec.round <= u) {
      EXPECT_EQ(rec.revenue(), 0.0);
    } else {
      EXPECT_EQ(rec.slots[0].agent, res.summary.winners[0]);
      EXPECT_EQ(rec.slots[1].agent, res.summary.winners[1]);
    }
  }
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(res.learner.pull_count[i], u * 2 / 4);
  }
}

TEST(RunMultiSlot, OneSlotAllocatesLikeSingleSlot) {
  Rng rng(10);
  for (int n = 0; n < 40; ++n) {
    const std::size_t k = rng.integer(2, 6);
    std::vector<double> ctr(k), val(k);
    for (std::size_t i = 0; i < k; ++i) {
      ctr[i] = rng.uniform(0.05, 0.95);
      val[i] = rng.uniform(0.1, 1.0);
    }
    const auto c = testing::single_config(k, 5000, 0.6, n);
    const auto p = make_profiles(ctr, val);
    const ClickRealization r = draw_realization(c, p, n);
    const RunResult a = run_single_slot(c, p, bids_of(p), r);
    const RunResult b = run_multi_slot(c, p, bids_of(p), r);
    EXPECT_EQ(a.summary.winners, b.summary.winners);
    EXPECT_EQ(a.learner.to_bytes(), b.learner.to_bytes());
    EXPECT_EQ(a.summary.total_delta_regret, b.summary.total_delta_regret);
    // Prices differ by design: one slot divides by the winner's index.
    if (!a.payments_per_click.empty()) {
      const AgentId w = a.summary.winners[0];
      EXPECT_NEAR(a.payments_per_click[0] * a.learner.ucb[w - 1], b.payments_per_click[0],
                  1e-12);
    }
  }
}

TEST(RunMultiSlot, WellSeparatedRankingRecovered) {
  const auto c = testing::multi_config(4, {1.0, 0.5}, 10000, 0.2);
  const auto p = make_profiles({0.9, 0.6, 0.35, 0.1}, {1, 1, 1, 1});
  ASSERT_LT(exploration_budget(c), c.horizon);
  const std::vector<AgentId> truth = {1, 2};
  int hits = 0;
  const int seeds = 1000;
  for (int seed = 0; seed < seeds; ++seed) {
    const ClickRealization r = draw_realization_serial(c, p, seed);
    hits += run_multi_slot(c, p, bids_of(p), r).summary.winners == truth;
  }
  EXPECT_GE(static_cast<double>(hits) / seeds, 0.999);
}

TEST(RunMultiSlot, IdenticalAgentsHaveZeroDeltaRegret) {
  const auto c = testing::multi_config(4, {1.0, 0.7, 0.4}, 30000, 0.05);
  const auto p = make_profiles({0.4, 0.4, 0.4, 0.4}, {0.8, 0.8, 0.8, 0.8});
  const ClickRealization r = draw_realization(c, p, 13);
  const RunResult res = run_multi_slot(c, p, bids_of(p), r);
  EXPECT_EQ(res.summary.total_delta_regret, 0.0);
}

TEST(RunMultiSlot, ExplorationIgnoresBids) {
  const auto c = testing::multi_config(5, {1.0, 0.5}, 20000, 0.3);
  const auto p = make_profiles({0.2, 0.5, 0.7, 0.6, 0.3}, {0.9, 0.8, 0.5, 1.0, 0.4});
  const ClickRealization r = draw_realization(c, p, 31);
  const RunResult a = run_multi_slot(c, p, std::vector<double>{0.9, 0.8, 0.5, 1.0, 0.4}, r);
  const RunResult b = run_multi_slot(c, p, std::vector<double>{0.0, 1.0, 0.3, 0.1, 0.7}, r);
  EXPECT_EQ(a.learner.to_bytes(), b.learner.to_bytes());
}

TEST(RunDeltaUcb, Dispatches) {
  const auto c1 = testing::single_config(3, 2000, 0.5);
  const auto c2 = testing::multi_config(3, {1.0, 0.5}, 2000, 0.5);
  const auto p = make_profiles({0.2, 0.5, 0.7}, {1, 1, 1});
  EXPECT_EQ(run_delta_ucb(c1, p, bids_of(p), draw_realization(c1, p, 1)).summary.winners.size(), 1u);
  EXPECT_EQ(run_delta_ucb(c2, p, bids_of(p), draw_realization(c2, p, 1)).summary.winners.size(), 2u);
}

}  // namespace
}  // namespace ducb
