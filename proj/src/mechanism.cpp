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

#include "ducb/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace ducb {

double confidence_radius(std::int64_t pull_count, double log_horizon) {
  if (pull_count <= 0) {
    throw std::domain_error("index undefined before first pull");
  }
  return std::sqrt(2.0 * log_horizon / static_cast<double>(pull_count));
}

ConfidencePair ucb_pair_log(double empirical_ctr, std::int64_t pull_count,
                            double log_horizon) {
  const double eps = confidence_radius(pull_count, log_horizon);
  return {empirical_ctr + eps, empirical_ctr - eps};
}

ConfidencePair ucb_pair(double empirical_ctr, std::int64_t pull_count,
                        std::int64_t horizon) {
  return ucb_pair_log(empirical_ctr, pull_count,
                      std::log(static_cast<double>(horizon)));
}

void record_sample(LearnerState& learner, AgentId agent, double sample) {
  const std::size_t i = agent - 1;
  const std::int64_t previous = learner.pull_count[i];
  const std::int64_t now = previous + 1;
  learner.pull_count[i] = now;
  learner.empirical_ctr[i] =
      (learner.empirical_ctr[i] * static_cast<double>(previous) + sample) /
      static_cast<double>(now);
  const double eps =
      learner.width_scale *
      confidence_radius(now, std::log(static_cast<double>(learner.horizon)));
  learner.ucb[i] = learner.empirical_ctr[i] + eps;
  learner.lcb[i] = learner.empirical_ctr[i] - eps;
}

RoundRecord exploration_step(LearnerState& learner,
                             const ClickRealization& realization,
                             std::int64_t t) {
  if (learner.phase != Phase::kExploration || t > learner.exploration_rounds) {
    throw std::logic_error(
        fmt::format("exploration_step: round {} is past the exploration budget {}",
                    t, learner.exploration_rounds));
  }
  if (t != learner.round + 1) {
    throw std::logic_error(fmt::format(
        "exploration_step: expected round {}, got {}", learner.round + 1, t));
  }
  const auto k = static_cast<std::int64_t>(learner.num_agents());
  const AgentId agent = static_cast<AgentId>((t - 1) % k) + 1;
  const int click = realized_click(realization, agent, 1, t);
  record_sample(learner, agent, click);
  learner.round = t;

  RoundRecord record;
  record.round = t;
  record.phase = Phase::kExploration;
  record.slots.push_back({1, agent, click, 0.0});
  return record;
}

namespace {

std::vector<AgentId> rank_by_score(std::span<const double> scores) {
  std::vector<AgentId> order(scores.size());
  std::iota(order.begin(), order.end(), AgentId{1});
  std::stable_sort(order.begin(), order.end(), [&](AgentId a, AgentId b) {
    return scores[a - 1] > scores[b - 1];
  });
  return order;
}

}  // namespace

SingleSlotOutcome declare_winner(const LearnerState& learner,
                                 std::span<const double> bids) {
  if (!learner.all_pulled()) {
    throw std::logic_error("declare_winner: some agent was never pulled");
  }
  if (bids.size() != learner.num_agents()) {
    throw std::invalid_argument("declare_winner: one bid per agent required");
  }
  std::vector<double> scores(bids.size());
  for (std::size_t i = 0; i < bids.size(); ++i) scores[i] = learner.ucb[i] * bids[i];
  std::vector<AgentId> order = rank_by_score(scores);

  SingleSlotOutcome outcome;
  outcome.winner = order[0];
  if (order.size() > 1) {
    outcome.runner_up = order[1];
    const double winner_ucb = learner.ucb[outcome.winner - 1];
    // ucb >= eps > 0 after a pull whenever T > 1.
    if (!(winner_ucb > 0.0)) {
      throw std::logic_error("declare_winner: winner has a non-positive index");
    }
    outcome.payment_per_click = scores[*outcome.runner_up - 1] / winner_ucb;
  }
  outcome.learner = learner;
  outcome.learner.phase = Phase::kExploitation;
  outcome.learner.frozen_order = std::move(order);
  return outcome;
}

RoundRecord exploitation_step(const SingleSlotOutcome& outcome,
                              const ClickRealization& realization,
                              std::int64_t t) {
  const int click = realized_click(realization, outcome.winner, 1, t);
  RoundRecord record;
  record.round = t;
  record.phase = Phase::kExploitation;
  record.slots.push_back(
      {1, outcome.winner, click, click ? outcome.payment_per_click : 0.0});
  return record;
}

std::vector<double> bids_of(std::span<const AgentProfile> profiles) {
  std::vector<double> out;
  out.reserve(profiles.size());
  for (const auto& p : profiles) out.push_back(p.bid);
  return out;
}

std::vector<double> valuations_of(std::span<const AgentProfile> profiles) {
  std::vector<double> out;
  out.reserve(profiles.size());
  for (const auto& p : profiles) out.push_back(p.valuation);
  return out;
}

RunResult run_single_slot(const AuctionConfig& config,
                          std::span<const AgentProfile> profiles,
                          std::span<const double> bids,
                          const ClickRealization& realization,
                          const RunOptions& options) {
  if (config.num_slots != 1) {
    throw ConfigError("num_slots", "run_single_slot requires num_slots = 1");
  }
  validate_profiles(config, profiles);
  validate_bids(config, bids);
  if (realization.num_agents() != config.num_agents ||
      realization.horizon() != config.horizon) {
    throw std::invalid_argument("realization does not match the config");
  }

  const std::int64_t horizon = config.horizon;
  const std::int64_t budget =
      options.exploration_rounds.value_or(exploration_budget(config));
  const std::int64_t explore_until = std::min(budget, horizon);

  RegretAccountant accountant(config, profiles);
  SummaryBuilder builder(profiles);
  CoverageTracker coverage(profiles);
  RunResult result;

  auto emit = [&](RoundRecord&& record) {
    accountant.annotate(record);
    builder.add(record);
    builder.add_interval_violations(coverage.violated());
    if (options.on_round) options.on_round(record);
    if (options.keep_rounds) result.rounds.push_back(std::move(record));
  };

  LearnerState learner = LearnerState::initial(config.num_agents, horizon, budget);
  for (std::int64_t t = 1; t <= explore_until; ++t) {
    RoundRecord record = exploration_step(learner, realization, t);
    coverage.update(learner, record.slots.front().agent);
    emit(std::move(record));
  }
  result.learner = learner;

  std::vector<AgentId> winners;
  if (budget < horizon) {
    const SingleSlotOutcome outcome = declare_winner(learner, bids);
    winners.push_back(outcome.winner);
    result.payments_per_click.push_back(outcome.payment_per_click);
    for (std::int64_t t = budget + 1; t <= horizon; ++t) {
      emit(exploitation_step(outcome, realization, t));
    }
  }
  result.summary =
      std::move(builder).finish(horizon, explore_until, std::move(winners));
  return result;
}

}  // namespace ducb
