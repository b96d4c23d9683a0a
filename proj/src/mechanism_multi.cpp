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

#include "ducb/mechanism_multi.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace ducb {

SlotModel gammas_from_lambdas(std::span<const double> lambdas,
                              std::size_t num_slots) {
  SlotModel model;
  model.prominences = cascade_prominences(lambdas, num_slots);
  model.lambdas.assign(lambdas.begin(), lambdas.end());
  return model;
}

SlotModel slot_model(const AuctionConfig& config) {
  SlotModel model;
  model.prominences = config.prominences;
  model.lambdas = config.lambdas;
  if (model.prominences.size() != config.num_slots) {
    throw ConfigError("prominences", "config must be validated first");
  }
  return model;
}

AgentId multi_exploration_allocation(std::int64_t t, std::size_t slot,
                                     std::size_t num_agents) {
  if (slot < 1 || slot > num_agents) {
    throw std::out_of_range(
        fmt::format("slot {} out of range for {} agents", slot, num_agents));
  }
  const auto k = static_cast<std::int64_t>(num_agents);
  const auto m = static_cast<std::int64_t>(slot);
  return static_cast<AgentId>((((t - 1) % k) + m - 1) % k + 1);
}

RoundRecord multi_exploration_step(LearnerState& learner,
                                   const ClickRealization& realization,
                                   const SlotModel& model, std::int64_t t) {
  if (learner.phase != Phase::kExploration || t > learner.exploration_rounds) {
    throw std::logic_error(fmt::format(
        "multi_exploration_step: round {} is past the exploration budget {}", t,
        learner.exploration_rounds));
  }
  if (t != learner.round + 1) {
    throw std::logic_error(fmt::format(
        "multi_exploration_step: expected round {}, got {}", learner.round + 1, t));
  }
  RoundRecord record;
  record.round = t;
  record.phase = Phase::kExploration;
  record.slots.reserve(model.num_slots());
  for (std::size_t m = 1; m <= model.num_slots(); ++m) {
    const AgentId agent = multi_exploration_allocation(t, m, learner.num_agents());
    const int click = realized_click(realization, agent, m, t);
    record_sample(learner, agent, click / model.gamma(m));
    record.slots.push_back({m, agent, click, 0.0});
  }
  learner.round = t;
  return record;
}

double multi_slot_payment(std::size_t slot, std::span<const AgentId> ranking,
                          const SlotModel& model, std::span<const double> scores) {
  const std::size_t last = model.num_slots() + 1;
  double total = 0.0;
  for (std::size_t l = slot + 1; l <= last; ++l) {
    if (l > ranking.size()) break;
    total += (model.gamma(l - 1) - model.gamma(l)) * scores[ranking[l - 1] - 1];
  }
  return total;
}

MultiSlotOutcome rank_agents(const LearnerState& learner,
                             std::span<const double> bids,
                             const SlotModel& model) {
  if (!learner.all_pulled()) {
    throw std::logic_error("rank_agents: some agent was never pulled");
  }
  if (bids.size() != learner.num_agents()) {
    throw std::invalid_argument("rank_agents: one bid per agent required");
  }
  std::vector<double> scores(bids.size());
  for (std::size_t i = 0; i < bids.size(); ++i) scores[i] = learner.ucb[i] * bids[i];

  MultiSlotOutcome outcome;
  outcome.ranking.resize(bids.size());
  std::iota(outcome.ranking.begin(), outcome.ranking.end(), AgentId{1});
  std::stable_sort(outcome.ranking.begin(), outcome.ranking.end(),
                   [&](AgentId a, AgentId b) { return scores[a - 1] > scores[b - 1]; });
  for (std::size_t m = 1; m <= model.num_slots(); ++m) {
    outcome.payments_per_click.push_back(
        multi_slot_payment(m, outcome.ranking, model, scores));
  }
  outcome.learner = learner;
  outcome.learner.phase = Phase::kExploitation;
  outcome.learner.frozen_order = outcome.ranking;
  return outcome;
}

RoundRecord multi_exploitation_step(const MultiSlotOutcome& outcome,
                                    const ClickRealization& realization,
                                    std::int64_t t) {
  RoundRecord record;
  record.round = t;
  record.phase = Phase::kExploitation;
  const std::size_t slots = outcome.payments_per_click.size();
  record.slots.reserve(slots);
  for (std::size_t m = 1; m <= slots; ++m) {
    const AgentId agent = outcome.ranking[m - 1];
    const int click = realized_click(realization, agent, m, t);
    record.slots.push_back(
        {m, agent, click, click ? outcome.payments_per_click[m - 1] : 0.0});
  }
  return record;
}

RunResult run_multi_slot(const AuctionConfig& config,
                         std::span<const AgentProfile> profiles,
                         std::span<const double> bids,
                         const ClickRealization& realization,
                         const RunOptions& options) {
  validate_profiles(config, profiles);
  validate_bids(config, bids);
  const SlotModel model = slot_model(config);
  if (realization.num_agents() != config.num_agents ||
      realization.num_slots() != config.num_slots ||
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

  const double width_scale = 1.0 / model.gamma(model.num_slots());
  LearnerState learner =
      LearnerState::initial(config.num_agents, horizon, budget, width_scale);
  for (std::int64_t t = 1; t <= explore_until; ++t) {
    RoundRecord record = multi_exploration_step(learner, realization, model, t);
    for (const auto& s : record.slots) coverage.update(learner, s.agent);
    emit(std::move(record));
  }
  result.learner = learner;

  std::vector<AgentId> winners;
  if (budget < horizon) {
    const MultiSlotOutcome outcome = rank_agents(learner, bids, model);
    winners.assign(outcome.ranking.begin(),
                   outcome.ranking.begin() + static_cast<std::ptrdiff_t>(model.num_slots()));
    result.payments_per_click = outcome.payments_per_click;
    for (std::int64_t t = budget + 1; t <= horizon; ++t) {
      emit(multi_exploitation_step(outcome, realization, t));
    }
  }
  result.summary =
      std::move(builder).finish(horizon, explore_until, std::move(winners));
  return result;
}

RunResult run_delta_ucb(const AuctionConfig& config,
                        std::span<const AgentProfile> profiles,
                        std::span<const double> bids,
                        const ClickRealization& realization,
                        const RunOptions& options) {
  if (config.num_slots == 1) {
    return run_single_slot(config, profiles, bids, realization, options);
  }
  return run_multi_slot(config, profiles, bids, realization, options);
}

}  // namespace ducb
