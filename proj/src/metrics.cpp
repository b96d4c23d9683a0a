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

#include "ducb/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ducb {

double welfare(const AgentProfile& profile) {
  return profile.ctr * profile.valuation;
}

double welfare_at_slot(const AgentProfile& profile, std::size_t slot,
                       std::span<const double> prominences) {
  if (slot == 0 || slot > prominences.size()) return 0.0;
  return prominences[slot - 1] * welfare(profile);
}

std::vector<AgentId> welfare_ranking(std::span<const AgentProfile> profiles) {
  std::vector<AgentId> order(profiles.size());
  std::iota(order.begin(), order.end(), AgentId{1});
  std::stable_sort(order.begin(), order.end(), [&](AgentId a, AgentId b) {
    return welfare(profiles[a - 1]) > welfare(profiles[b - 1]);
  });
  return order;
}

std::vector<AgentId> delta_set(std::span<const AgentProfile> profiles,
                               double delta) {
  const double one[] = {1.0};
  return delta_set_for_slot(profiles, delta, 1, one);
}

std::vector<AgentId> delta_set_for_slot(std::span<const AgentProfile> profiles,
                                        double delta, std::size_t slot,
                                        std::span<const double> prominences) {
  std::vector<AgentId> out;
  if (profiles.empty() || slot == 0 || slot > profiles.size()) return out;
  const auto ranking = welfare_ranking(profiles);
  const double best = welfare_at_slot(profiles[ranking[slot - 1] - 1], slot,
                                      prominences);
  for (const auto& p : profiles) {
    if (best - welfare_at_slot(p, slot, prominences) < delta) out.push_back(p.id);
  }
  return out;
}

double delta_regret_increment(std::span<const SlotResult> allocation,
                              std::span<const AgentProfile> profiles,
                              double delta, std::span<const double> prominences) {
  const auto ranking = welfare_ranking(profiles);
  double total = 0.0;
  for (const auto& s : allocation) {
    const double best = welfare_at_slot(profiles[ranking[s.slot - 1] - 1], s.slot,
                                        prominences);
    const double gap = best - welfare_at_slot(profiles[s.agent - 1], s.slot,
                                              prominences);
    if (!(gap < delta)) total += gap;
  }
  return total;
}

double regret_increment(std::span<const SlotResult> allocation,
                        std::span<const AgentProfile> profiles,
                        std::span<const double> prominences) {
  const auto ranking = welfare_ranking(profiles);
  double total = 0.0;
  for (const auto& s : allocation) {
    total += welfare_at_slot(profiles[ranking[s.slot - 1] - 1], s.slot, prominences) -
             welfare_at_slot(profiles[s.agent - 1], s.slot, prominences);
  }
  return total;
}

double agent_utility(const RoundRecord& record, AgentId agent, double valuation) {
  const SlotResult* s = record.find(agent);
  if (s == nullptr || s->click == 0) return 0.0;
  return valuation - s->payment;
}

WelfareInterval welfare_interval(const LearnerState& learner, AgentId agent,
                                 double valuation) {
  if (learner.pull_count[agent - 1] == 0) {
    throw std::logic_error("welfare interval undefined before first pull");
  }
  return {learner.lcb[agent - 1] * valuation, learner.ucb[agent - 1] * valuation};
}

CoverageTracker::CoverageTracker(std::span<const AgentProfile> profiles)
    : profiles_(profiles.begin(), profiles.end()), flags_(profiles.size(), 0) {}

void CoverageTracker::update(const LearnerState& learner, AgentId agent) {
  const AgentProfile& p = profiles_[agent - 1];
  const bool missed =
      !welfare_interval(learner, agent, p.valuation).contains(welfare(p));
  char& flag = flags_[agent - 1];
  violated_ += static_cast<int>(missed) - static_cast<int>(flag);
  flag = missed;
}

RegretAccountant::RegretAccountant(const AuctionConfig& config,
                                   std::span<const AgentProfile> profiles)
    : num_agents_(profiles.size()) {
  const std::size_t slots = config.num_slots;
  const auto ranking = welfare_ranking(profiles);
  delta_gap_.resize(slots * num_agents_);
  gap_.resize(slots * num_agents_);
  welfare_.resize(slots * num_agents_);
  for (std::size_t m = 1; m <= slots; ++m) {
    const double best =
        welfare_at_slot(profiles[ranking[m - 1] - 1], m, config.prominences);
    for (const auto& p : profiles) {
      const double w = welfare_at_slot(p, m, config.prominences);
      const double gap = best - w;
      gap_[index(m, p.id)] = gap;
      delta_gap_[index(m, p.id)] = gap < config.delta ? 0.0 : gap;
      welfare_[index(m, p.id)] = w;
    }
  }
}

void RegretAccountant::annotate(RoundRecord& record) const {
  double delta_regret = 0.0, regret = 0.0, w = 0.0;
  for (const auto& s : record.slots) {
    const std::size_t i = index(s.slot, s.agent);
    delta_regret += delta_gap_[i];
    regret += gap_[i];
    w += welfare_[i];
  }
  record.delta_regret_increment = delta_regret;
  record.regret_increment = regret;
  record.welfare_increment = w;
}

SummaryBuilder::SummaryBuilder(std::span<const AgentProfile> profiles) {
  valuations_.reserve(profiles.size());
  for (const auto& p : profiles) valuations_.push_back(p.valuation);
  summary_.per_agent_utility.assign(profiles.size(), 0.0);
}

void SummaryBuilder::add(const RoundRecord& record) {
  summary_.total_delta_regret += record.delta_regret_increment;
  summary_.total_standard_regret += record.regret_increment;
  summary_.total_welfare += record.welfare_increment;
  if (record.phase == Phase::kExploration) {
    summary_.exploration_delta_regret += record.delta_regret_increment;
  } else {
    summary_.exploitation_delta_regret += record.delta_regret_increment;
  }
  for (const auto& s : record.slots) {
    summary_.total_revenue += s.payment;
    if (s.click) summary_.per_agent_utility[s.agent - 1] += valuations_[s.agent - 1] - s.payment;
  }
}

RunSummary SummaryBuilder::finish(std::int64_t horizon,
                                  std::int64_t exploration_rounds_used,
                                  std::vector<AgentId> winners) && {
  summary_.horizon = horizon;
  summary_.exploration_rounds_used = exploration_rounds_used;
  summary_.winners = std::move(winners);
  if (summary_.winners.empty()) summary_.flags.insert(kFlagExplorationOnly);
  return std::move(summary_);
}

}  // namespace ducb
