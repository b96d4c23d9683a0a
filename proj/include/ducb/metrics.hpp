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

#pragma once

// Evaluation-side accounting. Everything here uses the true CTRs and
// valuations, which the mechanisms never see.

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ducb/core.hpp"

namespace ducb {

double welfare(const AgentProfile& profile);
// Gamma_m * ctr * valuation; zero for a slot past the end of `prominences`.
double welfare_at_slot(const AgentProfile& profile, std::size_t slot,
                       std::span<const double> prominences);

// Agents by true welfare, best first; ties go to the lower id.
std::vector<AgentId> welfare_ranking(std::span<const AgentProfile> profiles);

// {i : W_* - W_i < delta}, ascending ids.
std::vector<AgentId> delta_set(std::span<const AgentProfile> profiles,
                               double delta);
// {i : W_{K(m),m} - W_{i,m} < delta} where K(m) is the m-th best agent.
std::vector<AgentId> delta_set_for_slot(std::span<const AgentProfile> profiles,
                                        double delta, std::size_t slot,
                                        std::span<const double> prominences);

// Sum over filled slots of (W_{*,m} - W_{I_m,m}) for allocations outside
// S_{delta,m}. With one slot and prominences {1} this is the single-slot
// quantity.
double delta_regret_increment(std::span<const SlotResult> allocation,
                              std::span<const AgentProfile> profiles,
                              double delta, std::span<const double> prominences);
// Same sum without the S_delta indicator.
double regret_increment(std::span<const SlotResult> allocation,
                        std::span<const AgentProfile> profiles,
                        std::span<const double> prominences);

// (v - P) * allocated * clicked.
double agent_utility(const RoundRecord& record, AgentId agent, double valuation);

struct WelfareInterval {
  double lower = 0.0;
  double upper = 0.0;
  bool contains(double w) const { return lower <= w && w <= upper; }
};

// [lcb * v, ucb * v] for one agent. Requires a pull.
WelfareInterval welfare_interval(const LearnerState& learner, AgentId agent,
                                 double valuation);

// Counts agents whose welfare interval currently misses the true welfare.
// Agents never pulled are not counted.
class CoverageTracker {
 public:
  explicit CoverageTracker(std::span<const AgentProfile> profiles);

  void update(const LearnerState& learner, AgentId agent);
  std::int64_t violated() const { return violated_; }

 private:
  std::vector<AgentProfile> profiles_;
  std::vector<char> flags_;
  std::int64_t violated_ = 0;
};

// Fills the regret and welfare fields of round records from tables built once
// per run.
class RegretAccountant {
 public:
  RegretAccountant(const AuctionConfig& config,
                   std::span<const AgentProfile> profiles);

  void annotate(RoundRecord& record) const;

 private:
  std::size_t index(std::size_t slot, AgentId agent) const {
    return (slot - 1) * num_agents_ + (agent - 1);
  }

  std::size_t num_agents_;
  std::vector<double> delta_gap_;
  std::vector<double> gap_;
  std::vector<double> welfare_;
};

struct RunSummary {
  std::int64_t horizon = 0;
  double total_delta_regret = 0.0;
  double total_standard_regret = 0.0;
  double total_revenue = 0.0;
  double total_welfare = 0.0;
  double exploration_delta_regret = 0.0;
  double exploitation_delta_regret = 0.0;
  std::vector<double> per_agent_utility;  // index agent - 1
  std::int64_t exploration_rounds_used = 0;
  // Sum over rounds of the number of agents whose welfare interval misses
  // the true welfare.
  std::int64_t interval_violations = 0;
  // Exploitation allocation, slot order; empty for exploration-only runs.
  std::vector<AgentId> winners;
  std::set<std::string> flags;

  bool has_flag(const std::string& flag) const { return flags.contains(flag); }
};

inline constexpr const char* kFlagExplorationOnly = "exploration-only";

// Folds annotated round records into a RunSummary.
class SummaryBuilder {
 public:
  explicit SummaryBuilder(std::span<const AgentProfile> profiles);

  void add(const RoundRecord& record);
  void add_interval_violations(std::int64_t count) {
    summary_.interval_violations += count;
  }

  RunSummary finish(std::int64_t horizon, std::int64_t exploration_rounds_used,
                    std::vector<AgentId> winners) &&;

 private:
  std::vector<double> valuations_;
  RunSummary summary_;
};

}  // namespace ducb
