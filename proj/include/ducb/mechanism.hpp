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

// Single-slot Delta-UCB.
//
// Rounds 1..u are free round-robin exploration that ignores bids. At round u
// the agent with the largest ucb * bid wins the slot for the rest of the
// horizon and pays, per click, the smallest bid that would still have won:
// ucb_j * b_j / ucb_winner where j is the runner-up. Indices are never
// updated after round u.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ducb/core.hpp"
#include "ducb/environment.hpp"
#include "ducb/metrics.hpp"

namespace ducb {

struct ConfidencePair {
  double ucb = 0.0;
  double lcb = 0.0;
};

// sqrt(2 ln T / n). Throws std::domain_error for n = 0.
double confidence_radius(std::int64_t pull_count, double log_horizon);

// (ctr + eps, ctr - eps), unclipped.
ConfidencePair ucb_pair(double empirical_ctr, std::int64_t pull_count,
                        std::int64_t horizon);
ConfidencePair ucb_pair_log(double empirical_ctr, std::int64_t pull_count,
                            double log_horizon);

// Applies one observed sample to agent's running mean and refreshes its
// indices; other agents are untouched.
void record_sample(LearnerState& learner, AgentId agent, double sample);

// Round-robin exploration round t (1 <= t <= exploration_rounds). Allocates
// agent ((t-1) mod K) + 1, observes its click and updates it. Payments are 0.
// Throws std::logic_error when t is out of order or past the budget.
RoundRecord exploration_step(LearnerState& learner,
                             const ClickRealization& realization,
                             std::int64_t t);

struct SingleSlotOutcome {
  AgentId winner = 0;
  std::optional<AgentId> runner_up;
  double payment_per_click = 0.0;
  LearnerState learner;  // frozen
};

// Scores ucb_i * b_i; highest score wins, ties to the lowest id. With a
// single agent there is no competitor and the payment is 0.
SingleSlotOutcome declare_winner(const LearnerState& learner,
                                 std::span<const double> bids);

// Exploitation round t: the winner holds the slot and pays the per-click
// price iff clicked.
RoundRecord exploitation_step(const SingleSlotOutcome& outcome,
                              const ClickRealization& realization,
                              std::int64_t t);

struct RunOptions {
  // Keep every RoundRecord in RunResult::rounds.
  bool keep_rounds = false;
  // Called once per round with the annotated record.
  std::function<void(const RoundRecord&)> on_round;
  // Replaces the Delta-derived exploration budget (used by baselines).
  std::optional<std::int64_t> exploration_rounds;
};

struct RunResult {
  RunSummary summary;
  std::vector<RoundRecord> rounds;
  // Learner as left by exploration (identical to the final state).
  LearnerState learner;
  // Exploitation price per click for each slot, empty if exploration-only.
  std::vector<double> payments_per_click;
};

// Full single-slot pipeline. `profiles` supply the true CTRs and valuations
// for accounting; `bids` drive the mechanism.
RunResult run_single_slot(const AuctionConfig& config,
                          std::span<const AgentProfile> profiles,
                          std::span<const double> bids,
                          const ClickRealization& realization,
                          const RunOptions& options = {});

std::vector<double> bids_of(std::span<const AgentProfile> profiles);
std::vector<double> valuations_of(std::span<const AgentProfile> profiles);

}  // namespace ducb
