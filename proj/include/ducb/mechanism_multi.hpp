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

// Multi-slot Delta-UCB under the cascade prominence model.
//
// Exploration shifts the round-robin by one agent per slot so the M slots of
// a round hold distinct agents. A click at slot m is a Bernoulli(Gamma_m *
// ctr) sample; the learner feeds click / Gamma_m into a single per-agent
// running mean, so one counter covers all slots. Because the weighted sample
// ranges over [0, 1/Gamma_M], confidence radii are scaled by 1/Gamma_M.
//
// After exploration agents are ranked by ucb * bid and slot m goes to rank m
// for the rest of the horizon, paying per click
//   sum_{l=m+1}^{M+1} (Gamma_{l-1} - Gamma_l) * score_(l),  Gamma_{M+1} = 0.

#include <cstdint>
#include <span>
#include <vector>

#include "ducb/core.hpp"
#include "ducb/environment.hpp"
#include "ducb/mechanism.hpp"

namespace ducb {

struct SlotModel {
  std::vector<double> prominences;  // Gamma_1..Gamma_M
  std::vector<double> lambdas;      // source transitions, may be empty

  std::size_t num_slots() const { return prominences.size(); }
  // Gamma for 1-based slot; 0 for slot M+1 and beyond.
  double gamma(std::size_t slot) const {
    return slot >= 1 && slot <= prominences.size() ? prominences[slot - 1] : 0.0;
  }
};

SlotModel gammas_from_lambdas(std::span<const double> lambdas,
                              std::size_t num_slots);
SlotModel slot_model(const AuctionConfig& config);

// (((t-1) mod K) + m - 1) mod K + 1. Throws std::out_of_range for m > K.
AgentId multi_exploration_allocation(std::int64_t t, std::size_t slot,
                                     std::size_t num_agents);

RoundRecord multi_exploration_step(LearnerState& learner,
                                   const ClickRealization& realization,
                                   const SlotModel& model, std::int64_t t);

// Per-click price for slot m. `ranking` lists agents best first and
// `scores[i-1]` is agent i's ucb * bid. Ranks past K contribute nothing.
double multi_slot_payment(std::size_t slot, std::span<const AgentId> ranking,
                          const SlotModel& model, std::span<const double> scores);

struct MultiSlotOutcome {
  std::vector<AgentId> ranking;           // all K agents
  std::vector<double> payments_per_click; // one per slot
  LearnerState learner;                   // frozen
};

MultiSlotOutcome rank_agents(const LearnerState& learner,
                             std::span<const double> bids,
                             const SlotModel& model);

RoundRecord multi_exploitation_step(const MultiSlotOutcome& outcome,
                                    const ClickRealization& realization,
                                    std::int64_t t);

RunResult run_multi_slot(const AuctionConfig& config,
                         std::span<const AgentProfile> profiles,
                         std::span<const double> bids,
                         const ClickRealization& realization,
                         const RunOptions& options = {});

// Dispatches to the single- or multi-slot pipeline on config.num_slots.
RunResult run_delta_ucb(const AuctionConfig& config,
                        std::span<const AgentProfile> profiles,
                        std::span<const double> bids,
                        const ClickRealization& realization,
                        const RunOptions& options = {});

}  // namespace ducb
