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

// Domain types shared by every module: the auction configuration, agent
// profiles, the learner state and per-round records.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ducb {

// Agents are numbered 1..K.
using AgentId = std::size_t;

// Raised for any violated configuration or profile invariant. The message
// names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct AgentProfile {
  AgentId id = 0;
  double ctr = 0.0;        // hidden click-through rate
  double valuation = 0.0;  // private value per click
  double bid = 0.0;        // declared value per click

  friend bool operator==(const AgentProfile&, const AgentProfile&) = default;
};

struct AuctionConfig {
  std::size_t num_agents = 0;
  std::size_t num_slots = 1;
  std::int64_t horizon = 0;
  double delta = 0.0;
  double v_max = 0.0;
  // Observation probability of each slot; prominences[0] is slot 1.
  std::vector<double> prominences;
  // Cascade transition probabilities, lambdas[s-1] is slot s -> s+1.
  std::vector<double> lambdas;
  std::uint64_t seed = 0;

  // Observation probability of 1-based `slot`; zero for slots past M.
  double prominence(std::size_t slot) const;
};

// Cumulative products of cascade transitions: result[0] = 1 and
// result[m-1] = lambdas[0] * ... * lambdas[m-2]. Throws ConfigError if a
// transition lies outside (0, 1] or fewer than num_slots-1 are given.
std::vector<double> cascade_prominences(std::span<const double> lambdas,
                                        std::size_t num_slots);

// Checks every configuration invariant and returns the config with
// prominences filled in (from lambdas, or {1} for a single slot).
AuctionConfig validate_config(AuctionConfig config);

void validate_profiles(const AuctionConfig& config,
                       std::span<const AgentProfile> profiles);
void validate_bids(const AuctionConfig& config, std::span<const double> bids);

// Pull count each agent must strictly exceed for 2 * eps * v_max < delta:
// 8 * v_max^2 * ln T / delta^2. `log_horizon` is ln T.
double exploration_threshold(double v_max, double delta, double log_horizon);

// The uncorrected budget K * exploration_threshold(...).
double raw_exploration_budget(std::size_t num_agents, double v_max,
                              double delta, double log_horizon);

// Number of free round-robin rounds. Every agent receives
// floor(threshold) + 1 pulls, i.e. strictly more than the threshold, so the
// budget is K * (floor(threshold) + 1). Saturates instead of overflowing.
std::int64_t exploration_budget(std::size_t num_agents, double v_max,
                                double delta, double log_horizon);
std::int64_t exploration_budget(const AuctionConfig& config);

enum class Phase { kExploration, kExploitation };

const char* phase_name(Phase phase);

struct LearnerState {
  std::vector<double> empirical_ctr;
  std::vector<std::int64_t> pull_count;
  // Indices are NaN until the agent's first pull.
  std::vector<double> ucb;
  std::vector<double> lcb;
  std::int64_t round = 0;
  Phase phase = Phase::kExploration;
  std::optional<std::vector<AgentId>> frozen_order;

  std::int64_t horizon = 1;
  std::int64_t exploration_rounds = 0;
  // Multiplier on the confidence radius (1 for a single slot).
  double width_scale = 1.0;

  static LearnerState initial(std::size_t num_agents, std::int64_t horizon,
                              std::int64_t exploration_rounds,
                              double width_scale = 1.0);

  std::size_t num_agents() const { return pull_count.size(); }
  bool all_pulled() const;

  // Canonical byte image of every field, for exact replay comparisons.
  std::string to_bytes() const;
};

struct SlotResult {
  std::size_t slot = 1;
  AgentId agent = 0;
  int click = 0;
  double payment = 0.0;
};

struct RoundRecord {
  std::int64_t round = 0;
  Phase phase = Phase::kExploration;
  // One entry per filled slot, in slot order.
  std::vector<SlotResult> slots;
  double delta_regret_increment = 0.0;
  double regret_increment = 0.0;
  double welfare_increment = 0.0;

  const SlotResult* find(AgentId agent) const;
  bool allocated(AgentId agent) const { return find(agent) != nullptr; }
  int click_of(AgentId agent) const;
  double payment_of(AgentId agent) const;
  double revenue() const;
};

}  // namespace ducb
