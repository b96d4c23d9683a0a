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

// Counterfactual checks of truthfulness and individual rationality, and
// reference mechanisms to compare regret against.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ducb/core.hpp"
#include "ducb/environment.hpp"
#include "ducb/mechanism.hpp"

namespace ducb {

inline constexpr double kDsicTolerance = 1e-12;
inline constexpr double kPivotProbe = 1e-6;
inline constexpr double kTiePerturbation = 1e-9;

// One agent deviating unilaterally against fixed opponents and a fixed click
// realization.
struct DeviationScenario {
  AgentId deviator = 0;
  std::vector<double> bid_grid;
  // Bids of every agent; the deviator's entry is overwritten per run.
  std::vector<double> fixed_bids;
  std::shared_ptr<const ClickRealization> realization;
};

struct DsicWitness {
  std::int64_t round = 0;
  double bid = 0.0;
  double gain = 0.0;  // deviant minus truthful utility
};

struct DsicReport {
  bool holds = true;
  double worst_violation = 0.0;  // largest gain from deviating, >= 0
  std::optional<DsicWitness> witness;
  // Learner state after exploration matched the truthful run for every bid.
  bool learning_identical = true;
  std::size_t bids_checked = 0;
};

struct IrWitness {
  std::int64_t round = 0;
  AgentId agent = 0;
  double utility = 0.0;
};

struct IrReport {
  bool holds = true;
  double worst_utility = 0.0;  // min per-round utility, <= 0
  std::optional<IrWitness> witness;
};

// Bids at which the deviator's score ucb_i * b ties a competitor's score
// under `bids`, ascending. Requires every agent pulled.
std::vector<double> pivot_bids(const LearnerState& learner,
                               std::span<const double> bids, AgentId deviator);

// Grid of `grid_points` bids: probes at +-1e-6 around the two pivots nearest
// the deviator's valuation, the rest uniform over [0, v_max]. Bids landing on
// an exact score tie are nudged by 1e-9.
DeviationScenario make_deviation_scenario(
    const AuctionConfig& config, std::span<const AgentProfile> profiles,
    std::shared_ptr<const ClickRealization> realization, AgentId deviator,
    std::size_t grid_points = 21);

// Compares the deviator's per-round utility under its valuation against every
// grid bid, round by round. Grid bids run in parallel; the fold over them is
// in grid order so the report is deterministic.
DsicReport verify_dsic(const AuctionConfig& config,
                       std::span<const AgentProfile> profiles,
                       const DeviationScenario& scenario);
// Serial reference of verify_dsic.
DsicReport verify_dsic_serial(const AuctionConfig& config,
                              std::span<const AgentProfile> profiles,
                              const DeviationScenario& scenario);

// All agents truthful; every per-round utility must be >= 0 exactly.
IrReport verify_ir(const AuctionConfig& config,
                   std::span<const AgentProfile> profiles,
                   const ClickRealization& realization);

enum class BaselineKind { kOracleAllocation, kPlainUcb, kExplorationSeparatedT23 };

// max(K, ceil(K * T^(2/3))).
std::int64_t t23_exploration_budget(std::size_t num_agents, std::int64_t horizon);

RunResult run_baseline(BaselineKind kind, const AuctionConfig& config,
                       std::span<const AgentProfile> profiles,
                       std::span<const double> bids,
                       const ClickRealization& realization,
                       const RunOptions& options = {});

enum class MechanismKind {
  kDeltaUcbSingle,
  kDeltaUcbMulti,
  kOracleAllocation,
  kPlainUcb,
  kExplorationSeparatedT23,
};

std::string_view mechanism_name(MechanismKind kind);
std::optional<MechanismKind> parse_mechanism(std::string_view name);

RunResult run_mechanism(MechanismKind kind, const AuctionConfig& config,
                        std::span<const AgentProfile> profiles,
                        std::span<const double> bids,
                        const ClickRealization& realization,
                        const RunOptions& options = {});

// Random test instances for the verification sweeps.
struct InstanceSpec {
  std::size_t min_agents = 2;
  std::size_t max_agents = 6;
  std::size_t num_slots = 1;
  std::int64_t horizon = 5000;
  double delta_lo = 0.5;
  double delta_hi = 0.8;
  double v_max = 1.0;
  double ctr_lo = 0.05;
  double ctr_hi = 0.95;
  double valuation_lo = 0.1;
  // Defaults to 0.7^(m-1) when empty.
  std::vector<double> prominences;
};

struct Instance {
  AuctionConfig config;
  std::vector<AgentProfile> profiles;  // truthful: bid = valuation
};

Instance random_instance(const InstanceSpec& spec, std::uint64_t seed);

}  // namespace ducb
