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

// Experiment files, sweeps, output writers and the command-line driver.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ducb/core.hpp"
#include "ducb/metrics.hpp"
#include "ducb/strategy_lab.hpp"

namespace ducb {

struct ProfileGenerator {
  double ctr_lo = 0.05;
  double ctr_hi = 0.95;
  double valuation_lo = 0.1;
};

// Parsed experiment file. Scalar keys fill `base`; list keys starting with
// "sweep_" add axes. Empty axes mean "use the base value".
struct ExperimentSpec {
  AuctionConfig base;
  std::vector<double> ctrs;        // explicit profiles when non-empty
  std::vector<double> valuations;
  std::vector<double> bids;        // defaults to valuations
  ProfileGenerator generator;
  std::optional<MechanismKind> mechanism;

  std::vector<std::int64_t> sweep_horizon;
  std::vector<double> sweep_delta;
  std::vector<std::size_t> sweep_num_agents;
  std::vector<std::size_t> sweep_num_slots;
  std::vector<std::uint64_t> sweep_seeds;
};

// Flat "key = value" text, '#' starts a comment, lists are comma separated.
// Unknown or repeated keys are errors. Throws ConfigError.
ExperimentSpec parse_experiment(std::string_view text);
ExperimentSpec load_experiment(const std::filesystem::path& path);

// Explicit profiles from the experiment file, or profiles sampled from `profile_seed`.
std::vector<AgentProfile> build_profiles(const ExperimentSpec& spec,
                                         const AuctionConfig& config,
                                         std::uint64_t profile_seed);

MechanismKind mechanism_for(const ExperimentSpec& spec, const AuctionConfig& config);

struct SweepCell {
  std::size_t index = 0;
  AuctionConfig config;  // config.seed is the cell's derived seed
  std::vector<AgentProfile> profiles;
  std::uint64_t replicate = 0;
};

// Seed of one cell, a hash of the master seed and the cell's parameter
// values. Independent of axis order.
std::uint64_t cell_seed(std::uint64_t master, std::int64_t horizon, double delta,
                        std::size_t num_agents, std::size_t num_slots,
                        std::uint64_t replicate);

// Cartesian product horizon x delta x num_agents x num_slots x seeds.
// Generated profiles depend only on (master seed, K, replicate), so a sweep
// over T or delta sees one fixed instance per replicate.
std::vector<SweepCell> expand_sweep(const ExperimentSpec& spec);

enum class OutputFormat { kCsv, kJsonl };
enum class RoundsLog { kNone, kAll, kExploitOnly };

// Fixed-point with 12 decimals.
std::string format_number(double value);

inline constexpr const char* kRoundLogHeader =
    "t,phase,slot,agent,click,payment,delta_regret_cum,regret_cum,revenue_cum";

// Streams round rows, one per filled slot. Cumulative columns are totals
// through the end of the row's round.
class RoundLogWriter {
 public:
  RoundLogWriter(std::ostream& out, OutputFormat format,
                 RoundsLog filter = RoundsLog::kAll);

  void write(const RoundRecord& record);

 private:
  std::ostream& out_;
  OutputFormat format_;
  RoundsLog filter_;
  double delta_regret_ = 0.0;
  double regret_ = 0.0;
  double revenue_ = 0.0;
};

void emit_round_log(std::span<const RoundRecord> records, OutputFormat format,
                    std::ostream& out, RoundsLog filter = RoundsLog::kAll);

struct SummaryRow {
  MechanismKind mechanism = MechanismKind::kDeltaUcbSingle;
  AuctionConfig config;
  std::uint64_t replicate = 0;
  RunSummary summary;
};

// Mean total delta-regret divided by ln T (NaN when T = 1).
double delta_regret_over_log_t(const RunSummary& summary);

void emit_summary(std::span<const SummaryRow> rows, OutputFormat format,
                  std::ostream& out);

// Verification sweeps behind dsic-check and ir-check.
struct CheckSpec {
  std::size_t instances = 10;
  InstanceSpec instance;
  std::uint64_t seed = 1;
  std::size_t grid_points = 21;
};

std::vector<Instance> make_instances(const CheckSpec& spec);

struct DsicFinding {
  std::size_t instance = 0;
  AgentId deviator = 0;
  std::size_t num_agents = 0;
  std::size_t num_slots = 0;
  DsicReport report;
};

struct DsicSweepResult {
  std::vector<DsicFinding> findings;
  bool holds = true;
  bool learning_identical = true;
  double worst_violation = 0.0;
};

DsicSweepResult run_dsic_check(std::span<const Instance> instances,
                               std::size_t grid_points = 21);

struct IrFinding {
  std::size_t instance = 0;
  std::size_t num_agents = 0;
  std::size_t num_slots = 0;
  IrReport report;
};

struct IrSweepResult {
  std::vector<IrFinding> findings;
  bool holds = true;
  double worst_utility = 0.0;
};

IrSweepResult run_ir_check(std::span<const Instance> instances, int jobs = 0);

// Exit codes: 0 success, 1 property violation, 2 configuration or usage error.
int cli_run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ducb
