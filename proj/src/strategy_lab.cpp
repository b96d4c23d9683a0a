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

#include "ducb/strategy_lab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "ducb/mechanism_multi.hpp"
#include "ducb/metrics.hpp"
#include "ducb/rng.hpp"

namespace ducb {

std::vector<double> pivot_bids(const LearnerState& learner,
                               std::span<const double> bids, AgentId deviator) {
  if (!learner.all_pulled()) {
    throw std::logic_error("pivot_bids: some agent was never pulled");
  }
  const double own = learner.ucb[deviator - 1];
  std::vector<double> out;
  for (std::size_t k = 0; k < bids.size(); ++k) {
    if (k + 1 == deviator) continue;
    out.push_back(learner.ucb[k] * bids[k] / own);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Learner after exploration under `bids`; the bids do not matter.
RunResult truthful_run(const AuctionConfig& config,
                       std::span<const AgentProfile> profiles,
                       std::span<const double> bids,
                       const ClickRealization& realization) {
  return run_delta_ucb(config, profiles, bids, realization);
}

std::vector<double> with_bid(std::span<const double> bids, AgentId agent,
                             double bid) {
  std::vector<double> out(bids.begin(), bids.end());
  out[agent - 1] = bid;
  return out;
}

void check_scenario(const AuctionConfig& config,
                    std::span<const AgentProfile> profiles,
                    const DeviationScenario& scenario) {
  if (scenario.deviator < 1 || scenario.deviator > config.num_agents) {
    throw std::invalid_argument("scenario: deviator out of range");
  }
  if (!scenario.realization) {
    throw std::invalid_argument("scenario: missing click realization");
  }
  validate_profiles(config, profiles);
  validate_bids(config, scenario.fixed_bids);
  for (double b : scenario.bid_grid) {
    if (!(b >= 0.0 && b <= config.v_max)) {
      throw std::invalid_argument(
          fmt::format("scenario: grid bid {} outside [0, v_max]", b));
    }
  }
}

}  // namespace

DeviationScenario make_deviation_scenario(
    const AuctionConfig& config, std::span<const AgentProfile> profiles,
    std::shared_ptr<const ClickRealization> realization, AgentId deviator,
    std::size_t grid_points) {
  if (grid_points < 2) throw std::invalid_argument("grid needs at least 2 points");
  DeviationScenario scenario;
  scenario.deviator = deviator;
  scenario.realization = realization;
  scenario.fixed_bids = bids_of(profiles);
  const double value = profiles[deviator - 1].valuation;
  const auto truthful = with_bid(scenario.fixed_bids, deviator, value);

  const RunResult base = truthful_run(config, profiles, truthful, *realization);
  const LearnerState& learner = base.learner;

  std::vector<double> probes;
  std::vector<double> competitor_scores;
  if (learner.all_pulled()) {
    std::vector<double> pivots = pivot_bids(learner, truthful, deviator);
    std::sort(pivots.begin(), pivots.end(), [&](double a, double b) {
      return std::abs(a - value) < std::abs(b - value);
    });
    for (std::size_t p = 0; p < std::min<std::size_t>(2, pivots.size()); ++p) {
      for (double probe : {pivots[p] - kPivotProbe, pivots[p] + kPivotProbe}) {
        if (probe >= 0.0 && probe <= config.v_max) probes.push_back(probe);
      }
    }
    for (std::size_t k = 0; k < truthful.size(); ++k) {
      if (k + 1 != deviator) competitor_scores.push_back(learner.ucb[k] * truthful[k]);
    }
  }

  const std::size_t uniform = grid_points - std::min(probes.size(), grid_points - 2);
  for (std::size_t k = 0; k < uniform; ++k) {
    scenario.bid_grid.push_back(config.v_max * static_cast<double>(k) /
                                static_cast<double>(uniform - 1));
  }
  for (std::size_t p = 0; p < probes.size() && scenario.bid_grid.size() < grid_points; ++p) {
    scenario.bid_grid.push_back(probes[p]);
  }

  if (!competitor_scores.empty()) {
    const double own = learner.ucb[deviator - 1];
    for (double& b : scenario.bid_grid) {
      const bool tie = std::find(competitor_scores.begin(), competitor_scores.end(),
                                 own * b) != competitor_scores.end();
      if (tie) b = b + kTiePerturbation <= config.v_max ? b + kTiePerturbation
                                                        : b - kTiePerturbation;
    }
  }
  return scenario;
}

namespace {

std::vector<double> utility_stream(const AuctionConfig& config,
                                   std::span<const AgentProfile> profiles,
                                   std::span<const double> bids,
                                   const ClickRealization& realization,
                                   AgentId agent, std::string* learner_bytes) {
  std::vector<double> utilities(static_cast<std::size_t>(config.horizon), 0.0);
  const double value = profiles[agent - 1].valuation;
  RunOptions options;
  options.on_round = [&](const RoundRecord& r) {
    utilities[static_cast<std::size_t>(r.round - 1)] = agent_utility(r, agent, value);
  };
  const RunResult result = run_delta_ucb(config, profiles, bids, realization, options);
  if (learner_bytes) *learner_bytes = result.learner.to_bytes();
  return utilities;
}

struct BidOutcome {
  double gain = 0.0;
  std::int64_t round = 0;
  bool learning_identical = true;
};

BidOutcome check_bid(const AuctionConfig& config,
                     std::span<const AgentProfile> profiles,
                     const DeviationScenario& scenario, double bid,
                     const std::vector<double>& truthful_utilities,
                     const std::string& truthful_bytes) {
  const auto bids = with_bid(scenario.fixed_bids, scenario.deviator, bid);
  std::string bytes;
  const auto utilities = utility_stream(config, profiles, bids, *scenario.realization,
                                        scenario.deviator, &bytes);
  BidOutcome out;
  out.learning_identical = bytes == truthful_bytes;
  for (std::size_t t = 0; t < utilities.size(); ++t) {
    const double gain = utilities[t] - truthful_utilities[t];
    if (gain > out.gain) {
      out.gain = gain;
      out.round = static_cast<std::int64_t>(t) + 1;
    }
  }
  return out;
}

DsicReport fold(const DeviationScenario& scenario,
                const std::vector<BidOutcome>& outcomes) {
  DsicReport report;
  report.bids_checked = outcomes.size();
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    const BidOutcome& o = outcomes[k];
    report.learning_identical = report.learning_identical && o.learning_identical;
    if (o.gain > report.worst_violation) {
      report.worst_violation = o.gain;
      report.witness = DsicWitness{o.round, scenario.bid_grid[k], o.gain};
    }
  }
  report.holds = report.worst_violation <= kDsicTolerance;
  return report;
}

struct TruthfulBaseline {
  std::vector<double> utilities;
  std::string bytes;
};

TruthfulBaseline truthful_baseline(const AuctionConfig& config,
                                   std::span<const AgentProfile> profiles,
                                   const DeviationScenario& scenario) {
  TruthfulBaseline base;
  const auto bids = with_bid(scenario.fixed_bids, scenario.deviator,
                             profiles[scenario.deviator - 1].valuation);
  base.utilities = utility_stream(config, profiles, bids, *scenario.realization,
                                  scenario.deviator, &base.bytes);
  return base;
}

}  // namespace

DsicReport verify_dsic(const AuctionConfig& config,
                       std::span<const AgentProfile> profiles,
                       const DeviationScenario& scenario) {
  check_scenario(config, profiles, scenario);
  const TruthfulBaseline base = truthful_baseline(config, profiles, scenario);
  std::vector<BidOutcome> outcomes(scenario.bid_grid.size());
  const auto n = static_cast<std::int64_t>(outcomes.size());

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < n; ++k) {
    outcomes[k] = check_bid(config, profiles, scenario, scenario.bid_grid[k],
                            base.utilities, base.bytes);
  }
  return fold(scenario, outcomes);
}

DsicReport verify_dsic_serial(const AuctionConfig& config,
                              std::span<const AgentProfile> profiles,
                              const DeviationScenario& scenario) {
  check_scenario(config, profiles, scenario);
  const TruthfulBaseline base = truthful_baseline(config, profiles, scenario);
  std::vector<BidOutcome> outcomes;
  for (double bid : scenario.bid_grid) {
    outcomes.push_back(
        check_bid(config, profiles, scenario, bid, base.utilities, base.bytes));
  }
  return fold(scenario, outcomes);
}

IrReport verify_ir(const AuctionConfig& config,
                   std::span<const AgentProfile> profiles,
                   const ClickRealization& realization) {
  const auto truthful = valuations_of(profiles);
  IrReport report;
  RunOptions options;
  options.on_round = [&](const RoundRecord& r) {
    for (const auto& s : r.slots) {
      const double u = agent_utility(r, s.agent, profiles[s.agent - 1].valuation);
      if (u < report.worst_utility) {
        report.worst_utility = u;
        report.witness = IrWitness{r.round, s.agent, u};
      }
    }
  };
  run_delta_ucb(config, profiles, truthful, realization, options);
  report.holds = !(report.worst_utility < 0.0);
  return report;
}

std::int64_t t23_exploration_budget(std::size_t num_agents, std::int64_t horizon) {
  const double k = static_cast<double>(num_agents);
  const double raw = std::ceil(k * std::pow(static_cast<double>(horizon), 2.0 / 3.0));
  return std::max(static_cast<std::int64_t>(num_agents),
                  static_cast<std::int64_t>(raw));
}

namespace {

RunResult run_oracle(const AuctionConfig& config,
                     std::span<const AgentProfile> profiles,
                     const ClickRealization& realization,
                     const RunOptions& options) {
  validate_profiles(config, profiles);
  const auto ranking = welfare_ranking(profiles);
  RegretAccountant accountant(config, profiles);
  SummaryBuilder builder(profiles);
  RunResult result;
  result.learner = LearnerState::initial(config.num_agents, config.horizon, 0);
  result.payments_per_click.assign(config.num_slots, 0.0);
  for (std::int64_t t = 1; t <= config.horizon; ++t) {
    RoundRecord record;
    record.round = t;
    record.phase = Phase::kExploitation;
    for (std::size_t m = 1; m <= config.num_slots; ++m) {
      const AgentId agent = ranking[m - 1];
      record.slots.push_back({m, agent, realized_click(realization, agent, m, t), 0.0});
    }
    accountant.annotate(record);
    builder.add(record);
    if (options.on_round) options.on_round(record);
    if (options.keep_rounds) result.rounds.push_back(std::move(record));
  }
  std::vector<AgentId> winners(ranking.begin(),
                               ranking.begin() + static_cast<std::ptrdiff_t>(config.num_slots));
  result.summary = std::move(builder).finish(config.horizon, 0, std::move(winners));
  return result;
}

RunResult run_plain_ucb(const AuctionConfig& config,
                        std::span<const AgentProfile> profiles,
                        std::span<const double> bids,
                        const ClickRealization& realization,
                        const RunOptions& options) {
  validate_profiles(config, profiles);
  validate_bids(config, bids);
  const std::size_t k = config.num_agents;
  RegretAccountant accountant(config, profiles);
  SummaryBuilder builder(profiles);
  CoverageTracker coverage(profiles);
  RunResult result;
  LearnerState learner = LearnerState::initial(k, config.horizon, config.horizon);

  AgentId last = 1;
  for (std::int64_t t = 1; t <= config.horizon; ++t) {
    AgentId agent = 0;
    Phase phase = Phase::kExploitation;
    if (t <= static_cast<std::int64_t>(k)) {
      agent = static_cast<AgentId>(t);
      phase = Phase::kExploration;
    } else {
      double best = -1.0;
      for (std::size_t i = 0; i < k; ++i) {
        const double score = learner.ucb[i] * bids[i];
        if (score > best) {
          best = score;
          agent = i + 1;
        }
      }
    }
    const int click = realized_click(realization, agent, 1, t);
    record_sample(learner, agent, click);
    learner.round = t;
    coverage.update(learner, agent);
    last = agent;

    RoundRecord record;
    record.round = t;
    record.phase = phase;
    record.slots.push_back({1, agent, click, 0.0});
    accountant.annotate(record);
    builder.add(record);
    builder.add_interval_violations(coverage.violated());
    if (options.on_round) options.on_round(record);
    if (options.keep_rounds) result.rounds.push_back(std::move(record));
  }
  result.learner = learner;
  result.payments_per_click.assign(1, 0.0);
  result.summary = std::move(builder).finish(
      config.horizon, std::min<std::int64_t>(static_cast<std::int64_t>(k), config.horizon),
      {last});
  return result;
}

}  // namespace

RunResult run_baseline(BaselineKind kind, const AuctionConfig& config,
                       std::span<const AgentProfile> profiles,
                       std::span<const double> bids,
                       const ClickRealization& realization,
                       const RunOptions& options) {
  switch (kind) {
    case BaselineKind::kOracleAllocation:
      return run_oracle(config, profiles, realization, options);
    case BaselineKind::kPlainUcb:
      if (config.num_slots != 1) {
        throw ConfigError("num_slots", "PlainUCB baseline requires num_slots = 1");
      }
      return run_plain_ucb(config, profiles, bids, realization, options);
    case BaselineKind::kExplorationSeparatedT23: {
      if (config.num_slots != 1) {
        throw ConfigError("num_slots",
                          "ExplorationSeparatedT23 baseline requires num_slots = 1");
      }
      RunOptions t23 = options;
      t23.exploration_rounds = t23_exploration_budget(config.num_agents, config.horizon);
      return run_single_slot(config, profiles, bids, realization, t23);
    }
  }
  throw std::invalid_argument("unknown baseline kind");
}

std::string_view mechanism_name(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kDeltaUcbSingle: return "DeltaUCB-Single";
    case MechanismKind::kDeltaUcbMulti: return "DeltaUCB-Multi";
    case MechanismKind::kOracleAllocation: return "OracleAllocation";
    case MechanismKind::kPlainUcb: return "PlainUCB";
    case MechanismKind::kExplorationSeparatedT23: return "ExplorationSeparatedT23";
  }
  return "unknown";
}

std::optional<MechanismKind> parse_mechanism(std::string_view name) {
  for (auto kind : {MechanismKind::kDeltaUcbSingle, MechanismKind::kDeltaUcbMulti,
                    MechanismKind::kOracleAllocation, MechanismKind::kPlainUcb,
                    MechanismKind::kExplorationSeparatedT23}) {
    if (mechanism_name(kind) == name) return kind;
  }
  return std::nullopt;
}

RunResult run_mechanism(MechanismKind kind, const AuctionConfig& config,
                        std::span<const AgentProfile> profiles,
                        std::span<const double> bids,
                        const ClickRealization& realization,
                        const RunOptions& options) {
  switch (kind) {
    case MechanismKind::kDeltaUcbSingle:
      return run_single_slot(config, profiles, bids, realization, options);
    case MechanismKind::kDeltaUcbMulti:
      return run_multi_slot(config, profiles, bids, realization, options);
    case MechanismKind::kOracleAllocation:
      return run_baseline(BaselineKind::kOracleAllocation, config, profiles, bids,
                          realization, options);
    case MechanismKind::kPlainUcb:
      return run_baseline(BaselineKind::kPlainUcb, config, profiles, bids,
                          realization, options);
    case MechanismKind::kExplorationSeparatedT23:
      return run_baseline(BaselineKind::kExplorationSeparatedT23, config, profiles,
                          bids, realization, options);
  }
  throw std::invalid_argument("unknown mechanism kind");
}

Instance random_instance(const InstanceSpec& spec, std::uint64_t seed) {
  Rng rng(derive_stream(seed, StreamTag::kInstance, 0));
  Instance out;
  AuctionConfig& c = out.config;
  const std::size_t lo = std::max(spec.min_agents, spec.num_slots);
  const std::size_t hi = std::max(spec.max_agents, lo);
  c.num_agents = static_cast<std::size_t>(rng.integer(lo, hi));
  c.num_slots = spec.num_slots;
  c.horizon = spec.horizon;
  c.delta = rng.uniform(spec.delta_lo, spec.delta_hi);
  c.v_max = spec.v_max;
  c.seed = seed;
  c.prominences = spec.prominences;
  if (c.prominences.empty()) {
    for (std::size_t m = 0; m < c.num_slots; ++m) {
      c.prominences.push_back(std::pow(0.7, static_cast<double>(m)));
    }
  }
  c = validate_config(std::move(c));
  for (std::size_t k = 1; k <= c.num_agents; ++k) {
    AgentProfile p;
    p.id = k;
    p.ctr = rng.uniform(spec.ctr_lo, spec.ctr_hi);
    p.valuation = rng.uniform(spec.valuation_lo, spec.v_max);
    p.bid = p.valuation;
    out.profiles.push_back(p);
  }
  return out;
}

}  // namespace ducb
