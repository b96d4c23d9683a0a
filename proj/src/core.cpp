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

#include "ducb/core.hpp"

#include <cmath>
#include <cstring>
#include <limits>

#include <fmt/format.h>

namespace ducb {

double AuctionConfig::prominence(std::size_t slot) const {
  if (slot == 0 || slot > prominences.size()) return 0.0;
  return prominences[slot - 1];
}

std::vector<double> cascade_prominences(std::span<const double> lambdas,
                                        std::size_t num_slots) {
  if (num_slots > 0 && lambdas.size() + 1 < num_slots) {
    throw ConfigError("lambdas",
                      fmt::format("lambdas needs at least {} entries for {} "
                                  "slots, got {}",
                                  num_slots - 1, num_slots, lambdas.size()));
  }
  for (double lambda : lambdas) {
    if (!(lambda > 0.0 && lambda <= 1.0)) {
      throw ConfigError("lambdas", "lambdas must lie in (0, 1]");
    }
  }
  std::vector<double> gammas(num_slots, 1.0);
  for (std::size_t m = 1; m < num_slots; ++m) {
    gammas[m] = gammas[m - 1] * lambdas[m - 1];
  }
  return gammas;
}

AuctionConfig validate_config(AuctionConfig config) {
  if (config.num_agents == 0) {
    throw ConfigError("num_agents", "num_agents must be positive");
  }
  if (config.num_slots == 0) {
    throw ConfigError("num_slots", "num_slots must be positive");
  }
  if (config.num_slots > config.num_agents) {
    throw ConfigError("num_slots", "num_slots exceeds num_agents");
  }
  if (config.horizon < 1) {
    throw ConfigError("horizon", "horizon must be at least 1");
  }
  if (!(config.delta > 0.0) || !std::isfinite(config.delta)) {
    throw ConfigError("delta", "delta must be positive");
  }
  if (!(config.v_max > 0.0) || !std::isfinite(config.v_max)) {
    throw ConfigError("v_max", "v_max must be positive");
  }

  if (config.prominences.empty()) {
    if (!config.lambdas.empty()) {
      config.prominences = cascade_prominences(config.lambdas, config.num_slots);
    } else if (config.num_slots == 1) {
      config.prominences = {1.0};
    } else {
      throw ConfigError("prominences",
                        "prominences or lambdas required when num_slots > 1");
    }
  } else if (!config.lambdas.empty()) {
    // Prominences take precedence; lambdas are still checked.
    (void)cascade_prominences(config.lambdas, 0);
  }

  const auto& gammas = config.prominences;
  if (gammas.size() != config.num_slots) {
    throw ConfigError("prominences",
                      fmt::format("prominences has {} entries but num_slots is {}",
                                  gammas.size(), config.num_slots));
  }
  if (gammas[0] != 1.0) {
    throw ConfigError("prominences", "prominences[1] must equal 1");
  }
  for (std::size_t m = 1; m < gammas.size(); ++m) {
    if (!(gammas[m] > 0.0)) {
      throw ConfigError("prominences", "prominences must be strictly positive");
    }
    if (gammas[m] > gammas[m - 1]) {
      throw ConfigError("prominences", "prominences must be non-increasing");
    }
  }
  return config;
}

void validate_profiles(const AuctionConfig& config,
                       std::span<const AgentProfile> profiles) {
  if (profiles.size() != config.num_agents) {
    throw ConfigError("profiles",
                      fmt::format("expected {} agent profiles, got {}",
                                  config.num_agents, profiles.size()));
  }
  for (std::size_t k = 0; k < profiles.size(); ++k) {
    const AgentProfile& p = profiles[k];
    if (p.id != k + 1) {
      throw ConfigError("id", fmt::format("profile {} has id {}", k + 1, p.id));
    }
    if (!(p.ctr >= 0.0 && p.ctr <= 1.0)) {
      throw ConfigError("ctr", fmt::format("agent {}: ctr must lie in [0, 1]", p.id));
    }
    if (!(p.valuation >= 0.0 && p.valuation <= config.v_max)) {
      throw ConfigError("valuation",
                        fmt::format("agent {}: valuation must lie in [0, v_max]", p.id));
    }
    if (!(p.bid >= 0.0 && p.bid <= config.v_max)) {
      throw ConfigError("bid", fmt::format("agent {}: bid must lie in [0, v_max]", p.id));
    }
  }
}

void validate_bids(const AuctionConfig& config, std::span<const double> bids) {
  if (bids.size() != config.num_agents) {
    throw ConfigError("bids", fmt::format("expected {} bids, got {}",
                                          config.num_agents, bids.size()));
  }
  for (std::size_t k = 0; k < bids.size(); ++k) {
    if (!(bids[k] >= 0.0 && bids[k] <= config.v_max)) {
      throw ConfigError("bids",
                        fmt::format("agent {}: bid must lie in [0, v_max]", k + 1));
    }
  }
}

double exploration_threshold(double v_max, double delta, double log_horizon) {
  return 8.0 * v_max * v_max * log_horizon / (delta * delta);
}

double raw_exploration_budget(std::size_t num_agents, double v_max,
                              double delta, double log_horizon) {
  return static_cast<double>(num_agents) *
         exploration_threshold(v_max, delta, log_horizon);
}

std::int64_t exploration_budget(std::size_t num_agents, double v_max,
                                double delta, double log_horizon) {
  constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
  const double threshold = exploration_threshold(v_max, delta, log_horizon);
  const double per_agent = std::floor(threshold) + 1.0;
  const double total = per_agent * static_cast<double>(num_agents);
  if (!(total < 9.0e18)) return kMax;
  return static_cast<std::int64_t>(per_agent) *
         static_cast<std::int64_t>(num_agents);
}

std::int64_t exploration_budget(const AuctionConfig& config) {
  return exploration_budget(config.num_agents, config.v_max, config.delta,
                            std::log(static_cast<double>(config.horizon)));
}

const char* phase_name(Phase phase) {
  return phase == Phase::kExploration ? "exploration" : "exploitation";
}

LearnerState LearnerState::initial(std::size_t num_agents, std::int64_t horizon,
                                   std::int64_t exploration_rounds,
                                   double width_scale) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  LearnerState state;
  state.empirical_ctr.assign(num_agents, 0.0);
  state.pull_count.assign(num_agents, 0);
  state.ucb.assign(num_agents, nan);
  state.lcb.assign(num_agents, nan);
  state.horizon = horizon;
  state.exploration_rounds = exploration_rounds;
  state.width_scale = width_scale;
  return state;
}

bool LearnerState::all_pulled() const {
  for (auto n : pull_count) {
    if (n == 0) return false;
  }
  return true;
}

namespace {

template <typename T>
void append_raw(std::string& out, const T& value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

template <typename T>
void append_vector(std::string& out, const std::vector<T>& values) {
  append_raw(out, static_cast<std::uint64_t>(values.size()));
  for (const auto& v : values) append_raw(out, v);
}

}  // namespace

std::string LearnerState::to_bytes() const {
  std::string out;
  append_vector(out, empirical_ctr);
  append_vector(out, pull_count);
  append_vector(out, ucb);
  append_vector(out, lcb);
  append_raw(out, round);
  append_raw(out, static_cast<std::uint8_t>(phase));
  append_raw(out, static_cast<std::uint8_t>(frozen_order.has_value()));
  if (frozen_order) {
    std::vector<std::uint64_t> order(frozen_order->begin(), frozen_order->end());
    append_vector(out, order);
  }
  append_raw(out, horizon);
  append_raw(out, exploration_rounds);
  append_raw(out, width_scale);
  return out;
}

const SlotResult* RoundRecord::find(AgentId agent) const {
  for (const auto& s : slots) {
    if (s.agent == agent) return &s;
  }
  return nullptr;
}

int RoundRecord::click_of(AgentId agent) const {
  const SlotResult* s = find(agent);
  return s ? s->click : 0;
}

double RoundRecord::payment_of(AgentId agent) const {
  const SlotResult* s = find(agent);
  return s ? s->payment : 0.0;
}

double RoundRecord::revenue() const {
  double total = 0.0;
  for (const auto& s : slots) total += s.payment;
  return total;
}

}  // namespace ducb
