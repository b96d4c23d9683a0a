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

#include "ducb/environment.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

#include "ducb/rng.hpp"

namespace ducb {

ClickRealization::ClickRealization(std::size_t num_agents,
                                   std::size_t num_slots, std::int64_t horizon,
                                   std::uint64_t seed)
    : num_agents_(num_agents),
      num_slots_(num_slots),
      horizon_(horizon),
      seed_(seed),
      intrinsic_(num_agents * static_cast<std::size_t>(horizon), 0) {
  if (num_slots > 1) {
    observations_.assign(num_slots * static_cast<std::size_t>(horizon), 0);
  }
}

std::span<std::uint8_t> ClickRealization::intrinsic_row(AgentId agent) {
  const auto t = static_cast<std::size_t>(horizon_);
  return {intrinsic_.data() + (agent - 1) * t, t};
}

std::span<const std::uint8_t> ClickRealization::intrinsic_row(AgentId agent) const {
  const auto t = static_cast<std::size_t>(horizon_);
  return {intrinsic_.data() + (agent - 1) * t, t};
}

std::span<std::uint8_t> ClickRealization::observation_row(std::size_t slot) {
  const auto t = static_cast<std::size_t>(horizon_);
  return {observations_.data() + (slot - 1) * t, t};
}

std::span<const std::uint8_t> ClickRealization::observation_row(
    std::size_t slot) const {
  const auto t = static_cast<std::size_t>(horizon_);
  return {observations_.data() + (slot - 1) * t, t};
}

namespace {

struct RowPlan {
  std::vector<CounterStream> streams;
  std::vector<double> probabilities;
  std::vector<std::uint8_t*> rows;
};

// Every row of both matrices, flattened so the fill loop is one index space.
RowPlan plan_rows(ClickRealization& out, const AuctionConfig& config,
                  std::span<const AgentProfile> profiles, std::uint64_t seed) {
  RowPlan plan;
  for (std::size_t k = 0; k < profiles.size(); ++k) {
    plan.streams.emplace_back(
        derive_stream(seed, StreamTag::kIntrinsicClicks, k));
    plan.probabilities.push_back(profiles[k].ctr);
    plan.rows.push_back(out.intrinsic_row(k + 1).data());
  }
  if (out.has_observations()) {
    for (std::size_t m = 1; m <= config.num_slots; ++m) {
      plan.streams.emplace_back(derive_stream(seed, StreamTag::kObservations, m - 1));
      plan.probabilities.push_back(config.prominence(m));
      plan.rows.push_back(out.observation_row(m).data());
    }
  }
  return plan;
}

void check_inputs(const AuctionConfig& config,
                  std::span<const AgentProfile> profiles) {
  if (profiles.size() != config.num_agents) {
    throw ConfigError("profiles", "profile count does not match num_agents");
  }
  if (config.num_slots > 1 && config.prominences.size() != config.num_slots) {
    throw ConfigError("prominences", "config must be validated before drawing");
  }
}

}  // namespace

ClickRealization draw_realization(const AuctionConfig& config,
                                  std::span<const AgentProfile> profiles,
                                  std::uint64_t seed) {
  check_inputs(config, profiles);
  ClickRealization out(config.num_agents, config.num_slots, config.horizon, seed);
  const RowPlan plan = plan_rows(out, config, profiles, seed);
  const auto rows = static_cast<std::int64_t>(plan.rows.size());
  const std::int64_t horizon = config.horizon;

#pragma omp parallel for collapse(2) schedule(static)
  for (std::int64_t r = 0; r < rows; ++r) {
    for (std::int64_t t = 0; t < horizon; ++t) {
      plan.rows[r][t] = plan.streams[r].bernoulli(
          plan.probabilities[r], static_cast<std::uint64_t>(t));
    }
  }
  return out;
}

ClickRealization draw_realization_serial(const AuctionConfig& config,
                                         std::span<const AgentProfile> profiles,
                                         std::uint64_t seed) {
  check_inputs(config, profiles);
  ClickRealization out(config.num_agents, config.num_slots, config.horizon, seed);
  const RowPlan plan = plan_rows(out, config, profiles, seed);
  for (std::size_t r = 0; r < plan.rows.size(); ++r) {
    for (std::int64_t t = 0; t < config.horizon; ++t) {
      plan.rows[r][t] = plan.streams[r].bernoulli(
          plan.probabilities[r], static_cast<std::uint64_t>(t));
    }
  }
  return out;
}

int realized_click(const ClickRealization& realization, AgentId agent,
                   std::size_t slot, std::int64_t t) {
  if (agent < 1 || agent > realization.num_agents()) {
    throw std::out_of_range(fmt::format("agent {} out of range", agent));
  }
  if (slot < 1 || slot > realization.num_slots()) {
    throw std::out_of_range(fmt::format("slot {} out of range", slot));
  }
  if (t < 1 || t > realization.horizon()) {
    throw std::out_of_range(fmt::format("round {} out of range", t));
  }
  const int intrinsic = realization.intrinsic(agent, t);
  if (!realization.has_observations()) return intrinsic;
  return intrinsic & realization.observation(slot, t);
}

void save_realization(const ClickRealization& realization, std::ostream& out) {
  out << realization.num_agents() << ' ' << realization.horizon() << ' '
      << realization.num_slots() << ' ' << realization.seed() << '\n';
  std::string line(static_cast<std::size_t>(realization.horizon()), '0');
  auto write_row = [&](std::span<const std::uint8_t> row) {
    for (std::size_t t = 0; t < row.size(); ++t) line[t] = row[t] ? '1' : '0';
    out << line << '\n';
  };
  for (AgentId k = 1; k <= realization.num_agents(); ++k) {
    write_row(realization.intrinsic_row(k));
  }
  if (realization.has_observations()) {
    for (std::size_t m = 1; m <= realization.num_slots(); ++m) {
      write_row(realization.observation_row(m));
    }
  }
}

ClickRealization load_realization(std::istream& in) {
  std::size_t k = 0, m = 0;
  std::int64_t t = 0;
  std::uint64_t seed = 0;
  if (!(in >> k >> t >> m >> seed) || k == 0 || m == 0 || t < 1) {
    throw std::runtime_error("realization: malformed header");
  }
  ClickRealization out(k, m, t, seed);
  auto read_row = [&](std::span<std::uint8_t> row, const char* what) {
    std::string line;
    if (!(in >> line) || line.size() != row.size()) {
      throw std::runtime_error(fmt::format("realization: bad {} row", what));
    }
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] != '0' && line[i] != '1') {
        throw std::runtime_error("realization: entries must be 0 or 1");
      }
      row[i] = static_cast<std::uint8_t>(line[i] - '0');
    }
  };
  for (AgentId a = 1; a <= k; ++a) read_row(out.intrinsic_row(a), "intrinsic");
  if (out.has_observations()) {
    for (std::size_t s = 1; s <= m; ++s) read_row(out.observation_row(s), "observation");
  }
  return out;
}

}  // namespace ducb
