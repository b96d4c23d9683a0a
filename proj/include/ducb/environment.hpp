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

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "ducb/core.hpp"

namespace ducb {

// Pre-drawn click outcomes for a whole run.
//
// intrinsic(i, t) is agent i's click if its ad is seen in round t. For more
// than one slot a second layer observation(m, t) says whether slot m is seen
// in round t; the realized click at slot m is the AND of the two layers. The
// observation layer does not depend on who sits in the slot, so a bid
// deviation replays against exactly the same outcomes.
class ClickRealization {
 public:
  ClickRealization() = default;
  ClickRealization(std::size_t num_agents, std::size_t num_slots,
                   std::int64_t horizon, std::uint64_t seed);

  std::size_t num_agents() const { return num_agents_; }
  std::size_t num_slots() const { return num_slots_; }
  std::int64_t horizon() const { return horizon_; }
  std::uint64_t seed() const { return seed_; }
  bool has_observations() const { return num_slots_ > 1; }

  // 1-based agent, slot and round. Unchecked.
  std::uint8_t intrinsic(AgentId agent, std::int64_t t) const {
    return intrinsic_[(agent - 1) * static_cast<std::size_t>(horizon_) +
                      static_cast<std::size_t>(t - 1)];
  }
  std::uint8_t observation(std::size_t slot, std::int64_t t) const {
    return observations_[(slot - 1) * static_cast<std::size_t>(horizon_) +
                         static_cast<std::size_t>(t - 1)];
  }

  std::span<std::uint8_t> intrinsic_row(AgentId agent);
  std::span<const std::uint8_t> intrinsic_row(AgentId agent) const;
  std::span<std::uint8_t> observation_row(std::size_t slot);
  std::span<const std::uint8_t> observation_row(std::size_t slot) const;

  friend bool operator==(const ClickRealization&,
                         const ClickRealization&) = default;

 private:
  std::size_t num_agents_ = 0;
  std::size_t num_slots_ = 0;
  std::int64_t horizon_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<std::uint8_t> intrinsic_;     // K x T, row-major
  std::vector<std::uint8_t> observations_;  // M x T, only when M > 1
};

// Draws intrinsic[i][t] ~ Bernoulli(ctr_i) and, for M > 1,
// observation[m][t] ~ Bernoulli(prominence_m). Row r of each matrix uses its
// own substream keyed on (seed, matrix, r). Cells are filled in parallel.
ClickRealization draw_realization(const AuctionConfig& config,
                                  std::span<const AgentProfile> profiles,
                                  std::uint64_t seed);

// Serial reference for draw_realization; produces identical matrices.
ClickRealization draw_realization_serial(const AuctionConfig& config,
                                         std::span<const AgentProfile> profiles,
                                         std::uint64_t seed);

// Click seen by the mechanism when `agent` occupies `slot` in round `t`.
// Throws std::out_of_range on bad indices.
int realized_click(const ClickRealization& realization, AgentId agent,
                   std::size_t slot, std::int64_t t);

// Text format: a header line "K T M seed", then K rows of '0'/'1' characters
// (intrinsic clicks) followed, when M > 1, by M observation rows.
void save_realization(const ClickRealization& realization, std::ostream& out);
ClickRealization load_realization(std::istream& in);

}  // namespace ducb
