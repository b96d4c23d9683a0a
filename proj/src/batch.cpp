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

#include "ducb/batch.hpp"

#include "ducb/environment.hpp"

namespace ducb {

RunSummary run_seed(MechanismKind kind, const AuctionConfig& config,
                    std::span<const AgentProfile> profiles,
                    std::span<const double> bids, std::uint64_t seed) {
  AuctionConfig seeded = config;
  seeded.seed = seed;
  // Already inside a parallel region when called from run_seeds.
  const ClickRealization realization = draw_realization_serial(seeded, profiles, seed);
  return run_mechanism(kind, seeded, profiles, bids, realization).summary;
}

std::vector<RunSummary> run_seeds(MechanismKind kind, const AuctionConfig& config,
                                  std::span<const AgentProfile> profiles,
                                  std::span<const double> bids,
                                  std::span<const std::uint64_t> seeds, int jobs) {
  return parallel_map(seeds.size(), jobs, [&](std::size_t i) {
    return run_seed(kind, config, profiles, bids, seeds[i]);
  });
}

std::vector<RunSummary> run_seeds_serial(MechanismKind kind,
                                         const AuctionConfig& config,
                                         std::span<const AgentProfile> profiles,
                                         std::span<const double> bids,
                                         std::span<const std::uint64_t> seeds) {
  return serial_map(seeds.size(), [&](std::size_t i) {
    return run_seed(kind, config, profiles, bids, seeds[i]);
  });
}

std::vector<std::uint64_t> seed_range(std::uint64_t first, std::size_t count) {
  std::vector<std::uint64_t> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = first + i;
  return out;
}

MechanismKind default_mechanism(const AuctionConfig& config) {
  return config.num_slots == 1 ? MechanismKind::kDeltaUcbSingle
                               : MechanismKind::kDeltaUcbMulti;
}

}  // namespace ducb
