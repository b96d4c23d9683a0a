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

// Many independent runs at once. A single run is always sequential; these
// kernels spread whole runs over OpenMP threads and return results in input
// order, so output never depends on scheduling. Each kernel keeps a serial
// twin that the tests compare against.

#include <cstdint>
#include <exception>
#include <span>
#include <vector>

#include <omp.h>

#include "ducb/core.hpp"
#include "ducb/metrics.hpp"
#include "ducb/strategy_lab.hpp"

namespace ducb {

// Applies fn(i) for i in [0, n) on up to `jobs` threads (0 = OpenMP default).
// Results land at index i. The first exception thrown, by index, is rethrown.
template <typename Fn>
auto parallel_map(std::size_t n, int jobs, Fn&& fn)
    -> std::vector<decltype(fn(std::size_t{}))> {
  using Result = decltype(fn(std::size_t{}));
  std::vector<Result> out(n);
  std::vector<std::exception_ptr> errors(n);
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
  const auto count = static_cast<std::int64_t>(n);

#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      out[i] = fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

template <typename Fn>
auto serial_map(std::size_t n, Fn&& fn) -> std::vector<decltype(fn(std::size_t{}))> {
  std::vector<decltype(fn(std::size_t{}))> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(fn(i));
  return out;
}

// One run per seed: the realization is drawn from that seed and the config's
// seed field is set to it.
RunSummary run_seed(MechanismKind kind, const AuctionConfig& config,
                    std::span<const AgentProfile> profiles,
                    std::span<const double> bids, std::uint64_t seed);

std::vector<RunSummary> run_seeds(MechanismKind kind, const AuctionConfig& config,
                                  std::span<const AgentProfile> profiles,
                                  std::span<const double> bids,
                                  std::span<const std::uint64_t> seeds, int jobs = 0);

std::vector<RunSummary> run_seeds_serial(MechanismKind kind,
                                         const AuctionConfig& config,
                                         std::span<const AgentProfile> profiles,
                                         std::span<const double> bids,
                                         std::span<const std::uint64_t> seeds);

// Seeds first, first+1, ..., first+count-1.
std::vector<std::uint64_t> seed_range(std::uint64_t first, std::size_t count);

MechanismKind default_mechanism(const AuctionConfig& config);

}  // namespace ducb
