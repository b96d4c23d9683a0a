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

// Deterministic randomness. Every random quantity in a run is a pure
// function of (seed, tag, index, counter), so rows of a click matrix can be
// filled in any order or in parallel and still come out bit-identical.

#include <cstdint>
#include <random>

namespace ducb {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum class StreamTag : std::uint64_t {
  kIntrinsicClicks = 1,
  kObservations = 2,
  kProfiles = 3,
  kSweepCell = 4,
  kInstance = 5,
};

// Key of the independent substream (seed, tag, index).
constexpr std::uint64_t derive_stream(std::uint64_t seed, StreamTag tag,
                                      std::uint64_t index) noexcept {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ static_cast<std::uint64_t>(tag));
  return mix64(h ^ mix64(index));
}

// Top 53 bits to a double in [0, 1).
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Counter-based stream: the value at `counter` is independent of the order
// in which counters are visited.
class CounterStream {
 public:
  constexpr explicit CounterStream(std::uint64_t key) noexcept : key_(key) {}

  constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
    return mix64(key_ + (counter + 1) * 0x9e3779b97f4a7c15ULL);
  }
  constexpr double uniform(std::uint64_t counter) const noexcept {
    return to_unit(bits(counter));
  }
  constexpr bool bernoulli(double p, std::uint64_t counter) const noexcept {
    return uniform(counter) < p;
  }

 private:
  std::uint64_t key_;
};

// Sequential generator for instance sampling. The engine is fully specified
// by the standard; uniforms are derived by hand so results do not depend on
// the library's distribution implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return to_unit(engine_()); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Integer in [lo, hi].
  std::uint64_t integer(std::uint64_t lo, std::uint64_t hi) {
    return lo + engine_() % (hi - lo + 1);
  }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ducb
