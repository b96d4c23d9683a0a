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

#include <set>

#include <gtest/gtest.h>

#include "ducb/rng.hpp"

namespace ducb {
namespace {

// First output of SplitMix64 seeded with 0.
TEST(Mix64, KnownValue) {
  EXPECT_EQ(mix64(0), 0xe220a8397b1dcdafULL);
}

TEST(DeriveStream, DistinctTagsAndIndices) {
  std::set<std::uint64_t> keys;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    for (auto tag : {StreamTag::kIntrinsicClicks, StreamTag::kObservations,
                     StreamTag::kProfiles}) {
      for (std::uint64_t i = 0; i < 16; ++i) keys.insert(derive_stream(seed, tag, i));
    }
  }
  EXPECT_EQ(keys.size(), 4u * 3u * 16u);
}

TEST(CounterStream, OrderIndependent) {
  const CounterStream s(derive_stream(9, StreamTag::kIntrinsicClicks, 2));
  std::vector<std::uint64_t> forward, backward(100);
  for (std::uint64_t c = 0; c < 100; ++c) forward.push_back(s.bits(c));
  for (std::uint64_t c = 100; c-- > 0;) backward[c] = s.bits(c);
  EXPECT_EQ(forward, backward);
}

TEST(CounterStream, UniformMoments) {
  const CounterStream s(123);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int c = 0; c < n; ++c) {
    const double u = s.uniform(c);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sq += u * u;
  }
  EXPECT_NEAR(sum / n, 0.5, 0.005);
  EXPECT_NEAR(sq / n - (sum / n) * (sum / n), 1.0 / 12.0, 0.002);
}

TEST(CounterStream, BernoulliEdges) {
  const CounterStream s(5);
  for (int c = 0; c < 1000; ++c) {
    EXPECT_FALSE(s.bernoulli(0.0, c));
    EXPECT_TRUE(s.bernoulli(1.0, c));
  }
}

TEST(Rng, ReproducibleAndInRange) {
  Rng a(77), b(77);
  for (int i = 0; i < 1000; ++i) {
    const double x = a.uniform(0.2, 0.4);
    EXPECT_EQ(x, b.uniform(0.2, 0.4));
    EXPECT_GE(x, 0.2);
    EXPECT_LT(x, 0.4);
    const auto k = a.integer(2, 6);
    EXPECT_EQ(k, b.integer(2, 6));
    EXPECT_GE(k, 2u);
    EXPECT_LE(k, 6u);
  }
}

}  // namespace
}  // namespace ducb
