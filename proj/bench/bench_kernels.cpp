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

// Parallel kernels against their serial twins.

#include <memory>

#include <benchmark/benchmark.h>

#include "ducb/batch.hpp"
#include "ducb/environment.hpp"
#include "ducb/mechanism.hpp"
#include "ducb/strategy_lab.hpp"

namespace ducb {
namespace {

AuctionConfig bench_config(std::size_t k, std::size_t m, std::int64_t horizon) {
  AuctionConfig c;
  c.num_agents = k;
  c.num_slots = m;
  if (m > 1) c.lambdas.assign(m - 1, 0.7);
  c.horizon = horizon;
  c.delta = 0.2;
  c.v_max = 1.0;
  c.seed = 3;
  return validate_config(c);
}

std::vector<AgentProfile> bench_profiles(std::size_t k) {
  std::vector<AgentProfile> out;
  for (std::size_t i = 0; i < k; ++i) {
    const double ctr = 0.9 - 0.8 * static_cast<double>(i) / static_cast<double>(k);
    out.push_back({i + 1, ctr, 1.0, 1.0});
  }
  return out;
}

void BM_DrawRealization(benchmark::State& state) {
  const auto c = bench_config(8, 3, state.range(0));
  const auto p = bench_profiles(8);
  for (auto _ : state) benchmark::DoNotOptimize(draw_realization(c, p, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 11);
}

void BM_DrawRealizationSerial(benchmark::State& state) {
  const auto c = bench_config(8, 3, state.range(0));
  const auto p = bench_profiles(8);
  for (auto _ : state) benchmark::DoNotOptimize(draw_realization_serial(c, p, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 11);
}

void BM_RunSeeds(benchmark::State& state) {
  const auto c = bench_config(5, 1, 100000);
  const auto p = bench_profiles(5);
  const auto bids = bids_of(p);
  const auto seeds = seed_range(1, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_seeds(MechanismKind::kDeltaUcbSingle, c, p, bids, seeds));
  }
}

void BM_RunSeedsSerial(benchmark::State& state) {
  const auto c = bench_config(5, 1, 100000);
  const auto p = bench_profiles(5);
  const auto bids = bids_of(p);
  const auto seeds = seed_range(1, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run_seeds_serial(MechanismKind::kDeltaUcbSingle, c, p, bids, seeds));
  }
}

DeviationScenario bench_scenario(const AuctionConfig& c, const std::vector<AgentProfile>& p) {
  auto r = std::make_shared<const ClickRealization>(draw_realization(c, p, c.seed));
  return make_deviation_scenario(c, p, r, 2, 21);
}

void BM_VerifyDsic(benchmark::State& state) {
  const auto c = bench_config(5, 1, 20000);
  const auto p = bench_profiles(5);
  const auto s = bench_scenario(c, p);
  for (auto _ : state) benchmark::DoNotOptimize(verify_dsic(c, p, s));
}

void BM_VerifyDsicSerial(benchmark::State& state) {
  const auto c = bench_config(5, 1, 20000);
  const auto p = bench_profiles(5);
  const auto s = bench_scenario(c, p);
  for (auto _ : state) benchmark::DoNotOptimize(verify_dsic_serial(c, p, s));
}

BENCHMARK(BM_DrawRealization)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DrawRealizationSerial)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RunSeeds)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RunSeedsSerial)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VerifyDsic)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VerifyDsicSerial)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace ducb

BENCHMARK_MAIN();
