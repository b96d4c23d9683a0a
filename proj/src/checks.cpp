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

#include <algorithm>
#include <memory>

#include "ducb/batch.hpp"
#include "ducb/environment.hpp"
#include "ducb/harness.hpp"
#include "ducb/rng.hpp"

namespace ducb {

std::vector<Instance> make_instances(const CheckSpec& spec) {
  std::vector<Instance> out;
  out.reserve(spec.instances);
  for (std::size_t i = 0; i < spec.instances; ++i) {
    out.push_back(random_instance(spec.instance, mix64(spec.seed + i)));
  }
  return out;
}

DsicSweepResult run_dsic_check(std::span<const Instance> instances,
                               std::size_t grid_points) {
  DsicSweepResult result;
  for (std::size_t n = 0; n < instances.size(); ++n) {
    const Instance& inst = instances[n];
    auto realization = std::make_shared<const ClickRealization>(
        draw_realization(inst.config, inst.profiles, inst.config.seed));
    for (const AgentProfile& p : inst.profiles) {
      const DeviationScenario scenario = make_deviation_scenario(
          inst.config, inst.profiles, realization, p.id, grid_points);
      DsicFinding finding;
      finding.instance = n;
      finding.deviator = p.id;
      finding.num_agents = inst.config.num_agents;
      finding.num_slots = inst.config.num_slots;
      finding.report = verify_dsic(inst.config, inst.profiles, scenario);
      result.holds = result.holds && finding.report.holds;
      result.learning_identical =
          result.learning_identical && finding.report.learning_identical;
      result.worst_violation =
          std::max(result.worst_violation, finding.report.worst_violation);
      result.findings.push_back(std::move(finding));
    }
  }
  return result;
}

IrSweepResult run_ir_check(std::span<const Instance> instances, int jobs) {
  auto reports = parallel_map(instances.size(), jobs, [&](std::size_t n) {
    const Instance& inst = instances[n];
    const ClickRealization realization =
        draw_realization_serial(inst.config, inst.profiles, inst.config.seed);
    return verify_ir(inst.config, inst.profiles, realization);
  });
  IrSweepResult result;
  for (std::size_t n = 0; n < reports.size(); ++n) {
    IrFinding finding;
    finding.instance = n;
    finding.num_agents = instances[n].config.num_agents;
    finding.num_slots = instances[n].config.num_slots;
    finding.report = std::move(reports[n]);
    result.holds = result.holds && finding.report.holds;
    result.worst_utility = std::min(result.worst_utility, finding.report.worst_utility);
    result.findings.push_back(std::move(finding));
  }
  return result;
}

}  // namespace ducb
