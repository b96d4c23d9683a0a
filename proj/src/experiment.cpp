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

#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "ducb/harness.hpp"
#include "ducb/rng.hpp"

namespace ducb {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(std::string_view key, std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(std::string(key),
                      fmt::format("{}: '{}' is not a number", key, text));
  }
  return value;
}

// Accepts plain integers and integral reals such as 1e5.
std::uint64_t parse_unsigned(std::string_view key, std::string_view text) {
  text = trim(text);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec == std::errc() && ptr == text.data() + text.size() && !text.empty()) {
    return value;
  }
  const double real = parse_real(key, text);
  if (real < 0.0 || real != std::floor(real) || real > 1.8e19) {
    throw ConfigError(std::string(key),
                      fmt::format("{}: '{}' is not a non-negative integer", key, text));
  }
  return static_cast<std::uint64_t>(real);
}

template <typename T, typename Parse>
std::vector<T> parse_list(std::string_view key, std::string_view text, Parse parse) {
  std::vector<T> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(static_cast<T>(parse(key, text.substr(start, comma - start))));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

using Setter = std::function<void(ExperimentSpec&, std::string_view, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"num_agents", [](auto& s, auto k, auto v) { s.base.num_agents = parse_unsigned(k, v); }},
      {"num_slots", [](auto& s, auto k, auto v) { s.base.num_slots = parse_unsigned(k, v); }},
      {"horizon",
       [](auto& s, auto k, auto v) {
         s.base.horizon = static_cast<std::int64_t>(parse_unsigned(k, v));
       }},
      {"delta", [](auto& s, auto k, auto v) { s.base.delta = parse_real(k, v); }},
      {"v_max", [](auto& s, auto k, auto v) { s.base.v_max = parse_real(k, v); }},
      {"seed", [](auto& s, auto k, auto v) { s.base.seed = parse_unsigned(k, v); }},
      {"prominences",
       [](auto& s, auto k, auto v) { s.base.prominences = parse_list<double>(k, v, parse_real); }},
      {"lambdas",
       [](auto& s, auto k, auto v) { s.base.lambdas = parse_list<double>(k, v, parse_real); }},
      {"ctrs", [](auto& s, auto k, auto v) { s.ctrs = parse_list<double>(k, v, parse_real); }},
      {"valuations",
       [](auto& s, auto k, auto v) { s.valuations = parse_list<double>(k, v, parse_real); }},
      {"bids", [](auto& s, auto k, auto v) { s.bids = parse_list<double>(k, v, parse_real); }},
      {"ctr_lo", [](auto& s, auto k, auto v) { s.generator.ctr_lo = parse_real(k, v); }},
      {"ctr_hi", [](auto& s, auto k, auto v) { s.generator.ctr_hi = parse_real(k, v); }},
      {"valuation_lo",
       [](auto& s, auto k, auto v) { s.generator.valuation_lo = parse_real(k, v); }},
      {"mechanism",
       [](auto& s, auto k, auto v) {
         const auto kind = parse_mechanism(trim(v));
         if (!kind) {
           throw ConfigError(std::string(k),
                             fmt::format("mechanism: unknown kind '{}'", trim(v)));
         }
         s.mechanism = *kind;
       }},
      {"sweep_horizon",
       [](auto& s, auto k, auto v) {
         s.sweep_horizon = parse_list<std::int64_t>(k, v, parse_unsigned);
       }},
      {"sweep_delta",
       [](auto& s, auto k, auto v) { s.sweep_delta = parse_list<double>(k, v, parse_real); }},
      {"sweep_num_agents",
       [](auto& s, auto k, auto v) {
         s.sweep_num_agents = parse_list<std::size_t>(k, v, parse_unsigned);
       }},
      {"sweep_num_slots",
       [](auto& s, auto k, auto v) {
         s.sweep_num_slots = parse_list<std::size_t>(k, v, parse_unsigned);
       }},
      {"sweep_seeds",
       [](auto& s, auto k, auto v) {
         s.sweep_seeds = parse_list<std::uint64_t>(k, v, parse_unsigned);
       }},
  };
  return table;
}

}  // namespace

ExperimentSpec parse_experiment(std::string_view text) {
  ExperimentSpec spec;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find('\n', start), text.size());
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", fmt::format("line {}: expected 'key = value'", line_no));
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ConfigError(std::string(key),
                        fmt::format("line {}: unknown key '{}'", line_no, key));
    }
    if (!seen.insert(std::string(key)).second) {
      throw ConfigError(std::string(key),
                        fmt::format("line {}: duplicate key '{}'", line_no, key));
    }
    it->second(spec, key, value);
  }
  return spec;
}

ExperimentSpec load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config", fmt::format("cannot open config '{}'", path.string()));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment(buffer.str());
}

std::vector<AgentProfile> build_profiles(const ExperimentSpec& spec,
                                         const AuctionConfig& config,
                                         std::uint64_t profile_seed) {
  const std::size_t k = config.num_agents;
  std::vector<AgentProfile> profiles(k);
  if (!spec.ctrs.empty()) {
    if (spec.ctrs.size() != k) {
      throw ConfigError("ctrs", fmt::format("ctrs has {} entries but num_agents is {}",
                                            spec.ctrs.size(), k));
    }
    if (spec.valuations.size() != k) {
      throw ConfigError("valuations",
                        fmt::format("valuations has {} entries but num_agents is {}",
                                    spec.valuations.size(), k));
    }
    for (std::size_t i = 0; i < k; ++i) {
      profiles[i] = {i + 1, spec.ctrs[i], spec.valuations[i], spec.valuations[i]};
    }
  } else {
    const ProfileGenerator& g = spec.generator;
    if (!(0.0 <= g.ctr_lo && g.ctr_lo <= g.ctr_hi && g.ctr_hi <= 1.0)) {
      throw ConfigError("ctr_lo", "need 0 <= ctr_lo <= ctr_hi <= 1");
    }
    if (!(0.0 <= g.valuation_lo && g.valuation_lo <= config.v_max)) {
      throw ConfigError("valuation_lo", "need 0 <= valuation_lo <= v_max");
    }
    Rng rng(profile_seed);
    for (std::size_t i = 0; i < k; ++i) {
      const double ctr = rng.uniform(g.ctr_lo, g.ctr_hi);
      const double value = rng.uniform(g.valuation_lo, config.v_max);
      profiles[i] = {i + 1, ctr, value, value};
    }
  }
  if (!spec.bids.empty()) {
    if (spec.bids.size() != k) {
      throw ConfigError("bids", fmt::format("bids has {} entries but num_agents is {}",
                                            spec.bids.size(), k));
    }
    for (std::size_t i = 0; i < k; ++i) profiles[i].bid = spec.bids[i];
  }
  validate_profiles(config, profiles);
  return profiles;
}

MechanismKind mechanism_for(const ExperimentSpec& spec, const AuctionConfig& config) {
  if (spec.mechanism) return *spec.mechanism;
  return config.num_slots == 1 ? MechanismKind::kDeltaUcbSingle
                               : MechanismKind::kDeltaUcbMulti;
}

std::uint64_t cell_seed(std::uint64_t master, std::int64_t horizon, double delta,
                        std::size_t num_agents, std::size_t num_slots,
                        std::uint64_t replicate) {
  std::uint64_t h = derive_stream(master, StreamTag::kSweepCell, replicate);
  h = mix64(h ^ static_cast<std::uint64_t>(horizon));
  h = mix64(h ^ std::bit_cast<std::uint64_t>(delta));
  h = mix64(h ^ num_agents);
  return mix64(h ^ (num_slots << 32));
}

namespace {

template <typename T>
std::vector<T> axis_or(const std::vector<T>& axis, T fallback) {
  return axis.empty() ? std::vector<T>{fallback} : axis;
}

}  // namespace

std::vector<SweepCell> expand_sweep(const ExperimentSpec& spec) {
  const auto horizons = axis_or(spec.sweep_horizon, spec.base.horizon);
  const auto deltas = axis_or(spec.sweep_delta, spec.base.delta);
  const auto agents = axis_or(spec.sweep_num_agents, spec.base.num_agents);
  const auto slots = axis_or(spec.sweep_num_slots, spec.base.num_slots);
  const auto replicates = axis_or(spec.sweep_seeds, std::uint64_t{0});

  std::vector<SweepCell> cells;
  for (auto horizon : horizons) {
    for (auto delta : deltas) {
      for (auto k : agents) {
        for (auto m : slots) {
          for (auto replicate : replicates) {
            SweepCell cell;
            cell.index = cells.size();
            cell.replicate = replicate;
            AuctionConfig c = spec.base;
            c.horizon = horizon;
            c.delta = delta;
            c.num_agents = k;
            c.num_slots = m;
            if (m != spec.base.num_slots && spec.base.prominences.size() != m) {
              // Swept slot counts take their prefix of the base prominences.
              if (spec.base.prominences.size() > m) c.prominences.resize(m);
            }
            c.seed = cell_seed(spec.base.seed, horizon, delta, k, m, replicate);
            cell.config = validate_config(std::move(c));
            const std::uint64_t profile_seed =
                mix64(derive_stream(spec.base.seed, StreamTag::kProfiles, replicate) ^ k);
            cell.profiles = build_profiles(spec, cell.config, profile_seed);
            cells.push_back(std::move(cell));
          }
        }
      }
    }
  }
  return cells;
}

}  // namespace ducb
