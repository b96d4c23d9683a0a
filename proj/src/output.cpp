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

#include <cmath>
#include <limits>
#include <ostream>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "ducb/harness.hpp"

namespace ducb {

namespace {

using nlohmann::ordered_json;

std::string join_numbers(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ';';
    out += format_number(values[i]);
  }
  return out;
}

std::string join_ids(std::span<const AgentId> ids) {
  return fmt::format("{}", fmt::join(ids, ";"));
}

std::string join_flags(const std::set<std::string>& flags) {
  return fmt::format("{}", fmt::join(flags, ";"));
}

}  // namespace

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  return fmt::format("{:.12f}", value);
}

RoundLogWriter::RoundLogWriter(std::ostream& out, OutputFormat format, RoundsLog filter)
    : out_(out), format_(format), filter_(filter) {
  if (format_ == OutputFormat::kCsv && filter_ != RoundsLog::kNone) {
    out_ << kRoundLogHeader << '\n';
  }
}

void RoundLogWriter::write(const RoundRecord& record) {
  delta_regret_ += record.delta_regret_increment;
  regret_ += record.regret_increment;
  revenue_ += record.revenue();
  if (filter_ == RoundsLog::kNone) return;
  if (filter_ == RoundsLog::kExploitOnly && record.phase != Phase::kExploitation) return;

  for (const SlotResult& s : record.slots) {
    if (format_ == OutputFormat::kCsv) {
      out_ << fmt::format("{},{},{},{},{},{},{},{},{}\n", record.round,
                          phase_name(record.phase), s.slot, s.agent, s.click,
                          format_number(s.payment), format_number(delta_regret_),
                          format_number(regret_), format_number(revenue_));
    } else {
      ordered_json row;
      row["t"] = record.round;
      row["phase"] = phase_name(record.phase);
      row["slot"] = s.slot;
      row["agent"] = s.agent;
      row["click"] = s.click;
      row["payment"] = s.payment;
      row["delta_regret_cum"] = delta_regret_;
      row["regret_cum"] = regret_;
      row["revenue_cum"] = revenue_;
      out_ << row.dump() << '\n';
    }
  }
}

void emit_round_log(std::span<const RoundRecord> records, OutputFormat format,
                    std::ostream& out, RoundsLog filter) {
  RoundLogWriter writer(out, format, filter);
  for (const auto& r : records) writer.write(r);
}

double delta_regret_over_log_t(const RunSummary& summary) {
  if (summary.horizon <= 1) return std::numeric_limits<double>::quiet_NaN();
  return summary.total_delta_regret / std::log(static_cast<double>(summary.horizon));
}

void emit_summary(std::span<const SummaryRow> rows, OutputFormat format,
                  std::ostream& out) {
  if (format == OutputFormat::kCsv) {
    out << "mechanism,num_agents,num_slots,horizon,delta,v_max,seed,replicate,"
           "exploration_rounds_used,total_delta_regret,total_regret,revenue,welfare,"
           "exploration_delta_regret,exploitation_delta_regret,interval_violations,"
           "delta_regret_over_logT,winners,per_agent_utility,flags\n";
  }
  for (const SummaryRow& row : rows) {
    const AuctionConfig& c = row.config;
    const RunSummary& s = row.summary;
    const double ratio = delta_regret_over_log_t(s);
    if (format == OutputFormat::kCsv) {
      out << fmt::format(
          "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
          mechanism_name(row.mechanism), c.num_agents, c.num_slots, c.horizon,
          format_number(c.delta), format_number(c.v_max), c.seed, row.replicate,
          s.exploration_rounds_used, format_number(s.total_delta_regret),
          format_number(s.total_standard_regret), format_number(s.total_revenue),
          format_number(s.total_welfare), format_number(s.exploration_delta_regret),
          format_number(s.exploitation_delta_regret), s.interval_violations,
          std::isnan(ratio) ? std::string("nan") : format_number(ratio),
          join_ids(s.winners), join_numbers(s.per_agent_utility), join_flags(s.flags));
    } else {
      ordered_json j;
      j["mechanism"] = mechanism_name(row.mechanism);
      j["num_agents"] = c.num_agents;
      j["num_slots"] = c.num_slots;
      j["horizon"] = c.horizon;
      j["delta"] = c.delta;
      j["v_max"] = c.v_max;
      j["prominences"] = c.prominences;
      j["seed"] = c.seed;
      j["replicate"] = row.replicate;
      j["exploration_rounds_used"] = s.exploration_rounds_used;
      j["total_delta_regret"] = s.total_delta_regret;
      j["total_regret"] = s.total_standard_regret;
      j["revenue"] = s.total_revenue;
      j["welfare"] = s.total_welfare;
      j["exploration_delta_regret"] = s.exploration_delta_regret;
      j["exploitation_delta_regret"] = s.exploitation_delta_regret;
      j["interval_violations"] = s.interval_violations;
      if (std::isnan(ratio)) {
        j["delta_regret_over_logT"] = nullptr;
      } else {
        j["delta_regret_over_logT"] = ratio;
      }
      j["winners"] = s.winners;
      j["per_agent_utility"] = s.per_agent_utility;
      j["flags"] = s.flags;
      out << j.dump() << '\n';
    }
  }
}

}  // namespace ducb
