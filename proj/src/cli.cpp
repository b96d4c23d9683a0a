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

#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "ducb/batch.hpp"
#include "ducb/environment.hpp"
#include "ducb/harness.hpp"
#include "ducb/rng.hpp"

namespace ducb {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;

struct Options {
  std::string config;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  std::string out_dir;
  OutputFormat format = OutputFormat::kCsv;
  RoundsLog rounds_log = RoundsLog::kAll;
  int jobs = 0;

  // dsic-check and ir-check
  std::size_t instances = 10;
  std::size_t slots = 1;
  std::int64_t horizon = 5000;
  std::size_t grid = 21;
};

const std::map<std::string, OutputFormat> kFormats = {
    {"csv", OutputFormat::kCsv}, {"jsonl", OutputFormat::kJsonl}};
const std::map<std::string, RoundsLog> kRoundsLogs = {
    {"none", RoundsLog::kNone}, {"all", RoundsLog::kAll},
    {"exploit-only", RoundsLog::kExploitOnly}};

const char* extension(OutputFormat f) { return f == OutputFormat::kCsv ? "csv" : "jsonl"; }

// Output sink: a file under --out, or the caller's stream.
class Sink {
 public:
  Sink(const Options& o, std::string_view stem, std::ostream& fallback) {
    if (o.out_dir.empty()) {
      stream_ = &fallback;
      return;
    }
    std::filesystem::create_directories(o.out_dir);
    const auto path =
        std::filesystem::path(o.out_dir) / fmt::format("{}.{}", stem, extension(o.format));
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    stream_ = &file_;
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

struct Loaded {
  ExperimentSpec spec;
  AuctionConfig config;
  std::vector<AgentProfile> profiles;
  MechanismKind mechanism;
};

std::uint64_t profile_seed_for(std::uint64_t seed, std::size_t num_agents) {
  return mix64(derive_stream(seed, StreamTag::kProfiles, 0) ^ num_agents);
}

void check_mechanism(MechanismKind kind, const AuctionConfig& config) {
  const bool single_only = kind == MechanismKind::kDeltaUcbSingle ||
                           kind == MechanismKind::kPlainUcb ||
                           kind == MechanismKind::kExplorationSeparatedT23;
  if (single_only && config.num_slots != 1) {
    throw ConfigError("mechanism", fmt::format("{} requires num_slots = 1",
                                               mechanism_name(kind)));
  }
  if (kind == MechanismKind::kDeltaUcbMulti && config.num_slots < 2) {
    throw ConfigError("mechanism", "DeltaUCB-Multi requires num_slots > 1");
  }
}

Loaded load(const Options& o) {
  Loaded l;
  l.spec = load_experiment(o.config);
  if (o.seed_opt->count() > 0) l.spec.base.seed = o.seed;
  l.config = validate_config(l.spec.base);
  l.profiles = build_profiles(l.spec, l.config, profile_seed_for(l.config.seed, l.config.num_agents));
  l.mechanism = mechanism_for(l.spec, l.config);
  check_mechanism(l.mechanism, l.config);
  return l;
}

int do_validate(const Options& o, std::ostream& out) {
  const Loaded l = load(o);
  // Sweep cells are validated too.
  const auto cells = expand_sweep(l.spec);
  for (const auto& cell : cells) check_mechanism(mechanism_for(l.spec, cell.config), cell.config);
  out << fmt::format("ok: {} agents, {} slots, horizon {}, {} sweep cells\n",
                     l.config.num_agents, l.config.num_slots, l.config.horizon, cells.size());
  return kExitOk;
}

int do_run(const Options& o, std::ostream& out) {
  const Loaded l = load(o);
  const ClickRealization realization =
      draw_realization(l.config, l.profiles, l.config.seed);

  RunResult result;
  {
    Sink rounds_sink(o, "rounds", out);
    RoundLogWriter writer(rounds_sink.stream(), o.format, o.rounds_log);
    RunOptions options;
    options.on_round = [&](const RoundRecord& r) { writer.write(r); };
    result = run_mechanism(l.mechanism, l.config, l.profiles, bids_of(l.profiles),
                           realization, options);
  }
  Sink summary_sink(o, "summary", out);
  const SummaryRow row{l.mechanism, l.config, 0, std::move(result.summary)};
  emit_summary(std::span(&row, 1), o.format, summary_sink.stream());
  return kExitOk;
}

int do_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  ExperimentSpec spec = load_experiment(o.config);
  if (o.seed_opt->count() > 0) spec.base.seed = o.seed;
  const auto cells = expand_sweep(spec);
  for (const auto& cell : cells) check_mechanism(mechanism_for(spec, cell.config), cell.config);
  err << fmt::format("sweep: {} cells\n", cells.size());

  auto rows = parallel_map(cells.size(), o.jobs, [&](std::size_t i) {
    const SweepCell& cell = cells[i];
    const MechanismKind kind = mechanism_for(spec, cell.config);
    const ClickRealization realization =
        draw_realization_serial(cell.config, cell.profiles, cell.config.seed);
    RunResult r = run_mechanism(kind, cell.config, cell.profiles, bids_of(cell.profiles),
                                realization);
    return SummaryRow{kind, cell.config, cell.replicate, std::move(r.summary)};
  });
  Sink sink(o, "summary", out);
  emit_summary(rows, o.format, sink.stream());
  return kExitOk;
}

std::vector<Instance> check_instances(const Options& o) {
  if (!o.config.empty()) {
    const Loaded l = load(o);
    return {Instance{l.config, l.profiles}};
  }
  CheckSpec spec;
  spec.instances = o.instances;
  spec.instance.num_slots = o.slots;
  spec.instance.horizon = o.horizon;
  spec.instance.min_agents = std::max<std::size_t>(2, o.slots);
  spec.instance.max_agents = std::max<std::size_t>(6, o.slots);
  spec.seed = o.seed_opt->count() > 0 ? o.seed : 1;
  if (o.instances == 0) throw ConfigError("instances", "instances must be positive");
  if (o.slots == 0) throw ConfigError("slots", "slots must be positive");
  if (o.horizon < 1) throw ConfigError("horizon", "horizon must be at least 1");
  return make_instances(spec);
}

int do_dsic_check(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.grid < 2) throw ConfigError("grid", "grid needs at least 2 points");
  const auto instances = check_instances(o);
  const DsicSweepResult result = run_dsic_check(instances, o.grid);

  Sink sink(o, "dsic", out);
  std::ostream& s = sink.stream();
  if (o.format == OutputFormat::kCsv) {
    s << "instance,num_agents,num_slots,deviator,bids_checked,worst_violation,"
         "witness_round,witness_bid,learning_identical,holds\n";
  }
  for (const DsicFinding& f : result.findings) {
    const auto& w = f.report.witness;
    if (o.format == OutputFormat::kCsv) {
      s << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", f.instance, f.num_agents,
                       f.num_slots, f.deviator, f.report.bids_checked,
                       format_number(f.report.worst_violation),
                       w ? fmt::format("{}", w->round) : std::string(),
                       w ? format_number(w->bid) : std::string(),
                       f.report.learning_identical ? 1 : 0, f.report.holds ? 1 : 0);
    } else {
      nlohmann::ordered_json j;
      j["instance"] = f.instance;
      j["num_agents"] = f.num_agents;
      j["num_slots"] = f.num_slots;
      j["deviator"] = f.deviator;
      j["bids_checked"] = f.report.bids_checked;
      j["worst_violation"] = f.report.worst_violation;
      j["witness_round"] = w ? nlohmann::ordered_json(w->round) : nullptr;
      j["witness_bid"] = w ? nlohmann::ordered_json(w->bid) : nullptr;
      j["learning_identical"] = f.report.learning_identical;
      j["holds"] = f.report.holds;
      s << j.dump() << '\n';
    }
  }
  const bool ok = result.holds && result.learning_identical;
  err << fmt::format("dsic-check: {} over {} instances, worst gain {:.3e}{}\n",
                     ok ? "holds" : "VIOLATED", instances.size(), result.worst_violation,
                     result.learning_identical ? "" : ", learning depends on bids");
  return ok ? kExitOk : kExitViolation;
}

int do_ir_check(const Options& o, std::ostream& out, std::ostream& err) {
  const auto instances = check_instances(o);
  const IrSweepResult result = run_ir_check(instances, o.jobs);

  Sink sink(o, "ir", out);
  std::ostream& s = sink.stream();
  if (o.format == OutputFormat::kCsv) {
    s << "instance,num_agents,num_slots,worst_utility,witness_round,witness_agent,holds\n";
  }
  for (const IrFinding& f : result.findings) {
    const auto& w = f.report.witness;
    if (o.format == OutputFormat::kCsv) {
      s << fmt::format("{},{},{},{},{},{},{}\n", f.instance, f.num_agents, f.num_slots,
                       format_number(f.report.worst_utility),
                       w ? fmt::format("{}", w->round) : std::string(),
                       w ? fmt::format("{}", w->agent) : std::string(),
                       f.report.holds ? 1 : 0);
    } else {
      nlohmann::ordered_json j;
      j["instance"] = f.instance;
      j["num_agents"] = f.num_agents;
      j["num_slots"] = f.num_slots;
      j["worst_utility"] = f.report.worst_utility;
      j["witness_round"] = w ? nlohmann::ordered_json(w->round) : nullptr;
      j["witness_agent"] = w ? nlohmann::ordered_json(w->agent) : nullptr;
      j["holds"] = f.report.holds;
      s << j.dump() << '\n';
    }
  }
  err << fmt::format("ir-check: {} over {} instances, worst utility {:.3e}\n",
                     result.holds ? "holds" : "VIOLATED", instances.size(),
                     result.worst_utility);
  return result.holds ? kExitOk : kExitViolation;
}

void add_common(CLI::App* sub, Options& o, bool config_required) {
  auto* config = sub->add_option("--config", o.config, "Experiment file");
  if (config_required) config->required();
  sub->add_option("--out", o.out_dir, "Output directory (default: stdout)");
  sub->add_option("--format", o.format, "Output format")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
  sub->add_option("--jobs", o.jobs, "Worker threads (0 = all)")->check(CLI::NonNegativeNumber);
}

}  // namespace

int cli_run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Truthful UCB auctions for sponsored search", "ducb"};
  app.require_subcommand(1);
  Options o;
  CLI::Option* seed_opt = app.add_option("--seed", o.seed, "Master seed");

  auto* validate = app.add_subcommand("validate", "Check an experiment file");
  auto* run = app.add_subcommand("run", "Run one seeded simulation");
  auto* sweep = app.add_subcommand("sweep", "Run every cell of an experiment grid");
  auto* dsic = app.add_subcommand("dsic-check", "Search for profitable bid deviations");
  auto* ir = app.add_subcommand("ir-check", "Check per-round individual rationality");

  // Every subcommand accepts the shared flags; --seed is bound per subcommand
  // so it may appear after the subcommand name too.
  std::map<CLI::App*, CLI::Option*> seed_opts;
  for (auto* sub : {validate, run, sweep, dsic, ir}) {
    const bool config_required = sub != dsic && sub != ir;
    add_common(sub, o, config_required);
    seed_opts[sub] = sub->add_option("--seed", o.seed, "Master seed");
  }
  run->add_option("--rounds-log", o.rounds_log, "Per-round log")
      ->transform(CLI::CheckedTransformer(kRoundsLogs, CLI::ignore_case));
  for (auto* sub : {dsic, ir}) {
    sub->add_option("--instances", o.instances, "Random instances");
    sub->add_option("--slots", o.slots, "Slots per instance");
    sub->add_option("--horizon", o.horizon, "Horizon per instance");
  }
  dsic->add_option("--grid", o.grid, "Deviation bids per agent");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  CLI::App* chosen = app.get_subcommands().front();
  // Either placement of --seed counts.
  o.seed_opt = seed_opt->count() > 0 ? seed_opt : seed_opts.at(chosen);

  try {
    if (chosen == validate) return do_validate(o, out);
    if (chosen == run) return do_run(o, out);
    if (chosen == sweep) return do_sweep(o, out, err);
    if (chosen == dsic) return do_dsic_check(o, out, err);
    return do_ir_check(o, out, err);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("ducb");
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace ducb
