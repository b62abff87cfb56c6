#include "unison/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "unison/errors.hpp"
#include "unison/scenarios.hpp"

namespace unison {

namespace {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot read '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out << content;
  if (!out) fail(ErrorCode::IoError, "write to '" + path + "' failed");
}

std::optional<Configuration> try_parse_clocks(const std::string& text) {
  Configuration clocks;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string token = text.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t lo = token.find_first_not_of(" \t");
    std::size_t hi = token.find_last_not_of(" \t");
    if (lo == std::string::npos) return std::nullopt;
    token = token.substr(lo, hi - lo + 1);
    ClockValue value = 0;
    auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      return std::nullopt;
    }
    clocks.push_back(value);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return clocks;
}

const std::set<std::string>& known_config_keys() {
  static const std::set<std::string> keys = {
      "topology", "size",       "init",     "drift",  "faulty",
      "fault",    "activation", "scheduler", "max_rounds", "max_steps",
      "unchecked", "target",    "t",        "a",      "trials",
      "seed",     "trace",      "stats"};
  return keys;
}

void apply_config_json(const std::string& text, CliConfig& cfg,
                       bool& seed_in_config,
                       std::vector<std::string>& problems) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    problems.push_back(std::string("config: not valid JSON (") + e.what() +
                       ")");
    return;
  }
  if (!doc.is_object()) {
    problems.push_back("config: top level must be an object");
    return;
  }
  for (const auto& [key, value] : doc.items()) {
    if (!known_config_keys().count(key)) {
      problems.push_back("config: unknown key '" + key + "'");
      continue;
    }
    try {
      if (key == "topology") {
        cfg.topology = value.get<std::string>();
      } else if (key == "size") {
        cfg.size = value.get<int>();
      } else if (key == "init") {
        cfg.init = value.get<std::string>();
      } else if (key == "drift") {
        cfg.drift = value.get<ClockValue>();
      } else if (key == "faulty") {
        cfg.faulty = value.get<std::vector<ProcessorId>>();
      } else if (key == "fault") {
        cfg.fault = value.get<std::string>();
      } else if (key == "activation") {
        cfg.activation = value.get<std::string>();
      } else if (key == "scheduler") {
        cfg.scheduler = value.get<std::string>();
      } else if (key == "max_rounds") {
        cfg.max_rounds = value.get<std::int64_t>();
      } else if (key == "max_steps") {
        cfg.max_steps = value.get<std::int64_t>();
      } else if (key == "unchecked") {
        cfg.unchecked = value.get<bool>();
      } else if (key == "target") {
        cfg.target = value.get<std::string>();
      } else if (key == "t") {
        cfg.t = value.get<std::int64_t>();
      } else if (key == "a") {
        cfg.a = value.get<ClockValue>();
      } else if (key == "trials") {
        cfg.trials = value.get<int>();
      } else if (key == "seed") {
        cfg.seed = value.get<std::uint64_t>();
        seed_in_config = true;
      } else if (key == "trace") {
        cfg.trace_path = value.get<std::string>();
      } else if (key == "stats") {
        cfg.stats_path = value.get<std::string>();
      }
    } catch (const nlohmann::json::exception&) {
      problems.push_back("config: bad value for '" + key + "'");
    }
  }
}

bool known_check_battery(const std::string& name) {
  static const std::set<std::string> known = {
      "all", "closure", "islands", "drift", "liveness", "fairness"};
  return known.count(name) > 0;
}

/// Resolved run context shared by the run and check subcommands.
struct RunContext {
  Topology topology{TopologyKind::Chain, 2};
  std::vector<ProcessorRole> roles;
  InitSpec init = Configuration{};
};

RunContext build_context(const CliConfig& config) {
  RunContext ctx;
  auto kind = topology_kind_from_name(config.topology.value_or("chain"));
  if (!kind) {
    fail(ErrorCode::InvalidParams,
         "unknown topology '" + *config.topology + "'");
  }

  std::optional<Configuration> clocks;
  int size = config.size.value_or(0);
  const std::string init = config.init.value_or("");
  if (init == "random") {
    if (!config.drift) {
      fail(ErrorCode::InvalidParams, "random init needs --drift");
    }
    if (!config.size) {
      fail(ErrorCode::InvalidParams, "random init needs --size");
    }
  } else {
    clocks = try_parse_clocks(init);
    if (!clocks) {
      fail(ErrorCode::InvalidParams, "cannot parse clock list '" + init + "'");
    }
    if (config.size && *config.size != static_cast<int>(clocks->size())) {
      fail(ErrorCode::InvalidParams,
           "--size disagrees with the clock list length");
    }
    size = static_cast<int>(clocks->size());
  }

  ctx.topology = Topology(*kind, size);
  ctx.roles.assign(size, ProcessorRole::correct());
  if (!config.faulty.empty()) {
    ProcessorRole role = parse_fault_spec(config.fault.value_or("crash"));
    for (ProcessorId pid : config.faulty) {
      if (pid < 0 || pid >= size) {
        fail(ErrorCode::InvalidParams,
             "faulty processor " + std::to_string(pid) + " out of range");
      }
      ctx.roles[pid] = role;
    }
  }
  if (clocks) {
    ctx.init = std::move(*clocks);
  } else {
    ctx.init = RandomInit{*config.drift, config.seed};
  }
  return ctx;
}

struct TraceCheck {
  const char* name;
  std::optional<std::int64_t> (*finder)(const Trace&);
};

constexpr TraceCheck kTraceChecks[] = {
    {"island-closure", find_island_closure_violation},
    {"island-count", find_island_count_increase},
    {"drift", find_drift_increase_violation},
    {"legitimacy-closure", find_inv_closure_violation},
};

struct LivenessMiss {
  ProcessorId processor;
  std::int64_t step;
};

/// Post-stabilization liveness on a stored trace. Once legitimacy is
/// established and sustained, a correct processor observed across more than n
/// full rounds must increase its clock at least once: a legitimate gradient
/// spans at most n-1 values, so a processor cannot keep descending through
/// that many rounds. Fewer completed rounds after establishment is
/// insufficient observation, not a violation.
std::optional<LivenessMiss> find_liveness_miss(const Trace& trace) {
  std::int64_t establish_step = -1;
  bool legitimate = inv_holds(trace.initial, trace.roles, trace.topology);
  for (std::size_t i = 0; !legitimate && i < trace.records.size(); ++i) {
    bool transition_end = i + 1 == trace.records.size() ||
                          trace.records[i + 1].step != trace.records[i].step;
    if (!transition_end) continue;
    if (inv_holds(trace.records[i].clocks_after, trace.roles,
                  trace.topology)) {
      legitimate = true;
      establish_step = trace.records[i].step;
    }
  }
  if (!legitimate) return std::nullopt;

  // Observe only the sustained-legitimacy prefix; a later loss is the closure
  // battery's finding.
  std::optional<std::int64_t> lost = find_inv_closure_violation(trace);
  std::vector<std::int64_t> closed;
  for (std::int64_t b : trace.round_boundaries) {
    if (b > establish_step && (!lost || b < *lost)) closed.push_back(b);
  }
  const int n = trace.topology.n();
  if (static_cast<int>(closed.size()) < n + 1) return std::nullopt;

  // Boundaries are step values; multi-actor transitions share a step, so the
  // window is converted to record indexes through the ordered records.
  auto first_after = [&](std::int64_t step) {
    return static_cast<std::int64_t>(std::distance(
        trace.records.begin(),
        std::upper_bound(trace.records.begin(), trace.records.end(), step,
                         [](std::int64_t s, const StepRecord& r) {
                           return s < r.step;
                         })));
  };
  StepSpan span{first_after(closed[0]), first_after(closed[n]) - 1};
  for (ProcessorId p = 0; p < n; ++p) {
    if (!trace.roles[p].is_correct()) continue;
    if (increment_count(trace, p, span) == 0) {
      return LivenessMiss{p, closed[n]};
    }
  }
  return std::nullopt;
}

int execute_run(const CliConfig& config) {
  RunContext ctx = build_context(config);
  RunParams params;
  params.topology = ctx.topology;
  params.roles = std::move(ctx.roles);
  params.init = std::move(ctx.init);
  params.policy =
      parse_scheduler_spec(config.scheduler.value_or("strongly-fair"),
                           config.seed);
  params.activation =
      parse_activation_spec(config.activation.value_or("never"));
  if (config.max_rounds) params.max_rounds = *config.max_rounds;
  if (config.max_steps) params.max_steps = *config.max_steps;
  params.seed = config.seed;
  params.unchecked = config.unchecked;

  RunResult result = run(params);
  if (config.trace_path) {
    write_text_file(*config.trace_path, encode_trace(result.trace));
  }
  if (config.stats_path) {
    write_text_file(*config.stats_path, stats_to_json(result.stats));
  }

  // Per-step safety holds for single-actor schedules; simultaneous
  // activations (synchronous, distributed) can break it legitimately, so
  // those runs are judged on stabilization alone.
  if (policy_is_central(params.policy)) {
    for (const TraceCheck& check : kTraceChecks) {
      if (auto step = check.finder(result.trace)) {
        std::cerr << "violation: " << check.name << " at step " << *step
                  << "\n";
        return kExitViolation;
      }
    }
  }

  const RunStats& stats = result.stats;
  if (!stats.stabilized) {
    std::cout << "not stabilized within limits (steps=" <<
        result.trace.records.size()
              << ", rounds=" << result.trace.round_boundaries.size() << ")\n";
    return kExitNotStabilized;
  }
  std::cout << "stabilized: rounds=" << *stats.rounds_to_inv
            << " steps=" << *stats.steps_to_inv
            << " initial_drift=" << stats.initial_l << "\n";
  return kExitOk;
}

int execute_scenario(const CliConfig& config) {
  CatalogOptions options;
  if (config.t) options.t = *config.t;
  if (config.a) options.a = *config.a;
  options.trials = config.trials;
  options.seed = config.seed;

  std::vector<Scenario> scenarios =
      make_catalog_scenarios(config.target, options);
  int passed = 0;
  bool violation = false;
  bool unstabilized = false;
  for (const Scenario& scenario : scenarios) {
    ScenarioOutcome outcome = run_scenario(scenario);
    if (outcome.all_pass) {
      ++passed;
      std::cout << "PASS " << outcome.name << "\n";
    } else {
      for (const auto& [name, result] : outcome.results) {
        if (result.pass) continue;
        std::cerr << "FAIL " << outcome.name << " " << name << ": "
                  << result.detail;
        if (result.step) std::cerr << " (step " << *result.step << ")";
        std::cerr << "\n";
        if (name == "stabilized") {
          unstabilized = true;
        } else {
          violation = true;
        }
      }
    }
    if (scenarios.size() == 1) {
      if (config.trace_path) {
        write_text_file(*config.trace_path, encode_trace(outcome.trace));
      }
      if (config.stats_path) {
        write_text_file(*config.stats_path, stats_to_json(outcome.stats));
      }
    }
  }
  std::cout << passed << "/" << scenarios.size() << " scenarios passed\n";
  if (violation) return kExitViolation;
  if (unstabilized) return kExitNotStabilized;
  return kExitOk;
}

int execute_check(const CliConfig& config) {
  RunContext ctx = build_context(config);
  const Configuration& initial = std::get<Configuration>(ctx.init);
  Trace trace = decode_trace(read_text_file(*config.trace_path), ctx.topology,
                             ctx.roles, initial);

  const std::string battery = config.target.empty() ? "all" : config.target;
  auto applies = [&](const char* name) {
    return battery == "all" || battery == name;
  };
  auto run_check = [&](const TraceCheck& check) -> bool {
    if (auto step = check.finder(trace)) {
      std::cerr << "violation: " << check.name << " at step " << *step << "\n";
      return false;
    }
    return true;
  };
  if (applies("islands")) {
    if (!run_check(kTraceChecks[0])) return kExitViolation;
    if (!run_check(kTraceChecks[1])) return kExitViolation;
  }
  if (applies("drift") && !run_check(kTraceChecks[2])) return kExitViolation;
  if (applies("closure") && !run_check(kTraceChecks[3])) return kExitViolation;
  if (applies("liveness")) {
    if (auto miss = find_liveness_miss(trace)) {
      std::cerr << "violation: liveness (processor " << miss->processor
                << ") at step " << miss->step << "\n";
      return kExitViolation;
    }
  }
  if (applies("fairness")) {
    int correct = ctx.topology.n() - faulty_count(ctx.roles);
    AuditReport report = audit_fairness(trace, 10 * std::max(correct, 1));
    if (!report.ok()) {
      const FairnessViolation& v = report.strong_violations.empty()
                                       ? report.weak_violations[0]
                                       : report.strong_violations[0];
      std::cerr << "violation: fairness (processor " << v.processor << " rule "
                << rule_name(v.rule) << ") between steps " << v.from_step
                << " and " << v.to_step << "\n";
      return kExitViolation;
    }
  }
  std::cout << "ok: " << trace.records.size() << " records checked\n";
  return kExitOk;
}

}  // namespace

CliConfig parse_invocation(const std::vector<std::string>& argv,
                           const std::optional<std::string>& config_json) {
  std::vector<std::string> problems;
  CliConfig cfg;
  bool seed_in_config = false;
  if (config_json) {
    apply_config_json(*config_json, cfg, seed_in_config, problems);
  }

  CLI::App app{"deterministic simulator for a self-stabilizing unison"};
  app.require_subcommand(1);

  std::string topology, init, fault, activation, scheduler;
  std::string target, trace_path, stats_path;
  int size = 0, trials = 0;
  ClockValue drift = 0, a_value = 0;
  std::vector<ProcessorId> faulty;
  std::int64_t max_rounds = 0, max_steps = 0, t_value = 0;
  std::uint64_t seed = 0;
  bool unchecked = false;

  CLI::App* run_cmd = app.add_subcommand("run", "execute a single run");
  run_cmd->add_option("--topology", topology, "chain or ring");
  run_cmd->add_option("--size", size, "processor count");
  run_cmd->add_option("--init", init, "comma separated clocks, or 'random'");
  run_cmd->add_option("--drift", drift, "exact initial drift for random init");
  run_cmd->add_option("--faulty", faulty, "faulty processor id (repeatable)");
  run_cmd->add_option("--fault", fault, "fault behavior spec");
  run_cmd->add_option("--activation", activation, "fault activation spec");
  run_cmd->add_option("--scheduler", scheduler, "scheduler spec");
  run_cmd->add_option("--max-rounds", max_rounds);
  run_cmd->add_option("--max-steps", max_steps);
  run_cmd->add_flag("--unchecked", unchecked, "allow multiple faulty");

  CLI::App* scenario_cmd =
      app.add_subcommand("scenario", "run a packaged scenario");
  scenario_cmd->add_option("name", target, "scenario name");
  scenario_cmd->add_option("--t", t_value, "schedule depth");
  scenario_cmd->add_option("--a", a_value, "base clock value");
  scenario_cmd->add_option("--trials", trials, "sweep trials per topology");

  CLI::App* check_cmd =
      app.add_subcommand("check", "validate a stored trace");
  check_cmd->add_option(
      "battery", target,
      "all, closure, islands, drift, liveness, fairness (default all)");
  check_cmd->add_option("--topology", topology);
  check_cmd->add_option("--size", size);
  check_cmd->add_option("--init", init, "initial clocks of the trace");
  check_cmd->add_option("--faulty", faulty);
  check_cmd->add_option("--fault", fault);

  for (CLI::App* sub : {run_cmd, scenario_cmd, check_cmd}) {
    sub->add_option("--seed", seed);
    sub->add_option("--trace", trace_path, "trace file path");
    sub->add_option("--stats", stats_path, "stats file path");
  }

  try {
    std::vector<std::string> reversed(argv.rbegin(), argv.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    problems.push_back(e.what());
  }

  CLI::App* active = run_cmd->parsed()        ? run_cmd
                     : scenario_cmd->parsed() ? scenario_cmd
                     : check_cmd->parsed()    ? check_cmd
                                              : nullptr;
  if (active == run_cmd) cfg.subcommand = Subcommand::Run;
  if (active == scenario_cmd) cfg.subcommand = Subcommand::Scenario;
  if (active == check_cmd) cfg.subcommand = Subcommand::Check;

  bool seed_from_flag = false;
  if (active) {
    if (active == run_cmd || active == check_cmd) {
      if (active->count("--topology")) cfg.topology = topology;
      if (active->count("--size")) cfg.size = size;
      if (active->count("--init")) cfg.init = init;
      if (active->count("--faulty")) cfg.faulty = faulty;
      if (active->count("--fault")) cfg.fault = fault;
    }
    if (active->count("--seed")) {
      cfg.seed = seed;
      seed_from_flag = true;
    }
    if (active->count("--trace")) cfg.trace_path = trace_path;
    if (active->count("--stats")) cfg.stats_path = stats_path;
    if (active == run_cmd) {
      if (run_cmd->count("--drift")) cfg.drift = drift;
      if (run_cmd->count("--activation")) cfg.activation = activation;
      if (run_cmd->count("--scheduler")) cfg.scheduler = scheduler;
      if (run_cmd->count("--max-rounds")) cfg.max_rounds = max_rounds;
      if (run_cmd->count("--max-steps")) cfg.max_steps = max_steps;
      if (run_cmd->count("--unchecked")) cfg.unchecked = true;
    }
    if (active == scenario_cmd) {
      if (scenario_cmd->count("name")) cfg.target = target;
      if (scenario_cmd->count("--t")) cfg.t = t_value;
      if (scenario_cmd->count("--a")) cfg.a = a_value;
      if (scenario_cmd->count("--trials")) cfg.trials = trials;
    }
    if (active == check_cmd) {
      if (check_cmd->count("battery")) cfg.target = target;
    }
  }

  if (!seed_from_flag && !seed_in_config) {
    if (const char* env = std::getenv("UNISON_SEED")) {
      std::uint64_t value = 0;
      std::string text(env);
      auto [ptr, ec] =
          std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc() || ptr != text.data() + text.size()) {
        problems.push_back("UNISON_SEED is not an unsigned integer");
      } else {
        cfg.seed = value;
      }
    }
  }

  // Semantic validation, collected so one invocation reports every problem.
  auto resolved_size = [&]() -> std::optional<int> {
    if (cfg.init && *cfg.init != "random") {
      if (auto clocks = try_parse_clocks(*cfg.init)) {
        return static_cast<int>(clocks->size());
      }
      return std::nullopt;
    }
    return cfg.size;
  };

  if (cfg.subcommand == Subcommand::Run || cfg.subcommand == Subcommand::Check) {
    const std::string topo_name = cfg.topology.value_or("chain");
    if (!topology_kind_from_name(topo_name)) {
      problems.push_back("unknown topology '" + topo_name + "'");
    }
    if (!cfg.init) {
      problems.push_back("--init is required");
    } else if (*cfg.init == "random") {
      if (cfg.subcommand == Subcommand::Check) {
        problems.push_back("check needs an explicit clock list for --init");
      }
      if (!cfg.drift) problems.push_back("random init needs --drift");
      if (!cfg.size) problems.push_back("random init needs --size");
    } else if (!try_parse_clocks(*cfg.init)) {
      problems.push_back("cannot parse clock list '" + *cfg.init + "'");
    } else if (cfg.size &&
               *cfg.size != static_cast<int>(try_parse_clocks(*cfg.init)->size())) {
      problems.push_back("--size disagrees with the clock list length");
    }
    if (auto n = resolved_size()) {
      const bool ring = topo_name == "ring";
      if (ring && *n < 3) {
        problems.push_back("a ring needs at least 3 processors");
      }
      if (!ring && *n < 2) {
        problems.push_back("a chain needs at least 2 processors");
      }
      std::set<ProcessorId> seen;
      for (ProcessorId pid : cfg.faulty) {
        if (pid < 0 || pid >= *n) {
          problems.push_back("faulty processor " + std::to_string(pid) +
                             " out of range");
        }
        if (!seen.insert(pid).second) {
          problems.push_back("faulty processor " + std::to_string(pid) +
                             " listed twice");
        }
      }
    }
    if (cfg.faulty.size() > 1 && !cfg.unchecked) {
      problems.push_back(
          "multiple faulty processors need --unchecked");
    }
    if (cfg.drift && *cfg.drift < 0) {
      problems.push_back("--drift must be nonnegative");
    }
    if (cfg.max_rounds && *cfg.max_rounds < 0) {
      problems.push_back("--max-rounds must be nonnegative");
    }
    if (cfg.max_steps && *cfg.max_steps < 0) {
      problems.push_back("--max-steps must be nonnegative");
    }
    if (cfg.fault) {
      try {
        ProcessorRole role = parse_fault_spec(*cfg.fault);
        if (role.strategy) validate_strategy(*role.strategy);
      } catch (const SimError& e) {
        // File-backed specs are resolved at execution time.
        if (e.code() != ErrorCode::IoError) {
          problems.push_back(std::string("bad --fault: ") + e.what());
        }
      }
    }
    if (cfg.activation) {
      try {
        validate_activation(parse_activation_spec(*cfg.activation));
      } catch (const SimError& e) {
        if (e.code() != ErrorCode::IoError) {
          problems.push_back(std::string("bad --activation: ") + e.what());
        }
      }
    }
    if (cfg.scheduler) {
      try {
        parse_scheduler_spec(*cfg.scheduler, cfg.seed);
      } catch (const SimError& e) {
        if (e.code() != ErrorCode::IoError) {
          problems.push_back(std::string("bad --scheduler: ") + e.what());
        }
      }
    }
  }

  if (cfg.subcommand == Subcommand::Scenario && active == scenario_cmd) {
    if (cfg.target.empty()) {
      problems.push_back("scenario needs a name");
    } else {
      auto names = catalog_names();
      if (std::find(names.begin(), names.end(), cfg.target) == names.end()) {
        std::string known;
        for (const std::string& name : names) {
          if (!known.empty()) known += ", ";
          known += name;
        }
        problems.push_back("unknown scenario '" + cfg.target + "' (known: " +
                           known + ")");
      }
    }
    if (cfg.t && *cfg.t < 2) problems.push_back("--t must be at least 2");
    if (cfg.trials && *cfg.trials < 1) {
      problems.push_back("--trials must be at least 1");
    }
  }

  if (cfg.subcommand == Subcommand::Check && active == check_cmd) {
    if (!cfg.trace_path) problems.push_back("check needs --trace");
    if (!cfg.target.empty() && !known_check_battery(cfg.target)) {
      problems.push_back("unknown check battery '" + cfg.target + "'");
    }
  }

  if (!problems.empty()) {
    std::string message;
    for (const std::string& p : problems) {
      if (!message.empty()) message += "; ";
      message += p;
    }
    fail(ErrorCode::UsageError, message);
  }
  return cfg;
}

int execute(const CliConfig& config) {
  switch (config.subcommand) {
    case Subcommand::Run:
      return execute_run(config);
    case Subcommand::Scenario:
      return execute_scenario(config);
    case Subcommand::Check:
      return execute_check(config);
  }
  fail(ErrorCode::UsageError, "unknown subcommand");
}

int cli_main(const std::vector<std::string>& argv) {
  try {
    std::vector<std::string> rest;
    std::optional<std::string> config_json;
    for (std::size_t i = 0; i < argv.size(); ++i) {
      if (argv[i] == "--config") {
        if (i + 1 >= argv.size()) {
          fail(ErrorCode::UsageError, "--config needs a file path");
        }
        config_json = read_text_file(argv[++i]);
      } else {
        rest.push_back(argv[i]);
      }
    }
    return execute(parse_invocation(rest, config_json));
  } catch (const SimError& e) {
    std::cerr << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::UsageError:
      case ErrorCode::InvalidParams:
      case ErrorCode::IoError:
        return kExitUsage;
      default:
        return kExitViolation;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitViolation;
  }
}

}  // namespace unison
