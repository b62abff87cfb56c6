#include "unison/engine.hpp"

#include <algorithm>
#include <json.hpp>
#include <string>

#include "unison/errors.hpp"
#include "unison/rng.hpp"

namespace unison {

namespace {

using OrderedJson = nlohmann::ordered_json;

std::vector<ProcessorRole> normalized_roles(const RunParams& params) {
  if (!params.roles.empty()) return params.roles;
  return std::vector<ProcessorRole>(params.topology.n(),
                                    ProcessorRole::correct());
}

std::vector<RuleMask> enabled_masks(const Configuration& config,
                                    const Topology& topo,
                                    const std::vector<ProcessorRole>& roles) {
  std::vector<RuleMask> masks(roles.size(), 0);
  for (ProcessorId p = 0; p < topo.n(); ++p) {
    if (roles[p].is_correct()) masks[p] = enabled_rules(config, topo, roles, p);
  }
  return masks;
}

[[noreturn]] void invariant_fail(const std::string& what, std::int64_t step) {
  fail(ErrorCode::InvariantViolation,
       what + " at step " + std::to_string(step));
}

void run_debug_checks(const Configuration& pre, const Configuration& post,
                      const std::vector<ProcessorRole>& roles,
                      const Topology& topo, std::int64_t step) {
  IslandPartition before = islands(pre, roles, topo);
  IslandPartition after = islands(post, roles, topo);
  for (const auto& island : before.islands) {
    for (std::size_t k = 1; k < island.size(); ++k) {
      if (!after.same_island(island[0], island[k])) {
        invariant_fail("island split", step);
      }
    }
  }
  if (after.islands.size() > before.islands.size()) {
    invariant_fail("island count increased", step);
  }
}

void check_drift_step(const Configuration& pre, ProcessorId actor,
                      ClockValue written,
                      const std::vector<ProcessorRole>& roles,
                      const Topology& topo, std::int64_t step) {
  Neighbors nb = topo.neighbors(actor);
  for (auto q : {nb.left, nb.right}) {
    if (!q || !roles[*q].is_correct()) continue;
    if (in_unison(pre[actor], pre[*q])) continue;
    if (clock_drift(written, pre[*q]) > clock_drift(pre[actor], pre[*q])) {
      invariant_fail("drift increased toward processor " + std::to_string(*q),
                     step);
    }
  }
}

OrderedJson violations_to_json(const std::vector<FairnessViolation>& list) {
  OrderedJson out = OrderedJson::array();
  for (const FairnessViolation& v : list) {
    OrderedJson item;
    item["processor"] = v.processor;
    item["rule"] = rule_name(v.rule);
    item["from_step"] = v.from_step;
    item["to_step"] = v.to_step;
    out.push_back(std::move(item));
  }
  return out;
}

}  // namespace

Configuration materialize_init(const RunParams& params) {
  const auto roles = normalized_roles(params);
  const Topology& topo = params.topology;
  if (const auto* fixed = std::get_if<Configuration>(&params.init)) {
    if (static_cast<int>(fixed->size()) != topo.n()) {
      fail(ErrorCode::InvalidParams,
           "initial configuration has " + std::to_string(fixed->size()) +
               " clocks for " + std::to_string(topo.n()) + " processors");
    }
    return *fixed;
  }

  const RandomInit& spec = std::get<RandomInit>(params.init);
  if (spec.target_l < 0) {
    fail(ErrorCode::InvalidParams, "target drift must be nonnegative");
  }
  Rng rng(spec.seed);
  Configuration config(topo.n());
  for (auto& clock : config) clock = rng.next_in(0, spec.target_l);

  // Force one adjacent correct-correct pair to {0, target_l} so the maximum
  // drift is exactly target_l.
  std::vector<std::pair<ProcessorId, ProcessorId>> pairs;
  const int edge_count = topo.kind() == TopologyKind::Chain ? topo.n() - 1
                                                            : topo.n();
  for (int i = 0; i < edge_count; ++i) {
    int j = (i + 1) % topo.n();
    if (roles[i].is_correct() && roles[j].is_correct()) pairs.push_back({i, j});
  }
  if (pairs.empty()) {
    fail(ErrorCode::InvalidParams,
         "random init needs an adjacent pair of correct processors");
  }
  auto [a, b] = pairs[rng.next_below(pairs.size())];
  config[a] = 0;
  config[b] = spec.target_l;
  return config;
}

void validate_params(const RunParams& params) {
  const auto roles = normalized_roles(params);
  if (static_cast<int>(roles.size()) != params.topology.n()) {
    fail(ErrorCode::InvalidParams,
         "role list has " + std::to_string(roles.size()) + " entries for " +
             std::to_string(params.topology.n()) + " processors");
  }
  if (!params.unchecked && faulty_count(roles) > 1) {
    fail(ErrorCode::InvalidParams,
         "more than one faulty processor (pass unchecked to allow)");
  }
  for (const ProcessorRole& role : roles) {
    if (role.kind == RoleKind::Byzantine) {
      if (!role.strategy) {
        fail(ErrorCode::InvalidParams, "byzantine role without a strategy");
      }
      validate_strategy(*role.strategy);
    }
  }
  validate_activation(params.activation);
  if (params.max_rounds < 0 || params.max_steps < 0) {
    fail(ErrorCode::InvalidParams, "step and round limits must be nonnegative");
  }
  if (const auto* dist = std::get_if<DistributedRandom>(&params.policy)) {
    if (dist->subset_prob <= 0.0 || dist->subset_prob > 1.0) {
      fail(ErrorCode::InvalidParams, "subset probability must be in (0, 1]");
    }
  }
}

RunResult run(const RunParams& params) {
  validate_params(params);
  const auto roles = normalized_roles(params);
  const Topology& topo = params.topology;
  const int n = topo.n();

  Configuration config = materialize_init(params);
  Trace trace;
  trace.topology = topo;
  trace.roles = roles;
  trace.initial = config;

  FairnessLedger ledger(n);
  RoundAccounting rounds(roles);
  SchedulerState sched = make_scheduler_state(params.policy, params.seed);
  std::vector<FaultState> fault_states(n);

  bool inv_seen = inv_holds(config, roles, topo);
  std::int64_t inv_round = 0;
  std::int64_t next_step = 0;

  while (true) {
    if (std::holds_alternative<StopOnInv>(params.stop) && inv_seen) break;
    if (const auto* window = std::get_if<StopOnInvPlusWindow>(&params.stop)) {
      if (inv_seen && rounds.completed() >= inv_round + window->window_rounds) {
        break;
      }
    }
    if (next_step >= params.max_steps) break;
    if (rounds.completed() >= params.max_rounds) break;

    std::vector<RuleMask> enabled = enabled_masks(config, topo, roles);
    std::set<ProcessorId> faulty_ready;
    for (ProcessorId p = 0; p < n; ++p) {
      if (roles[p].is_faulty() && activation_fires(params.activation, next_step)) {
        faulty_ready.insert(p);
      }
    }

    std::optional<ActorChoice> choice =
        select(params.policy, sched, enabled, faulty_ready, ledger, roles);
    if (!choice) break;  // script exhausted

    const Configuration pre = config;
    const std::int64_t round_here = rounds.current_round();
    ledger.count_config(enabled);

    for (const ActorAction& action : *choice) {
      StepRecord rec;
      rec.step = next_step;
      rec.round = round_here;
      rec.actor = action.pid;
      rec.enabled_before = enabled;
      switch (action.kind) {
        case ActorAction::Kind::Rule: {
          // Command value from the transition's pre-configuration: actions of
          // one step are simultaneous.
          ClockValue value = rule_command_value(pre, topo, action.pid, action.rule);
          config[action.pid] = value;
          rec.kind = StepKind::Rule;
          rec.rule = action.rule;
          rec.written = value;
          ledger.on_fired(action.pid, action.rule);
          rounds.on_correct_execution(action.pid, next_step);
          if (params.debug_checks) {
            check_drift_step(pre, action.pid, value, roles, topo, next_step);
          }
          break;
        }
        case ActorAction::Kind::Faulty: {
          auto [value, new_state] =
              fault_action(roles[action.pid], params.activation,
                           fault_states[action.pid], next_step, pre, topo,
                           action.pid);
          fault_states[action.pid] = new_state;
          if (value) config[action.pid] = *value;
          rec.kind = roles[action.pid].kind == RoleKind::Crashed
                         ? StepKind::CrashNoop
                         : StepKind::Byzantine;
          rec.written = value ? *value : config[action.pid];
          break;
        }
        case ActorAction::Kind::Override: {
          config[action.pid] = action.value;
          rec.kind = StepKind::Override;
          rec.written = action.value;
          rounds.on_correct_execution(action.pid, next_step);
          if (params.debug_checks) {
            check_drift_step(pre, action.pid, action.value, roles, topo,
                             next_step);
          }
          break;
        }
      }
      rec.clocks_after = config;
      trace.records.push_back(std::move(rec));
    }

    ledger.on_step();
    for (const ActorAction& action : *choice) ledger.on_executed(action.pid);

    if (params.debug_checks) {
      run_debug_checks(pre, config, roles, topo, next_step);
      if (inv_seen && !inv_holds(config, roles, topo)) {
        invariant_fail("legitimacy lost after being reached", next_step);
      }
    }
    if (!inv_seen && inv_holds(config, roles, topo)) {
      inv_seen = true;
      inv_round = round_here;
    }
    ++next_step;
  }

  trace.round_boundaries = rounds.boundaries();
  RunResult result;
  result.stats = compute_stats(trace, params);
  result.trace = std::move(trace);
  return result;
}

RunStats compute_stats(const Trace& trace, const RunParams& params) {
  const auto roles = normalized_roles(params);
  const Topology& topo = trace.topology;
  RunStats stats;
  stats.initial_l = max_drift(trace.initial, roles, topo).l;

  std::optional<std::size_t> establish;  // record index establishing legitimacy
  if (inv_holds(trace.initial, roles, topo)) {
    stats.stabilized = true;
    stats.rounds_to_inv = 0;
    stats.steps_to_inv = 0;
    establish = 0;
  } else {
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
      // Legitimacy is judged at transition boundaries; configurations between
      // simultaneous actions of one step are bookkeeping intermediates.
      bool transition_end = i + 1 == trace.records.size() ||
                            trace.records[i + 1].step != trace.records[i].step;
      if (!transition_end) continue;
      if (inv_holds(trace.records[i].clocks_after, roles, topo)) {
        stats.stabilized = true;
        stats.rounds_to_inv = trace.records[i].round;
        stats.steps_to_inv = static_cast<std::int64_t>(i) + 1;
        establish = i + 1;
        break;
      }
    }
  }

  stats.drift_by_round.push_back(stats.initial_l);
  std::size_t cursor = 0;
  for (std::int64_t boundary : trace.round_boundaries) {
    // Last record of the boundary transition holds the round's final clocks.
    while (cursor + 1 < trace.records.size() &&
           trace.records[cursor].step <= boundary &&
           trace.records[cursor + 1].step <= boundary) {
      ++cursor;
    }
    stats.drift_by_round.push_back(
        max_drift(trace.records[cursor].clocks_after, roles, topo).l);
  }

  stats.increments_post_inv.assign(roles.size(), std::nullopt);
  if (establish) {
    StepSpan span{static_cast<std::int64_t>(*establish),
                  static_cast<std::int64_t>(trace.records.size()) - 1};
    for (ProcessorId p = 0; p < topo.n(); ++p) {
      if (!roles[p].is_correct()) continue;
      stats.increments_post_inv[p] = increment_count(trace, p, span);
    }
  }

  int correct = topo.n() - faulty_count(roles);
  stats.fairness_audit = audit_fairness(trace, 10 * std::max(correct, 1));
  return stats;
}

std::string stats_to_json(const RunStats& stats) {
  OrderedJson out;
  out["stabilized"] = stats.stabilized;
  out["rounds_to_inv"] =
      stats.rounds_to_inv ? OrderedJson(*stats.rounds_to_inv) : OrderedJson();
  out["steps_to_inv"] =
      stats.steps_to_inv ? OrderedJson(*stats.steps_to_inv) : OrderedJson();
  out["initial_l"] = stats.initial_l;
  out["drift_by_round"] = stats.drift_by_round;
  OrderedJson increments = OrderedJson::array();
  for (const auto& count : stats.increments_post_inv) {
    increments.push_back(count ? OrderedJson(*count) : OrderedJson());
  }
  out["increments_post_inv"] = std::move(increments);
  OrderedJson audit;
  audit["strong_violations"] =
      violations_to_json(stats.fairness_audit.strong_violations);
  audit["weak_violations"] =
      violations_to_json(stats.fairness_audit.weak_violations);
  out["fairness_audit"] = std::move(audit);
  return out.dump(2) + "\n";
}

}  // namespace unison
