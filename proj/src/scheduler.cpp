#include "unison/scheduler.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "unison/errors.hpp"

namespace unison {

namespace {

std::int64_t parse_int(const std::string& text, const std::string& what) {
  std::int64_t value = 0;
  auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(ErrorCode::InvalidParams, "bad " + what + ": '" + text + "'");
  }
  return value;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot read '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> tokens;
  std::string token;
  while (in >> token) tokens.push_back(token);
  return tokens;
}

[[noreturn]] void script_fail(std::size_t entry, const std::string& why) {
  fail(ErrorCode::ScriptViolation,
       "script entry " + std::to_string(entry) + ": " + why);
}

const std::vector<ScriptChoice>* script_of(const SchedulerPolicy& policy) {
  if (auto* weak = std::get_if<CentralWeaklyFairScripted>(&policy)) {
    return &weak->choices;
  }
  if (auto* unfair = std::get_if<Unfair>(&policy)) return &unfair->choices;
  if (auto* central = std::get_if<ScriptedCentral>(&policy)) {
    return &central->choices;
  }
  return nullptr;
}

ActorChoice select_scripted(const std::vector<ScriptChoice>& script,
                            SchedulerState& state,
                            const std::vector<RuleMask>& enabled,
                            const std::set<ProcessorId>& faulty_ready,
                            const std::vector<ProcessorRole>& roles) {
  const ScriptChoice& choice = script[state.script_cursor];
  const int n = static_cast<int>(roles.size());
  if (choice.pid < 0 || choice.pid >= n) {
    script_fail(state.script_cursor, "processor out of range");
  }
  ActorAction action;
  action.pid = choice.pid;
  switch (choice.kind) {
    case ScriptChoice::Kind::Correct:
      if (!roles[choice.pid].is_correct()) {
        script_fail(state.script_cursor, "C step at faulty processor");
      }
      if (!mask_contains(enabled[choice.pid], choice.rule)) {
        script_fail(state.script_cursor,
                    std::string(rule_name(choice.rule)) + " not enabled at " +
                        std::to_string(choice.pid));
      }
      action.kind = ActorAction::Kind::Rule;
      action.rule = choice.rule;
      break;
    case ScriptChoice::Kind::Faulty:
      if (roles[choice.pid].is_correct()) {
        script_fail(state.script_cursor, "F step at correct processor");
      }
      if (!faulty_ready.count(choice.pid)) {
        script_fail(state.script_cursor,
                    "faulty processor " + std::to_string(choice.pid) +
                        " not activated this step");
      }
      action.kind = ActorAction::Kind::Faulty;
      break;
    case ScriptChoice::Kind::Override:
      if (!roles[choice.pid].is_correct()) {
        script_fail(state.script_cursor, "O step at faulty processor");
      }
      action.kind = ActorAction::Kind::Override;
      action.value = choice.value;
      break;
  }
  ++state.script_cursor;
  return {action};
}

ActorChoice select_strongly_fair(SchedulerState&,
                                 const std::vector<RuleMask>& enabled,
                                 const std::set<ProcessorId>& faulty_ready,
                                 const FairnessLedger& ledger) {
  // A ready adversary preempts the step; it owes no fairness debt.
  if (!faulty_ready.empty()) {
    ActorAction action;
    action.kind = ActorAction::Kind::Faulty;
    action.pid = *faulty_ready.begin();
    return {action};
  }
  const int n = static_cast<int>(enabled.size());
  ProcessorId best_pid = -1;
  Rule best_rule = Rule::LeftEndUp;
  std::int64_t best_debt = -1;
  for (ProcessorId p = 0; p < n; ++p) {
    for (Rule r : rules_in(enabled[p])) {
      std::int64_t debt = ledger.enabled_since_fire(p, r);
      if (debt > best_debt) {
        best_debt = debt;
        best_pid = p;
        best_rule = r;
      }
    }
  }
  if (best_pid < 0) fail(ErrorCode::Deadlock, "no processor enabled");
  ActorAction action;
  action.kind = ActorAction::Kind::Rule;
  action.pid = best_pid;
  action.rule = best_rule;
  return {action};
}

ActorChoice select_synchronous(const std::vector<RuleMask>& enabled,
                               const std::set<ProcessorId>& faulty_ready) {
  ActorChoice actions;
  const int n = static_cast<int>(enabled.size());
  for (ProcessorId p = 0; p < n; ++p) {
    if (faulty_ready.count(p)) {
      ActorAction action;
      action.kind = ActorAction::Kind::Faulty;
      action.pid = p;
      actions.push_back(action);
      continue;
    }
    auto rules = rules_in(enabled[p]);
    if (rules.empty()) continue;
    ActorAction action;
    action.kind = ActorAction::Kind::Rule;
    action.pid = p;
    action.rule = rules.front();
    actions.push_back(action);
  }
  if (actions.empty()) fail(ErrorCode::Deadlock, "no processor enabled");
  return actions;
}

ActorChoice select_distributed(const DistributedRandom& policy,
                               SchedulerState& state,
                               const std::vector<RuleMask>& enabled,
                               const std::set<ProcessorId>& faulty_ready) {
  ActorChoice candidates;
  const int n = static_cast<int>(enabled.size());
  // Candidate actions in pid order; rule picked uniformly among enabled ones
  // so every local choice stays reachable.
  for (ProcessorId p = 0; p < n; ++p) {
    if (faulty_ready.count(p)) {
      ActorAction action;
      action.kind = ActorAction::Kind::Faulty;
      action.pid = p;
      candidates.push_back(action);
      continue;
    }
    auto rules = rules_in(enabled[p]);
    if (rules.empty()) continue;
    ActorAction action;
    action.kind = ActorAction::Kind::Rule;
    action.pid = p;
    action.rule = rules[state.rng.next_below(rules.size())];
    candidates.push_back(action);
  }
  if (candidates.empty()) fail(ErrorCode::Deadlock, "no processor enabled");

  ActorChoice actions;
  for (const ActorAction& action : candidates) {
    if (state.rng.next_unit() < policy.subset_prob) actions.push_back(action);
  }
  if (actions.empty()) {
    actions.push_back(candidates[state.rng.next_below(candidates.size())]);
  }
  return actions;
}

}  // namespace

std::vector<ScriptChoice> parse_script(const std::string& text) {
  std::vector<ScriptChoice> script;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    auto bad = [&](const std::string& why) {
      fail(ErrorCode::InvalidParams,
           "script line " + std::to_string(line_no) + ": " + why);
    };
    if (tokens[0] == "C") {
      if (tokens.size() != 3) bad("expected 'C <pid> <rule>'");
      auto rule = rule_from_name(tokens[2]);
      if (!rule) bad("unknown rule '" + tokens[2] + "'");
      script.push_back(ScriptChoice::correct(
          static_cast<ProcessorId>(parse_int(tokens[1], "pid")), *rule));
    } else if (tokens[0] == "F") {
      if (tokens.size() != 2) bad("expected 'F <pid>'");
      script.push_back(ScriptChoice::faulty(
          static_cast<ProcessorId>(parse_int(tokens[1], "pid"))));
    } else if (tokens[0] == "O") {
      if (tokens.size() != 3) bad("expected 'O <pid> <value>'");
      script.push_back(ScriptChoice::override_write(
          static_cast<ProcessorId>(parse_int(tokens[1], "pid")),
          parse_int(tokens[2], "value")));
    } else {
      bad("unknown directive '" + tokens[0] + "'");
    }
  }
  return script;
}

std::string format_script(const std::vector<ScriptChoice>& script) {
  std::ostringstream out;
  for (const ScriptChoice& choice : script) {
    switch (choice.kind) {
      case ScriptChoice::Kind::Correct:
        out << "C " << choice.pid << ' ' << rule_name(choice.rule) << '\n';
        break;
      case ScriptChoice::Kind::Faulty:
        out << "F " << choice.pid << '\n';
        break;
      case ScriptChoice::Kind::Override:
        out << "O " << choice.pid << ' ' << choice.value << '\n';
        break;
    }
  }
  return out.str();
}

bool policy_is_scripted(const SchedulerPolicy& policy) {
  return script_of(policy) != nullptr;
}

bool policy_is_central(const SchedulerPolicy& policy) {
  return !std::holds_alternative<Synchronous>(policy) &&
         !std::holds_alternative<DistributedRandom>(policy);
}

SchedulerPolicy parse_scheduler_spec(const std::string& spec,
                                     std::uint64_t seed) {
  if (spec == "strongly-fair") return CentralStronglyFair{seed};
  if (spec == "synchronous") return Synchronous{};
  if (spec.rfind("distributed:", 0) == 0) {
    std::string prob = spec.substr(12);
    try {
      std::size_t used = 0;
      double p = std::stod(prob, &used);
      if (used != prob.size() || p <= 0.0 || p > 1.0) throw std::exception();
      return DistributedRandom{seed, p};
    } catch (const std::exception&) {
      fail(ErrorCode::InvalidParams,
           "bad subset probability '" + prob + "' (need 0 < p <= 1)");
    }
  }
  if (spec.rfind("scripted:", 0) == 0) {
    return ScriptedCentral{parse_script(read_text_file(spec.substr(9)))};
  }
  fail(ErrorCode::InvalidParams, "unknown scheduler '" + spec + "'");
}

// ---------------------------------------------------------------------------
// FairnessLedger

FairnessLedger::FairnessLedger(int n)
    : n_(n),
      counts_(static_cast<std::size_t>(n) * kRuleCount, 0),
      since_exec_(static_cast<std::size_t>(n), 0) {}

std::int64_t FairnessLedger::enabled_since_fire(ProcessorId p, Rule r) const {
  return counts_[static_cast<std::size_t>(p) * kRuleCount +
                 static_cast<std::size_t>(r)];
}

std::int64_t FairnessLedger::steps_since_execution(ProcessorId p) const {
  return since_exec_[static_cast<std::size_t>(p)];
}

void FairnessLedger::count_config(const std::vector<RuleMask>& enabled) {
  for (int p = 0; p < n_; ++p) {
    for (Rule r : rules_in(enabled[p])) {
      ++counts_[static_cast<std::size_t>(p) * kRuleCount +
                static_cast<std::size_t>(r)];
    }
  }
}

void FairnessLedger::on_fired(ProcessorId p, Rule r) {
  counts_[static_cast<std::size_t>(p) * kRuleCount +
          static_cast<std::size_t>(r)] = 0;
}

void FairnessLedger::on_executed(ProcessorId p) {
  since_exec_[static_cast<std::size_t>(p)] = 0;
}

void FairnessLedger::on_step() {
  for (auto& s : since_exec_) ++s;
}

// ---------------------------------------------------------------------------
// RoundAccounting

RoundAccounting::RoundAccounting(const std::vector<ProcessorRole>& roles) {
  correct_.reserve(roles.size());
  for (const ProcessorRole& role : roles) {
    correct_.push_back(role.is_correct());
    if (role.is_correct()) ++correct_total_;
  }
  acted_.assign(roles.size(), false);
}

bool RoundAccounting::on_correct_execution(ProcessorId p, std::int64_t step) {
  if (!correct_[static_cast<std::size_t>(p)]) return false;
  if (!acted_[static_cast<std::size_t>(p)]) {
    acted_[static_cast<std::size_t>(p)] = true;
    ++acted_count_;
  }
  if (acted_count_ == correct_total_) {
    boundaries_.push_back(step);
    ++completed_;
    std::fill(acted_.begin(), acted_.end(), false);
    acted_count_ = 0;
    return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Selection

SchedulerState make_scheduler_state(const SchedulerPolicy& policy,
                                    std::uint64_t run_seed) {
  SchedulerState state;
  std::uint64_t policy_seed = 0;
  if (auto* fair = std::get_if<CentralStronglyFair>(&policy)) {
    policy_seed = fair->seed;
  } else if (auto* dist = std::get_if<DistributedRandom>(&policy)) {
    policy_seed = dist->seed;
  }
  state.rng = Rng(hash_mix(policy_seed, run_seed));
  return state;
}

std::optional<ActorChoice> select(const SchedulerPolicy& policy,
                                  SchedulerState& state,
                                  const std::vector<RuleMask>& enabled,
                                  const std::set<ProcessorId>& faulty_ready,
                                  const FairnessLedger& ledger,
                                  const std::vector<ProcessorRole>& roles) {
  if (const auto* script = script_of(policy)) {
    if (state.script_cursor >= script->size()) return std::nullopt;
    return select_scripted(*script, state, enabled, faulty_ready, roles);
  }
  if (std::holds_alternative<CentralStronglyFair>(policy)) {
    return select_strongly_fair(state, enabled, faulty_ready, ledger);
  }
  if (std::holds_alternative<Synchronous>(policy)) {
    return select_synchronous(enabled, faulty_ready);
  }
  return select_distributed(std::get<DistributedRandom>(policy), state,
                            enabled, faulty_ready);
}

// ---------------------------------------------------------------------------
// Audit

AuditReport audit_fairness(const Trace& trace, std::int64_t bound) {
  AuditReport report;
  const int n = trace.topology.n();
  const std::size_t slots = static_cast<std::size_t>(n) * kRuleCount;

  // Per (processor, rule): configurations enabled since last fire (strong),
  // consecutive configurations enabled (weak), span starts, and a latch so
  // each open span is reported once.
  std::vector<std::int64_t> strong_count(slots, 0), weak_run(slots, 0);
  std::vector<std::int64_t> strong_from(slots, 0), weak_from(slots, 0);
  std::vector<bool> strong_reported(slots, false), weak_reported(slots, false);

  std::size_t i = 0;
  while (i < trace.records.size()) {
    // Records sharing a step index form one transition with one shared
    // pre-configuration.
    std::size_t j = i;
    while (j < trace.records.size() &&
           trace.records[j].step == trace.records[i].step) {
      ++j;
    }
    const StepRecord& head = trace.records[i];
    if (head.enabled_before.size() != static_cast<std::size_t>(n)) {
      fail(ErrorCode::TraceMissingEnabledSets,
           "step " + std::to_string(head.step) +
               " carries no per-processor enabled sets");
    }

    std::vector<bool> fired(slots, false);
    for (std::size_t k = i; k < j; ++k) {
      const StepRecord& rec = trace.records[k];
      if (rec.kind == StepKind::Rule) {
        fired[static_cast<std::size_t>(rec.actor) * kRuleCount +
              static_cast<std::size_t>(*rec.rule)] = true;
      }
    }

    for (int p = 0; p < n; ++p) {
      for (int r = 0; r < kRuleCount; ++r) {
        std::size_t slot =
            static_cast<std::size_t>(p) * kRuleCount + static_cast<std::size_t>(r);
        bool is_enabled =
            mask_contains(head.enabled_before[p], static_cast<Rule>(r));
        if (is_enabled) {
          if (strong_count[slot] == 0) strong_from[slot] = head.step;
          if (weak_run[slot] == 0) weak_from[slot] = head.step;
          ++strong_count[slot];
          ++weak_run[slot];
        } else {
          weak_run[slot] = 0;
          weak_reported[slot] = false;
        }
        if (fired[slot]) {
          // Firing in the transition that reaches the bound still counts as
          // served, so reset before checking thresholds.
          strong_count[slot] = 0;
          strong_reported[slot] = false;
          weak_run[slot] = 0;
          weak_reported[slot] = false;
        } else if (is_enabled) {
          if (strong_count[slot] > bound && !strong_reported[slot]) {
            report.strong_violations.push_back(
                {p, static_cast<Rule>(r), strong_from[slot], head.step});
            strong_reported[slot] = true;
          }
          if (weak_run[slot] >= bound && !weak_reported[slot]) {
            report.weak_violations.push_back(
                {p, static_cast<Rule>(r), weak_from[slot], head.step});
            weak_reported[slot] = true;
          }
        }
      }
    }
    i = j;
  }
  return report;
}

}  // namespace unison
