#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "unison/adversary.hpp"
#include "unison/core.hpp"
#include "unison/rng.hpp"
#include "unison/rules.hpp"
#include "unison/trace.hpp"

namespace unison {

// ---------------------------------------------------------------------------
// Script entries drive the scripted scheduler variants. Text form, one per
// line: "C <pid> <ruleName>" executes a rule at a correct processor,
// "F <pid>" hands the step to a faulty processor, "O <pid> <value>" performs
// a scripted override write at a correct processor (generic-algorithm replay).

struct ScriptChoice {
  enum class Kind { Correct, Faulty, Override };
  Kind kind = Kind::Correct;
  ProcessorId pid = 0;
  Rule rule = Rule::LeftEndUp;  // Correct only
  ClockValue value = 0;         // Override only

  static ScriptChoice correct(ProcessorId p, Rule r) {
    return {Kind::Correct, p, r, 0};
  }
  static ScriptChoice faulty(ProcessorId p) {
    return {Kind::Faulty, p, Rule::LeftEndUp, 0};
  }
  static ScriptChoice override_write(ProcessorId p, ClockValue v) {
    return {Kind::Override, p, Rule::LeftEndUp, v};
  }
};

std::vector<ScriptChoice> parse_script(const std::string& text);
std::string format_script(const std::vector<ScriptChoice>& script);

// ---------------------------------------------------------------------------
// Policies. CentralStronglyFair realizes a strongly fair central daemon via a
// max-debt discipline over (processor, rule) enabled-counts. The weakly fair
// and unfair daemons exist only in scripted form: a script is the witness of
// the run one wants to study. Synchronous fires every enabled processor each
// step; DistributedRandom fires a seeded nonempty subset.

struct CentralStronglyFair {
  std::uint64_t seed = 0;
};
struct CentralWeaklyFairScripted {
  std::vector<ScriptChoice> choices;
};
struct Unfair {
  std::vector<ScriptChoice> choices;
};
struct Synchronous {};
struct DistributedRandom {
  std::uint64_t seed = 0;
  double subset_prob = 0.5;
};
struct ScriptedCentral {
  std::vector<ScriptChoice> choices;
};

using SchedulerPolicy =
    std::variant<CentralStronglyFair, CentralWeaklyFairScripted, Unfair,
                 Synchronous, DistributedRandom, ScriptedCentral>;

bool policy_is_scripted(const SchedulerPolicy& policy);

/// True for policies that activate one processor per step. The per-step
/// safety properties (island closure, island count, drift monotonicity,
/// legitimacy closure) are guarantees of single-actor execution; simultaneous
/// activations can break them even without faults.
bool policy_is_central(const SchedulerPolicy& policy);

/// Flag serialization: "strongly-fair", "synchronous", "distributed:<prob>",
/// "scripted:<path>" (the file holds script lines as above).
SchedulerPolicy parse_scheduler_spec(const std::string& spec,
                                     std::uint64_t seed);

// ---------------------------------------------------------------------------
// One scheduled action. A step is a nonempty list of actions applied
// simultaneously against the step's pre-configuration; central policies
// always produce exactly one action.

struct ActorAction {
  enum class Kind { Rule, Faulty, Override };
  Kind kind = Kind::Rule;
  ProcessorId pid = 0;
  Rule rule = Rule::LeftEndUp;  // Rule only
  ClockValue value = 0;         // Override only
};

using ActorChoice = std::vector<ActorAction>;

// ---------------------------------------------------------------------------
// Fairness bookkeeping. enabled_since_fire counts configurations in which a
// rule was enabled since it last fired; it pauses while disabled and resets
// only on firing, which is exactly the debt a strongly fair daemon must pay.

class FairnessLedger {
 public:
  explicit FairnessLedger(int n);

  std::int64_t enabled_since_fire(ProcessorId p, Rule r) const;
  std::int64_t steps_since_execution(ProcessorId p) const;

  /// Counts one configuration: every enabled (p, rule) pair gains one.
  void count_config(const std::vector<RuleMask>& enabled);
  void on_fired(ProcessorId p, Rule r);
  void on_executed(ProcessorId p);  // any action by p, including overrides
  void on_step();                   // advances steps_since_execution

  int n() const { return n_; }

 private:
  int n_;
  std::vector<std::int64_t> counts_;  // n * kRuleCount
  std::vector<std::int64_t> since_exec_;
};

/// Round accounting. A round closes at the first step whose execution means
/// every correct processor has acted at least once since the previous close;
/// faulty steps never advance a round.
class RoundAccounting {
 public:
  explicit RoundAccounting(const std::vector<ProcessorRole>& roles);

  std::int64_t completed() const { return completed_; }
  /// 1-based round the next step would belong to.
  std::int64_t current_round() const { return completed_ + 1; }
  const std::vector<std::int64_t>& boundaries() const { return boundaries_; }

  /// Records that `p` (correct) executed at `step`. Returns true when this
  /// closed a round.
  bool on_correct_execution(ProcessorId p, std::int64_t step);

 private:
  std::vector<bool> correct_;
  std::vector<bool> acted_;
  int correct_total_ = 0;
  int acted_count_ = 0;
  std::int64_t completed_ = 0;
  std::vector<std::int64_t> boundaries_;
};

// ---------------------------------------------------------------------------
// Selection.

struct SchedulerState {
  std::size_t script_cursor = 0;
  Rng rng{0};
};

SchedulerState make_scheduler_state(const SchedulerPolicy& policy,
                                    std::uint64_t run_seed);

/// Picks the next step. `enabled` maps every processor to its enabled rules
/// (0 for faulty), `faulty_ready` lists faulty processors whose adversary
/// wants this step. Deadlock when nothing is available. Scripted policies
/// validate the next entry against the current configuration
/// (ScriptViolation) and return nullopt once the script is exhausted.
std::optional<ActorChoice> select(const SchedulerPolicy& policy,
                                  SchedulerState& state,
                                  const std::vector<RuleMask>& enabled,
                                  const std::set<ProcessorId>& faulty_ready,
                                  const FairnessLedger& ledger,
                                  const std::vector<ProcessorRole>& roles);

// ---------------------------------------------------------------------------
// Post-hoc fairness audit over a trace.

struct FairnessViolation {
  ProcessorId processor = 0;
  Rule rule = Rule::LeftEndUp;
  std::int64_t from_step = 0;  // first config counted in the open span
  std::int64_t to_step = 0;    // config where the bound was crossed

  friend bool operator==(const FairnessViolation&,
                         const FairnessViolation&) = default;
};

struct AuditReport {
  /// enabled_since_fire exceeded the bound without the rule firing.
  std::vector<FairnessViolation> strong_violations;
  /// Rule continuously enabled for >= bound consecutive configurations
  /// without firing.
  std::vector<FairnessViolation> weak_violations;

  bool ok() const {
    return strong_violations.empty() && weak_violations.empty();
  }
};

/// Replays the trace's enabled sets. Requires per-step enabled sets
/// (TraceMissingEnabledSets otherwise). An empty trace is vacuously ok.
AuditReport audit_fairness(const Trace& trace, std::int64_t bound);

}  // namespace unison
