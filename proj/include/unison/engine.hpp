#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "unison/adversary.hpp"
#include "unison/analysis.hpp"
#include "unison/core.hpp"
#include "unison/scheduler.hpp"
#include "unison/trace.hpp"

namespace unison {

/// Seeded random initial configuration with an exact maximum drift: clocks
/// are drawn uniformly in [0, target_l], then one adjacent correct-correct
/// pair is forced to {0, target_l}. Requires such a pair to exist.
struct RandomInit {
  ClockValue target_l = 0;
  std::uint64_t seed = 0;
};

using InitSpec = std::variant<Configuration, RandomInit>;

struct StopOnInv {};
struct StopOnInvPlusWindow {
  std::int64_t window_rounds = 0;
};
struct StopExhaust {};

using StopCondition = std::variant<StopOnInv, StopOnInvPlusWindow, StopExhaust>;

struct RunParams {
  Topology topology{TopologyKind::Chain, 2};
  std::vector<ProcessorRole> roles;
  InitSpec init = Configuration{};
  SchedulerPolicy policy = CentralStronglyFair{};
  ActivationPolicy activation = NeverActivate{};
  std::int64_t max_rounds = 10000;
  std::int64_t max_steps = 100000;
  StopCondition stop = StopOnInv{};
  std::uint64_t seed = 0;
  /// Lifts the at-most-one-faulty-processor check.
  bool unchecked = false;
  /// Asserts island closure, drift monotonicity and legitimacy closure after
  /// every step (InvariantViolation on failure). Meaningful for central runs.
  bool debug_checks = false;
};

/// Resolves the init spec to a concrete configuration.
Configuration materialize_init(const RunParams& params);

/// Parameter validation as used by run(): sizes, role count (<= 1 faulty
/// unless unchecked), strategy and activation well-formedness.
void validate_params(const RunParams& params);

struct RunStats {
  bool stabilized = false;
  std::optional<std::int64_t> rounds_to_inv;
  std::optional<std::int64_t> steps_to_inv;
  ClockValue initial_l = 0;
  /// Maximum drift of the initial configuration, then at every round close.
  std::vector<ClockValue> drift_by_round;
  /// Per processor, strict clock increases after the legitimacy point
  /// (nullopt for faulty processors).
  std::vector<std::optional<std::int64_t>> increments_post_inv;
  AuditReport fairness_audit;
};

struct RunResult {
  Trace trace;
  RunStats stats;
};

/// Executes a run to its stop condition. Steps follow the scheduler policy;
/// under non-scripted central policies a ready faulty processor preempts the
/// step (it is outside the fairness queue); under Synchronous/Distributed its
/// write joins the step's simultaneous actions. Errors: Deadlock (no actor
/// available), Overflow, ScriptViolation.
RunResult run(const RunParams& params);

/// Derives stats from a trace (used by run() itself and by replay): the
/// legitimacy point, round drift series, post-legitimacy increments and a
/// fairness audit at bound 10 * correct_count.
RunStats compute_stats(const Trace& trace, const RunParams& params);

/// Stats serialization (stable field order, snake_case keys).
std::string stats_to_json(const RunStats& stats);

}  // namespace unison
