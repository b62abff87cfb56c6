#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "unison/core.hpp"

namespace unison {

// ---------------------------------------------------------------------------
// Byzantine strategies. A Byzantine processor exhibits one clock value to all
// neighbors (single shared register), it cannot show different values to
// different sides.

struct FixedValue {
  ClockValue value = 0;
};

/// Writes scheduled by global step index; indices must be strictly increasing.
struct ScriptedWrites {
  std::vector<std::pair<std::int64_t, ClockValue>> writes;
};

struct RandomWalkRange {
  ClockValue lo = 0;
  ClockValue hi = 0;
  std::uint64_t seed = 0;
};

/// Writes (minimum neighbor clock) - offset. offset 0 copies the neighbor,
/// which is the strongest adversary that still leaves the neighbor free to
/// climb past it.
struct ChaseBelow {
  ClockValue offset = 0;
};

struct Silent {};

using ByzantineStrategy =
    std::variant<FixedValue, ScriptedWrites, RandomWalkRange, ChaseBelow, Silent>;

// ---------------------------------------------------------------------------
// Activation policies: when a faulty processor is offered a step. Faulty
// processors are exempt from scheduler fairness, the policy is the only
// throttle on them.

struct NeverActivate {};

/// Fires at step indices congruent to 0 mod k. EveryK(1) preempts every step
/// and starves correct processors under a central scheduler by design.
struct EveryK {
  std::int64_t k = 1;
};

struct WithProbability {
  double p = 0.0;
  std::uint64_t seed = 0;
};

/// Fires exactly at the listed step indices (strictly increasing).
struct ScriptedActivation {
  std::vector<std::int64_t> step_indices;
};

using ActivationPolicy =
    std::variant<NeverActivate, EveryK, WithProbability, ScriptedActivation>;

// ---------------------------------------------------------------------------
// Roles.

enum class RoleKind { Correct, Crashed, Byzantine };

struct ProcessorRole {
  RoleKind kind = RoleKind::Correct;
  std::optional<ByzantineStrategy> strategy;  // set iff Byzantine

  static ProcessorRole correct() { return {RoleKind::Correct, std::nullopt}; }
  static ProcessorRole crashed() { return {RoleKind::Crashed, std::nullopt}; }
  static ProcessorRole byzantine(ByzantineStrategy s) {
    return {RoleKind::Byzantine, std::move(s)};
  }

  bool is_correct() const { return kind == RoleKind::Correct; }
  bool is_faulty() const { return kind != RoleKind::Correct; }
};

/// Count of non-Correct roles.
int faulty_count(const std::vector<ProcessorRole>& roles);

/// Mutable adversary state. Only the random walk needs memory: its value
/// stream is indexed by the number of writes already consumed.
struct FaultState {
  std::int64_t walk_draws = 0;
};

/// Decide whether the faulty processor at `self` acts at `step_index`, and
/// with which value. Activation gates first, then the strategy is evaluated
/// against the current configuration (only neighbor clocks are read).
/// Returns the value (nullopt when the processor stays silent) and the
/// updated state; the caller keeps the new state only if the step is taken.
std::pair<std::optional<ClockValue>, FaultState> fault_action(
    const ProcessorRole& role, const ActivationPolicy& activation,
    FaultState state, std::int64_t step_index, const Configuration& view,
    const Topology& topo, ProcessorId self);

/// True when the activation policy fires at this step.
bool activation_fires(const ActivationPolicy& activation,
                      std::int64_t step_index);

/// Validation shared by engine setup: scripted indices strictly increasing,
/// walk lo <= hi, probability within [0, 1], EveryK k >= 1.
void validate_strategy(const ByzantineStrategy& strategy);
void validate_activation(const ActivationPolicy& activation);

// Flag serialization: "crash", "byz:fixed:<v>", "byz:script:<path>",
// "byz:walk:<lo>:<hi>", "byz:chase:<d>", "byz:silent".
ProcessorRole parse_fault_spec(const std::string& spec);
// "never", "every:<k>", "prob:<p>", "script:<path>".
ActivationPolicy parse_activation_spec(const std::string& spec);

}  // namespace unison
