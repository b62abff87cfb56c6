#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "unison/adversary.hpp"
#include "unison/core.hpp"
#include "unison/rules.hpp"

namespace unison {

/// Step kinds. "override" marks a scripted write at a correct processor; it
/// is used by replay scenarios that drive a generic algorithm instead of the
/// rule set, and is deliberately distinct from "byzantine".
enum class StepKind { Rule, Byzantine, CrashNoop, Override };

const char* step_kind_name(StepKind kind);
std::optional<StepKind> step_kind_from_name(const std::string& name);

struct StepRecord {
  std::int64_t step = 0;   // 0-based, dense
  std::int64_t round = 1;  // 1-based round this step belongs to
  ProcessorId actor = 0;
  StepKind kind = StepKind::Rule;
  std::optional<Rule> rule;  // set iff kind == Rule
  ClockValue written = 0;
  Configuration clocks_after;
  /// Rules enabled per processor in the configuration the step acted on
  /// (0 for faulty processors). For a multi-actor transition every one of its
  /// records carries the transition's pre-configuration sets.
  std::vector<RuleMask> enabled_before;

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct Trace {
  Topology topology{TopologyKind::Chain, 2};
  std::vector<ProcessorRole> roles;
  Configuration initial;
  std::vector<StepRecord> records;
  std::vector<std::int64_t> round_boundaries;  // step indices closing rounds
};

/// JSONL, one object per step:
/// {"step":..,"round":..,"actor":..,"kind":..,"rule":..,"written":..,"clocks":[..]}
/// "rule" appears only on kind=="rule" records. Field order is fixed so equal
/// traces encode to identical bytes.
std::string encode_trace(const Trace& trace);

/// Inverse of encode_trace. The stream stores only the step records; topology,
/// roles and the initial configuration are context the caller supplies.
/// Enabled sets and round boundaries are recomputed (both are derivable).
Trace decode_trace(const std::string& bytes, const Topology& topo,
                   const std::vector<ProcessorRole>& roles,
                   const Configuration& initial);

}  // namespace unison
