#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "unison/adversary.hpp"
#include "unison/core.hpp"
#include "unison/trace.hpp"

namespace unison {

/// Two clocks are in unison when they differ by at most one.
inline bool in_unison(ClockValue a, ClockValue b) {
  return clock_drift(a, b) <= 1;
}

/// Maximal contiguous segments of correct processors that are pairwise in
/// unison along the topology. Faulty processors belong to no island. On a
/// ring whose correct processors form one full in-unison cycle the partition
/// is a single island; otherwise islands are maximal arcs.
struct IslandPartition {
  std::vector<std::vector<ProcessorId>> islands;  // each in topology order
  std::vector<int> island_of;                     // -1 for faulty

  bool same_island(ProcessorId a, ProcessorId b) const {
    return island_of[a] >= 0 && island_of[a] == island_of[b];
  }
};

IslandPartition islands(const Configuration& c,
                        const std::vector<ProcessorRole>& roles,
                        const Topology& topo);

/// Maximum clock drift over adjacent correct-correct pairs. Edges touching a
/// faulty processor are excluded; with no correct-correct edge the drift is 0.
struct DriftReport {
  struct Edge {
    ProcessorId a;
    ProcessorId b;
    ClockValue drift;
  };
  ClockValue l = 0;
  std::vector<Edge> edges;  // every correct-correct adjacent pair
};

DriftReport max_drift(const Configuration& c,
                      const std::vector<ProcessorRole>& roles,
                      const Topology& topo);

/// The legitimacy predicate: every adjacent pair of correct processors is in
/// unison. Equivalent to max_drift(...).l <= 1.
bool inv_holds(const Configuration& c, const std::vector<ProcessorRole>& roles,
               const Topology& topo);

/// Inclusive span of record indices into Trace::records.
struct StepSpan {
  std::int64_t from = 0;
  std::int64_t to = -1;  // empty when to < from
};

/// Number of steps within the span where p's clock strictly increased.
std::int64_t increment_count(const Trace& trace, ProcessorId p, StepSpan span);

/// Classification of the limit cycle of an end processor running against a
/// neighbor frozen at clock b:
///   Type1: b, b+1, b, b+1, ...
///   Type2: b, b-1, b, b-1, ...
///   Type3: b, b+1, b-1, b, b+1, b-1, ...
/// Anything else is Other with the detected cycle values. Detection scans the
/// end processor's (clock, rule) states for the first repeat within 64 steps
/// (NoCycleDetected if none).
struct CycleResult {
  enum class Type { Type1, Type2, Type3, Other };
  Type type = Type::Other;
  std::vector<ClockValue> cycle;

  friend bool operator==(const CycleResult&, const CycleResult&) = default;
};

CycleResult end_cycle_type(const Trace& trace, ProcessorId end,
                           ClockValue neighbor_clock);

// ---------------------------------------------------------------------------
// Whole-trace property checks. Each returns the first offending step index,
// or nullopt when the property holds.

/// Island closure: no step separates two processors that shared an island.
std::optional<std::int64_t> find_island_closure_violation(const Trace& trace);

/// Island count monotonicity across correct steps.
std::optional<std::int64_t> find_island_count_increase(const Trace& trace);

/// Drift monotonicity: on a correct step (rule or override), the drift toward
/// each neighbor the actor was out of unison with does not increase.
std::optional<std::int64_t> find_drift_increase_violation(const Trace& trace);

/// Closure of the legitimacy predicate: once inv_holds is true it stays true.
std::optional<std::int64_t> find_inv_closure_violation(const Trace& trace);

}  // namespace unison
