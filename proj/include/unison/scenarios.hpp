#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "unison/engine.hpp"

namespace unison {

struct AssertionResult {
  bool pass = false;
  std::string detail;
  std::optional<std::int64_t> step;  // first offending step, when applicable
};

struct ScenarioAssertion {
  std::string name;
  std::function<AssertionResult(const Trace&, const RunStats&)> check;
};

/// A packaged run plus the properties it must exhibit. Self-checking:
/// run_scenario reports pass/fail per assertion.
struct Scenario {
  std::string name;
  RunParams params;
  std::vector<ScenarioAssertion> assertions;
};

struct ScenarioOutcome {
  std::string name;
  bool all_pass = false;
  std::vector<std::pair<std::string, AssertionResult>> results;
  Trace trace;
  RunStats stats;
};

ScenarioOutcome run_scenario(const Scenario& scenario);

// ---------------------------------------------------------------------------
// Catalog.

/// Worst-case replay on a 4-chain (ids 0..3, id 3 Byzantine), initial clocks
/// [a+2t, a+2t, a, a]. All processors are driven by scripted writes: the
/// schedule replays a generic algorithm of the kind whose end processors
/// cycle b, b+1, which the rule set's own end commands do not reproduce.
/// Expected: drift by round [2t, 2(t-1), ..., 2, 1], legitimacy at round t.
/// Requires t >= 2.
Scenario lower_bound_chain(ClockValue a, std::int64_t t);

/// Worst-case replay on a 5-ring (ids 0..4, id 2 Byzantine), initial clocks
/// [a+2t, a, a, a, a+2t]. Expected drift by round [2t, ..., 2, 0],
/// legitimacy at round t. Requires t >= 2.
Scenario lower_bound_ring(ClockValue a, std::int64_t t);

struct SweepOptions {
  int n_lo = 3;
  int n_hi = 8;
  ClockValue l_lo = 2;
  ClockValue l_hi = 20;
  int trials_per_kind = 200;
  std::uint64_t seed = 0;
  /// Extends each run past legitimacy by 10*n rounds and asserts per-process
  /// increments (liveness window).
  bool with_liveness_window = true;
};

/// Seeded grid of strongly fair runs over both topology kinds, random exact
/// initial drift, fault cycling through none / crash / four Byzantine
/// strategies. Each run asserts legitimacy within initial_l rounds, plus
/// island closure, drift monotonicity and (optionally) the liveness window.
std::vector<Scenario> upper_bound_sweep(const SweepOptions& options);

/// Two-processor chain, clocks [9, 10]; a script activates only processor 0
/// for 10^4 steps (it cycles 9, 11, 9, ...). Processor 1 stays enabled the
/// whole run yet never fires: legitimate forever, but its clock never
/// increases. Weak-fairness audit stays clean (its enabled rule alternates
/// every configuration), the strong-fairness audit reports it.
Scenario weakly_fair_starvation();

struct CatalogOptions {
  std::int64_t t = 3;
  ClockValue a = 0;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
};

/// Names: "lower-bound-chain", "lower-bound-ring", "upper-bound-sweep",
/// "weakly-fair-starvation".
std::vector<std::string> catalog_names();
std::vector<Scenario> make_catalog_scenarios(const std::string& name,
                                             const CatalogOptions& options);

}  // namespace unison
