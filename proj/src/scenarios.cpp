#include "unison/scenarios.hpp"

#include <algorithm>
#include <sstream>

#include "unison/errors.hpp"
#include "unison/rng.hpp"

namespace unison {

namespace {

std::string join(const std::vector<ClockValue>& values) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ", ";
    out << values[i];
  }
  out << ']';
  return out.str();
}

std::string join64(const std::vector<std::int64_t>& values) {
  return join(std::vector<ClockValue>(values.begin(), values.end()));
}

AssertionResult pass_result() { return {true, "", std::nullopt}; }

AssertionResult fail_result(std::string detail,
                            std::optional<std::int64_t> step = std::nullopt) {
  return {false, std::move(detail), step};
}

ScenarioAssertion assert_stabilized() {
  return {"stabilized", [](const Trace&, const RunStats& stats) {
            if (stats.stabilized) return pass_result();
            return fail_result("run ended without reaching legitimacy");
          }};
}

ScenarioAssertion assert_rounds_to_inv_equals(std::int64_t expected) {
  return {"rounds-to-legitimacy",
          [expected](const Trace&, const RunStats& stats) {
            if (stats.rounds_to_inv && *stats.rounds_to_inv == expected) {
              return pass_result();
            }
            std::string got = stats.rounds_to_inv
                                  ? std::to_string(*stats.rounds_to_inv)
                                  : std::string("none");
            return fail_result("expected legitimacy at round " +
                               std::to_string(expected) + ", got " + got);
          }};
}

ScenarioAssertion assert_rounds_within_initial_drift() {
  return {"legitimacy-within-initial-drift",
          [](const Trace&, const RunStats& stats) {
            if (!stats.rounds_to_inv) {
              return fail_result("legitimacy never reached");
            }
            if (*stats.rounds_to_inv <= stats.initial_l) return pass_result();
            return fail_result(
                "legitimacy took " + std::to_string(*stats.rounds_to_inv) +
                " rounds for initial drift " + std::to_string(stats.initial_l));
          }};
}

ScenarioAssertion assert_record_count(std::int64_t expected) {
  return {"schedule-length", [expected](const Trace& trace, const RunStats&) {
            auto got = static_cast<std::int64_t>(trace.records.size());
            if (got == expected) return pass_result();
            return fail_result("expected " + std::to_string(expected) +
                               " steps, got " + std::to_string(got));
          }};
}

ScenarioAssertion assert_drift_series(std::vector<ClockValue> expected) {
  return {"drift-by-round",
          [expected = std::move(expected)](const Trace&, const RunStats& stats) {
            if (stats.drift_by_round == expected) return pass_result();
            return fail_result("expected " + join(expected) + ", got " +
                               join(stats.drift_by_round));
          }};
}

ScenarioAssertion assert_round_boundaries(std::vector<std::int64_t> expected) {
  return {"round-boundaries",
          [expected = std::move(expected)](const Trace& trace, const RunStats&) {
            if (trace.round_boundaries == expected) return pass_result();
            return fail_result("expected " + join64(expected) + ", got " +
                               join64(trace.round_boundaries));
          }};
}

/// Drift over correct-correct edges never climbs back above the unison band:
/// each boundary value is at most max(previous value, 1).
ScenarioAssertion assert_drift_series_contained() {
  return {"drift-by-round-contained",
          [](const Trace&, const RunStats& stats) {
            const auto& d = stats.drift_by_round;
            for (std::size_t i = 1; i < d.size(); ++i) {
              if (d[i] > std::max<ClockValue>(d[i - 1], 1)) {
                return fail_result("round " + std::to_string(i) +
                                   " drift rose from " +
                                   std::to_string(d[i - 1]) + " to " +
                                   std::to_string(d[i]));
              }
            }
            return pass_result();
          }};
}

ScenarioAssertion assert_trace_clean() {
  return {"per-step-safety", [](const Trace& trace, const RunStats&) {
            if (auto step = find_island_closure_violation(trace)) {
              return fail_result("island split", *step);
            }
            if (auto step = find_island_count_increase(trace)) {
              return fail_result("island count increased", *step);
            }
            if (auto step = find_drift_increase_violation(trace)) {
              return fail_result("drift increased toward a neighbor", *step);
            }
            return pass_result();
          }};
}

ScenarioAssertion assert_legitimacy_closed() {
  return {"legitimacy-closed", [](const Trace& trace, const RunStats&) {
            if (auto step = find_inv_closure_violation(trace)) {
              return fail_result("legitimacy lost", *step);
            }
            return pass_result();
          }};
}

ScenarioAssertion assert_post_inv_increments() {
  return {"post-legitimacy-liveness",
          [](const Trace& trace, const RunStats& stats) {
            for (ProcessorId p = 0; p < trace.topology.n(); ++p) {
              if (!trace.roles[p].is_correct()) continue;
              const auto& count = stats.increments_post_inv[p];
              if (!count || *count < 1) {
                return fail_result("processor " + std::to_string(p) +
                                   " never incremented after legitimacy");
              }
            }
            return pass_result();
          }};
}

ScenarioAssertion assert_end_cycle_type1(ProcessorId end, ClockValue b) {
  return {"end-cycle-type1",
          [end, b](const Trace& trace, const RunStats&) {
            CycleResult cycle = end_cycle_type(trace, end, b);
            if (cycle.type == CycleResult::Type::Type1) return pass_result();
            return fail_result("end processor cycle " + join(cycle.cycle) +
                               " is not the up-hold pattern against " +
                               std::to_string(b));
          }};
}

}  // namespace

ScenarioOutcome run_scenario(const Scenario& scenario) {
  RunResult result = run(scenario.params);
  ScenarioOutcome outcome;
  outcome.name = scenario.name;
  outcome.trace = std::move(result.trace);
  outcome.stats = std::move(result.stats);
  outcome.all_pass = true;
  for (const ScenarioAssertion& assertion : scenario.assertions) {
    AssertionResult r = assertion.check(outcome.trace, outcome.stats);
    outcome.all_pass = outcome.all_pass && r.pass;
    outcome.results.emplace_back(assertion.name, std::move(r));
  }
  return outcome;
}

Scenario lower_bound_chain(ClockValue a, std::int64_t t) {
  if (t < 2) fail(ErrorCode::InvalidParams, "schedule depth t must be >= 2");
  Scenario s;
  s.name = "lower-bound-chain";

  std::vector<ScriptChoice> script;
  std::vector<std::pair<std::int64_t, ClockValue>> writes;
  std::vector<std::int64_t> activations;

  // Round 1 relaxes the top plateau one extra step so the left end exhibits
  // the up-hold cycle before descending.
  script.push_back(ScriptChoice::override_write(0, clock_add(a, 2 * t + 1)));
  script.push_back(ScriptChoice::override_write(0, clock_add(a, 2 * t)));
  script.push_back(ScriptChoice::override_write(1, clock_add(a, 2 * t - 1)));
  script.push_back(ScriptChoice::override_write(2, clock_add(a, 1)));
  script.push_back(ScriptChoice::faulty(3));
  writes.push_back({4, clock_add(a, 1)});
  activations.push_back(4);
  for (std::int64_t i = 2; i <= t; ++i) {
    script.push_back(
        ScriptChoice::override_write(0, clock_add(a, 2 * t + 1 - i)));
    script.push_back(ScriptChoice::override_write(1, clock_add(a, 2 * t - i)));
    script.push_back(ScriptChoice::override_write(2, clock_add(a, i)));
    script.push_back(ScriptChoice::faulty(3));
    writes.push_back({4 * i, clock_add(a, i)});
    activations.push_back(4 * i);
  }

  s.params.topology = Topology(TopologyKind::Chain, 4);
  s.params.roles = {ProcessorRole::correct(), ProcessorRole::correct(),
                    ProcessorRole::correct(),
                    ProcessorRole::byzantine(ScriptedWrites{writes})};
  s.params.init = Configuration{clock_add(a, 2 * t), clock_add(a, 2 * t), a, a};
  s.params.policy = ScriptedCentral{std::move(script)};
  s.params.activation = ScriptedActivation{std::move(activations)};
  s.params.stop = StopExhaust{};
  s.params.max_steps = 4 * t + 10;
  s.params.max_rounds = t + 10;

  std::vector<ClockValue> drift{2 * t};
  for (std::int64_t i = 1; i < t; ++i) drift.push_back(2 * t - 2 * i);
  drift.push_back(1);
  std::vector<std::int64_t> boundaries;
  for (std::int64_t i = 1; i <= t; ++i) boundaries.push_back(4 * i - 1);

  s.assertions.push_back(assert_stabilized());
  s.assertions.push_back(assert_rounds_to_inv_equals(t));
  s.assertions.push_back(assert_record_count(4 * t + 1));
  s.assertions.push_back(assert_drift_series(std::move(drift)));
  s.assertions.push_back(assert_round_boundaries(std::move(boundaries)));
  s.assertions.push_back(assert_trace_clean());
  s.assertions.push_back(assert_legitimacy_closed());
  s.assertions.push_back(assert_end_cycle_type1(0, clock_add(a, 2 * t)));
  return s;
}

Scenario lower_bound_ring(ClockValue a, std::int64_t t) {
  if (t < 2) fail(ErrorCode::InvalidParams, "schedule depth t must be >= 2");
  Scenario s;
  s.name = "lower-bound-ring";

  std::vector<ScriptChoice> script;
  std::vector<std::pair<std::int64_t, ClockValue>> writes;
  std::vector<std::int64_t> activations;
  for (std::int64_t i = 1; i <= t; ++i) {
    script.push_back(
        ScriptChoice::override_write(0, clock_add(a, 2 * t - i)));
    script.push_back(
        ScriptChoice::override_write(4, clock_add(a, 2 * t - i)));
    script.push_back(ScriptChoice::override_write(1, clock_add(a, i)));
    script.push_back(ScriptChoice::override_write(3, clock_add(a, i)));
    script.push_back(ScriptChoice::faulty(2));
    writes.push_back({5 * i - 1, clock_add(a, i)});
    activations.push_back(5 * i - 1);
  }

  s.params.topology = Topology(TopologyKind::Ring, 5);
  s.params.roles = {ProcessorRole::correct(), ProcessorRole::correct(),
                    ProcessorRole::byzantine(ScriptedWrites{writes}),
                    ProcessorRole::correct(), ProcessorRole::correct()};
  s.params.init = Configuration{clock_add(a, 2 * t), a, a, a,
                                clock_add(a, 2 * t)};
  s.params.policy = ScriptedCentral{std::move(script)};
  s.params.activation = ScriptedActivation{std::move(activations)};
  s.params.stop = StopExhaust{};
  s.params.max_steps = 5 * t + 10;
  s.params.max_rounds = t + 10;

  std::vector<ClockValue> drift;
  for (std::int64_t i = 0; i <= t; ++i) drift.push_back(2 * t - 2 * i);
  std::vector<std::int64_t> boundaries;
  for (std::int64_t i = 1; i <= t; ++i) boundaries.push_back(5 * i - 2);

  s.assertions.push_back(assert_stabilized());
  s.assertions.push_back(assert_rounds_to_inv_equals(t));
  s.assertions.push_back(assert_record_count(5 * t));
  s.assertions.push_back(assert_drift_series(std::move(drift)));
  s.assertions.push_back(assert_round_boundaries(std::move(boundaries)));
  s.assertions.push_back(assert_trace_clean());
  s.assertions.push_back(assert_legitimacy_closed());
  return s;
}

std::vector<Scenario> upper_bound_sweep(const SweepOptions& options) {
  if (options.n_lo < 3 || options.n_hi < options.n_lo) {
    fail(ErrorCode::InvalidParams, "sweep sizes need 3 <= n_lo <= n_hi");
  }
  if (options.l_lo < 2 || options.l_hi < options.l_lo) {
    fail(ErrorCode::InvalidParams, "sweep drifts need 2 <= l_lo <= l_hi");
  }
  if (options.trials_per_kind < 1) {
    fail(ErrorCode::InvalidParams, "sweep needs at least one trial per kind");
  }

  std::vector<Scenario> out;
  for (TopologyKind kind : {TopologyKind::Chain, TopologyKind::Ring}) {
    Rng rng(hash_mix(options.seed, kind == TopologyKind::Chain ? 0 : 1));
    for (int k = 0; k < options.trials_per_kind; ++k) {
      int n = static_cast<int>(rng.next_in(options.n_lo, options.n_hi));
      ClockValue target_l = rng.next_in(options.l_lo, options.l_hi);

      Scenario s;
      std::ostringstream name;
      name << "upper-bound-sweep/" << topology_kind_name(kind) << '-' << k;
      s.name = name.str();
      s.params.topology = Topology(kind, n);
      s.params.roles.assign(n, ProcessorRole::correct());

      // Fault kinds cycle so each gets even coverage across the grid.
      switch (k % 6) {
        case 0:
          break;
        case 1:
        case 2:
        case 3:
        case 4:
        case 5: {
          ProcessorId pos;
          if (kind == TopologyKind::Chain && n == 3) {
            // A middle fault on a 3-chain leaves no adjacent correct pair.
            pos = rng.next_bool() ? 2 : 0;
          } else {
            pos = static_cast<ProcessorId>(rng.next_below(n));
          }
          ProcessorRole role = ProcessorRole::crashed();
          if (k % 6 == 2) {
            role = ProcessorRole::byzantine(FixedValue{rng.next_in(0, target_l)});
          } else if (k % 6 == 3) {
            role = ProcessorRole::byzantine(Silent{});
          } else if (k % 6 == 4) {
            role = ProcessorRole::byzantine(
                RandomWalkRange{0, target_l, rng.next_u64()});
          } else if (k % 6 == 5) {
            role = ProcessorRole::byzantine(ChaseBelow{0});
          }
          s.params.roles[pos] = role;
          s.params.activation = EveryK{2};
          break;
        }
      }

      s.params.init = RandomInit{target_l, rng.next_u64()};
      s.params.policy = CentralStronglyFair{rng.next_u64()};
      s.params.stop = options.with_liveness_window
                          ? StopCondition(StopOnInvPlusWindow{10 * n})
                          : StopCondition(StopOnInv{});
      s.params.max_rounds = 10000;
      s.params.max_steps = 200000;
      s.params.seed = rng.next_u64();

      s.assertions.push_back(assert_stabilized());
      s.assertions.push_back(assert_rounds_within_initial_drift());
      s.assertions.push_back(assert_trace_clean());
      s.assertions.push_back(assert_legitimacy_closed());
      s.assertions.push_back(assert_drift_series_contained());
      if (options.with_liveness_window) {
        s.assertions.push_back(assert_post_inv_increments());
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

Scenario weakly_fair_starvation() {
  Scenario s;
  s.name = "weakly-fair-starvation";

  constexpr std::int64_t kSteps = 10000;
  std::vector<ScriptChoice> script;
  script.reserve(kSteps);
  for (std::int64_t i = 0; i < kSteps; ++i) {
    script.push_back(ScriptChoice::correct(
        0, i % 2 == 0 ? Rule::LeftEndUp : Rule::LeftEndDown));
  }

  s.params.topology = Topology(TopologyKind::Chain, 2);
  s.params.roles = {ProcessorRole::correct(), ProcessorRole::correct()};
  s.params.init = Configuration{9, 10};
  s.params.policy = CentralWeaklyFairScripted{std::move(script)};
  s.params.stop = StopExhaust{};
  s.params.max_steps = kSteps + 10;
  s.params.max_rounds = kSteps;

  s.assertions.push_back(assert_stabilized());
  s.assertions.push_back(assert_rounds_to_inv_equals(0));
  s.assertions.push_back(assert_legitimacy_closed());
  s.assertions.push_back(assert_record_count(kSteps));
  s.assertions.push_back(
      {"no-round-ever-completes", [](const Trace& trace, const RunStats&) {
         if (trace.round_boundaries.empty()) return pass_result();
         return fail_result("a round completed", trace.round_boundaries[0]);
       }});
  s.assertions.push_back(
      {"starved-processor-never-increments",
       [](const Trace&, const RunStats& stats) {
         if (stats.increments_post_inv[1] == 0) return pass_result();
         return fail_result("processor 1 incremented");
       }});
  s.assertions.push_back(
      {"driver-keeps-incrementing", [](const Trace&, const RunStats& stats) {
         if (stats.increments_post_inv[0] > 0) return pass_result();
         return fail_result("processor 0 never incremented");
       }});
  s.assertions.push_back(
      {"weak-audit-clean", [](const Trace& trace, const RunStats&) {
         AuditReport report = audit_fairness(trace, 3);
         if (report.weak_violations.empty()) return pass_result();
         return fail_result("weak-fairness audit flagged a rule",
                            report.weak_violations[0].to_step);
       }});
  s.assertions.push_back(
      {"strong-audit-flags-starvation",
       [](const Trace& trace, const RunStats&) {
         AuditReport report = audit_fairness(trace, 100);
         if (report.strong_violations.empty()) {
           return fail_result("strong-fairness audit found nothing");
         }
         for (const FairnessViolation& v : report.strong_violations) {
           if (v.processor != 1) {
             return fail_result("unexpected violation at processor " +
                                std::to_string(v.processor));
           }
         }
         return pass_result();
       }});
  return s;
}

std::vector<std::string> catalog_names() {
  return {"lower-bound-chain", "lower-bound-ring", "upper-bound-sweep",
          "weakly-fair-starvation"};
}

std::vector<Scenario> make_catalog_scenarios(const std::string& name,
                                             const CatalogOptions& options) {
  if (name == "lower-bound-chain") {
    return {lower_bound_chain(options.a, options.t)};
  }
  if (name == "lower-bound-ring") {
    return {lower_bound_ring(options.a, options.t)};
  }
  if (name == "upper-bound-sweep") {
    SweepOptions sweep;
    if (options.trials) sweep.trials_per_kind = *options.trials;
    if (options.seed) sweep.seed = *options.seed;
    return upper_bound_sweep(sweep);
  }
  if (name == "weakly-fair-starvation") return {weakly_fair_starvation()};

  std::string known;
  for (const std::string& entry : catalog_names()) {
    if (!known.empty()) known += ", ";
    known += entry;
  }
  fail(ErrorCode::InvalidParams,
       "unknown scenario '" + name + "' (known: " + known + ")");
}

}  // namespace unison
