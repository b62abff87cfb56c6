#include <doctest.h>

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "unison/analysis.hpp"
#include "unison/scenarios.hpp"

using namespace unison;

namespace {

// First index whose named assertion failed, for readable diagnostics.
void require_all_pass(const ScenarioOutcome& outcome) {
  for (const auto& [name, result] : outcome.results) {
    if (!result.pass) {
      FAIL(outcome.name << ": assertion '" << name << "' failed: "
                        << result.detail);
    }
  }
  CHECK(outcome.all_pass);
}

bool has_assertion(const Scenario& s, const std::string& name) {
  return std::any_of(s.assertions.begin(), s.assertions.end(),
                     [&](const ScenarioAssertion& a) { return a.name == name; });
}

}  // namespace

TEST_CASE("chain worst-case replay stabilizes exactly at the drift bound") {
  Scenario s = lower_bound_chain(0, 3);
  CHECK(s.name == "lower-bound-chain");
  CHECK(s.assertions.size() == 8);
  ScenarioOutcome outcome = run_scenario(s);
  require_all_pass(outcome);
  CHECK(outcome.results.size() == 8);

  CHECK(outcome.stats.stabilized);
  CHECK(outcome.stats.initial_l == 6);
  CHECK(outcome.stats.rounds_to_inv == 3);
  CHECK(outcome.stats.steps_to_inv == 11);
  CHECK(outcome.stats.drift_by_round == std::vector<ClockValue>{6, 4, 2, 1});
  CHECK(outcome.trace.records.size() == 13);
  CHECK(outcome.trace.round_boundaries == std::vector<std::int64_t>{3, 7, 11});
  CHECK(outcome.stats.increments_post_inv[0] == 0);
  CHECK(outcome.stats.increments_post_inv[1] == 0);
  CHECK(outcome.stats.increments_post_inv[2] == 1);
  CHECK_FALSE(outcome.stats.increments_post_inv[3].has_value());

  // Final configuration: the three correct clocks within one tick.
  const Configuration& final = outcome.trace.records.back().clocks_after;
  CHECK(final == Configuration{4, 3, 3, 3});

  // The left end exhibits the hold-high loop before the descent.
  CycleResult cycle = end_cycle_type(outcome.trace, 0, 6);
  CHECK(cycle.type == CycleResult::Type::Type1);
}

TEST_CASE("chain replay needs one full round per two units of initial drift") {
  for (std::int64_t t : {2, 4, 5}) {
    ScenarioOutcome outcome = run_scenario(lower_bound_chain(0, t));
    require_all_pass(outcome);
    CHECK(outcome.stats.initial_l == 2 * t);
    CHECK(outcome.stats.rounds_to_inv == t);
    CHECK(outcome.trace.records.size() == static_cast<std::size_t>(4 * t + 1));
  }
}

TEST_CASE("chain replay is invariant under clock translation") {
  ScenarioOutcome base = run_scenario(lower_bound_chain(0, 2));
  ScenarioOutcome shifted = run_scenario(lower_bound_chain(5, 2));
  require_all_pass(base);
  require_all_pass(shifted);

  CHECK(base.stats.rounds_to_inv == shifted.stats.rounds_to_inv);
  CHECK(base.stats.steps_to_inv == shifted.stats.steps_to_inv);
  CHECK(base.stats.drift_by_round == shifted.stats.drift_by_round);
  CHECK(base.stats.drift_by_round == std::vector<ClockValue>{4, 2, 1});
  CHECK(base.trace.round_boundaries == shifted.trace.round_boundaries);
  REQUIRE(base.trace.records.size() == shifted.trace.records.size());
  for (std::size_t i = 0; i < base.trace.records.size(); ++i) {
    const StepRecord& b = base.trace.records[i];
    const StepRecord& sh = shifted.trace.records[i];
    CHECK(b.actor == sh.actor);
    CHECK(b.kind == sh.kind);
    CHECK(sh.written == clock_add(b.written, 5));
    REQUIRE(b.clocks_after.size() == sh.clocks_after.size());
    for (std::size_t p = 0; p < b.clocks_after.size(); ++p) {
      CHECK(sh.clocks_after[p] == clock_add(b.clocks_after[p], 5));
    }
  }
}

TEST_CASE("ring worst-case replay drains all drift by round t") {
  Scenario s = lower_bound_ring(0, 3);
  CHECK(s.name == "lower-bound-ring");
  CHECK(s.assertions.size() == 7);
  ScenarioOutcome outcome = run_scenario(s);
  require_all_pass(outcome);

  CHECK(outcome.stats.stabilized);
  CHECK(outcome.stats.initial_l == 6);
  CHECK(outcome.stats.rounds_to_inv == 3);
  CHECK(outcome.stats.steps_to_inv == 12);
  CHECK(outcome.stats.drift_by_round == std::vector<ClockValue>{6, 4, 2, 0});
  CHECK(outcome.trace.records.size() == 15);
  CHECK(outcome.trace.round_boundaries == std::vector<std::int64_t>{3, 8, 13});
  CHECK(outcome.stats.increments_post_inv[0] == 0);
  CHECK(outcome.stats.increments_post_inv[1] == 1);
  CHECK_FALSE(outcome.stats.increments_post_inv[2].has_value());
  CHECK(outcome.stats.increments_post_inv[3] == 1);
  CHECK(outcome.stats.increments_post_inv[4] == 0);
  CHECK(outcome.trace.records.back().clocks_after ==
        Configuration{3, 3, 3, 3, 3});
}

TEST_CASE("ring replay scales and translates like the chain") {
  ScenarioOutcome t2 = run_scenario(lower_bound_ring(0, 2));
  require_all_pass(t2);
  CHECK(t2.stats.rounds_to_inv == 2);
  CHECK(t2.stats.drift_by_round == std::vector<ClockValue>{4, 2, 0});
  CHECK(t2.trace.records.size() == 10);

  ScenarioOutcome shifted = run_scenario(lower_bound_ring(1, 2));
  require_all_pass(shifted);
  CHECK(shifted.stats.drift_by_round == t2.stats.drift_by_round);
  CHECK(shifted.trace.records.back().clocks_after ==
        Configuration{3, 3, 3, 3, 3});
  for (const StepRecord& rec : shifted.trace.records) {
    for (ClockValue c : rec.clocks_after) CHECK(c >= 1);
  }
}

TEST_CASE("worst-case replays reject a depth below two") {
  CHECK_THROWS_AS(lower_bound_chain(0, 1), SimError);
  CHECK_THROWS_AS(lower_bound_ring(0, 1), SimError);
  CHECK_THROWS_AS(lower_bound_chain(0, 0), SimError);
  try {
    lower_bound_ring(0, -3);
    FAIL("expected rejection");
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::InvalidParams);
  }
}

TEST_CASE("starvation scenario: legitimate forever, one processor frozen") {
  Scenario s = weakly_fair_starvation();
  CHECK(s.name == "weakly-fair-starvation");
  ScenarioOutcome outcome = run_scenario(s);
  require_all_pass(outcome);

  CHECK(outcome.stats.stabilized);
  CHECK(outcome.stats.rounds_to_inv == 0);
  CHECK(outcome.trace.records.size() == 10000);
  CHECK(outcome.trace.round_boundaries.empty());
  CHECK(outcome.stats.increments_post_inv[0] == 5000);
  CHECK(outcome.stats.increments_post_inv[1] == 0);

  // Processor 0 loops between 9 and 11; processor 1 pins at 10.
  for (const StepRecord& rec : outcome.trace.records) {
    CHECK(rec.actor == 0);
    CHECK((rec.written == 9 || rec.written == 11));
    CHECK(rec.clocks_after[1] == 10);
  }

  AuditReport strict = audit_fairness(outcome.trace, 100);
  REQUIRE_FALSE(strict.strong_violations.empty());
  for (const FairnessViolation& v : strict.strong_violations) {
    CHECK(v.processor == 1);
  }
  CHECK(audit_fairness(outcome.trace, 3).weak_violations.empty());
}

TEST_CASE("sweep grid covers both topologies and all fault kinds") {
  SweepOptions options;
  options.trials_per_kind = 6;
  options.seed = 42;
  std::vector<Scenario> grid = upper_bound_sweep(options);
  REQUIRE(grid.size() == 12);

  std::map<std::string, int> kind_counts;
  for (const Scenario& s : grid) {
    bool chain = s.name.find("chain") != std::string::npos;
    bool ring = s.name.find("ring") != std::string::npos;
    CHECK(chain != ring);
    kind_counts[chain ? "chain" : "ring"]++;
    CHECK(has_assertion(s, "stabilized"));
    CHECK(has_assertion(s, "legitimacy-within-initial-drift"));
    CHECK(has_assertion(s, "per-step-safety"));
    CHECK(has_assertion(s, "legitimacy-closed"));
    CHECK(has_assertion(s, "drift-by-round-contained"));
    CHECK(has_assertion(s, "post-legitimacy-liveness"));
  }
  CHECK(kind_counts["chain"] == 6);
  CHECK(kind_counts["ring"] == 6);

  // Trial index cycles through fault-free, crash, and four lie patterns.
  auto faulty_of = [](const Scenario& s) {
    int count = 0;
    for (const ProcessorRole& role : s.params.roles) {
      if (!role.is_correct()) ++count;
    }
    return count;
  };
  CHECK(faulty_of(grid[0]) == 0);
  for (int k = 1; k < 6; ++k) CHECK(faulty_of(grid[k]) == 1);

  for (const Scenario& s : grid) {
    ScenarioOutcome outcome = run_scenario(s);
    require_all_pass(outcome);
    CHECK(outcome.stats.stabilized);
    REQUIRE(outcome.stats.rounds_to_inv.has_value());
    CHECK(*outcome.stats.rounds_to_inv <= outcome.stats.initial_l);
  }
}

TEST_CASE("sweep is deterministic for a fixed seed") {
  SweepOptions options;
  options.trials_per_kind = 2;
  options.seed = 7;
  options.with_liveness_window = false;
  std::vector<Scenario> a = upper_bound_sweep(options);
  std::vector<Scenario> b = upper_bound_sweep(options);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ScenarioOutcome ra = run_scenario(a[i]);
    ScenarioOutcome rb = run_scenario(b[i]);
    require_all_pass(ra);
    REQUIRE(ra.trace.records.size() == rb.trace.records.size());
    for (std::size_t j = 0; j < ra.trace.records.size(); ++j) {
      CHECK(ra.trace.records[j] == rb.trace.records[j]);
    }
  }
}

TEST_CASE("sweep options are validated") {
  SweepOptions bad_n;
  bad_n.n_lo = 2;
  CHECK_THROWS_AS(upper_bound_sweep(bad_n), SimError);

  SweepOptions bad_order;
  bad_order.n_lo = 5;
  bad_order.n_hi = 4;
  CHECK_THROWS_AS(upper_bound_sweep(bad_order), SimError);

  SweepOptions bad_l;
  bad_l.l_lo = 1;
  CHECK_THROWS_AS(upper_bound_sweep(bad_l), SimError);

  SweepOptions bad_trials;
  bad_trials.trials_per_kind = 0;
  CHECK_THROWS_AS(upper_bound_sweep(bad_trials), SimError);
}

TEST_CASE("catalog lists its scenarios and rejects unknown names") {
  CHECK(catalog_names() ==
        std::vector<std::string>{"lower-bound-chain", "lower-bound-ring",
                                 "upper-bound-sweep",
                                 "weakly-fair-starvation"});

  CatalogOptions options;
  options.t = 2;
  options.a = 5;
  std::vector<Scenario> chain = make_catalog_scenarios("lower-bound-chain", options);
  REQUIRE(chain.size() == 1);
  CHECK(chain[0].name == "lower-bound-chain");
  CHECK(std::get<Configuration>(chain[0].params.init) ==
        Configuration{9, 9, 5, 5});

  std::vector<Scenario> starve =
      make_catalog_scenarios("weakly-fair-starvation", {});
  REQUIRE(starve.size() == 1);

  CatalogOptions sweep_options;
  sweep_options.trials = 1;
  sweep_options.seed = 3;
  std::vector<Scenario> sweep =
      make_catalog_scenarios("upper-bound-sweep", sweep_options);
  CHECK(sweep.size() == 2);

  try {
    make_catalog_scenarios("does-not-exist", {});
    FAIL("expected rejection");
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::InvalidParams);
    CHECK(std::string(e.what()).find("lower-bound-chain") !=
          std::string::npos);
  }
}

TEST_CASE("run_scenario reports each assertion by name") {
  Scenario s;
  s.name = "synthetic";
  s.params.topology = Topology(TopologyKind::Chain, 2);
  s.params.roles = {ProcessorRole::correct(), ProcessorRole::correct()};
  s.params.init = Configuration{0, 0};
  s.params.policy = CentralStronglyFair{};
  s.params.stop = StopOnInv{};
  s.assertions.push_back(
      {"always-passes", [](const Trace&, const RunStats&) {
         return AssertionResult{true, "", std::nullopt};
       }});
  s.assertions.push_back(
      {"always-fails", [](const Trace&, const RunStats&) {
         return AssertionResult{false, "nope", 7};
       }});

  ScenarioOutcome outcome = run_scenario(s);
  CHECK_FALSE(outcome.all_pass);
  REQUIRE(outcome.results.size() == 2);
  CHECK(outcome.results[0].first == "always-passes");
  CHECK(outcome.results[0].second.pass);
  CHECK(outcome.results[1].first == "always-fails");
  CHECK_FALSE(outcome.results[1].second.pass);
  CHECK(outcome.results[1].second.detail == "nope");
  CHECK(outcome.results[1].second.step == 7);
}
