#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>
#include <string>

#include "unison/adversary.hpp"

using namespace unison;

namespace {

const Topology kChain3(TopologyKind::Chain, 3);

std::optional<ClockValue> act(const ProcessorRole& role,
                              const ActivationPolicy& activation,
                              std::int64_t step, const Configuration& view,
                              FaultState* state = nullptr) {
  FaultState scratch;
  FaultState& st = state ? *state : scratch;
  auto [value, next] = fault_action(role, activation, st, step, view,
                                    kChain3, 1);
  st = next;
  return value;
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& content)
      : path("/tmp/unison_adv_" + name) {
    std::ofstream out(path, std::ios::binary);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("faulty_count counts non-correct roles") {
  CHECK(faulty_count({}) == 0);
  CHECK(faulty_count({ProcessorRole::correct(), ProcessorRole::correct()}) ==
        0);
  CHECK(faulty_count({ProcessorRole::crashed(),
                      ProcessorRole::byzantine(Silent{}),
                      ProcessorRole::correct()}) == 2);
}

TEST_CASE("activation policies gate by step index") {
  CHECK(!activation_fires(NeverActivate{}, 0));
  CHECK(!activation_fires(NeverActivate{}, 1000));

  CHECK(activation_fires(EveryK{1}, 0));
  CHECK(activation_fires(EveryK{1}, 7));
  CHECK(activation_fires(EveryK{3}, 0));
  CHECK(!activation_fires(EveryK{3}, 1));
  CHECK(!activation_fires(EveryK{3}, 2));
  CHECK(activation_fires(EveryK{3}, 6));

  ScriptedActivation scripted{{2, 5, 9}};
  CHECK(!activation_fires(scripted, 0));
  CHECK(activation_fires(scripted, 2));
  CHECK(activation_fires(scripted, 5));
  CHECK(activation_fires(scripted, 9));
  CHECK(!activation_fires(scripted, 10));
}

TEST_CASE("probabilistic activation is deterministic in (seed, step)") {
  WithProbability half{0.5, 42};
  int fired = 0;
  for (std::int64_t step = 0; step < 1000; ++step) {
    bool a = activation_fires(half, step);
    bool b = activation_fires(half, step);
    CHECK(a == b);
    if (a) ++fired;
  }
  // Roughly half of 1000 steps; generous bounds, the point is nondegeneracy.
  CHECK(fired > 350);
  CHECK(fired < 650);

  CHECK(!activation_fires(WithProbability{0.0, 42}, 17));
  int always = 0;
  for (std::int64_t step = 0; step < 100; ++step) {
    if (activation_fires(WithProbability{1.0, 42}, step)) ++always;
  }
  CHECK(always == 100);
}

TEST_CASE("crashed processors never write") {
  ProcessorRole crashed = ProcessorRole::crashed();
  CHECK(!act(crashed, EveryK{1}, 0, {1, 2, 3}).has_value());
  CHECK(!act(crashed, ScriptedActivation{{0}}, 0, {1, 2, 3}).has_value());
}

TEST_CASE("fault_action rejects correct processors") {
  try {
    act(ProcessorRole::correct(), EveryK{1}, 0, {0, 0, 0});
    FAIL("expected role mismatch");
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::RoleMismatch);
  }
}

TEST_CASE("fixed-value strategy writes when activated") {
  ProcessorRole byz = ProcessorRole::byzantine(FixedValue{10});
  CHECK(act(byz, EveryK{2}, 0, {0, 0, 0}) == 10);
  CHECK(!act(byz, EveryK{2}, 1, {0, 0, 0}).has_value());
  CHECK(act(byz, EveryK{2}, 4, {0, 0, 0}) == 10);
  CHECK(!act(byz, NeverActivate{}, 0, {0, 0, 0}).has_value());
}

TEST_CASE("scripted writes fire only at their exact step") {
  ProcessorRole byz =
      ProcessorRole::byzantine(ScriptedWrites{{{3, 7}, {8, -2}}});
  CHECK(!act(byz, EveryK{1}, 0, {0, 0, 0}).has_value());
  CHECK(act(byz, EveryK{1}, 3, {0, 0, 0}) == 7);
  CHECK(!act(byz, EveryK{1}, 4, {0, 0, 0}).has_value());
  CHECK(act(byz, EveryK{1}, 8, {0, 0, 0}) == -2);
  // Activation still gates: step 3 is odd, so every:2 suppresses the write.
  CHECK(!act(byz, EveryK{2}, 3, {0, 0, 0}).has_value());
}

TEST_CASE("chase strategy tracks the minimum neighbor") {
  ProcessorRole byz = ProcessorRole::byzantine(ChaseBelow{1});
  // Processor 1 on the 3-chain sees both ends.
  CHECK(act(byz, EveryK{1}, 0, {6, 0, 9}) == 5);
  CHECK(act(byz, EveryK{1}, 0, {9, 0, 6}) == 5);
  ProcessorRole copycat = ProcessorRole::byzantine(ChaseBelow{0});
  CHECK(act(copycat, EveryK{1}, 0, {6, 0, 9}) == 6);
}

TEST_CASE("silent strategy activates without writing") {
  ProcessorRole byz = ProcessorRole::byzantine(Silent{});
  CHECK(!act(byz, EveryK{1}, 0, {1, 2, 3}).has_value());
}

TEST_CASE("random walk strategy replays from seed and draw count") {
  ProcessorRole byz = ProcessorRole::byzantine(RandomWalkRange{2, 6, 99});
  FaultState a;
  FaultState b;
  std::set<ClockValue> seen;
  for (std::int64_t step = 0; step < 40; ++step) {
    auto va = act(byz, EveryK{1}, step, {0, 0, 0}, &a);
    auto vb = act(byz, EveryK{1}, step, {0, 0, 0}, &b);
    REQUIRE(va.has_value());
    CHECK(va == vb);
    CHECK(*va >= 2);
    CHECK(*va <= 6);
    seen.insert(*va);
  }
  CHECK(a.walk_draws == 40);
  CHECK(seen.size() > 1);

  // The stream is indexed by draws consumed, not by step index: skipping
  // steps must not desynchronize a replay.
  FaultState sparse;
  auto first = act(byz, EveryK{5}, 0, {0, 0, 0}, &sparse);
  auto second = act(byz, EveryK{5}, 5, {0, 0, 0}, &sparse);
  FaultState dense;
  auto d0 = act(byz, EveryK{1}, 0, {0, 0, 0}, &dense);
  auto d1 = act(byz, EveryK{1}, 1, {0, 0, 0}, &dense);
  CHECK(first == d0);
  CHECK(second == d1);

  // Suppressed steps leave the state untouched.
  FaultState idle;
  CHECK(!act(byz, EveryK{5}, 3, {0, 0, 0}, &idle).has_value());
  CHECK(idle.walk_draws == 0);
}

TEST_CASE("a byzantine processor that never activates acts crashed") {
  ProcessorRole byz = ProcessorRole::byzantine(FixedValue{1000});
  ProcessorRole crashed = ProcessorRole::crashed();
  for (std::int64_t step = 0; step < 20; ++step) {
    CHECK(act(byz, NeverActivate{}, step, {4, 5, 6}) ==
          act(crashed, NeverActivate{}, step, {4, 5, 6}));
  }
}

TEST_CASE("strategy validation") {
  CHECK_NOTHROW(validate_strategy(FixedValue{-5}));
  CHECK_NOTHROW(validate_strategy(Silent{}));
  CHECK_NOTHROW(validate_strategy(ScriptedWrites{{{1, 0}, {2, 0}, {9, 3}}}));
  CHECK_NOTHROW(validate_strategy(RandomWalkRange{0, 0, 1}));
  try {
    validate_strategy(ScriptedWrites{{{3, 0}, {3, 1}}});
    FAIL("expected rejection");
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::InvalidParams);
  }
  CHECK_THROWS_AS(validate_strategy(ScriptedWrites{{{5, 0}, {4, 0}}}),
                  SimError);
  CHECK_THROWS_AS(validate_strategy(RandomWalkRange{3, 2, 1}), SimError);
}

TEST_CASE("activation validation") {
  CHECK_NOTHROW(validate_activation(NeverActivate{}));
  CHECK_NOTHROW(validate_activation(EveryK{1}));
  CHECK_NOTHROW(validate_activation(WithProbability{1.0, 0}));
  CHECK_NOTHROW(validate_activation(ScriptedActivation{{0, 1, 2}}));
  CHECK_THROWS_AS(validate_activation(EveryK{0}), SimError);
  CHECK_THROWS_AS(validate_activation(EveryK{-3}), SimError);
  CHECK_THROWS_AS(validate_activation(WithProbability{1.5, 0}), SimError);
  CHECK_THROWS_AS(validate_activation(WithProbability{-0.1, 0}), SimError);
  CHECK_THROWS_AS(validate_activation(ScriptedActivation{{2, 2}}), SimError);
}

TEST_CASE("fault specs parse") {
  CHECK(parse_fault_spec("crash").kind == RoleKind::Crashed);

  ProcessorRole fixed = parse_fault_spec("byz:fixed:-7");
  REQUIRE(fixed.kind == RoleKind::Byzantine);
  CHECK(std::get<FixedValue>(*fixed.strategy).value == -7);

  ProcessorRole silent = parse_fault_spec("byz:silent");
  CHECK(std::holds_alternative<Silent>(*silent.strategy));

  ProcessorRole chase = parse_fault_spec("byz:chase:2");
  CHECK(std::get<ChaseBelow>(*chase.strategy).offset == 2);

  ProcessorRole walk = parse_fault_spec("byz:walk:-1:4");
  CHECK(std::get<RandomWalkRange>(*walk.strategy).lo == -1);
  CHECK(std::get<RandomWalkRange>(*walk.strategy).hi == 4);

  TempFile script("writes.txt", "# lead comment\n3 7\n\n8 -2\n");
  ProcessorRole scripted = parse_fault_spec("byz:script:" + script.path);
  const auto& writes = std::get<ScriptedWrites>(*scripted.strategy).writes;
  REQUIRE(writes.size() == 2);
  CHECK(writes[0] == std::pair<std::int64_t, ClockValue>{3, 7});
  CHECK(writes[1] == std::pair<std::int64_t, ClockValue>{8, -2});

  CHECK_THROWS_AS(parse_fault_spec(""), SimError);
  CHECK_THROWS_AS(parse_fault_spec("byz"), SimError);
  CHECK_THROWS_AS(parse_fault_spec("byz:fixed"), SimError);
  CHECK_THROWS_AS(parse_fault_spec("byz:fixed:abc"), SimError);
  CHECK_THROWS_AS(parse_fault_spec("byz:walk:1"), SimError);
  CHECK_THROWS_AS(parse_fault_spec("freeze"), SimError);
  CHECK_THROWS_AS(parse_fault_spec("byz:script:/nonexistent/path"), SimError);
}

TEST_CASE("activation specs parse") {
  CHECK(std::holds_alternative<NeverActivate>(parse_activation_spec("never")));
  CHECK(std::get<EveryK>(parse_activation_spec("every:4")).k == 4);
  CHECK(std::get<WithProbability>(parse_activation_spec("prob:0.25")).p ==
        doctest::Approx(0.25));

  TempFile script("steps.txt", "# comment\n0\n4\n11\n");
  auto scripted = parse_activation_spec("script:" + script.path);
  CHECK(std::get<ScriptedActivation>(scripted).step_indices ==
        std::vector<std::int64_t>{0, 4, 11});

  CHECK_THROWS_AS(parse_activation_spec(""), SimError);
  CHECK_THROWS_AS(parse_activation_spec("every"), SimError);
  CHECK_THROWS_AS(parse_activation_spec("every:x"), SimError);
  CHECK_THROWS_AS(parse_activation_spec("prob:abc"), SimError);
  CHECK_THROWS_AS(parse_activation_spec("sometimes"), SimError);
  CHECK_THROWS_AS(parse_activation_spec("script:/nonexistent/path"), SimError);
}
