#include "unison/adversary.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "unison/rng.hpp"

namespace unison {

namespace {

constexpr std::uint64_t kWalkStream = 0x77616C6Bull;  // domain separator

bool strictly_increasing(const std::vector<std::int64_t>& xs) {
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (xs[i] <= xs[i - 1]) return false;
  }
  return true;
}

std::optional<ClockValue> scripted_write_at(const ScriptedWrites& s,
                                            std::int64_t step) {
  auto it = std::lower_bound(
      s.writes.begin(), s.writes.end(), step,
      [](const auto& entry, std::int64_t v) { return entry.first < v; });
  if (it != s.writes.end() && it->first == step) return it->second;
  return std::nullopt;
}

ClockValue min_neighbor_clock(const Configuration& view, const Topology& topo,
                              ProcessorId self) {
  Neighbors nb = topo.neighbors(self);
  std::optional<ClockValue> best;
  if (nb.left) best = view[*nb.left];
  if (nb.right) best = best ? std::min(*best, view[*nb.right]) : view[*nb.right];
  // Degree >= 1 always holds on chains and rings.
  return *best;
}

std::int64_t parse_int(const std::string& s, const std::string& what) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    fail(ErrorCode::UsageError, "bad integer '" + s + "' in " + what);
  }
  return value;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  return parts;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int faulty_count(const std::vector<ProcessorRole>& roles) {
  int count = 0;
  for (const auto& role : roles) {
    if (role.is_faulty()) ++count;
  }
  return count;
}

bool activation_fires(const ActivationPolicy& activation,
                      std::int64_t step_index) {
  if (std::holds_alternative<NeverActivate>(activation)) return false;
  if (const auto* every = std::get_if<EveryK>(&activation)) {
    return step_index % every->k == 0;
  }
  if (const auto* prob = std::get_if<WithProbability>(&activation)) {
    const double u =
        static_cast<double>(
            hash_mix(prob->seed, static_cast<std::uint64_t>(step_index)) >> 11) *
        0x1.0p-53;
    return u < prob->p;
  }
  const auto& scripted = std::get<ScriptedActivation>(activation);
  return std::binary_search(scripted.step_indices.begin(),
                            scripted.step_indices.end(), step_index);
}

std::pair<std::optional<ClockValue>, FaultState> fault_action(
    const ProcessorRole& role, const ActivationPolicy& activation,
    FaultState state, std::int64_t step_index, const Configuration& view,
    const Topology& topo, ProcessorId self) {
  if (role.kind == RoleKind::Correct) {
    fail(ErrorCode::RoleMismatch,
         "fault_action on correct processor " + std::to_string(self));
  }
  if (role.kind == RoleKind::Crashed) return {std::nullopt, state};
  if (!activation_fires(activation, step_index)) return {std::nullopt, state};

  const ByzantineStrategy& strategy = *role.strategy;
  if (const auto* fixed = std::get_if<FixedValue>(&strategy)) {
    return {fixed->value, state};
  }
  if (const auto* scripted = std::get_if<ScriptedWrites>(&strategy)) {
    return {scripted_write_at(*scripted, step_index), state};
  }
  if (const auto* walk = std::get_if<RandomWalkRange>(&strategy)) {
    Rng rng(hash_mix(walk->seed ^ kWalkStream,
                     static_cast<std::uint64_t>(state.walk_draws)));
    ClockValue value = rng.next_in(walk->lo, walk->hi);
    FaultState next = state;
    next.walk_draws += 1;
    return {value, next};
  }
  if (const auto* chase = std::get_if<ChaseBelow>(&strategy)) {
    return {clock_sub(min_neighbor_clock(view, topo, self), chase->offset),
            state};
  }
  return {std::nullopt, state};  // Silent
}

void validate_strategy(const ByzantineStrategy& strategy) {
  if (const auto* scripted = std::get_if<ScriptedWrites>(&strategy)) {
    std::vector<std::int64_t> steps;
    steps.reserve(scripted->writes.size());
    for (const auto& [step, value] : scripted->writes) {
      (void)value;
      steps.push_back(step);
    }
    if (!strictly_increasing(steps)) {
      fail(ErrorCode::InvalidParams,
           "scripted write step indices must be strictly increasing");
    }
  } else if (const auto* walk = std::get_if<RandomWalkRange>(&strategy)) {
    if (walk->lo > walk->hi) {
      fail(ErrorCode::InvalidParams, "random walk range lo > hi");
    }
  }
}

void validate_activation(const ActivationPolicy& activation) {
  if (const auto* every = std::get_if<EveryK>(&activation)) {
    if (every->k < 1) fail(ErrorCode::InvalidParams, "EveryK needs k >= 1");
  } else if (const auto* prob = std::get_if<WithProbability>(&activation)) {
    if (!(prob->p >= 0.0 && prob->p <= 1.0)) {
      fail(ErrorCode::InvalidParams, "activation probability outside [0, 1]");
    }
  } else if (const auto* scripted = std::get_if<ScriptedActivation>(&activation)) {
    if (!strictly_increasing(scripted->step_indices)) {
      fail(ErrorCode::InvalidParams,
           "scripted activation step indices must be strictly increasing");
    }
  }
}

ProcessorRole parse_fault_spec(const std::string& spec) {
  if (spec == "crash") return ProcessorRole::crashed();
  auto parts = split(spec, ':');
  if (parts.size() >= 2 && parts[0] == "byz") {
    const std::string& kind = parts[1];
    if (kind == "fixed" && parts.size() == 3) {
      return ProcessorRole::byzantine(
          FixedValue{parse_int(parts[2], "byz:fixed")});
    }
    if (kind == "silent" && parts.size() == 2) {
      return ProcessorRole::byzantine(Silent{});
    }
    if (kind == "chase" && parts.size() == 3) {
      return ProcessorRole::byzantine(
          ChaseBelow{parse_int(parts[2], "byz:chase")});
    }
    if (kind == "walk" && parts.size() == 4) {
      RandomWalkRange walk;
      walk.lo = parse_int(parts[2], "byz:walk lo");
      walk.hi = parse_int(parts[3], "byz:walk hi");
      return ProcessorRole::byzantine(walk);
    }
    if (kind == "script" && parts.size() == 3) {
      ScriptedWrites writes;
      std::istringstream in(read_file(parts[2]));
      std::string line;
      int lineno = 0;
      while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::int64_t step = 0;
        ClockValue value = 0;
        if (!(fields >> step >> value)) {
          fail(ErrorCode::UsageError, "byz script line " +
                                          std::to_string(lineno) +
                                          ": expected '<step> <value>'");
        }
        writes.writes.emplace_back(step, value);
      }
      return ProcessorRole::byzantine(writes);
    }
  }
  fail(ErrorCode::UsageError, "unknown fault spec '" + spec + "'");
}

ActivationPolicy parse_activation_spec(const std::string& spec) {
  if (spec == "never") return NeverActivate{};
  auto parts = split(spec, ':');
  if (parts.size() == 2 && parts[0] == "every") {
    return EveryK{parse_int(parts[1], "activation every:<k>")};
  }
  if (parts.size() == 2 && parts[0] == "prob") {
    WithProbability prob;
    try {
      prob.p = std::stod(parts[1]);
    } catch (const std::exception&) {
      fail(ErrorCode::UsageError, "bad probability '" + parts[1] + "'");
    }
    return prob;
  }
  if (parts.size() == 2 && parts[0] == "script") {
    ScriptedActivation scripted;
    std::istringstream in(read_file(parts[1]));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      scripted.step_indices.push_back(parse_int(line, "activation script"));
    }
    return scripted;
  }
  fail(ErrorCode::UsageError, "unknown activation spec '" + spec + "'");
}

}  // namespace unison
