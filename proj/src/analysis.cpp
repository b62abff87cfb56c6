#include "unison/analysis.hpp"

#include <algorithm>
#include <string>

namespace unison {

namespace {

bool edge_intact(const Configuration& c, const std::vector<ProcessorRole>& roles,
                 ProcessorId a, ProcessorId b) {
  return roles[a].is_correct() && roles[b].is_correct() &&
         in_unison(c[a], c[b]);
}

Configuration config_before(const Trace& trace, std::size_t record_index) {
  return record_index == 0 ? trace.initial
                           : trace.records[record_index - 1].clocks_after;
}

}  // namespace

IslandPartition islands(const Configuration& c,
                        const std::vector<ProcessorRole>& roles,
                        const Topology& topo) {
  const int n = topo.n();
  IslandPartition part;
  part.island_of.assign(n, -1);

  if (topo.kind() == TopologyKind::Chain) {
    for (int i = 0; i < n; ++i) {
      if (!roles[i].is_correct()) continue;
      bool extends = i > 0 && part.island_of[i - 1] >= 0 &&
                     edge_intact(c, roles, i - 1, i);
      if (extends) {
        part.island_of[i] = part.island_of[i - 1];
        part.islands.back().push_back(i);
      } else {
        part.island_of[i] = static_cast<int>(part.islands.size());
        part.islands.push_back({i});
      }
    }
    return part;
  }

  // Ring: if every edge of the full cycle is intact, all correct processors
  // form one island; otherwise cut at a broken position and scan linearly.
  bool full_cycle = true;
  int cut = -1;
  for (int i = 0; i < n; ++i) {
    int next = (i + 1) % n;
    if (!edge_intact(c, roles, i, next)) {
      full_cycle = false;
      cut = next;  // the arc starting at `next` does not extend backwards
      break;
    }
  }
  if (full_cycle) {
    part.islands.push_back({});
    for (int i = 0; i < n; ++i) {
      part.island_of[i] = 0;
      part.islands[0].push_back(i);
    }
    return part;
  }

  for (int off = 0; off < n; ++off) {
    int i = (cut + off) % n;
    if (!roles[i].is_correct()) continue;
    int prev = (i + n - 1) % n;
    bool extends = off > 0 && part.island_of[prev] >= 0 &&
                   edge_intact(c, roles, prev, i);
    if (extends) {
      part.island_of[i] = part.island_of[prev];
      part.islands[part.island_of[i]].push_back(i);
    } else {
      part.island_of[i] = static_cast<int>(part.islands.size());
      part.islands.push_back({i});
    }
  }
  return part;
}

DriftReport max_drift(const Configuration& c,
                      const std::vector<ProcessorRole>& roles,
                      const Topology& topo) {
  DriftReport report;
  const int n = topo.n();
  const int edge_count = topo.kind() == TopologyKind::Chain ? n - 1 : n;
  for (int i = 0; i < edge_count; ++i) {
    int j = (i + 1) % n;
    if (!roles[i].is_correct() || !roles[j].is_correct()) continue;
    ClockValue d = clock_drift(c[i], c[j]);
    report.edges.push_back({i, j, d});
    report.l = std::max(report.l, d);
  }
  return report;
}

bool inv_holds(const Configuration& c, const std::vector<ProcessorRole>& roles,
               const Topology& topo) {
  return max_drift(c, roles, topo).l <= 1;
}

std::int64_t increment_count(const Trace& trace, ProcessorId p, StepSpan span) {
  std::int64_t count = 0;
  const auto size = static_cast<std::int64_t>(trace.records.size());
  std::int64_t from = std::max<std::int64_t>(span.from, 0);
  std::int64_t to = std::min(span.to, size - 1);
  for (std::int64_t i = from; i <= to; ++i) {
    ClockValue before = config_before(trace, static_cast<std::size_t>(i))[p];
    ClockValue after = trace.records[i].clocks_after[p];
    if (after > before) ++count;
  }
  return count;
}

CycleResult end_cycle_type(const Trace& trace, ProcessorId end,
                           ClockValue neighbor_clock) {
  // States of the end processor: its clock after each of its own steps,
  // tagged with how the value was produced. -1 tags the initial state and
  // override writes; rules use their enum value.
  struct State {
    ClockValue clock;
    int tag;
    bool operator==(const State&) const = default;
  };
  constexpr int kHorizon = 64;

  std::vector<State> states;
  states.push_back({trace.initial[end], -1});
  for (const StepRecord& rec : trace.records) {
    if (rec.actor != end) continue;
    int tag = rec.kind == StepKind::Rule ? static_cast<int>(*rec.rule) : -1;
    states.push_back({rec.clocks_after[end], tag});
    if (states.size() > kHorizon) break;
  }

  std::size_t first = 0, repeat = 0;
  bool found = false;
  for (std::size_t k = 1; k < states.size() && !found; ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      if (states[k] == states[j]) {
        first = j;
        repeat = k;
        found = true;
        break;
      }
    }
  }
  if (!found) {
    fail(ErrorCode::NoCycleDetected,
         "no repeated state within " + std::to_string(kHorizon) + " steps");
  }

  CycleResult result;
  for (std::size_t i = first; i < repeat; ++i) {
    result.cycle.push_back(states[i].clock);
  }

  auto matches_cyclic = [&](const std::vector<ClockValue>& pattern) {
    if (result.cycle.size() != pattern.size()) return false;
    const std::size_t len = pattern.size();
    for (std::size_t shift = 0; shift < len; ++shift) {
      bool all = true;
      for (std::size_t i = 0; i < len && all; ++i) {
        all = result.cycle[(shift + i) % len] == pattern[i];
      }
      if (all) return true;
    }
    return false;
  };

  const ClockValue b = neighbor_clock;
  if (matches_cyclic({b, clock_add(b, 1)})) {
    result.type = CycleResult::Type::Type1;
  } else if (matches_cyclic({b, clock_sub(b, 1)})) {
    result.type = CycleResult::Type::Type2;
  } else if (matches_cyclic({b, clock_add(b, 1), clock_sub(b, 1)})) {
    result.type = CycleResult::Type::Type3;
  } else {
    result.type = CycleResult::Type::Other;
  }
  return result;
}

// The whole-trace checks treat records sharing a step index as one transition
// (a synchronous or distributed step): properties are evaluated against the
// transition's pre- and post-configurations, never the intermediate
// bookkeeping records between simultaneous actions.

std::optional<std::int64_t> find_island_closure_violation(const Trace& trace) {
  IslandPartition before =
      islands(trace.initial, trace.roles, trace.topology);
  std::size_t i = 0;
  while (i < trace.records.size()) {
    std::size_t last = i;
    while (last + 1 < trace.records.size() &&
           trace.records[last + 1].step == trace.records[i].step) {
      ++last;
    }
    IslandPartition after =
        islands(trace.records[last].clocks_after, trace.roles, trace.topology);
    for (const auto& island : before.islands) {
      for (std::size_t k = 1; k < island.size(); ++k) {
        if (!after.same_island(island[0], island[k])) {
          return trace.records[i].step;
        }
      }
    }
    before = std::move(after);
    i = last + 1;
  }
  return std::nullopt;
}

std::optional<std::int64_t> find_island_count_increase(const Trace& trace) {
  std::size_t before =
      islands(trace.initial, trace.roles, trace.topology).islands.size();
  std::size_t i = 0;
  while (i < trace.records.size()) {
    std::size_t last = i;
    while (last + 1 < trace.records.size() &&
           trace.records[last + 1].step == trace.records[i].step) {
      ++last;
    }
    std::size_t after =
        islands(trace.records[last].clocks_after, trace.roles, trace.topology)
            .islands.size();
    if (after > before) return trace.records[i].step;
    before = after;
    i = last + 1;
  }
  return std::nullopt;
}

std::optional<std::int64_t> find_drift_increase_violation(const Trace& trace) {
  std::size_t i = 0;
  while (i < trace.records.size()) {
    std::size_t last = i;
    while (last + 1 < trace.records.size() &&
           trace.records[last + 1].step == trace.records[i].step) {
      ++last;
    }
    // Every action of the transition is judged against the shared
    // pre-configuration: simultaneous values are computed from it.
    Configuration before = config_before(trace, i);
    for (std::size_t k = i; k <= last; ++k) {
      const StepRecord& rec = trace.records[k];
      if (rec.kind != StepKind::Rule && rec.kind != StepKind::Override) {
        continue;
      }
      Neighbors nb = trace.topology.neighbors(rec.actor);
      for (auto q : {nb.left, nb.right}) {
        if (!q || !trace.roles[*q].is_correct()) continue;
        if (in_unison(before[rec.actor], before[*q])) continue;
        ClockValue pre = clock_drift(before[rec.actor], before[*q]);
        ClockValue post = clock_drift(rec.written, before[*q]);
        if (post > pre) return rec.step;
      }
    }
    i = last + 1;
  }
  return std::nullopt;
}

std::optional<std::int64_t> find_inv_closure_violation(const Trace& trace) {
  bool held = inv_holds(trace.initial, trace.roles, trace.topology);
  std::size_t i = 0;
  while (i < trace.records.size()) {
    std::size_t last = i;
    while (last + 1 < trace.records.size() &&
           trace.records[last + 1].step == trace.records[i].step) {
      ++last;
    }
    bool now = inv_holds(trace.records[last].clocks_after, trace.roles,
                         trace.topology);
    if (held && !now) return trace.records[i].step;
    held = held || now;
    i = last + 1;
  }
  return std::nullopt;
}

}  // namespace unison
