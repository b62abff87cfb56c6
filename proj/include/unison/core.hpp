#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "unison/errors.hpp"

namespace unison {

/// Clock domain is signed: transient configurations may drive clocks below
/// zero (a down rule next to a neighbor at 0 writes -1), so natural numbers
/// would underflow. Arithmetic is overflow checked, never wrapping.
using ClockValue = std::int64_t;
using ProcessorId = std::int32_t;

ClockValue clock_add(ClockValue a, ClockValue b);
ClockValue clock_sub(ClockValue a, ClockValue b);

/// |a - b|, overflow checked.
ClockValue clock_drift(ClockValue a, ClockValue b);

enum class TopologyKind { Chain, Ring };

const char* topology_kind_name(TopologyKind kind);
std::optional<TopologyKind> topology_kind_from_name(const std::string& name);

struct Neighbors {
  std::optional<ProcessorId> left;
  std::optional<ProcessorId> right;
};

/// Line (chain) or cycle (ring) of n processors, identified 0..n-1.
/// Chains need n >= 2 (a single processor has no neighbor to synchronize
/// with); rings need n >= 3 (a 2-ring would duplicate the chain edge).
class Topology {
 public:
  Topology(TopologyKind kind, int n);

  TopologyKind kind() const { return kind_; }
  int n() const { return n_; }

  int degree(ProcessorId p) const;
  std::optional<ProcessorId> left(ProcessorId p) const;
  std::optional<ProcessorId> right(ProcessorId p) const;
  Neighbors neighbors(ProcessorId p) const;
  bool adjacent(ProcessorId a, ProcessorId b) const;

  friend bool operator==(const Topology& a, const Topology& b) {
    return a.kind_ == b.kind_ && a.n_ == b.n_;
  }

 private:
  void check_pid(ProcessorId p) const;

  TopologyKind kind_;
  int n_;
};

Topology make_topology(TopologyKind kind, int n);

using Configuration = std::vector<ClockValue>;

}  // namespace unison
