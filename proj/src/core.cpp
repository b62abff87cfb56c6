#include "unison/core.hpp"

#include <string>

namespace unison {

ClockValue clock_add(ClockValue a, ClockValue b) {
  ClockValue out;
  if (__builtin_add_overflow(a, b, &out)) {
    fail(ErrorCode::Overflow,
         "clock addition " + std::to_string(a) + " + " + std::to_string(b));
  }
  return out;
}

ClockValue clock_sub(ClockValue a, ClockValue b) {
  ClockValue out;
  if (__builtin_sub_overflow(a, b, &out)) {
    fail(ErrorCode::Overflow,
         "clock subtraction " + std::to_string(a) + " - " + std::to_string(b));
  }
  return out;
}

ClockValue clock_drift(ClockValue a, ClockValue b) {
  ClockValue d = clock_sub(a, b);
  if (d == INT64_MIN) {
    fail(ErrorCode::Overflow, "clock drift magnitude");
  }
  return d < 0 ? -d : d;
}

const char* topology_kind_name(TopologyKind kind) {
  return kind == TopologyKind::Chain ? "chain" : "ring";
}

std::optional<TopologyKind> topology_kind_from_name(const std::string& name) {
  if (name == "chain") return TopologyKind::Chain;
  if (name == "ring") return TopologyKind::Ring;
  return std::nullopt;
}

Topology::Topology(TopologyKind kind, int n) : kind_(kind), n_(n) {
  const int min = kind == TopologyKind::Chain ? 2 : 3;
  if (n < min) {
    fail(ErrorCode::SizeTooSmall, std::string(topology_kind_name(kind)) +
                                      " needs at least " + std::to_string(min) +
                                      " processors, got " + std::to_string(n));
  }
}

void Topology::check_pid(ProcessorId p) const {
  if (p < 0 || p >= n_) {
    fail(ErrorCode::IndexOutOfRange, "processor " + std::to_string(p) +
                                         " outside 0.." + std::to_string(n_ - 1));
  }
}

int Topology::degree(ProcessorId p) const {
  check_pid(p);
  if (kind_ == TopologyKind::Ring) return 2;
  return (p == 0 || p == n_ - 1) ? 1 : 2;
}

std::optional<ProcessorId> Topology::left(ProcessorId p) const {
  check_pid(p);
  if (kind_ == TopologyKind::Ring) return (p + n_ - 1) % n_;
  if (p == 0) return std::nullopt;
  return p - 1;
}

std::optional<ProcessorId> Topology::right(ProcessorId p) const {
  check_pid(p);
  if (kind_ == TopologyKind::Ring) return (p + 1) % n_;
  if (p == n_ - 1) return std::nullopt;
  return p + 1;
}

Neighbors Topology::neighbors(ProcessorId p) const {
  return Neighbors{left(p), right(p)};
}

bool Topology::adjacent(ProcessorId a, ProcessorId b) const {
  check_pid(a);
  check_pid(b);
  if (a == b) return false;
  return left(a) == b || right(a) == b;
}

Topology make_topology(TopologyKind kind, int n) { return Topology(kind, n); }

}  // namespace unison
