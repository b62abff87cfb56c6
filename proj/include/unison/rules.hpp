#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "unison/adversary.hpp"
#include "unison/core.hpp"

namespace unison {

/// The ten guarded rules. End rules fire on degree-1 processors (chain ends),
/// the other six on degree-2 processors. The enum order is the fixed rule
/// order used for scheduler tie-breaks and synchronous selection.
enum class Rule : int {
  LeftEndUp = 0,
  LeftEndDown = 1,
  RightEndUp = 2,
  RightEndDown = 3,
  MiddleLeftUp = 4,
  MiddleLeftDown = 5,
  MiddleRightUp = 6,
  MiddleRightDown = 7,
  SyncUp = 8,
  SyncDown = 9,
};

inline constexpr int kRuleCount = 10;

const char* rule_name(Rule rule);
std::optional<Rule> rule_from_name(const std::string& name);

/// Set of rules as a bitmask indexed by the enum value.
using RuleMask = std::uint16_t;

inline constexpr RuleMask rule_bit(Rule r) {
  return static_cast<RuleMask>(1u << static_cast<int>(r));
}
inline constexpr bool mask_contains(RuleMask m, Rule r) {
  return (m & rule_bit(r)) != 0;
}
std::vector<Rule> rules_in(RuleMask mask);

/// Guard of `rule` at `p`, including the degree requirement. Pure predicate,
/// usable for any processor regardless of role.
bool guard_holds(const Configuration& c, const Topology& t, ProcessorId p,
                 Rule rule);

/// All rules whose guard holds at `p`. `p` must be Correct (RoleMismatch
/// otherwise); faulty processors do not execute rules.
RuleMask enabled_rules(const Configuration& c, const Topology& t,
                       const std::vector<ProcessorRole>& roles, ProcessorId p);

/// Value the command of `rule` would write at `p`. Does not check the guard.
ClockValue rule_command_value(const Configuration& c, const Topology& t,
                              ProcessorId p, Rule rule);

/// Applies the command of `rule`. The guard is checked, not assumed
/// (GuardViolation on failure).
Configuration apply_rule(const Configuration& c, const Topology& t,
                         ProcessorId p, Rule rule);

}  // namespace unison
