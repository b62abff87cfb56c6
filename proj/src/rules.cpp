#include "unison/rules.hpp"

#include <algorithm>
#include <string>

namespace unison {

namespace {

constexpr const char* kRuleNames[kRuleCount] = {
    "leftEndUp",      "leftEndDown",    "rightEndUp",     "rightEndDown",
    "middleLeftUp",   "middleLeftDown", "middleRightUp",  "middleRightDown",
    "syncUp",         "syncDown",
};

}  // namespace

const char* rule_name(Rule rule) {
  return kRuleNames[static_cast<int>(rule)];
}

std::optional<Rule> rule_from_name(const std::string& name) {
  for (int i = 0; i < kRuleCount; ++i) {
    if (name == kRuleNames[i]) return static_cast<Rule>(i);
  }
  return std::nullopt;
}

std::vector<Rule> rules_in(RuleMask mask) {
  std::vector<Rule> out;
  for (int i = 0; i < kRuleCount; ++i) {
    if (mask & (1u << i)) out.push_back(static_cast<Rule>(i));
  }
  return out;
}

bool guard_holds(const Configuration& c, const Topology& t, ProcessorId p,
                 Rule rule) {
  const int deg = t.degree(p);
  const auto l = t.left(p);
  const auto r = t.right(p);
  const ClockValue cp = c[p];

  switch (rule) {
    // End rules: degree 1. A left end has only a right neighbor and vice
    // versa. Up and down guards are complementary, so an end processor always
    // has exactly one of its two rules enabled.
    case Rule::LeftEndUp:
      return deg == 1 && !l && cp <= c[*r];
    case Rule::LeftEndDown:
      return deg == 1 && !l && cp > c[*r];
    case Rule::RightEndUp:
      return deg == 1 && !r && cp <= c[*l];
    case Rule::RightEndDown:
      return deg == 1 && !r && cp > c[*l];

    // Middle rules: move by one while aligned with one neighbor, ordered
    // against the other.
    case Rule::MiddleLeftUp:
      return deg == 2 && (cp == c[*l] || cp == clock_sub(c[*l], 1)) &&
             cp <= c[*r];
    case Rule::MiddleLeftDown:
      return deg == 2 && (cp == c[*l] || cp == clock_add(c[*l], 1)) &&
             cp > c[*r];
    case Rule::MiddleRightUp:
      return deg == 2 && (cp == c[*r] || cp == clock_sub(c[*r], 1)) &&
             cp <= c[*l];
    case Rule::MiddleRightDown:
      return deg == 2 && (cp == c[*r] || cp == clock_add(c[*r], 1)) &&
             cp > c[*l];

    // Sync rules: jump when out of unison with both neighbors on the same
    // side.
    case Rule::SyncUp:
      return deg == 2 && cp < clock_sub(c[*l], 1) && cp < clock_sub(c[*r], 1);
    case Rule::SyncDown:
      return deg == 2 && cp > clock_add(c[*l], 1) && cp > clock_add(c[*r], 1);
  }
  return false;
}

RuleMask enabled_rules(const Configuration& c, const Topology& t,
                       const std::vector<ProcessorRole>& roles,
                       ProcessorId p) {
  if (p < 0 || static_cast<std::size_t>(p) >= roles.size()) {
    fail(ErrorCode::IndexOutOfRange,
         "processor " + std::to_string(p) + " has no role entry");
  }
  if (!roles[p].is_correct()) {
    fail(ErrorCode::RoleMismatch, "processor " + std::to_string(p) +
                                      " is not correct; faulty processors "
                                      "do not execute rules");
  }
  RuleMask mask = 0;
  for (int i = 0; i < kRuleCount; ++i) {
    if (guard_holds(c, t, p, static_cast<Rule>(i))) {
      mask |= static_cast<RuleMask>(1u << i);
    }
  }
  return mask;
}

ClockValue rule_command_value(const Configuration& c, const Topology& t,
                              ProcessorId p, Rule rule) {
  const auto l = t.left(p);
  const auto r = t.right(p);
  switch (rule) {
    case Rule::LeftEndUp:
      return clock_add(c[*r], 1);
    case Rule::LeftEndDown:
      return clock_sub(c[*r], 1);
    case Rule::RightEndUp:
      return clock_add(c[*l], 1);
    case Rule::RightEndDown:
      return clock_sub(c[*l], 1);
    case Rule::MiddleLeftUp:
    case Rule::MiddleRightUp:
      return clock_add(c[p], 1);
    case Rule::MiddleLeftDown:
    case Rule::MiddleRightDown:
      return clock_sub(c[p], 1);
    case Rule::SyncUp:
      return std::min(c[*l], c[*r]);
    case Rule::SyncDown:
      return std::max(c[*l], c[*r]);
  }
  fail(ErrorCode::InvalidParams, "unknown rule");
}

Configuration apply_rule(const Configuration& c, const Topology& t,
                         ProcessorId p, Rule rule) {
  if (!guard_holds(c, t, p, rule)) {
    fail(ErrorCode::GuardViolation, std::string(rule_name(rule)) +
                                        " not enabled at processor " +
                                        std::to_string(p));
  }
  Configuration out = c;
  out[p] = rule_command_value(c, t, p, rule);
  return out;
}

}  // namespace unison
