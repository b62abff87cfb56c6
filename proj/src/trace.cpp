#include "unison/trace.hpp"

#include <sstream>

#include <json.hpp>

namespace unison {

namespace {

using OrderedJson = nlohmann::ordered_json;

std::vector<RuleMask> enabled_masks(const Configuration& c,
                                    const Topology& topo,
                                    const std::vector<ProcessorRole>& roles) {
  std::vector<RuleMask> masks(roles.size(), 0);
  for (ProcessorId p = 0; p < static_cast<ProcessorId>(roles.size()); ++p) {
    if (roles[p].is_correct()) masks[p] = enabled_rules(c, topo, roles, p);
  }
  return masks;
}

}  // namespace

const char* step_kind_name(StepKind kind) {
  switch (kind) {
    case StepKind::Rule:
      return "rule";
    case StepKind::Byzantine:
      return "byzantine";
    case StepKind::CrashNoop:
      return "crash-noop";
    case StepKind::Override:
      return "override";
  }
  return "unknown";
}

std::optional<StepKind> step_kind_from_name(const std::string& name) {
  if (name == "rule") return StepKind::Rule;
  if (name == "byzantine") return StepKind::Byzantine;
  if (name == "crash-noop") return StepKind::CrashNoop;
  if (name == "override") return StepKind::Override;
  return std::nullopt;
}

std::string encode_trace(const Trace& trace) {
  std::string out;
  for (const StepRecord& rec : trace.records) {
    OrderedJson obj;
    obj["step"] = rec.step;
    obj["round"] = rec.round;
    obj["actor"] = rec.actor;
    obj["kind"] = step_kind_name(rec.kind);
    if (rec.kind == StepKind::Rule) obj["rule"] = rule_name(*rec.rule);
    obj["written"] = rec.written;
    obj["clocks"] = rec.clocks_after;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

Trace decode_trace(const std::string& bytes, const Topology& topo,
                   const std::vector<ProcessorRole>& roles,
                   const Configuration& initial) {
  Trace trace;
  trace.topology = topo;
  trace.roles = roles;
  trace.initial = initial;

  int correct_total = 0;
  for (const auto& role : roles) {
    if (role.is_correct()) ++correct_total;
  }
  std::vector<bool> acted(roles.size(), false);
  int acted_count = 0;

  Configuration current = initial;
  std::istringstream in(bytes);
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    OrderedJson obj;
    try {
      obj = OrderedJson::parse(line);
    } catch (const std::exception& e) {
      fail(ErrorCode::IoError,
           "trace line " + std::to_string(lineno) + ": " + e.what());
    }

    StepRecord rec;
    try {
      rec.step = obj.at("step").get<std::int64_t>();
      rec.round = obj.at("round").get<std::int64_t>();
      rec.actor = obj.at("actor").get<ProcessorId>();
      auto kind = step_kind_from_name(obj.at("kind").get<std::string>());
      if (!kind) {
        fail(ErrorCode::IoError, "trace line " + std::to_string(lineno) +
                                     ": unknown step kind");
      }
      rec.kind = *kind;
      if (rec.kind == StepKind::Rule) {
        auto rule = rule_from_name(obj.at("rule").get<std::string>());
        if (!rule) {
          fail(ErrorCode::IoError, "trace line " + std::to_string(lineno) +
                                       ": unknown rule name");
        }
        rec.rule = *rule;
      }
      rec.written = obj.at("written").get<ClockValue>();
      rec.clocks_after = obj.at("clocks").get<Configuration>();
    } catch (const SimError&) {
      throw;
    } catch (const std::exception& e) {
      fail(ErrorCode::IoError,
           "trace line " + std::to_string(lineno) + ": " + e.what());
    }
    if (rec.clocks_after.size() != roles.size()) {
      fail(ErrorCode::IoError, "trace line " + std::to_string(lineno) +
                                   ": clock vector has wrong length");
    }
    if (rec.actor < 0 || static_cast<std::size_t>(rec.actor) >= roles.size()) {
      fail(ErrorCode::IoError, "trace line " + std::to_string(lineno) +
                                   ": actor out of range");
    }

    rec.enabled_before = enabled_masks(current, topo, roles);
    current = rec.clocks_after;

    if ((rec.kind == StepKind::Rule || rec.kind == StepKind::Override) &&
        roles[rec.actor].is_correct()) {
      if (!acted[rec.actor]) {
        acted[rec.actor] = true;
        ++acted_count;
        if (acted_count == correct_total && correct_total > 0) {
          trace.round_boundaries.push_back(rec.step);
          std::fill(acted.begin(), acted.end(), false);
          acted_count = 0;
        }
      }
    }

    trace.records.push_back(std::move(rec));
  }
  return trace;
}

}  // namespace unison
