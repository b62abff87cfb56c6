#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "unison/engine.hpp"

namespace unison {

// Exit codes: 0 success (stabilized / all checks pass), 1 usage error,
// 2 not stabilized within max-rounds, 3 invariant or assertion violation.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNotStabilized = 2;
inline constexpr int kExitViolation = 3;

enum class Subcommand { Run, Scenario, Check };

struct CliConfig {
  Subcommand subcommand = Subcommand::Run;

  // run
  std::optional<std::string> topology;
  std::optional<int> size;
  std::optional<std::string> init;  // "random" or comma-separated clocks
  std::optional<ClockValue> drift;
  std::vector<ProcessorId> faulty;
  std::optional<std::string> fault;
  std::optional<std::string> activation;
  std::optional<std::string> scheduler;
  std::optional<std::int64_t> max_rounds;
  std::optional<std::int64_t> max_steps;
  bool unchecked = false;

  // scenario / check
  std::string target;  // scenario or check battery name
  std::optional<std::int64_t> t;
  std::optional<ClockValue> a;
  std::optional<int> trials;

  // common
  std::uint64_t seed = 0;
  std::optional<std::string> trace_path;
  std::optional<std::string> stats_path;
};

/// Parses argv (without the program name) merged over an optional JSON config
/// (snake_case keys mirroring the kebab-case flags; unknown keys rejected).
/// Flags override config values; the seed falls back to the UNISON_SEED
/// environment variable. Throws SimError(UsageError) listing every violation.
CliConfig parse_invocation(const std::vector<std::string>& argv,
                           const std::optional<std::string>& config_json);

/// Executes the parsed invocation and returns the process exit code.
/// Violations print the property name and first offending step to stderr.
int execute(const CliConfig& config);

/// Entry point used by main(): loads --config if present, parses, executes.
int cli_main(const std::vector<std::string>& argv);

}  // namespace unison
