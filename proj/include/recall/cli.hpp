#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "recall/conflict.hpp"

namespace recall {

namespace exit_code {
inline constexpr int kConflictFree = 0;
inline constexpr int kConflicts = 1;
inline constexpr int kInputError = 2;
inline constexpr int kInconclusive = 3;
inline constexpr int kUsage = 64;
}  // namespace exit_code

struct CliConfig {
  std::string input_path;
  bool complete = false;
  bool no_pruning = false;
  bool verbose = false;
  std::optional<std::string> dot_path;
  std::optional<std::size_t> budget;
  std::optional<double> time_limit_s;
};

/// Checks one contract file and prints the outcome. Returns an exit code.
int run(const CliConfig& config, std::ostream& out, std::ostream& err);

/// Human-readable report of a check, as printed by run().
void print_result(const CheckResult& result, bool verbose, std::ostream& out);

/// Full command line: flag parsing plus the generate and bench subcommands.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace recall
