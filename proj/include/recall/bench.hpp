#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "recall/automaton.hpp"
#include "recall/generator.hpp"

namespace recall {

struct BenchGroup {
  std::string name;
  GeneratorParams params;
  std::size_t runs = 10;
};

struct BenchConfig {
  std::vector<BenchGroup> groups;
  /// Run r of a group uses seed base_seed + r, so groups with equal
  /// parameters see the same specs.
  std::uint64_t base_seed = 1;
  /// Budgets for every run; time_limit bounds each run separately.
  BuildOptions options;
};

struct BenchRecord {
  std::string group;
  std::uint64_t seed = 0;
  std::size_t individuals = 0;
  std::size_t actions = 0;
  std::string verdict;
  double wall_ms = 0;
  std::size_t states = 0;
  /// Peak resident set size of the process so far; -1 if unavailable.
  long peak_rss_kb = -1;
  bool finished = false;
};

/// Generates and checks every run in order. Unfinished runs are recorded
/// with finished = false rather than dropped.
std::vector<BenchRecord> bench(const BenchConfig& config,
                               const std::function<void(const BenchRecord&)>& on_record = {});

std::string bench_csv_header();
std::string to_csv_row(const BenchRecord& r);

}  // namespace recall
