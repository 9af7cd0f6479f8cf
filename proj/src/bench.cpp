#include "recall/bench.hpp"

#include <sys/resource.h>

#include <chrono>
#include <iomanip>
#include <sstream>

#include "recall/conflict.hpp"

namespace recall {

namespace {

long peak_rss_kb() {
  rusage usage{};
  if (getrusage(RUSAGE_SELF, &usage) != 0) return -1;
  return usage.ru_maxrss;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::vector<BenchRecord> bench(const BenchConfig& config, const std::function<void(const BenchRecord&)>& on_record) {
  std::vector<BenchRecord> records;
  for (const auto& group : config.groups) {
    for (std::size_t run = 0; run < group.runs; ++run) {
      GeneratorParams params = group.params;
      params.seed = config.base_seed + run;
      ContractSpec spec = generate(params);

      const auto start = std::chrono::steady_clock::now();
      CheckResult result = check(spec, config.options);
      const auto stop = std::chrono::steady_clock::now();

      BenchRecord r;
      r.group = group.name;
      r.seed = params.seed;
      r.individuals = params.individuals;
      r.actions = params.actions;
      r.verdict = to_string(result.verdict);
      r.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
      r.states = result.build.automaton.states().size();
      r.peak_rss_kb = peak_rss_kb();
      r.finished = result.verdict != Verdict::Inconclusive;
      if (on_record) on_record(r);
      records.push_back(std::move(r));
    }
  }
  return records;
}

std::string bench_csv_header() { return "group,seed,individuals,actions,verdict,wall_ms,states,peak_rss_kb,finished"; }

std::string to_csv_row(const BenchRecord& r) {
  std::ostringstream os;
  os << csv_field(r.group) << ',' << r.seed << ',' << r.individuals << ',' << r.actions << ',' << r.verdict << ','
     << std::fixed << std::setprecision(3) << r.wall_ms << ',' << r.states << ',' << r.peak_rss_kb << ','
     << (r.finished ? "true" : "false");
  return os.str();
}

}  // namespace recall
