#include "recall/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "recall/bench.hpp"
#include "recall/generator.hpp"
#include "recall/parser.hpp"

namespace recall {

namespace {

BuildOptions options_from(const CliConfig& config) {
  BuildOptions options;
  options.complete = config.complete;
  options.no_pruning = config.no_pruning;
  if (config.budget) options.max_states = *config.budget;
  if (config.time_limit_s) {
    options.time_limit = std::chrono::milliseconds(static_cast<long long>(*config.time_limit_s * 1000.0));
  }
  return options;
}

void print_trace(const std::vector<TraceStep>& trace, std::ostream& out) {
  out << "Trace:";
  for (const auto& step : trace) {
    if (step.via) out << " -T" << *step.via << "->";
    out << " s" << step.state;
  }
  out << '\n';
}

void print_details(const ContractAutomaton& a, const std::vector<TraceStep>& trace, std::ostream& out) {
  out << "States:\n";
  for (const auto& step : trace) out << "  s" << step.state << ": " << render_formula(a.state(step.state).formula) << '\n';
  out << "Transitions:\n";
  for (const auto& step : trace) {
    if (!step.via) continue;
    out << "  T" << *step.via << ": " << a.label_of(a.transitions()[*step.via]).str() << '\n';
  }
}

bool write_file(const std::string& path, const std::string& text, std::ostream& err) {
  std::ofstream f(path);
  if (!f || !(f << text)) {
    err << "error: cannot write " << path << '\n';
    return false;
  }
  return true;
}

}  // namespace

void print_result(const CheckResult& result, bool verbose, std::ostream& out) {
  const ContractAutomaton& a = result.build.automaton;
  switch (result.verdict) {
    case Verdict::ConflictFree:
      out << "No conflict detected.\n";
      break;
    case Verdict::Inconclusive:
      out << "Inconclusive: " << result.reason << ".\n";
      break;
    case Verdict::Conflicts:
      out << "Conflict found in the contract.\n";
      for (std::size_t k = 0; k < result.reports.size(); ++k) {
        const auto& r = result.reports[k];
        if (k) out << '\n';
        out << "State: s" << r.state << '\n';
        out << "Conflict between: " << r.left_clause << " AND " << r.right_clause << '\n';
        print_trace(r.trace, out);
        if (verbose) {
          out << "Kind: " << to_string(r.kind) << " (" << r.left.str() << " vs " << r.right.str() << ")\n";
          print_details(a, r.trace, out);
        }
      }
      break;
  }
  if (verbose) {
    out << "Explored " << a.states().size() << " states and " << a.transitions().size() << " transitions ("
        << to_string(result.build.status) << ").\n";
  }
}

int run(const CliConfig& config, std::ostream& out, std::ostream& err) {
  std::ifstream in(config.input_path);
  if (!in) {
    err << "error: cannot read " << config.input_path << '\n';
    return exit_code::kInputError;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  ParseResult parsed = parse(buf.str());
  for (const auto& d : parsed.diagnostics) err << config.input_path << ':' << d.str() << '\n';
  if (!parsed.ok()) return exit_code::kInputError;

  CheckResult result = check(*parsed.spec, options_from(config));
  print_result(result, config.verbose, out);
  if (config.dot_path && !write_file(*config.dot_path, export_dot(result.build.automaton, config.verbose), err)) {
    return exit_code::kInputError;
  }
  switch (result.verdict) {
    case Verdict::ConflictFree:
      return exit_code::kConflictFree;
    case Verdict::Conflicts:
      return exit_code::kConflicts;
    case Verdict::Inconclusive:
      return exit_code::kInconclusive;
  }
  return exit_code::kInconclusive;
}

namespace {

// "8" or "8..15".
bool parse_range(const std::string& text, std::size_t& lo, std::size_t& hi) {
  try {
    auto dots = text.find("..");
    std::size_t used = 0;
    if (dots == std::string::npos) {
      lo = hi = std::stoul(text, &used);
      return used == text.size() && lo > 0;
    }
    lo = std::stoul(text.substr(0, dots), &used);
    if (used != dots) return false;
    std::string rest = text.substr(dots + 2);
    hi = std::stoul(rest, &used);
    return used == rest.size() && lo > 0 && lo <= hi;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conflict analysis for relativized contract specifications.", "recall"};
  app.set_help_flag("-h,--help", "Print the options and some examples, then exit");
  app.footer(
      "Examples:\n"
      "  recall contract.rcl              stop at the first conflict\n"
      "  recall -c -g out.dot contract.rcl  report every conflict, write the automaton\n"
      "  recall generate --individuals 3 --actions 4 --seed 7\n"
      "  recall bench --individuals 8 --actions 8..15 --runs 10 --out bench.csv\n"
      "Exit codes: 0 conflict-free, 1 conflicts, 2 unreadable or malformed input,\n"
      "            3 inconclusive (budget), 64 bad command line.");

  CliConfig config;
  std::string dot_path;
  std::uint64_t seed = 1;
  std::size_t budget = 0;
  double time_limit = 0;
  std::string out_path;
  app.add_flag("-c", config.complete, "Keep exploring after the first conflict and report all of them");
  app.add_option("-g", dot_path, "Write the automaton as a DOT graph to this file");
  app.add_flag("-n", config.no_pruning, "Try every subset of relativized actions (no pruning)");
  app.add_flag("-v", config.verbose, "Print state formulas and transition labels along the trace");
  app.add_option("--seed", seed, "Seed for generate and bench");
  app.add_option("--budget", budget, "Maximum number of automaton states")->check(CLI::PositiveNumber);
  app.add_option("--time-limit", time_limit, "Wall-clock limit per check, in seconds")->check(CLI::NonNegativeNumber);
  app.add_option("--out", out_path, "Output file for generate and bench (default: standard output)");
  app.add_option("input", config.input_path, "Contract file");

  GeneratorParams gen;
  gen.seed = 0;
  auto* generate_cmd = app.add_subcommand("generate", "Print a random contract");
  generate_cmd->fallthrough();
  generate_cmd->add_option("--individuals", gen.individuals, "Number of individuals")->check(CLI::PositiveNumber);
  generate_cmd->add_option("--actions", gen.actions, "Number of basic actions")->check(CLI::PositiveNumber);
  generate_cmd->add_option("--clauses", gen.clauses, "Number of clauses")->check(CLI::PositiveNumber);
  generate_cmd->add_option("--depth", gen.max_depth, "Maximum clause depth")->check(CLI::PositiveNumber);

  GeneratorParams bench_params;
  bench_params.individuals = 8;
  bench_params.clauses = 5;
  bench_params.max_depth = 4;
  std::string action_range = "8..15";
  std::size_t runs = 10;
  auto* bench_cmd = app.add_subcommand("bench", "Check random contracts and print CSV measurements");
  bench_cmd->fallthrough();
  bench_cmd->add_option("--individuals", bench_params.individuals, "Number of individuals")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--actions", action_range, "Number of actions, or a range like 8..15 (one group each)");
  bench_cmd->add_option("--clauses", bench_params.clauses, "Clauses per contract")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--depth", bench_params.max_depth, "Maximum clause depth")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--runs", runs, "Contracts per group")->check(CLI::PositiveNumber);
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return exit_code::kUsage;
  }

  if (budget) config.budget = budget;
  if (time_limit > 0) config.time_limit_s = time_limit;

  auto emit = [&](const std::string& text) {
    if (out_path.empty()) {
      out << text;
      return 0;
    }
    return write_file(out_path, text, err) ? 0 : exit_code::kInputError;
  };

  if (*generate_cmd) {
    gen.seed = seed;
    return emit(render(generate(gen)));
  }

  if (*bench_cmd) {
    std::size_t lo = 0;
    std::size_t hi = 0;
    if (!parse_range(action_range, lo, hi)) {
      err << "error: --actions expects N or N..M, got '" << action_range << "'\n";
      return exit_code::kUsage;
    }
    BenchConfig bc;
    bc.base_seed = seed;
    bc.options = options_from(config);
    for (std::size_t m = lo; m <= hi; ++m) {
      GeneratorParams p = bench_params;
      p.actions = m;
      bc.groups.push_back({std::to_string(p.individuals) + "x" + std::to_string(m), p, runs});
    }
    std::ofstream file;
    if (!out_path.empty()) {
      file.open(out_path);
      if (!file) {
        err << "error: cannot write " << out_path << '\n';
        return exit_code::kInputError;
      }
    }
    std::ostream& sink = out_path.empty() ? out : file;
    sink << bench_csv_header() << '\n';
    bench(bc, [&](const BenchRecord& r) { sink << to_csv_row(r) << '\n' << std::flush; });
    return 0;
  }

  if (config.input_path.empty()) {
    err << "error: no contract file given\n" << app.help();
    return exit_code::kUsage;
  }
  if (!dot_path.empty()) config.dot_path = dot_path;
  return run(config, out, err);
}

}  // namespace recall
