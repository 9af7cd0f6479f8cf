#include "recall/automaton.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "recall/parser.hpp"

namespace recall {

std::string TransitionLabel::str() const {
  switch (kind) {
    case Kind::Top:
      return "⊤";
    case Kind::Bottom:
      return "⊥";
    case Kind::Set:
      break;
  }
  return render_action_set(actions);
}

std::optional<StateId> ContractAutomaton::find(const Formula& f) const {
  auto it = index_.find(f.key());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

StateId ContractAutomaton::add_state(Formula f) {
  if (auto existing = find(f)) return *existing;
  StateId id = states_.size();
  index_.emplace(f.key(), id);
  if (f.is_bottom()) violation_ = id;
  DeonticGroups groups = deontic_tags(f);
  states_.push_back({std::move(f), std::move(groups), false});
  return id;
}

void ContractAutomaton::add_transition(StateId from, TransitionLabel label, StateId to) {
  std::string key = label.kind == TransitionLabel::Kind::Set ? render_action_set(label.actions) : label.str();
  auto [it, inserted] = label_index_.emplace(std::move(key), labels_.size());
  if (inserted) labels_.push_back(std::move(label));
  transitions_.push_back({from, it->second, to});
}

std::vector<RelativizedAction> relativized_universe(const std::set<Individual>& individuals,
                                                    const std::set<BasicAction>& actions) {
  std::vector<RelativizedAction> out;
  out.reserve(individuals.size() * individuals.size() * actions.size());
  for (const auto& s : individuals) {
    for (const auto& a : actions) {
      for (const auto& r : individuals) out.push_back({s, a, r});
    }
  }
  return out;
}

std::optional<std::uint64_t> count_action_sets(std::uint64_t n, std::uint64_t cap) {
  if (cap == 0 || cap >= n) {
    if (n > 64) return std::nullopt;
    return n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  }
  // Σ_{k=1..cap} C(n,k) with C(n,k) = C(n,k-1)·(n-k+1)/k. After cancelling
  // gcd(C(n,k-1), k) the remaining divisor divides (n-k+1) exactly.
  std::uint64_t total = 0;
  std::uint64_t term = 1;
  for (std::uint64_t k = 1; k <= cap; ++k) {
    const std::uint64_t g = std::gcd(term, k);
    const std::uint64_t factor = (n - k + 1) / (k / g);
    if (__builtin_mul_overflow(term / g, factor, &term)) return std::nullopt;
    if (__builtin_add_overflow(total, term, &total)) return std::nullopt;
  }
  return total;
}

namespace {

// Something a top-level operator tests about φ: `action` (empty for `1`)
// performed under `rel`.
struct Matcher {
  Relativization rel;
  std::optional<BasicAction> action;
  auto operator<=>(const Matcher&) const = default;
};

void collect_step(const Relativization& rel, const Action& a, std::set<Matcher>& out) {
  switch (a.kind()) {
    case ActionKind::Zero:
      return;
    case ActionKind::One:
      out.insert({rel, std::nullopt});
      return;
    case ActionKind::Atom:
      out.insert({rel, a.name()});
      return;
    case ActionKind::Negation:
    case ActionKind::Star:
      collect_step(rel, a.inner(), out);
      return;
    default:
      collect_step(rel, a.left(), out);
      collect_step(rel, a.right(), out);
      return;
  }
}

void collect_matchers(const Formula& f, std::set<Matcher>& out) {
  switch (f.kind()) {
    case FormulaKind::Obligation:
    case FormulaKind::Prohibition:
    case FormulaKind::Dynamic:
      collect_step(f.rel(), f.action(), out);
      return;
    case FormulaKind::And:
    case FormulaKind::XChoice:
      for (const auto& c : f.children()) collect_matchers(c, out);
      return;
    default:
      return;
  }
}

// The predicates a single triple can make true. Global matchers become one
// predicate per sender since they need every individual to act.
std::set<std::string> signature(const RelativizedAction& t, const std::set<Matcher>& matchers) {
  std::set<std::string> sig;
  for (const auto& m : matchers) {
    if (m.action && *m.action != t.action) continue;
    const std::string what = m.action ? *m.action : std::string("1");
    switch (m.rel.kind) {
      case Relativization::Kind::Global:
        sig.insert(m.action ? "G|" + t.sender + "|" + what : std::string("N"));
        break;
      case Relativization::Kind::Performer:
        if (t.sender == m.rel.sender) sig.insert("P|" + t.sender + "|" + what);
        break;
      case Relativization::Kind::Directed:
        if (t.sender == m.rel.sender && t.receiver == m.rel.receiver) {
          sig.insert("D|" + t.sender + "|" + what + "|" + t.receiver);
        }
        break;
    }
  }
  return sig;
}

std::vector<std::vector<RelativizedAction>> pruned_units(const Formula& f, const Alphabet& alphabet) {
  std::set<Matcher> matchers;
  collect_matchers(f, matchers);
  if (matchers.empty()) return {};

  auto universe = relativized_universe(alphabet.individuals, alphabet.actions);
  std::vector<std::set<std::string>> sigs;
  sigs.reserve(universe.size());
  for (const auto& t : universe) sigs.push_back(signature(t, matchers));

  // Senders whose only role for action a is feeding a global matcher on a
  // can be bundled: the matcher only cares whether all of them act.
  std::map<BasicAction, std::vector<RelativizedAction>> bundles;
  std::set<std::size_t> bundled;
  for (const auto& m : matchers) {
    if (!m.rel.is_global() || !m.action) continue;
    const BasicAction& a = *m.action;
    for (const auto& s : alphabet.individuals) {
      const std::set<std::string> only{"G|" + s + "|" + a};
      std::vector<std::size_t> idx;
      bool all_plain = true;
      for (std::size_t k = 0; k < universe.size(); ++k) {
        if (universe[k].sender != s || universe[k].action != a) continue;
        idx.push_back(k);
        if (sigs[k] != only) all_plain = false;
      }
      if (!all_plain || idx.empty()) continue;
      bundles[a].push_back(universe[idx.front()]);
      bundled.insert(idx.begin(), idx.end());
    }
  }

  std::map<std::set<std::string>, RelativizedAction> reps;
  for (std::size_t k = 0; k < universe.size(); ++k) {
    if (sigs[k].empty() || bundled.contains(k)) continue;
    reps.emplace(sigs[k], universe[k]);
  }

  std::vector<std::vector<RelativizedAction>> units;
  for (const auto& [sig, t] : reps) units.push_back({t});
  for (auto& [a, members] : bundles) {
    std::sort(members.begin(), members.end());
    units.push_back(std::move(members));
  }
  std::sort(units.begin(), units.end());
  return units;
}

}  // namespace

ActionSetStream::ActionSetStream(const Formula& f, const Alphabet& alphabet, const BuildOptions& options)
    : cap_(options.max_set_size) {
  if (options.no_pruning) {
    for (auto& t : relativized_universe(alphabet.individuals, alphabet.actions)) units_.push_back({std::move(t)});
  } else {
    units_ = pruned_units(f, alphabet);
  }
  size_ = units_.size();
  // Units are disjoint and nonempty, so k units carry at least k triples.
  if (cap_ != 0) size_ = std::min(size_, cap_);
}

bool ActionSetStream::advance() {
  if (!started_) {
    started_ = true;
    combo_.resize(size_);
    for (std::size_t i = 0; i < size_; ++i) combo_[i] = i;
    return true;
  }
  const std::size_t n = units_.size();
  const std::size_t k = size_;
  // Next k-combination in lexicographic order.
  for (std::size_t i = k; i-- > 0;) {
    if (combo_[i] < n - k + i) {
      ++combo_[i];
      for (std::size_t j = i + 1; j < k; ++j) combo_[j] = combo_[j - 1] + 1;
      return true;
    }
  }
  if (size_ == 0) return false;
  --size_;
  combo_.resize(size_);
  for (std::size_t i = 0; i < size_; ++i) combo_[i] = i;
  return true;
}

bool ActionSetStream::next(ConcurrentActionSet& out) {
  while (!done_) {
    if (!advance()) {
      done_ = true;
      break;
    }
    std::size_t total = 0;
    for (auto i : combo_) total += units_[i].size();
    if (cap_ != 0 && total > cap_) continue;
    out.clear();
    for (auto i : combo_) out.insert(units_[i].begin(), units_[i].end());
    return true;
  }
  return false;
}

std::vector<ConcurrentActionSet> enumerate_action_sets(const Formula& f, const Alphabet& alphabet,
                                                       const BuildOptions& options) {
  ActionSetStream stream(normalize(f), alphabet, options);
  std::vector<ConcurrentActionSet> out;
  ConcurrentActionSet phi;
  while (stream.next(phi)) out.push_back(phi);
  return out;
}

const char* to_string(BuildStatus s) {
  switch (s) {
    case BuildStatus::Complete:
      return "complete";
    case BuildStatus::StoppedAtConflict:
      return "stopped at conflict";
    case BuildStatus::StateBudget:
      return "state budget exhausted";
    case BuildStatus::TransitionBudget:
      return "transition budget exhausted";
    case BuildStatus::TimeLimit:
      return "time limit reached";
  }
  return "?";
}

BuildResult construct(const ContractSpec& spec, const BuildOptions& options, const StateCallback& on_state) {
  using Clock = std::chrono::steady_clock;
  const auto deadline = Clock::now() + options.time_limit;
  const bool timed = options.time_limit.count() > 0;

  const Alphabet alphabet = spec.semantic_alphabet();
  BuildResult result{ContractAutomaton(alphabet), BuildStatus::Complete};
  ContractAutomaton& a = result.automaton;

  struct Frame {
    StateId state;
    ActionSetStream stream;
  };
  std::vector<Frame> stack;

  // Alg. 1 on entry to a state: conflict check, sinks, or schedule expansion.
  // Returns false when the build has to stop.
  auto enter = [&](StateId s) {
    if (on_state && on_state(a, s) == Visit::Conflict) {
      a.mark_conflicting(s);
      if (!options.complete) {
        result.status = BuildStatus::StoppedAtConflict;
        return false;
      }
      return true;
    }
    const Formula& f = a.state(s).formula;
    if (f.is_top()) {
      a.add_transition(s, {TransitionLabel::Kind::Top, {}}, s);
    } else if (f.is_bottom()) {
      a.add_transition(s, {TransitionLabel::Kind::Bottom, {}}, s);
    } else {
      stack.push_back({s, ActionSetStream(f, alphabet, options)});
    }
    return true;
  };

  if (!enter(a.add_state(normalize(spec.root())))) return result;

  std::size_t ticks = 0;
  ConcurrentActionSet phi;
  while (!stack.empty()) {
    if (timed && (++ticks & 0xFF) == 0 && Clock::now() > deadline) {
      result.status = BuildStatus::TimeLimit;
      return result;
    }
    Frame& top = stack.back();
    if (!top.stream.next(phi)) {
      stack.pop_back();
      continue;
    }
    const StateId from = top.state;
    Formula succ = advance(a.state(from).formula, phi, alphabet.individuals);
    if (a.transitions().size() >= options.max_transitions) {
      result.status = BuildStatus::TransitionBudget;
      return result;
    }
    auto existing = a.find(succ);
    if (!existing && a.states().size() >= options.max_states) {
      result.status = BuildStatus::StateBudget;
      return result;
    }
    StateId to = existing ? *existing : a.add_state(std::move(succ));
    a.add_transition(from, {TransitionLabel::Kind::Set, phi}, to);
    if (!existing && !enter(to)) return result;
  }
  return result;
}

std::vector<TraceStep> trace_to(const ContractAutomaton& a, StateId target) {
  if (target >= a.states().size()) throw std::out_of_range("unknown state s" + std::to_string(target));
  std::vector<std::vector<std::size_t>> out_edges(a.states().size());
  for (std::size_t k = 0; k < a.transitions().size(); ++k) out_edges[a.transitions()[k].from].push_back(k);

  std::vector<std::optional<std::size_t>> via(a.states().size());
  std::vector<bool> seen(a.states().size(), false);
  std::deque<StateId> queue{a.initial()};
  seen[a.initial()] = true;
  while (!queue.empty() && !seen[target]) {
    StateId s = queue.front();
    queue.pop_front();
    for (std::size_t k : out_edges[s]) {
      StateId to = a.transitions()[k].to;
      if (seen[to]) continue;
      seen[to] = true;
      via[to] = k;
      queue.push_back(to);
    }
  }
  if (!seen[target]) throw std::out_of_range("state s" + std::to_string(target) + " is unreachable");

  std::vector<TraceStep> path;
  for (StateId s = target;;) {
    path.push_back({s, via[s]});
    if (!via[s]) break;
    s = a.transitions()[*via[s]].from;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out;
}

}  // namespace

std::string export_dot(const ContractAutomaton& a, bool verbose) {
  std::ostringstream os;
  os << "digraph contract {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (StateId s = 0; s < a.states().size(); ++s) {
    const auto& st = a.states()[s];
    std::string label = "s" + std::to_string(s);
    if (verbose) label += "\n" + render_formula(st.formula);
    os << "  s" << s << " [label=\"" << dot_escape(label) << "\"";
    if (a.violation() == s) os << ", shape=doublecircle";
    if (st.conflicting) os << ", style=filled, fillcolor=gray";
    os << "];\n";
  }
  for (const auto& t : a.transitions()) {
    os << "  s" << t.from << " -> s" << t.to << " [label=\"" << dot_escape(a.label_of(t).str()) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace recall
