#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "recall/decomposer.hpp"

namespace recall {

using StateId = std::size_t;

struct BuildOptions {
  bool complete = false;
  bool no_pruning = false;
  std::size_t max_states = 200'000;
  std::size_t max_transitions = 20'000'000;
  /// Zero disables the wall-clock limit.
  std::chrono::milliseconds time_limit{0};
  /// Largest |φ| considered; zero means no cap.
  std::size_t max_set_size = 0;
};

/// What a transition is labelled with: an action set, or the ⊤/⊥ marker of a
/// sink self-loop.
struct TransitionLabel {
  enum class Kind { Set, Top, Bottom };

  Kind kind = Kind::Set;
  ConcurrentActionSet actions;

  std::string str() const;
  bool operator==(const TransitionLabel&) const = default;
};

struct Transition {
  StateId from;
  std::size_t label;
  StateId to;
};

struct AutomatonState {
  Formula formula;
  DeonticGroups groups;
  bool conflicting = false;
};

class ContractAutomaton {
 public:
  explicit ContractAutomaton(Alphabet alphabet = {}) : alphabet_(std::move(alphabet)) {}

  const std::vector<AutomatonState>& states() const { return states_; }
  const AutomatonState& state(StateId s) const { return states_.at(s); }
  const std::vector<Transition>& transitions() const { return transitions_; }
  const TransitionLabel& label(std::size_t id) const { return labels_.at(id); }
  const TransitionLabel& label_of(const Transition& t) const { return labels_.at(t.label); }
  const Alphabet& alphabet() const { return alphabet_; }

  StateId initial() const { return 0; }
  std::optional<StateId> violation() const { return violation_; }
  std::optional<StateId> find(const Formula& f) const;

  StateId add_state(Formula f);
  void add_transition(StateId from, TransitionLabel label, StateId to);
  void mark_conflicting(StateId s) { states_.at(s).conflicting = true; }

 private:
  Alphabet alphabet_;
  std::vector<AutomatonState> states_;
  std::unordered_map<std::string, StateId> index_;
  std::optional<StateId> violation_;
  std::vector<Transition> transitions_;
  std::vector<TransitionLabel> labels_;
  std::unordered_map<std::string, std::size_t> label_index_;
};

/// 𝓘 × 𝓐_B × 𝓘 in lexicographic order.
std::vector<RelativizedAction> relativized_universe(const std::set<Individual>& individuals,
                                                    const std::set<BasicAction>& actions);

/// Number of nonempty subsets of an n-element universe with at most `cap`
/// elements (cap 0 = no cap). nullopt if it does not fit in 64 bits.
std::optional<std::uint64_t> count_action_sets(std::uint64_t n, std::uint64_t cap = 0);

/// Lazily yields the action sets to try from one state: largest first, ties
/// in lexicographic order of their members, ∅ last.
///
/// With pruning, triples are grouped by which of the formula's trigger and
/// obligation/prohibition predicates they satisfy and only one representative
/// per group is used; triples that satisfy none are dropped. Two sets that
/// hit the same predicates have the same successor, so nothing observable is
/// lost.
class ActionSetStream {
 public:
  ActionSetStream(const Formula& f, const Alphabet& alphabet, const BuildOptions& options);

  /// False once exhausted.
  bool next(ConcurrentActionSet& out);

  std::size_t unit_count() const { return units_.size(); }

 private:
  bool advance();

  std::vector<std::vector<RelativizedAction>> units_;
  std::size_t cap_ = 0;
  std::size_t size_ = 0;
  std::vector<std::size_t> combo_;
  bool started_ = false;
  bool done_ = false;
};

std::vector<ConcurrentActionSet> enumerate_action_sets(const Formula& f, const Alphabet& alphabet,
                                                       const BuildOptions& options);

enum class Visit { Continue, Conflict };

/// Called once per state, on entry, before it is expanded.
using StateCallback = std::function<Visit(const ContractAutomaton&, StateId)>;

enum class BuildStatus { Complete, StoppedAtConflict, StateBudget, TransitionBudget, TimeLimit };

const char* to_string(BuildStatus s);

struct BuildResult {
  ContractAutomaton automaton;
  BuildStatus status = BuildStatus::Complete;

  bool finished() const { return status == BuildStatus::Complete || status == BuildStatus::StoppedAtConflict; }
};

/// Depth-first construction of the contract automaton. States flagged by the
/// callback are not expanded; unless options.complete is set the build stops
/// at the first one.
BuildResult construct(const ContractSpec& spec, const BuildOptions& options, const StateCallback& on_state = {});

struct TraceStep {
  StateId state;
  /// Index into transitions() of the edge that reached `state`; empty for s0.
  std::optional<std::size_t> via;
};

/// A shortest path from s0 to `target`. Throws std::out_of_range if the
/// state is unknown or unreachable.
std::vector<TraceStep> trace_to(const ContractAutomaton& a, StateId target);

std::string export_dot(const ContractAutomaton& a, bool verbose = false);

}  // namespace recall
