#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace recall {

using Individual = std::string;
using BasicAction = std::string;

/// Who a deontic or dynamic operator is bound to: everybody (g), one
/// performer (i) or a performer/receiver pair (i↷j).
struct Relativization {
  enum class Kind : std::uint8_t { Global, Performer, Directed };

  Kind kind = Kind::Global;
  Individual sender;
  Individual receiver;

  static Relativization global() { return {}; }
  static Relativization performer(Individual i) { return {Kind::Performer, std::move(i), {}}; }
  static Relativization directed(Individual i, Individual j) {
    return {Kind::Directed, std::move(i), std::move(j)};
  }

  bool is_global() const { return kind == Kind::Global; }

  /// File syntax: "" for global, "{i}" or "{i,j}".
  std::string str() const;

  auto operator<=>(const Relativization&) const = default;
};

enum class ActionKind : std::uint8_t { Zero, One, Atom, Concurrent, Sequence, Choice, Negation, Star };

/// Immutable action expression tree. Negation and Star are only legal
/// inside dynamic triggers; the parser enforces that.
class Action {
 public:
  static Action zero();
  static Action one();
  static Action atom(BasicAction name);
  static Action concurrent(Action l, Action r);
  static Action sequence(Action l, Action r);
  static Action choice(Action l, Action r);
  static Action negation(Action inner);
  static Action star(Action inner);

  ActionKind kind() const { return node_->kind; }
  const BasicAction& name() const { return node_->name; }
  const Action& left() const { return node_->children[0]; }
  const Action& right() const { return node_->children[1]; }
  const Action& inner() const { return node_->children[0]; }
  const std::string& key() const { return node_->key; }

  bool is_basic() const { return kind() == ActionKind::Atom; }
  /// Zero, One or Atom.
  bool is_leaf() const;
  /// Built from leaves with &, + and ! only (matched within a single step).
  bool is_step() const;

  void collect_actions(std::set<BasicAction>& out) const;

  bool operator==(const Action& o) const { return node_ == o.node_ || key() == o.key(); }
  std::strong_ordering operator<=>(const Action& o) const { return key() <=> o.key(); }

 private:
  struct Node {
    ActionKind kind;
    BasicAction name;
    std::vector<Action> children;
    std::string key;
  };
  explicit Action(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Action make(ActionKind k, BasicAction name, std::vector<Action> children);

  std::shared_ptr<const Node> node_;
};

enum class Deontic : std::uint8_t { O, P, F };
char deontic_letter(Deontic d);

enum class FormulaKind : std::uint8_t {
  Top,
  Bottom,
  Obligation,
  Permission,
  Prohibition,
  Dynamic,
  And,
  XChoice,
};

/// Immutable contract formula. Copies share structure. Equality and
/// ordering go through a deterministic serialization (key()), which is also
/// what canonicalization sorts by.
class Formula {
 public:
  static Formula top();
  static Formula bottom();
  static Formula deontic(Deontic op, Relativization rel, Action action,
                         std::optional<Formula> reparation = std::nullopt);
  static Formula obligation(Relativization rel, Action action,
                            std::optional<Formula> reparation = std::nullopt);
  static Formula permission(Relativization rel, Action action);
  static Formula prohibition(Relativization rel, Action action,
                             std::optional<Formula> reparation = std::nullopt);
  static Formula dynamic(Relativization rel, Action trigger, Formula body);
  static Formula conjunction(std::vector<Formula> children);
  static Formula xchoice(std::vector<Formula> children);
  static Formula conjunction(Formula l, Formula r) { return conjunction(std::vector{std::move(l), std::move(r)}); }
  static Formula xchoice(Formula l, Formula r) { return xchoice(std::vector{std::move(l), std::move(r)}); }

  FormulaKind kind() const { return node_->kind; }
  bool is_top() const { return kind() == FormulaKind::Top; }
  bool is_bottom() const { return kind() == FormulaKind::Bottom; }
  bool is_deontic() const;
  Deontic op() const;

  const Relativization& rel() const { return node_->rel; }
  /// Deontic action or dynamic trigger.
  const Action& action() const { return *node_->action; }
  const Action& trigger() const { return *node_->action; }
  /// Reparation of an obligation/prohibition; nullptr when none (i.e. ⊥).
  const Formula* reparation() const {
    return node_->kind == FormulaKind::Dynamic || node_->children.empty() ? nullptr : &node_->children[0];
  }
  const Formula& body() const { return node_->children[0]; }
  std::span<const Formula> children() const { return node_->children; }

  const std::string& key() const { return node_->key; }

  bool operator==(const Formula& o) const { return node_ == o.node_ || key() == o.key(); }
  std::strong_ordering operator<=>(const Formula& o) const { return key() <=> o.key(); }

 private:
  struct Node {
    FormulaKind kind;
    Relativization rel;
    std::optional<Action> action;
    std::vector<Formula> children;
    std::string key;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

struct Alphabet {
  std::set<Individual> individuals;
  std::set<BasicAction> actions;

  bool operator==(const Alphabet&) const = default;
};

/// Every individual and basic action occurring anywhere in the clauses,
/// reparations and guarded bodies included.
Alphabet extract_alphabet(std::span<const Formula> clauses);
void collect_alphabet(const Formula& f, Alphabet& out);

/// ACI normal form: flattened, sorted, deduplicated And/XChoice with ⊤/⊥
/// absorbed. Explicit ⊥ reparations are dropped (absent means ⊥).
/// Idempotent.
Formula canonicalize(const Formula& f);

/// True iff every deontic action and dynamic trigger in f is a basic action.
bool is_atomic(const Formula& f);

/// Unordered pairs of basic actions that may not co-occur.
class ConflictRelations {
 public:
  using Pair = std::pair<BasicAction, BasicAction>;

  void add_global(const BasicAction& a, const BasicAction& b) { global_.insert(ordered(a, b)); }
  void add_relativized(const BasicAction& a, const BasicAction& b) { relativized_.insert(ordered(a, b)); }

  bool global_conflict(const BasicAction& a, const BasicAction& b) const { return global_.contains(ordered(a, b)); }
  bool relativized_conflict(const BasicAction& a, const BasicAction& b) const {
    return relativized_.contains(ordered(a, b));
  }

  const std::set<Pair>& global_pairs() const { return global_; }
  const std::set<Pair>& relativized_pairs() const { return relativized_; }
  bool empty() const { return global_.empty() && relativized_.empty(); }

  bool operator==(const ConflictRelations&) const = default;

 private:
  static Pair ordered(const BasicAction& a, const BasicAction& b) { return a <= b ? Pair{a, b} : Pair{b, a}; }

  std::set<Pair> global_;
  std::set<Pair> relativized_;
};

struct ContractSpec {
  Alphabet alphabet;
  ConflictRelations conflicts;
  std::vector<Formula> clauses;

  /// Builds a spec whose alphabet is inferred from clauses and conflicts.
  static ContractSpec from_clauses(std::vector<Formula> clauses, ConflictRelations conflicts = {});

  /// canonicalize(∧ clauses).
  Formula root() const;

  /// The alphabet the semantics runs over. Equal to `alphabet`, except that a
  /// contract naming actions but no individuals (only global operators) gets
  /// one placeholder individual "i" so that actions can be performed at all.
  Alphabet semantic_alphabet() const;
};

}  // namespace recall
