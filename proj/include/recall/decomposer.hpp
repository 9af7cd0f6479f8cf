#pragma once

#include <compare>
#include <set>
#include <string>
#include <vector>

#include "recall/formula.hpp"

namespace recall {

/// ⟨sender, action, receiver⟩
struct RelativizedAction {
  Individual sender;
  BasicAction action;
  Individual receiver;

  std::string str() const { return "<" + sender + "," + action + "," + receiver + ">"; }
  auto operator<=>(const RelativizedAction&) const = default;
};

/// One step of an action trace. The empty set means nobody acts.
using ConcurrentActionSet = std::set<RelativizedAction>;

std::string render_action_set(const ConcurrentActionSet& phi);

struct DeonticTag {
  Relativization rel;
  Deontic op = Deontic::O;
  BasicAction action;

  /// Same shape as the clause syntax, e.g. "{i,j}O(a)".
  std::string str() const;
  auto operator<=>(const DeonticTag&) const = default;
};

/// A Conjunct group holds exactly one tag. A Choice group comes from a
/// top-level ⊕ and lists its ways of being discharged in disjunctive normal
/// form: each alternative is the set of tags that hold together.
struct DeonticGroup {
  enum class Kind { Conjunct, Choice };

  Kind kind = Kind::Conjunct;
  std::vector<std::set<DeonticTag>> alternatives;
  Formula source = Formula::top();

  std::set<DeonticTag> tags() const;
};

using DeonticGroups = std::vector<DeonticGroup>;

/// Applies the compound-action rewrites at the top level: afterwards every
/// unguarded deontic operator carries 0, 1 or a basic action and every
/// unguarded dynamic trigger is 0, 1, a basic action or a negated one-step
/// expression. Dynamic bodies and reparations are left alone; they are
/// rewritten once they become active.
Formula rewrite_compound(const Formula& f);

/// canonicalize(rewrite_compound(f)). Automaton states carry normalized
/// formulas.
Formula normalize(const Formula& f);

/// Whether the one-step expression `a`, relativized by `rel`, is performed in
/// `phi`. `a` must satisfy Action::is_step().
bool step_matches(const Relativization& rel, const Action& a, const ConcurrentActionSet& phi,
                  const std::set<Individual>& individuals);

/// The residual contract after `phi` happens. Returns a normalized formula.
/// Throws std::invalid_argument if phi mentions a symbol outside `alphabet`.
Formula decompose(const Formula& f, const ConcurrentActionSet& phi, const Alphabet& alphabet);

/// decompose() without the alphabet check, for a formula that is already
/// normalized.
Formula advance(const Formula& normalized, const ConcurrentActionSet& phi, const std::set<Individual>& individuals);

/// Deontic labelling of a normalized formula. Guarded operators and
/// reparations contribute nothing; permissions do.
DeonticGroups deontic_tags(const Formula& f);

}  // namespace recall
