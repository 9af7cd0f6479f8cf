#include "recall/decomposer.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace recall {

std::string render_action_set(const ConcurrentActionSet& phi) {
  std::string out = "{";
  bool first = true;
  for (const auto& a : phi) {
    if (!first) out += ", ";
    first = false;
    out += a.str();
  }
  return out + "}";
}

std::string DeonticTag::str() const {
  return rel.str() + deontic_letter(op) + "(" + action + ")";
}

std::set<DeonticTag> DeonticGroup::tags() const {
  std::set<DeonticTag> out;
  for (const auto& alt : alternatives) out.insert(alt.begin(), alt.end());
  return out;
}

namespace {

using Visiting = std::unordered_set<std::string>;

Formula rewrite(const Formula& f, Visiting& visiting);

Formula rewrite_deontic(const Formula& f, Visiting& visiting) {
  const Action& a = f.action();
  if (a.is_leaf()) return f;
  const Relativization& rel = f.rel();
  Deontic op = f.op();
  std::optional<Formula> rep;
  if (const Formula* r = f.reparation()) rep = *r;
  auto on = [&](const Action& x) { return rewrite(Formula::deontic(op, rel, x, rep), visiting); };

  switch (a.kind()) {
    case ActionKind::Concurrent:
      return Formula::conjunction(on(a.left()), on(a.right()));
    case ActionKind::Sequence: {
      Formula tail = Formula::dynamic(rel, a.left(), Formula::deontic(op, rel, a.right(), rep));
      if (op == Deontic::F) return rewrite(tail, visiting);
      return Formula::conjunction(on(a.left()), rewrite(tail, visiting));
    }
    case ActionKind::Choice:
      if (op == Deontic::O) {
        Formula l = on(a.left());
        Formula r = on(a.right());
        return Formula::xchoice({Formula::conjunction(l, r), l, r});
      }
      return Formula::conjunction(on(a.left()), on(a.right()));
    default:
      throw std::invalid_argument("negation or iteration under a deontic operator: " + f.key());
  }
}

Formula rewrite_dynamic(const Formula& f, Visiting& visiting) {
  const Action& t = f.trigger();
  const Relativization& rel = f.rel();
  const Formula& body = f.body();
  auto box = [&](const Action& x, const Formula& c) { return rewrite(Formula::dynamic(rel, x, c), visiting); };

  switch (t.kind()) {
    case ActionKind::Zero:
    case ActionKind::One:
    case ActionKind::Atom:
      return f;
    case ActionKind::Concurrent:
    case ActionKind::Choice:
      return Formula::conjunction(box(t.left(), body), box(t.right(), body));
    case ActionKind::Sequence:
      return box(t.left(), Formula::dynamic(rel, t.right(), body));
    case ActionKind::Star: {
      if (!visiting.insert(f.key()).second) return Formula::top();
      return Formula::conjunction(rewrite(body, visiting), box(t.inner(), f));
    }
    case ActionKind::Negation: {
      const Action& n = t.inner();
      if (n.is_step()) return f;
      switch (n.kind()) {
        case ActionKind::Negation:
          return box(n.inner(), body);
        case ActionKind::Star:
          return Formula::top();
        case ActionKind::Sequence:
          return Formula::conjunction(box(Action::negation(n.left()), body),
                                      box(n.left(), Formula::dynamic(rel, Action::negation(n.right()), body)));
        default:
          throw std::invalid_argument("unsupported negated trigger: " + t.key());
      }
    }
  }
  return f;
}

Formula rewrite(const Formula& f, Visiting& visiting) {
  switch (f.kind()) {
    case FormulaKind::Top:
    case FormulaKind::Bottom:
      return f;
    case FormulaKind::Obligation:
    case FormulaKind::Permission:
    case FormulaKind::Prohibition:
      return rewrite_deontic(f, visiting);
    case FormulaKind::Dynamic:
      return rewrite_dynamic(f, visiting);
    case FormulaKind::And:
    case FormulaKind::XChoice: {
      std::vector<Formula> parts;
      parts.reserve(f.children().size());
      for (const auto& c : f.children()) parts.push_back(rewrite(c, visiting));
      return f.kind() == FormulaKind::And ? Formula::conjunction(std::move(parts))
                                          : Formula::xchoice(std::move(parts));
    }
  }
  return f;
}

bool performs(const Relativization& rel, const std::string* action, const ConcurrentActionSet& phi,
              const std::set<Individual>& individuals) {
  auto fits = [&](const RelativizedAction& r) { return !action || r.action == *action; };
  switch (rel.kind) {
    case Relativization::Kind::Global:
      if (!action) return !phi.empty();
      return std::all_of(individuals.begin(), individuals.end(), [&](const Individual& i) {
        return std::any_of(phi.begin(), phi.end(), [&](const RelativizedAction& r) { return r.sender == i && fits(r); });
      });
    case Relativization::Kind::Performer:
      return std::any_of(phi.begin(), phi.end(),
                         [&](const RelativizedAction& r) { return r.sender == rel.sender && fits(r); });
    case Relativization::Kind::Directed:
      return std::any_of(phi.begin(), phi.end(), [&](const RelativizedAction& r) {
        return r.sender == rel.sender && r.receiver == rel.receiver && fits(r);
      });
  }
  return false;
}

Formula step(const Formula& f, const ConcurrentActionSet& phi, const std::set<Individual>& individuals) {
  switch (f.kind()) {
    case FormulaKind::Top:
    case FormulaKind::Bottom:
      return f;
    case FormulaKind::Permission:
      return Formula::top();
    case FormulaKind::Obligation:
    case FormulaKind::Prohibition: {
      bool done = step_matches(f.rel(), f.action(), phi, individuals);
      bool violated = f.kind() == FormulaKind::Obligation ? !done : done;
      if (!violated) return Formula::top();
      const Formula* rep = f.reparation();
      return rep ? *rep : Formula::bottom();
    }
    case FormulaKind::Dynamic:
      return step_matches(f.rel(), f.trigger(), phi, individuals) ? f.body() : Formula::top();
    case FormulaKind::And:
    case FormulaKind::XChoice: {
      std::vector<Formula> parts;
      parts.reserve(f.children().size());
      for (const auto& c : f.children()) parts.push_back(step(c, phi, individuals));
      return f.kind() == FormulaKind::And ? Formula::conjunction(std::move(parts))
                                          : Formula::xchoice(std::move(parts));
    }
  }
  return f;
}

void dnf(const Formula& f, std::vector<std::set<DeonticTag>>& out) {
  if (f.is_deontic()) {
    if (f.action().is_basic()) {
      out.push_back({DeonticTag{f.rel(), f.op(), f.action().name()}});
    } else {
      out.emplace_back();
    }
    return;
  }
  switch (f.kind()) {
    case FormulaKind::XChoice:
      for (const auto& c : f.children()) dnf(c, out);
      return;
    case FormulaKind::And: {
      std::vector<std::set<DeonticTag>> acc{{}};
      for (const auto& c : f.children()) {
        std::vector<std::set<DeonticTag>> part;
        dnf(c, part);
        std::vector<std::set<DeonticTag>> next;
        for (const auto& x : acc) {
          for (const auto& y : part) {
            auto merged = x;
            merged.insert(y.begin(), y.end());
            next.push_back(std::move(merged));
          }
        }
        acc = std::move(next);
      }
      out.insert(out.end(), acc.begin(), acc.end());
      return;
    }
    default:
      out.emplace_back();
      return;
  }
}

}  // namespace

Formula rewrite_compound(const Formula& f) {
  Visiting visiting;
  return rewrite(f, visiting);
}

Formula normalize(const Formula& f) { return canonicalize(rewrite_compound(f)); }

bool step_matches(const Relativization& rel, const Action& a, const ConcurrentActionSet& phi,
                  const std::set<Individual>& individuals) {
  switch (a.kind()) {
    case ActionKind::Zero:
      return false;
    case ActionKind::One:
      return performs(rel, nullptr, phi, individuals);
    case ActionKind::Atom:
      return performs(rel, &a.name(), phi, individuals);
    case ActionKind::Concurrent:
      return step_matches(rel, a.left(), phi, individuals) && step_matches(rel, a.right(), phi, individuals);
    case ActionKind::Choice:
      return step_matches(rel, a.left(), phi, individuals) || step_matches(rel, a.right(), phi, individuals);
    case ActionKind::Negation:
      return !step_matches(rel, a.inner(), phi, individuals);
    case ActionKind::Sequence:
    case ActionKind::Star:
      break;
  }
  throw std::invalid_argument("not a one-step action: " + a.key());
}

Formula decompose(const Formula& f, const ConcurrentActionSet& phi, const Alphabet& alphabet) {
  for (const auto& r : phi) {
    if (!alphabet.individuals.contains(r.sender) || !alphabet.individuals.contains(r.receiver) ||
        !alphabet.actions.contains(r.action)) {
      throw std::invalid_argument("action " + r.str() + " is outside the contract alphabet");
    }
  }
  return advance(normalize(f), phi, alphabet.individuals);
}

Formula advance(const Formula& normalized, const ConcurrentActionSet& phi, const std::set<Individual>& individuals) {
  return normalize(step(normalized, phi, individuals));
}

DeonticGroups deontic_tags(const Formula& f) {
  DeonticGroups groups;
  auto visit = [&](const Formula& c) {
    if (c.is_deontic()) {
      if (!c.action().is_basic()) return;
      groups.push_back({DeonticGroup::Kind::Conjunct, {{DeonticTag{c.rel(), c.op(), c.action().name()}}}, c});
    } else if (c.kind() == FormulaKind::XChoice) {
      DeonticGroup g{DeonticGroup::Kind::Choice, {}, c};
      dnf(c, g.alternatives);
      std::sort(g.alternatives.begin(), g.alternatives.end());
      g.alternatives.erase(std::unique(g.alternatives.begin(), g.alternatives.end()), g.alternatives.end());
      if (!g.tags().empty()) groups.push_back(std::move(g));
    }
  };
  if (f.kind() == FormulaKind::And) {
    for (const auto& c : f.children()) visit(c);
  } else {
    visit(f);
  }
  return groups;
}

}  // namespace recall
