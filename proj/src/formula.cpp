#include "recall/formula.hpp"

#include <algorithm>
#include <stdexcept>

namespace recall {

std::string Relativization::str() const {
  switch (kind) {
    case Kind::Global:
      return {};
    case Kind::Performer:
      return "{" + sender + "}";
    case Kind::Directed:
      return "{" + sender + "," + receiver + "}";
  }
  return {};
}

// ---------------------------------------------------------------------------
// Action

Action Action::make(ActionKind k, BasicAction name, std::vector<Action> children) {
  std::string key;
  switch (k) {
    case ActionKind::Zero:
      key = "0";
      break;
    case ActionKind::One:
      key = "1";
      break;
    case ActionKind::Atom:
      key = name;
      break;
    case ActionKind::Concurrent:
      key = "(" + children[0].key() + "&" + children[1].key() + ")";
      break;
    case ActionKind::Sequence:
      key = "(" + children[0].key() + "." + children[1].key() + ")";
      break;
    case ActionKind::Choice:
      key = "(" + children[0].key() + "+" + children[1].key() + ")";
      break;
    case ActionKind::Negation:
      key = "!(" + children[0].key() + ")";
      break;
    case ActionKind::Star:
      key = "(" + children[0].key() + ")*";
      break;
  }
  return Action(std::make_shared<const Node>(Node{k, std::move(name), std::move(children), std::move(key)}));
}

Action Action::zero() {
  static const Action z = make(ActionKind::Zero, {}, {});
  return z;
}
Action Action::one() {
  static const Action o = make(ActionKind::One, {}, {});
  return o;
}
Action Action::atom(BasicAction name) {
  if (name.empty()) throw std::invalid_argument("empty action name");
  return make(ActionKind::Atom, std::move(name), {});
}
Action Action::concurrent(Action l, Action r) { return make(ActionKind::Concurrent, {}, {std::move(l), std::move(r)}); }
Action Action::sequence(Action l, Action r) { return make(ActionKind::Sequence, {}, {std::move(l), std::move(r)}); }
Action Action::choice(Action l, Action r) { return make(ActionKind::Choice, {}, {std::move(l), std::move(r)}); }
Action Action::negation(Action inner) { return make(ActionKind::Negation, {}, {std::move(inner)}); }
Action Action::star(Action inner) { return make(ActionKind::Star, {}, {std::move(inner)}); }

bool Action::is_leaf() const {
  return kind() == ActionKind::Zero || kind() == ActionKind::One || kind() == ActionKind::Atom;
}

bool Action::is_step() const {
  switch (kind()) {
    case ActionKind::Zero:
    case ActionKind::One:
    case ActionKind::Atom:
      return true;
    case ActionKind::Concurrent:
    case ActionKind::Choice:
      return left().is_step() && right().is_step();
    case ActionKind::Negation:
      return inner().is_step();
    case ActionKind::Sequence:
    case ActionKind::Star:
      return false;
  }
  return false;
}

void Action::collect_actions(std::set<BasicAction>& out) const {
  if (kind() == ActionKind::Atom) {
    out.insert(name());
    return;
  }
  for (const auto& c : node_->children) c.collect_actions(out);
}

char deontic_letter(Deontic d) {
  switch (d) {
    case Deontic::O:
      return 'O';
    case Deontic::P:
      return 'P';
    case Deontic::F:
      return 'F';
  }
  return '?';
}

// ---------------------------------------------------------------------------
// Formula

namespace {

std::string join_keys(char tag, const std::vector<Formula>& children) {
  std::string key(1, tag);
  key += '(';
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (i) key += ';';
    key += children[i].key();
  }
  key += ')';
  return key;
}

}  // namespace

Formula Formula::top() {
  static const Formula t(std::make_shared<const Node>(Node{FormulaKind::Top, {}, std::nullopt, {}, "T"}));
  return t;
}

Formula Formula::bottom() {
  static const Formula b(std::make_shared<const Node>(Node{FormulaKind::Bottom, {}, std::nullopt, {}, "B"}));
  return b;
}

Formula Formula::deontic(Deontic op, Relativization rel, Action action, std::optional<Formula> reparation) {
  if (op == Deontic::P && reparation) throw std::invalid_argument("permission carries no reparation");
  FormulaKind kind = op == Deontic::O   ? FormulaKind::Obligation
                     : op == Deontic::F ? FormulaKind::Prohibition
                                        : FormulaKind::Permission;
  std::string key(1, deontic_letter(op));
  key += rel.str();
  key += '(';
  key += action.key();
  key += ')';
  std::vector<Formula> children;
  if (reparation) {
    key += "_/" + reparation->key() + "/_";
    children.push_back(std::move(*reparation));
  }
  return Formula(std::make_shared<const Node>(
      Node{kind, std::move(rel), std::move(action), std::move(children), std::move(key)}));
}

Formula Formula::obligation(Relativization rel, Action action, std::optional<Formula> reparation) {
  return deontic(Deontic::O, std::move(rel), std::move(action), std::move(reparation));
}
Formula Formula::permission(Relativization rel, Action action) {
  return deontic(Deontic::P, std::move(rel), std::move(action));
}
Formula Formula::prohibition(Relativization rel, Action action, std::optional<Formula> reparation) {
  return deontic(Deontic::F, std::move(rel), std::move(action), std::move(reparation));
}

Formula Formula::dynamic(Relativization rel, Action trigger, Formula body) {
  std::string key = "[" + rel.str() + trigger.key() + "](" + body.key() + ")";
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::Dynamic, std::move(rel), std::move(trigger), {std::move(body)}, std::move(key)}));
}

Formula Formula::conjunction(std::vector<Formula> children) {
  if (children.empty()) return top();
  if (children.size() == 1) return std::move(children[0]);
  std::string key = join_keys('^', children);
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::And, {}, std::nullopt, std::move(children), std::move(key)}));
}

Formula Formula::xchoice(std::vector<Formula> children) {
  if (children.empty()) return bottom();
  if (children.size() == 1) return std::move(children[0]);
  std::string key = join_keys('+', children);
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::XChoice, {}, std::nullopt, std::move(children), std::move(key)}));
}

bool Formula::is_deontic() const {
  auto k = kind();
  return k == FormulaKind::Obligation || k == FormulaKind::Permission || k == FormulaKind::Prohibition;
}

Deontic Formula::op() const {
  switch (kind()) {
    case FormulaKind::Obligation:
      return Deontic::O;
    case FormulaKind::Permission:
      return Deontic::P;
    case FormulaKind::Prohibition:
      return Deontic::F;
    default:
      throw std::logic_error("op() on non-deontic formula");
  }
}

// ---------------------------------------------------------------------------

void collect_alphabet(const Formula& f, Alphabet& out) {
  auto add_rel = [&](const Relativization& r) {
    if (r.kind != Relativization::Kind::Global) out.individuals.insert(r.sender);
    if (r.kind == Relativization::Kind::Directed) out.individuals.insert(r.receiver);
  };
  switch (f.kind()) {
    case FormulaKind::Top:
    case FormulaKind::Bottom:
      return;
    case FormulaKind::Obligation:
    case FormulaKind::Permission:
    case FormulaKind::Prohibition:
      add_rel(f.rel());
      f.action().collect_actions(out.actions);
      if (const Formula* rep = f.reparation()) collect_alphabet(*rep, out);
      return;
    case FormulaKind::Dynamic:
      add_rel(f.rel());
      f.trigger().collect_actions(out.actions);
      collect_alphabet(f.body(), out);
      return;
    case FormulaKind::And:
    case FormulaKind::XChoice:
      for (const auto& c : f.children()) collect_alphabet(c, out);
      return;
  }
}

Alphabet extract_alphabet(std::span<const Formula> clauses) {
  Alphabet out;
  for (const auto& c : clauses) collect_alphabet(c, out);
  return out;
}

namespace {

void sort_unique(std::vector<Formula>& v) {
  std::sort(v.begin(), v.end(), [](const Formula& a, const Formula& b) { return a.key() < b.key(); });
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

Formula canonicalize(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Top:
    case FormulaKind::Bottom:
    case FormulaKind::Permission:
      return f;
    case FormulaKind::Obligation:
    case FormulaKind::Prohibition: {
      const Formula* rep = f.reparation();
      if (!rep) return f;
      Formula r = canonicalize(*rep);
      if (r.is_bottom()) return Formula::deontic(f.op(), f.rel(), f.action());
      if (r == *rep) return f;
      return Formula::deontic(f.op(), f.rel(), f.action(), std::move(r));
    }
    case FormulaKind::Dynamic: {
      Formula body = canonicalize(f.body());
      if (body.is_top()) return Formula::top();
      if (body == f.body()) return f;
      return Formula::dynamic(f.rel(), f.trigger(), std::move(body));
    }
    case FormulaKind::And: {
      std::vector<Formula> parts;
      for (const auto& c : f.children()) {
        Formula cc = canonicalize(c);
        if (cc.is_bottom()) return Formula::bottom();
        if (cc.is_top()) continue;
        if (cc.kind() == FormulaKind::And) {
          parts.insert(parts.end(), cc.children().begin(), cc.children().end());
        } else {
          parts.push_back(std::move(cc));
        }
      }
      sort_unique(parts);
      return Formula::conjunction(std::move(parts));
    }
    case FormulaKind::XChoice: {
      std::vector<Formula> parts;
      for (const auto& c : f.children()) {
        Formula cc = canonicalize(c);
        if (cc.is_top()) return Formula::top();
        if (cc.is_bottom()) continue;
        if (cc.kind() == FormulaKind::XChoice) {
          parts.insert(parts.end(), cc.children().begin(), cc.children().end());
        } else {
          parts.push_back(std::move(cc));
        }
      }
      sort_unique(parts);
      return Formula::xchoice(std::move(parts));
    }
  }
  return f;
}

bool is_atomic(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Top:
    case FormulaKind::Bottom:
      return true;
    case FormulaKind::Obligation:
    case FormulaKind::Permission:
    case FormulaKind::Prohibition:
      if (!f.action().is_basic()) return false;
      return f.reparation() ? is_atomic(*f.reparation()) : true;
    case FormulaKind::Dynamic:
      return f.trigger().is_basic() && is_atomic(f.body());
    case FormulaKind::And:
    case FormulaKind::XChoice:
      return std::all_of(f.children().begin(), f.children().end(), [](const Formula& c) { return is_atomic(c); });
  }
  return false;
}

ContractSpec ContractSpec::from_clauses(std::vector<Formula> clauses, ConflictRelations conflicts) {
  ContractSpec spec;
  spec.alphabet = extract_alphabet(clauses);
  for (const auto& [a, b] : conflicts.global_pairs()) spec.alphabet.actions.insert({a, b});
  for (const auto& [a, b] : conflicts.relativized_pairs()) spec.alphabet.actions.insert({a, b});
  spec.conflicts = std::move(conflicts);
  spec.clauses = std::move(clauses);
  return spec;
}

Formula ContractSpec::root() const { return canonicalize(Formula::conjunction(clauses)); }

Alphabet ContractSpec::semantic_alphabet() const {
  Alphabet out = alphabet;
  if (out.individuals.empty() && !out.actions.empty()) out.individuals.insert("i");
  return out;
}

}  // namespace recall
