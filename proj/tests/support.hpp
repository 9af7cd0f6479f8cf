#pragma once

#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "recall/formula.hpp"
#include "recall/parser.hpp"

namespace testing_support {

inline std::string fixture_path(const std::string& name) { return std::string(RECALL_FIXTURE_DIR) + "/" + name; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline recall::ContractSpec parse_ok(const std::string& text) {
  auto r = recall::parse(text);
  if (!r.ok()) {
    std::string msg = "parse failed:";
    for (const auto& d : r.diagnostics) msg += "\n  " + d.str();
    throw std::runtime_error(msg);
  }
  return *r.spec;
}

inline recall::ContractSpec load_fixture(const std::string& name) { return parse_ok(read_file(fixture_path(name))); }

using NameMap = std::function<std::string(const std::string&)>;

inline recall::Relativization rename(const recall::Relativization& r, const NameMap& ind) {
  using K = recall::Relativization::Kind;
  switch (r.kind) {
    case K::Global:
      return r;
    case K::Performer:
      return recall::Relativization::performer(ind(r.sender));
    case K::Directed:
      return recall::Relativization::directed(ind(r.sender), ind(r.receiver));
  }
  return r;
}

inline recall::Action rename(const recall::Action& a, const NameMap& act) {
  using recall::Action;
  using K = recall::ActionKind;
  switch (a.kind()) {
    case K::Zero:
    case K::One:
      return a;
    case K::Atom:
      return Action::atom(act(a.name()));
    case K::Concurrent:
      return Action::concurrent(rename(a.left(), act), rename(a.right(), act));
    case K::Sequence:
      return Action::sequence(rename(a.left(), act), rename(a.right(), act));
    case K::Choice:
      return Action::choice(rename(a.left(), act), rename(a.right(), act));
    case K::Negation:
      return Action::negation(rename(a.inner(), act));
    case K::Star:
      return Action::star(rename(a.inner(), act));
  }
  return a;
}

inline recall::Formula rename(const recall::Formula& f, const NameMap& ind, const NameMap& act) {
  using recall::Formula;
  using K = recall::FormulaKind;
  switch (f.kind()) {
    case K::Top:
    case K::Bottom:
      return f;
    case K::Obligation:
    case K::Prohibition: {
      std::optional<Formula> rep;
      if (f.reparation()) rep = rename(*f.reparation(), ind, act);
      return Formula::deontic(f.op(), rename(f.rel(), ind), rename(f.action(), act), rep);
    }
    case K::Permission:
      return Formula::permission(rename(f.rel(), ind), rename(f.action(), act));
    case K::Dynamic:
      return Formula::dynamic(rename(f.rel(), ind), rename(f.trigger(), act), rename(f.body(), ind, act));
    case K::And:
    case K::XChoice: {
      std::vector<Formula> kids;
      for (const auto& c : f.children()) kids.push_back(rename(c, ind, act));
      return f.kind() == K::And ? Formula::conjunction(std::move(kids)) : Formula::xchoice(std::move(kids));
    }
  }
  return f;
}

inline recall::ContractSpec rename(const recall::ContractSpec& spec, const NameMap& ind, const NameMap& act) {
  std::vector<recall::Formula> clauses;
  for (const auto& c : spec.clauses) clauses.push_back(rename(c, ind, act));
  recall::ConflictRelations rels;
  for (const auto& [a, b] : spec.conflicts.global_pairs()) rels.add_global(act(a), act(b));
  for (const auto& [a, b] : spec.conflicts.relativized_pairs()) rels.add_relativized(act(a), act(b));
  return recall::ContractSpec::from_clauses(std::move(clauses), std::move(rels));
}

/// Maps names through a fixed table, leaving unknown names untouched.
inline NameMap table(std::map<std::string, std::string> m) {
  return [m = std::move(m)](const std::string& s) {
    auto it = m.find(s);
    return it == m.end() ? s : it->second;
  };
}

}  // namespace testing_support

#include <cstdint>

#include "recall/automaton.hpp"

namespace testing_support {

/// Every subset of 𝓘 × 𝓐_B × 𝓘, ∅ included. Only for tiny alphabets.
inline std::vector<recall::ConcurrentActionSet> all_action_sets(const recall::Alphabet& alphabet) {
  auto universe = recall::relativized_universe(alphabet.individuals, alphabet.actions);
  if (universe.size() > 16) throw std::length_error("universe too large to enumerate");
  std::vector<recall::ConcurrentActionSet> out;
  for (std::uint32_t mask = 0; mask < (1u << universe.size()); ++mask) {
    recall::ConcurrentActionSet phi;
    for (std::size_t b = 0; b < universe.size(); ++b) {
      if (mask & (1u << b)) phi.insert(universe[b]);
    }
    out.push_back(std::move(phi));
  }
  return out;
}

}  // namespace testing_support
