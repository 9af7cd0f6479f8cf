#include "recall/oracle.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace recall {

namespace {

bool acts(const Relativization& rel, const std::string* action, const ConcurrentActionSet& phi,
          const std::set<Individual>& individuals) {
  auto did = [&](const RelativizedAction& r, const Individual& who) {
    return r.sender == who && (!action || r.action == *action);
  };
  switch (rel.kind) {
    case Relativization::Kind::Global:
      if (!action) return !phi.empty();
      for (const auto& i : individuals) {
        if (std::none_of(phi.begin(), phi.end(), [&](const RelativizedAction& r) { return did(r, i); })) return false;
      }
      return true;
    case Relativization::Kind::Performer:
      return std::any_of(phi.begin(), phi.end(), [&](const RelativizedAction& r) { return did(r, rel.sender); });
    case Relativization::Kind::Directed:
      return std::any_of(phi.begin(), phi.end(),
                         [&](const RelativizedAction& r) { return did(r, rel.sender) && r.receiver == rel.receiver; });
  }
  return false;
}

bool performed(const Relativization& rel, const Action& a, const ConcurrentActionSet& phi,
               const std::set<Individual>& individuals) {
  switch (a.kind()) {
    case ActionKind::Zero:
      return false;
    case ActionKind::One:
      return acts(rel, nullptr, phi, individuals);
    case ActionKind::Atom:
      return acts(rel, &a.name(), phi, individuals);
    case ActionKind::Concurrent:
      return performed(rel, a.left(), phi, individuals) && performed(rel, a.right(), phi, individuals);
    case ActionKind::Choice:
      return performed(rel, a.left(), phi, individuals) || performed(rel, a.right(), phi, individuals);
    case ActionKind::Negation:
      return !performed(rel, a.inner(), phi, individuals);
    default:
      throw std::logic_error("multi-step action reached the satisfaction check: " + a.key());
  }
}

struct Evaluator {
  const ActionTrace& sigma;
  const DeonticTrace& sigma_d;
  const std::set<Individual>& individuals;

  bool tagged(const Formula& f, std::size_t pos) const {
    if (!f.action().is_basic()) return true;
    return sigma_d[pos].contains(DeonticTag{f.rel(), f.op(), f.action().name()});
  }

  bool rest(const Formula* f, std::size_t pos) const { return f && sat(rewrite_compound(*f), pos + 1); }

  bool sat(const Formula& f, std::size_t pos) const {
    if (f.is_bottom()) return false;
    if (pos == sigma.size()) return true;
    switch (f.kind()) {
      case FormulaKind::Top:
        return true;
      case FormulaKind::Bottom:
        return false;
      case FormulaKind::And:
        return std::all_of(f.children().begin(), f.children().end(),
                           [&](const Formula& c) { return sat(c, pos); });
      case FormulaKind::XChoice:
        return std::any_of(f.children().begin(), f.children().end(),
                           [&](const Formula& c) { return sat(c, pos); });
      case FormulaKind::Permission:
        return tagged(f, pos);
      case FormulaKind::Obligation:
        return tagged(f, pos) &&
               (performed(f.rel(), f.action(), sigma[pos], individuals) || rest(f.reparation(), pos));
      case FormulaKind::Prohibition:
        return tagged(f, pos) &&
               (!performed(f.rel(), f.action(), sigma[pos], individuals) || rest(f.reparation(), pos));
      case FormulaKind::Dynamic:
        return !performed(f.rel(), f.trigger(), sigma[pos], individuals) || rest(&f.body(), pos);
    }
    return false;
  }
};

bool mentions_one(const Action& a) {
  if (a.kind() == ActionKind::One) return true;
  switch (a.kind()) {
    case ActionKind::Concurrent:
    case ActionKind::Sequence:
    case ActionKind::Choice:
      return mentions_one(a.left()) || mentions_one(a.right());
    case ActionKind::Negation:
    case ActionKind::Star:
      return mentions_one(a.inner());
    default:
      return false;
  }
}

bool mentions_one(const Formula& f) {
  if (f.is_deontic() || f.kind() == FormulaKind::Dynamic) {
    if (mentions_one(f.action())) return true;
  }
  return std::any_of(f.children().begin(), f.children().end(), [](const Formula& c) { return mentions_one(c); });
}

class ClashTable {
 public:
  ClashTable(const ConflictRelations& rels, const Alphabet& alphabet) : rels_(rels), alphabet_(alphabet) {}

  std::optional<std::pair<DeonticTag, DeonticTag>> blocked(const std::set<DeonticTag>& x,
                                                           const std::set<DeonticTag>& y) {
    for (const auto& d : x) {
      const auto& hits = sharp(d);
      for (const auto& d2 : y) {
        if (hits.contains(d2)) return std::pair{d, d2};
      }
    }
    return std::nullopt;
  }

 private:
  const std::set<DeonticTag>& sharp(const DeonticTag& d) {
    auto it = cache_.find(d);
    if (it == cache_.end()) it = cache_.emplace(d, f_sharp(d, rels_, alphabet_)).first;
    return it->second;
  }

  const ConflictRelations& rels_;
  const Alphabet& alphabet_;
  std::map<DeonticTag, std::set<DeonticTag>> cache_;
};

std::optional<std::pair<DeonticTag, DeonticTag>> residual_clash(const DeonticGroups& groups, ClashTable& table) {
  for (std::size_t i = 0; i < groups.size(); ++i) {
    for (std::size_t j = i + 1; j < groups.size(); ++j) {
      std::optional<std::pair<DeonticTag, DeonticTag>> first;
      bool every = true;
      for (const auto& x : groups[i].alternatives) {
        for (const auto& y : groups[j].alternatives) {
          auto hit = table.blocked(x, y);
          if (!hit) {
            every = false;
            break;
          }
          if (!first) first = hit;
        }
        if (!every) break;
      }
      if (every && first) return first;
    }
  }
  return std::nullopt;
}

}  // namespace

bool satisfies(const ActionTrace& sigma, const DeonticTrace& sigma_d, const Formula& f,
               const std::set<Individual>& individuals) {
  if (sigma.size() != sigma_d.size()) return false;
  Evaluator ev{sigma, sigma_d, individuals};
  return ev.sat(rewrite_compound(f), 0);
}

OracleVerdict oracle_verdict(const ContractSpec& spec, std::size_t max_len) {
  const Alphabet alphabet = spec.semantic_alphabet();
  ClashTable table(spec.conflicts, alphabet);
  OracleVerdict verdict;

  struct Node {
    Formula formula;
    ActionTrace trace;
  };
  std::deque<Node> frontier{{normalize(spec.root()), {}}};
  std::unordered_set<std::string> seen{frontier.front().formula.key()};

  while (!frontier.empty()) {
    Node node = std::move(frontier.front());
    frontier.pop_front();
    ++verdict.residuals_explored;

    if (auto clash = residual_clash(deontic_tags(node.formula), table)) {
      verdict.conflict = true;
      verdict.witness = std::move(node.trace);
      verdict.left = clash->first;
      verdict.right = clash->second;
      return verdict;
    }
    if (node.trace.size() >= max_len || node.formula.is_top() || node.formula.is_bottom()) continue;

    Alphabet used;
    collect_alphabet(node.formula, used);
    const auto& acts = mentions_one(node.formula) ? alphabet.actions : used.actions;
    auto universe = relativized_universe(alphabet.individuals, acts);
    if (universe.size() > kOracleMaxUniverse) {
      throw std::domain_error("oracle step universe has " + std::to_string(universe.size()) + " triples (limit " +
                              std::to_string(kOracleMaxUniverse) + ")");
    }
    for (std::uint32_t mask = 0; mask < (1u << universe.size()); ++mask) {
      ConcurrentActionSet phi;
      for (std::size_t b = 0; b < universe.size(); ++b) {
        if (mask & (1u << b)) phi.insert(universe[b]);
      }
      Formula next = decompose(node.formula, phi, alphabet);
      if (!seen.insert(next.key()).second) continue;
      ActionTrace trace = node.trace;
      trace.push_back(std::move(phi));
      frontier.push_back({std::move(next), std::move(trace)});
    }
  }
  return verdict;
}

}  // namespace recall
