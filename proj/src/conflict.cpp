#include "recall/conflict.hpp"

#include <algorithm>
#include <utility>

#include "recall/parser.hpp"

namespace recall {

const char* to_string(ConflictKind k) {
  switch (k) {
    case ConflictKind::ObligationVsProhibition:
      return "obligation vs prohibition";
    case ConflictKind::ProhibitionVsPermission:
      return "prohibition vs permission";
    case ConflictKind::ObligationVsObligationPredef:
      return "obligation vs obligation (declared conflict)";
    case ConflictKind::PermissionVsObligationPredef:
      return "permission vs obligation (declared conflict)";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::ConflictFree:
      return "ConflictFree";
    case Verdict::Conflicts:
      return "Conflicts";
    case Verdict::Inconclusive:
      return "Inconclusive";
  }
  return "?";
}

bool performers_overlap(const Relativization& a, const Relativization& b) {
  using K = Relativization::Kind;
  if (a.kind == K::Global || b.kind == K::Global) return true;
  if (a.kind == K::Directed && b.kind == K::Directed) return a.sender == b.sender && a.receiver == b.receiver;
  return a.sender == b.sender;
}

namespace {

std::optional<ConflictKind> ordered_conflict(const DeonticTag& d, const DeonticTag& d2, const ConflictRelations& rels) {
  const bool overlap = performers_overlap(d.rel, d2.rel);
  if (d.action == d2.action && overlap) {
    if (d.op == Deontic::O && d2.op == Deontic::F) return ConflictKind::ObligationVsProhibition;
    if (d.op == Deontic::F && d2.op == Deontic::P) return ConflictKind::ProhibitionVsPermission;
  }
  if (d2.op != Deontic::O) return std::nullopt;
  if (d.op != Deontic::O && d.op != Deontic::P) return std::nullopt;
  const bool declared =
      rels.global_conflict(d.action, d2.action) || (overlap && rels.relativized_conflict(d.action, d2.action));
  if (!declared) return std::nullopt;
  return d.op == Deontic::O ? ConflictKind::ObligationVsObligationPredef : ConflictKind::PermissionVsObligationPredef;
}

}  // namespace

std::optional<ConflictKind> tags_conflict(const DeonticTag& d, const DeonticTag& d2, const ConflictRelations& rels) {
  if (auto k = ordered_conflict(d, d2, rels)) return k;
  return ordered_conflict(d2, d, rels);
}

std::set<DeonticTag> f_sharp(const DeonticTag& d, const ConflictRelations& rels, const Alphabet& alphabet) {
  std::vector<Relativization> rels_all{Relativization::global()};
  for (const auto& i : alphabet.individuals) {
    rels_all.push_back(Relativization::performer(i));
    for (const auto& j : alphabet.individuals) rels_all.push_back(Relativization::directed(i, j));
  }
  std::set<DeonticTag> out;
  for (const auto& r : rels_all) {
    for (Deontic op : {Deontic::O, Deontic::P, Deontic::F}) {
      for (const auto& a : alphabet.actions) {
        DeonticTag d2{r, op, a};
        if (tags_conflict(d, d2, rels)) out.insert(std::move(d2));
      }
    }
  }
  return out;
}

namespace {

struct TagPair {
  DeonticTag left;
  DeonticTag right;
  ConflictKind kind;
};

std::optional<TagPair> first_clash(const std::set<DeonticTag>& x, const std::set<DeonticTag>& y,
                                   const ConflictRelations& rels) {
  for (const auto& d : x) {
    for (const auto& d2 : y) {
      if (auto k = tags_conflict(d, d2, rels)) return TagPair{d, d2, *k};
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Clash> search_conflicts(const DeonticGroups& groups, const ConflictRelations& rels) {
  for (std::size_t i = 0; i < groups.size(); ++i) {
    for (std::size_t j = i + 1; j < groups.size(); ++j) {
      std::optional<TagPair> witness;
      bool all = true;
      for (const auto& x : groups[i].alternatives) {
        for (const auto& y : groups[j].alternatives) {
          auto c = first_clash(x, y, rels);
          if (!c) {
            all = false;
            break;
          }
          if (!witness) witness = std::move(c);
        }
        if (!all) break;
      }
      if (all && witness) return Clash{i, j, witness->left, witness->right, witness->kind};
    }
  }
  return std::nullopt;
}

CheckResult check(const ContractSpec& spec, const BuildOptions& options) {
  struct Found {
    StateId state;
    Clash clash;
  };
  std::vector<Found> found;
  auto on_state = [&](const ContractAutomaton& a, StateId s) {
    auto clash = search_conflicts(a.state(s).groups, spec.conflicts);
    if (!clash) return Visit::Continue;
    found.push_back({s, *clash});
    return Visit::Conflict;
  };

  CheckResult result;
  result.build = construct(spec, options, on_state);
  const ContractAutomaton& a = result.build.automaton;
  for (const auto& [s, c] : found) {
    const auto& groups = a.state(s).groups;
    result.reports.push_back({s, c.kind, c.left, c.right, trace_to(a, s), render_formula(groups[c.left_group].source),
                              render_formula(groups[c.right_group].source)});
  }
  std::stable_sort(result.reports.begin(), result.reports.end(), [](const auto& x, const auto& y) {
    return std::pair(x.trace.size(), x.state) < std::pair(y.trace.size(), y.state);
  });

  if (!result.reports.empty()) {
    result.verdict = Verdict::Conflicts;
  } else if (!result.build.finished()) {
    result.verdict = Verdict::Inconclusive;
    result.reason = to_string(result.build.status);
  }
  return result;
}

}  // namespace recall
