#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "recall/automaton.hpp"

namespace recall {

enum class ConflictKind {
  ObligationVsProhibition,
  ProhibitionVsPermission,
  ObligationVsObligationPredef,
  PermissionVsObligationPredef,
};

const char* to_string(ConflictKind k);

/// Whether the performers of two tags can be the same individual acting
/// towards the same receiver.
bool performers_overlap(const Relativization& a, const Relativization& b);

/// Symmetric clash relation between two deontic tags.
std::optional<ConflictKind> tags_conflict(const DeonticTag& d, const DeonticTag& d2, const ConflictRelations& rels);

/// Every tag over the alphabet that clashes with d.
std::set<DeonticTag> f_sharp(const DeonticTag& d, const ConflictRelations& rels, const Alphabet& alphabet);

struct Clash {
  std::size_t left_group;
  std::size_t right_group;
  DeonticTag left;
  DeonticTag right;
  ConflictKind kind;
};

/// Two groups clash when every way of discharging one clashes with every
/// way of discharging the other. Returns the first clash, scanning group
/// pairs (i, j), i < j, in order.
std::optional<Clash> search_conflicts(const DeonticGroups& groups, const ConflictRelations& rels);

struct ConflictReport {
  StateId state;
  ConflictKind kind;
  DeonticTag left;
  DeonticTag right;
  std::vector<TraceStep> trace;
  std::string left_clause;
  std::string right_clause;
};

enum class Verdict { ConflictFree, Conflicts, Inconclusive };

const char* to_string(Verdict v);

struct CheckResult {
  Verdict verdict = Verdict::ConflictFree;
  /// Sorted by (trace length, state id).
  std::vector<ConflictReport> reports;
  /// Why the result is inconclusive; empty otherwise.
  std::string reason;
  BuildResult build;
};

CheckResult check(const ContractSpec& spec, const BuildOptions& options = {});

}  // namespace recall
