#include "recall/generator.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <string>

namespace recall {

namespace {

enum class Family { Obligation, Permission };

class Generator {
 public:
  explicit Generator(const GeneratorParams& p) : p_(p), rng_(p.seed) {}

  ContractSpec run() {
    ConflictRelations conflicts;
    if (p_.actions >= 2 && chance(4)) {
      for (std::size_t k = 1 + pick(2); k-- > 0;) {
        auto [a, b] = distinct_actions();
        conflicts.add_global(a, b);
      }
      for (std::size_t k = 1 + pick(2); k-- > 0;) {
        auto [a, b] = distinct_actions();
        conflicts.add_relativized(a, b);
      }
    }
    std::vector<Formula> clauses;
    const std::size_t depth = std::max<std::size_t>(p_.max_depth, 2);
    for (std::size_t k = 0; k < std::max<std::size_t>(p_.clauses, 1); ++k) clauses.push_back(formula(depth));
    return ContractSpec::from_clauses(std::move(clauses), std::move(conflicts));
  }

 private:
  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  bool chance(std::size_t one_in) { return pick(one_in) == 0; }

  std::string individual() { return "i" + std::to_string(1 + pick(std::max<std::size_t>(p_.individuals, 1))); }
  std::string action_name() { return "a" + std::to_string(1 + pick(std::max<std::size_t>(p_.actions, 1))); }

  std::pair<std::string, std::string> distinct_actions() {
    std::string a = action_name();
    std::string b = action_name();
    while (b == a) b = action_name();
    return {a, b};
  }

  Relativization relativization() {
    switch (pick(3)) {
      case 0:
        return Relativization::global();
      case 1:
        return Relativization::performer(individual());
      default: {
        std::string i = individual();
        return Relativization::directed(i, individual());
      }
    }
  }

  Action leaf() {
    switch (pick(20)) {
      case 0:
        return Action::zero();
      case 1:
        return Action::one();
      default:
        return Action::atom(action_name());
    }
  }

  // `height` counts this node.
  Action action(std::size_t height, bool dynamic) {
    if (height <= 1) return leaf();
    const std::size_t op = pick(dynamic ? 6 : 4);
    switch (op) {
      case 0:
        return leaf();
      case 1:
      case 2:
      case 3: {
        // Operands are drawn in a fixed order so the output does not depend
        // on argument evaluation order.
        Action l = action(height - 1, dynamic);
        Action r = action(height - 1, dynamic);
        return op == 1 ? Action::concurrent(l, r) : op == 2 ? Action::sequence(l, r) : Action::choice(l, r);
      }
      case 4:
        return Action::negation(step(height - 1));
      default:
        return Action::star(action(height - 1, dynamic));
    }
  }

  Action step(std::size_t height) {
    if (height <= 1) return leaf();
    const std::size_t op = pick(4);
    switch (op) {
      case 0:
        return leaf();
      case 1:
      case 2: {
        Action l = step(height - 1);
        Action r = step(height - 1);
        return op == 1 ? Action::concurrent(l, r) : Action::choice(l, r);
      }
      default:
        return Action::negation(step(height - 1));
    }
  }

  std::optional<Formula> reparation(std::size_t height) {
    if (height < 2 || !chance(4)) return std::nullopt;
    return formula(height);
  }

  Formula deontic(Deontic op, std::size_t height) {
    Relativization rel = relativization();
    Action a = action(height - 1, false);
    std::optional<Formula> rep;
    if (op != Deontic::P) rep = reparation(height - 1);
    return Formula::deontic(op, std::move(rel), std::move(a), std::move(rep));
  }

  Formula formula(std::size_t height) {
    if (height <= 2) return deontic(static_cast<Deontic>(pick(3)), height);
    switch (pick(6)) {
      case 0:
        return deontic(Deontic::O, height);
      case 1:
        return deontic(Deontic::P, height);
      case 2:
        return deontic(Deontic::F, height);
      case 3: {
        Relativization rel = relativization();
        Action trigger = action(height - 1, true);
        return Formula::dynamic(std::move(rel), std::move(trigger), formula(height - 1));
      }
      case 4: {
        Formula l = formula(height - 1);
        Formula r = formula(height - 1);
        return Formula::conjunction(l, r);
      }
      default: {
        Family fam = chance(2) ? Family::Obligation : Family::Permission;
        Formula l = family(fam, height - 1);
        Formula r = family(fam, height - 1);
        return Formula::xchoice(l, r);
      }
    }
  }

  Formula family(Family fam, std::size_t height) {
    Deontic op = fam == Family::Obligation ? Deontic::O : Deontic::P;
    if (height <= 2) return deontic(op, height);
    switch (pick(3)) {
      case 0:
        return deontic(op, height);
      case 1: {
        Formula l = family(fam, height - 1);
        Formula r = family(fam, height - 1);
        return Formula::conjunction(l, r);
      }
      default: {
        Formula l = family(fam, height - 1);
        Formula r = family(fam, height - 1);
        return Formula::xchoice(l, r);
      }
    }
  }

  GeneratorParams p_;
  std::mt19937_64 rng_;
};

}  // namespace

ContractSpec generate(const GeneratorParams& params) { return Generator(params).run(); }

}  // namespace recall
