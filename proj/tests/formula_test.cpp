#include <gtest/gtest.h>

#include "recall/formula.hpp"
#include "recall/generator.hpp"
#include "recall/parser.hpp"
#include "support.hpp"

using namespace recall;
using testing_support::load_fixture;
using testing_support::parse_ok;

namespace {

Formula O(const std::string& a) { return Formula::obligation(Relativization::global(), Action::atom(a)); }
Formula P(const std::string& a) { return Formula::permission(Relativization::global(), Action::atom(a)); }

GeneratorParams params_for(std::uint64_t seed) {
  return {.individuals = 1 + seed % 3, .actions = 1 + seed % 4, .clauses = 1 + seed % 3, .max_depth = 2 + seed % 3,
          .seed = seed};
}

}  // namespace

TEST(Alphabet, ExampleFileSymbols) {
  auto spec = load_fixture("example.rcl");
  EXPECT_EQ(spec.alphabet.individuals, (std::set<Individual>{"i", "j", "k"}));
  EXPECT_EQ(spec.alphabet.actions, (std::set<BasicAction>{"a", "b", "c", "d", "e", "f", "h"}));
}

TEST(Alphabet, TopHasNoSymbols) {
  std::vector<Formula> clauses{Formula::top()};
  EXPECT_EQ(extract_alphabet(clauses), Alphabet{});
}

TEST(Alphabet, SalesContractSymbols) {
  auto spec = load_fixture("sales.rcl");
  EXPECT_EQ(spec.alphabet.individuals, (std::set<Individual>{"b", "s", "k", "c"}));
  EXPECT_EQ(spec.alphabet.actions,
            (std::set<BasicAction>{"buyProduct", "payProduct", "notifyProductPayment", "sendProduct", "deliverProduct",
                                   "notifyProductReceipt", "notifyProductDelivery", "payShippingCosts",
                                   "releaseShippingCosts"}));
}

TEST(Alphabet, ConflictHeaderActionsCount) {
  auto spec = parse_ok("conflict { global { (x, y) }; }; O(a);");
  EXPECT_EQ(spec.alphabet.actions, (std::set<BasicAction>{"a", "x", "y"}));
}

TEST(Alphabet, PlaceholderIndividualOnlyForSemantics) {
  auto spec = parse_ok("O(a);");
  EXPECT_TRUE(spec.alphabet.individuals.empty());
  EXPECT_EQ(spec.semantic_alphabet().individuals, (std::set<Individual>{"i"}));
  EXPECT_TRUE(parse_ok("top;").semantic_alphabet().individuals.empty());
}

TEST(Canonicalize, TopIsIdentity) {
  EXPECT_EQ(canonicalize(Formula::conjunction(Formula::top(), P("a"))), P("a"));
}

TEST(Canonicalize, ConjunctionIsCommutative) {
  EXPECT_EQ(canonicalize(Formula::conjunction(O("a"), P("b"))), canonicalize(Formula::conjunction(P("b"), O("a"))));
}

TEST(Canonicalize, BottomAbsorbs) {
  EXPECT_TRUE(canonicalize(Formula::conjunction(Formula::bottom(), O("a"))).is_bottom());
}

TEST(Canonicalize, FlattensAndDeduplicates) {
  auto f = canonicalize(Formula::conjunction(O("a"), Formula::conjunction(O("a"), P("b"))));
  ASSERT_EQ(f.kind(), FormulaKind::And);
  EXPECT_EQ(f.children().size(), 2u);
}

TEST(Canonicalize, ChoiceConstants) {
  EXPECT_TRUE(canonicalize(Formula::xchoice(Formula::top(), O("a"))).is_top());
  EXPECT_EQ(canonicalize(Formula::xchoice(Formula::bottom(), O("a"))), O("a"));
}

TEST(Canonicalize, ExplicitBottomReparationIsDropped) {
  auto rel = Relativization::performer("i");
  EXPECT_EQ(canonicalize(Formula::obligation(rel, Action::atom("a"), Formula::bottom())),
            Formula::obligation(rel, Action::atom("a")));
}

TEST(Atomic, Examples) {
  EXPECT_TRUE(is_atomic(Formula::obligation(Relativization::directed("i", "j"), Action::atom("a"))));
  EXPECT_FALSE(
      is_atomic(Formula::obligation(Relativization::performer("i"), Action::sequence(Action::atom("a"), Action::atom("b")))));
  auto spec = load_fixture("example.rcl");
  EXPECT_FALSE(is_atomic(parse_ok("{k}[a.b]({i,j}O(e&f));").clauses[0]));
  EXPECT_FALSE(is_atomic(spec.clauses[0]));
}

TEST(ConflictRelations, PairsAreUnordered) {
  ConflictRelations r;
  r.add_global("b", "a");
  EXPECT_TRUE(r.global_conflict("a", "b"));
  EXPECT_TRUE(r.global_conflict("b", "a"));
  EXPECT_FALSE(r.relativized_conflict("a", "b"));
}

class CanonicalizeProperty : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(CanonicalizeProperty, IdempotentAndAlphabetPreserving) {
  for (std::uint64_t s = GetParam(); s < GetParam() + 100; ++s) {
    auto spec = generate(params_for(s));
    for (const auto& c : spec.clauses) {
      auto once = canonicalize(c);
      EXPECT_EQ(canonicalize(once).key(), once.key()) << render_formula(c);
      std::vector<Formula> before{c};
      std::vector<Formula> after{once};
      auto a = extract_alphabet(before);
      auto b = extract_alphabet(after);
      EXPECT_EQ(a, b) << render_formula(c);
    }
  }
}

TEST_P(CanonicalizeProperty, RenamingCommutes) {
  auto ind = [](const std::string& s) { return "p_" + s; };
  auto act = [](const std::string& s) { return "zz" + s; };
  for (std::uint64_t s = GetParam(); s < GetParam() + 100; ++s) {
    auto spec = generate(params_for(s));
    auto renamed = testing_support::rename(spec, ind, act);
    Alphabet expected;
    for (const auto& i : spec.alphabet.individuals) expected.individuals.insert(ind(i));
    for (const auto& a : spec.alphabet.actions) expected.actions.insert(act(a));
    EXPECT_EQ(renamed.alphabet, expected);
    for (std::size_t k = 0; k < spec.clauses.size(); ++k) {
      EXPECT_EQ(canonicalize(renamed.clauses[k]), canonicalize(testing_support::rename(canonicalize(spec.clauses[k]), ind, act)));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, CanonicalizeProperty, ::testing::Values(0u, 1000u, 5000u));
