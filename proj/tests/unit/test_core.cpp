#include <gtest/gtest.h>

#include "fofd/fofd.hpp"
#include "generators.hpp"

using namespace fofd;

namespace {

FixpointDefinition def_of(const std::string& text) {
  Theory t = parse_theory(text);
  EXPECT_EQ(t.definitions.size(), 1u);
  return t.definitions.at(0);
}

const char* kNestedReachability =
    "GFD { !x: P(x) <- Q(x).\n"
    "  LFD { !x: Q(x) <- R(x) & ?y: T(x,y) & P(y).\n"
    "        !x: Q(x) <- ?y: T(x,y) & Q(y). } }";
const char* kMixed = "LFD { p <- q | r. q <- p. GFD { r <- p. s <- t | a. t <- s. } }";

}  // namespace

TEST(MergeRules, DisjoinsBodies) {
  Rule a{"P", {"x"}, fml::atom("Q", {Term::var("x")}), {}};
  Rule b{"P", {"x"}, fml::atom("R", {Term::var("x")}), {}};
  std::vector<Rule> rs{a, b};
  Rule m = merge_rules(rs);
  EXPECT_EQ(m.head, "P");
  EXPECT_TRUE(structurally_equal(m.body, fml::disj(a.body, b.body)));
}

TEST(MergeRules, SingletonUnchanged) {
  Rule a{"P", {"x"}, fml::atom("Q", {Term::var("x")}), {}};
  std::vector<Rule> rs{a};
  Rule m = merge_rules(rs);
  EXPECT_EQ(m.vars, a.vars);
  EXPECT_TRUE(structurally_equal(m.body, a.body));
}

TEST(MergeRules, RenamesHeadVariables) {
  Rule a{"P", {"x"}, fml::atom("Q", {Term::var("x")}), {}};
  Rule b{"P", {"y"}, fml::atom("R", {Term::var("y")}), {}};
  std::vector<Rule> rs{a, b};
  Rule m = merge_rules(rs);
  EXPECT_EQ(free_variables(*m.body), std::set<std::string>(m.vars.begin(), m.vars.end()));
}

TEST(MergeRules, SplitRulesHaveTheSameModels) {
  Theory split = parse_theory(
      "LFD { !x: Ev(x) <- x = n0. !x: Ev(x) <- ?y: S(y,x) & O(y). !x: O(x) <- ?y: S(y,x) & Ev(y). }");
  Theory merged = parse_theory(
      "LFD { !x: Ev(x) <- x = n0 | ?y: S(y,x) & O(y). !x: O(x) <- ?y: S(y,x) & Ev(y). }");
  Structure frame = parse_structure("domain = {n0,n1,n2}. S = {(n0,n1),(n1,n2)}.");
  auto a = enumerate_models(split, frame);
  auto b = enumerate_models(merged, frame);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a, b);
}

TEST(Validate, ExamplesAreWellFormed) {
  for (const char* text : {kNestedReachability, kMixed, kFairnessTheory, "LFD { p <- p | a. GFD { q <- q & p. } }",
                           "LFD { a <- c. GFD { c <- d. d <- c. } }"})
    EXPECT_TRUE(validate(def_of(text)).empty()) << text;
}

TEST(Validate, NegativeDefinedOccurrence) {
  FixpointDefinition d;
  d.rules.push_back({"p", {}, fml::neg(fml::atom("p")), {}});
  auto v = validate(d);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].condition, 3);
  EXPECT_EQ(v[0].predicate, "p");
}

TEST(Validate, SiblingSymbol) {
  FixpointDefinition inner1, inner2, outer;
  inner1.rules.push_back({"p", {}, fml::atom("q"), {}});
  inner2.kind = FixpointKind::Greatest;
  inner2.rules.push_back({"q", {}, fml::atom("p"), {}});
  outer.subdefinitions = {inner1, inner2};
  auto v = validate(outer);
  bool cond5 = false;
  for (const auto& x : v) cond5 = cond5 || (x.condition == 5 && x.predicate == "p");
  EXPECT_TRUE(cond5);
}

TEST(Validate, PartitionViolation) {
  FixpointDefinition inner, outer;
  inner.rules.push_back({"p", {}, fml::atom("a"), {}});
  outer.rules.push_back({"p", {}, fml::atom("b"), {}});
  outer.subdefinitions = {inner};
  auto v = validate(outer);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v[0].condition, 4);
}

TEST(Validate, ImplicationAntecedentFlipsPolarity) {
  FixpointDefinition d;
  d.rules.push_back({"p", {}, fml::implies(fml::atom("p"), fml::atom("a")), {}});
  ASSERT_EQ(validate(d).size(), 1u);
  FixpointDefinition ok;
  ok.rules.push_back({"p", {}, fml::implies(fml::neg(fml::atom("p")), fml::atom("a")), {}});
  EXPECT_TRUE(validate(ok).empty());
}

TEST(Symbols, Mixed) {
  auto d = def_of(kMixed);
  EXPECT_EQ(defined_predicates(d), (std::set<std::string>{"p", "q", "r", "s", "t"}));
  EXPECT_EQ(open_symbols(d), (std::set<std::string>{"a"}));
}

TEST(Symbols, Empty) {
  FixpointDefinition d;
  EXPECT_TRUE(defined_predicates(d).empty());
  EXPECT_TRUE(open_symbols(d).empty());
}

TEST(Symbols, NestedReachability) {
  auto d = def_of(kNestedReachability);
  EXPECT_EQ(defined_predicates(d), (std::set<std::string>{"P", "Q"}));
  EXPECT_EQ(open_symbols(d), (std::set<std::string>{"R", "T"}));
}

TEST(Formula, NnfPushesNegation) {
  auto f = fml::neg(fml::forall("x", fml::conj(fml::atom("A", {Term::var("x")}), fml::neg(fml::atom("B")))));
  auto g = nnf(f);
  EXPECT_EQ(g->kind, FormulaKind::Exists);
  EXPECT_EQ(g->children[0]->kind, FormulaKind::Or);
  EXPECT_EQ(g->children[0]->children[1]->kind, FormulaKind::Atom);
}

TEST(Formula, FreeVariables) {
  auto f = fml::exists("y", fml::atom("T", {Term::var("x"), Term::var("y")}));
  EXPECT_EQ(free_variables(*f), std::set<std::string>{"x"});
  EXPECT_EQ(quantifier_depth(*f), 1);
}

TEST(Relation, TupleIndexing) {
  Relation r(2, 3);
  r.insert(std::vector<int>{2, 1});
  EXPECT_TRUE(r.contains(std::vector<int>{2, 1}));
  EXPECT_FALSE(r.contains(std::vector<int>{1, 2}));
  EXPECT_EQ(r.count(), 1u);
  EXPECT_EQ(r.tuple_at(r.index(std::vector<int>{2, 1})), (std::vector<int>{2, 1}));
}

TEST(Relation, SubsetOrder) {
  Relation a(1, 3), b(1, 3);
  a.insert(std::vector<int>{0});
  b.insert(std::vector<int>{0});
  b.insert(std::vector<int>{2});
  EXPECT_TRUE(a.subset_of(b));
  EXPECT_FALSE(b.subset_of(a));
}

TEST(Structure, ConstantsResolveToElements) {
  Structure s = make_domain({"u", "v"});
  EXPECT_EQ(s.constant_value("v"), 1);
  EXPECT_THROW(s.constant_value("w"), Error);
}

// The partition property for every generated definition.
TEST(Property, GeneratedDefinitionsValidate) {
  fofd::testing::Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    auto c = fofd::testing::random_fo_theory(rng);
    for (const auto& d : c.theory.definitions) {
      EXPECT_TRUE(validate(d).empty());
      std::vector<std::string> all;
      std::function<void(const FixpointDefinition&)> walk = [&](const FixpointDefinition& n) {
        for (const auto& r : n.rules) all.push_back(r.head);
        for (const auto& s : n.subdefinitions) walk(s);
      };
      walk(d);
      EXPECT_EQ(std::set<std::string>(all.begin(), all.end()).size(), all.size());
    }
  }
}
