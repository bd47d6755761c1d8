#include <gtest/gtest.h>

#include "fofd/fofd.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace fofd;
using fofd::testing::Rng;

namespace {

std::set<std::map<std::string, Relation>> model_set(const std::vector<Interpretation>& ms) {
  std::set<std::map<std::string, Relation>> out;
  for (const auto& m : ms) out.insert(m.relations);
  return out;
}

std::set<std::map<std::string, Relation>> lifted_models(const PropTheory& pt) {
  std::set<std::map<std::string, Relation>> out;
  for (const auto& v : enumerate_assignments(pt)) out.insert(lift(pt, v).relations);
  return out;
}

}  // namespace

TEST(Ground, UniversalBecomesConjunction) {
  PropTheory pt = ground(parse_theory("!x: P(x)."), std::vector<std::string>{"c1", "c2"});
  ASSERT_EQ(pt.sentences.size(), 1u);
  EXPECT_EQ(print_prop(*pt.sentences[0], pt.atoms), "P(c1) & P(c2)");
}

TEST(Ground, EmptyAggregates) {
  PropTheory pt = ground(parse_theory("!x: P(x). ?x: P(x)."), std::vector<std::string>{});
  ASSERT_EQ(pt.sentences.size(), 2u);
  EXPECT_TRUE(pt.sentences[0]->is_true());
  EXPECT_TRUE(pt.sentences[1]->is_false());
}

TEST(Ground, EqualityFolds) {
  PropTheory pt = ground(parse_theory("!x: !y: x = y | P(x,y)."), std::vector<std::string>{"a", "b"});
  EXPECT_EQ(print_prop(*pt.sentences[0], pt.atoms), "P(a,b) & P(b,a)");
}

TEST(Ground, QuantifierFreeSentence) {
  PropTheory pt = ground(parse_theory("p | ~q."), std::vector<std::string>{"u"});
  EXPECT_EQ(print_prop(*pt.sentences[0], pt.atoms), "p | ~q");
}

TEST(Ground, InfinitePathOneVertex) {
  Theory t = parse_theory(
      "GFD { !x: P(x) <- Q(x). LFD { !x: Q(x) <- R(x) & ?y: T(x,y) & P(y). !x: Q(x) <- ?y: T(x,y) & Q(y). } }");
  Structure frame = parse_structure("domain = {v}. T = {(v,v)}.");
  PropTheory pt = ground(t, frame);
  std::set<std::string> defined;
  for (auto a : defined_atoms(pt.definitions[0])) defined.insert(pt.atoms[a].name);
  EXPECT_EQ(defined, (std::set<std::string>{"P(v)", "Q(v)"}));
  EXPECT_EQ(model_set(enumerate_models(t, frame)), lifted_models(pt));
  EXPECT_EQ(enumerate_models(t, frame).size(), 2u);
}

TEST(Ground, RulesPerHeadTuple) {
  PropTheory pt = ground(parse_theory("LFD { !x: P(x) <- Q(x). }"), std::vector<std::string>{"a", "b"});
  ASSERT_EQ(pt.definitions.size(), 1u);
  EXPECT_EQ(pt.definitions[0].rules.size(), 2u);
  EXPECT_TRUE(validate(pt.definitions[0], pt.atoms).empty());
}

TEST(Ground, FrameFolding) {
  Theory t = parse_theory(kFairnessTheory);
  auto inst = make_instance(3, {{0, 1}, {1, 2}, {2, 0}}, {2});
  PropTheory folded = ground(t, inst.structure, {true});
  PropTheory plain = ground(t, inst.structure);
  EXPECT_LT(folded.atoms.size(), plain.atoms.size());
  for (const auto& a : folded.atoms.all()) EXPECT_TRUE(a.pred == "P" || a.pred == "Q") << a.name;
  auto models = lifted_models(folded);
  ASSERT_EQ(models.size(), 1u);
  EXPECT_EQ(*models.begin(), complete_defined(t, inst.structure).relations);
}

TEST(Ground, SizeGuard) {
  Rng rng(14);
  for (int i = 0; i < 200; ++i) {
    auto c = fofd::testing::random_fo_theory(rng);
    PropTheory pt = ground(c.theory, c.domain);
    size_t n = c.domain.size();
    for (size_t k = 0; k < c.theory.sentences.size(); ++k) {
      const auto& f = *c.theory.sentences[k];
      size_t bound = node_count(f);
      for (int q = 0; q < quantifier_depth(f); ++q) bound *= std::max<size_t>(n, 1);
      EXPECT_LE(prop::node_count(*pt.sentences[k]), bound);
    }
  }
}

// model sets of T and G(T) coincide
TEST(Ground, PreservesModels) {
  Rng rng(77);
  for (int i = 0; i < 150; ++i) {
    auto c = fofd::testing::random_fo_theory(rng);
    PropTheory pt = ground(c.theory, c.domain);
    ASSERT_EQ(model_set(enumerate_models(c.theory, c.domain)), lifted_models(pt)) << print_theory(c.theory);
  }
}

TEST(DefNF, OneStep) {
  PropTheory pt = ground(parse_theory("LFD { p <- (q & r) | s. }"), std::vector<std::string>{"u"});
  PropTheory nf = to_defnf(pt);
  EXPECT_TRUE(is_defnf(nf));
  ASSERT_EQ(nf.definitions[0].rules.size(), 2u);
  EXPECT_EQ(print_ground(nf), "// domain = {u}\nLFD {\n  p <- _t0 | s.\n  _t0 <- q & r.\n}\n");
}

TEST(DefNF, MixedUnchanged) {
  PropTheory pt = ground(parse_theory("LFD { p <- q | r. q <- p. GFD { r <- p. s <- t | a. t <- s. } }"),
                         std::vector<std::string>{"u"});
  PropTheory nf = to_defnf(pt);
  EXPECT_TRUE(is_defnf(nf));
  EXPECT_EQ(nf.atoms.size(), pt.atoms.size());
  EXPECT_EQ(print_ground(nf), print_ground(pt));
}

TEST(DefNF, AuxAtomsBounded) {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    auto c = fofd::testing::random_fo_theory(rng, 8);
    PropTheory pt = ground(c.theory, c.domain);
    size_t connectives = 0;
    std::function<void(const PropDefinition&)> walk = [&](const PropDefinition& d) {
      for (const auto& r : d.rules) connectives += prop::node_count(*r.body);
      for (const auto& s : d.subdefinitions) walk(s);
    };
    for (const auto& d : pt.definitions) walk(d);
    PropTheory nf = to_defnf(pt);
    EXPECT_TRUE(is_defnf(nf));
    EXPECT_LE(nf.atoms.size() - pt.atoms.size(), connectives);
    for (const auto& d : nf.definitions) EXPECT_TRUE(validate(d, nf.atoms).empty());
  }
}

TEST(DefNF, PreservesProjectedModels) {
  Rng rng(19);
  for (int i = 0; i < 150; ++i) {
    auto c = fofd::testing::random_fo_theory(rng, 8);
    PropTheory pt = ground(c.theory, c.domain);
    PropTheory nf = to_defnf(pt);
    if (nf.atoms.size() > 22) continue;
    EXPECT_EQ(lifted_models(pt), lifted_models(nf)) << print_ground(pt);
  }
}

TEST(DefNF, BruteForceAgreesWithEvaluator) {
  Rng rng(29);
  for (int i = 0; i < 300; ++i) {
    PropTheory pt = fofd::testing::random_defnf(rng);
    auto a = enumerate_assignments(pt), b = fofd::testing::brute_force_models(pt);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b) << print_ground(pt);
  }
}

TEST(Printing, AtomDictionary) {
  PropTheory pt = ground(parse_theory("!x: P(x) | Q."), std::vector<std::string>{"a", "b"});
  EXPECT_EQ(atom_dictionary(pt), "0\tP(a)\n1\tP(b)\n2\tQ\n");
}

TEST(Printing, Deterministic) {
  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    auto c = fofd::testing::random_fo_theory(rng);
    EXPECT_EQ(print_ground(to_defnf(ground(c.theory, c.domain))), print_ground(to_defnf(ground(c.theory, c.domain))));
  }
}
