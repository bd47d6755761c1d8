#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "fofd/fofd.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace fofd;
using fofd::testing::Rng;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

InductiveDefinition gid(const std::string& text) {
  SourceTheory st = parse_inductive_theory(text);
  if (st.inductive.size() != 1) throw Error("expected one GID");
  return st.inductive[0];
}

Structure unit_frame() { return make_domain({"u"}); }

Structure numbers(int n) {
  std::ostringstream os;
  os << "domain = {";
  for (int i = 0; i < n; ++i) os << (i ? "," : "") << "n" << i;
  os << "}. Succ = {";
  for (int i = 0; i + 1 < n; ++i) os << (i ? "," : "") << "(n" << i << ",n" << i + 1 << ")";
  os << "}.";
  return parse_structure(os.str());
}

std::set<std::string> members(const Interpretation& I, const std::string& p) {
  std::set<std::string> out;
  const Relation& r = I.relation(p);
  for (int i = 0; i < I.size(); ++i)
    if (r.test(static_cast<size_t>(i))) out.insert(I.domain[static_cast<size_t>(i)]);
  return out;
}

std::string rule_text(const FixpointDefinition& d, const std::string& head) {
  for (const auto& r : d.rules)
    if (r.head == head) return print_formula(*nnf(r.body));
  return "<missing " + head + ">";
}

}  // namespace

TEST(Transform, EvenOddShape) {
  TransformResult tr = transform_gid(gid(slurp(std::string(FOFD_SAMPLES_DIR) + "/evenodd.foid")));
  EXPECT_EQ(tr.negated, (std::map<std::string, std::string>{{"Even", "Even_neg"}, {"Odd", "Odd_neg"}}));
  const auto& d = tr.definition;
  EXPECT_EQ(d.kind, FixpointKind::Least);
  ASSERT_EQ(d.subdefinitions.size(), 1u);
  EXPECT_EQ(d.subdefinitions[0].kind, FixpointKind::Greatest);
  EXPECT_TRUE(d.subdefinitions[0].subdefinitions.empty());

  Theory expect = parse_theory(
      "LFD {\n"
      "  !x: Even(x) <- x = n0 | ?y: Succ(y,x) & Even_neg(y).\n"
      "  !x: Odd(x) <- ?y: Succ(y,x) & Even(y).\n"
      "  GFD {\n"
      "    !x: Even_neg(x) <- x ~= n0 & !y: Succ(y,x) => Even(y).\n"
      "    !x: Odd_neg(x) <- !y: Succ(y,x) => Even_neg(y).\n"
      "  }\n"
      "}");
  const auto& e = expect.definitions[0];
  for (const char* h : {"Even", "Odd"}) EXPECT_EQ(rule_text(d, h), rule_text(e, h)) << h;
  for (const char* h : {"Even_neg", "Odd_neg"})
    EXPECT_EQ(rule_text(d.subdefinitions[0], h), rule_text(e.subdefinitions[0], h)) << h;
}

TEST(Transform, EvenOddModel) {
  SourceTheory st = parse_inductive_theory(slurp(std::string(FOFD_SAMPLES_DIR) + "/evenodd.foid"));
  TransformResult tr = transform_gid(st.inductive[0]);
  auto rep = check_correspondence(st.inductive[0], tr, numbers(5));
  ASSERT_EQ(rep.models, 1u);
  EXPECT_TRUE(rep.ok());
  const auto& m = rep.delta_models[0];
  EXPECT_EQ(members(m, "Even"), (std::set<std::string>{"n0", "n2", "n4"}));
  EXPECT_EQ(members(m, "Odd"), (std::set<std::string>{"n1", "n3"}));
  EXPECT_EQ(members(m, "Even_neg"), (std::set<std::string>{"n1", "n3"}));
  EXPECT_EQ(members(m, "Odd_neg"), (std::set<std::string>{"n0", "n2", "n4"}));
}

TEST(Transform, TheoryKeepsSentencesAndAvoidsNames) {
  SourceTheory st = parse_inductive_theory("GID { p <- ~q & p_neg. q <- r. } r.");
  Theory t = transform_theory(st.theory, st.inductive);
  EXPECT_EQ(t.sentences.size(), 1u);
  ASSERT_EQ(t.definitions.size(), 1u);
  std::set<std::string> heads;
  for (const auto& r : t.definitions[0].subdefinitions[0].rules) heads.insert(r.head);
  EXPECT_EQ(heads, (std::set<std::string>{"p_neg_1", "q_neg"}));
  EXPECT_TRUE(validate(t.definitions[0]).empty());
  // printing and reparsing gives a plain theory
  Theory back = parse_theory(print_theory(t));
  EXPECT_EQ(print_theory(back), print_theory(t));
}

TEST(Transform, EmptyGid) {
  TransformResult tr = transform_gid(InductiveDefinition{});
  EXPECT_TRUE(tr.definition.rules.empty());
  ASSERT_EQ(tr.definition.subdefinitions.size(), 1u);
  EXPECT_TRUE(tr.definition.subdefinitions[0].rules.empty());
}

TEST(Transform, PositiveGidMatchesLfd) {
  InductiveDefinition d = gid("GID { p <- q | a. q <- p & b. r <- r. }");
  TransformResult tr = transform_gid(d);
  Theory plain = parse_theory("LFD { p <- q | a. q <- p & b. r <- r. }");
  std::set<std::string> keep{"a", "b", "p", "q", "r"};
  std::set<std::set<std::string>> expect, got;
  for (const auto& m : enumerate_models(plain, unit_frame())) expect.insert(fofd::testing::true_atoms(m, &keep));
  auto rep = check_correspondence(d, tr, unit_frame());
  for (const auto& m : rep.delta_models) got.insert(fofd::testing::true_atoms(m, &keep));
  EXPECT_EQ(got, expect);
  EXPECT_TRUE(rep.ok());
}

TEST(Transform, SelfSupportIsFalse) {
  InductiveDefinition d = gid("GID { p <- p. }");
  auto rep = check_correspondence(d, transform_gid(d), unit_frame());
  ASSERT_EQ(rep.models, 1u);
  EXPECT_EQ(fofd::testing::true_atoms(rep.delta_models[0]), std::set<std::string>{"p_neg"});
}

TEST(Transform, OpenSymbolsUnchanged) {
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    InductiveDefinition d = fofd::testing::random_gid(rng);
    std::set<std::string> defined, opens;
    for (const auto& r : d.rules) defined.insert(r.head);
    for (const auto& r : d.rules)
      for_each_atom(*r.body, [&](const std::string& p, bool, int) {
        if (!defined.count(p)) opens.insert(p);
      });
    TransformResult tr = transform_gid(d);
    EXPECT_EQ(open_symbols(tr.definition), opens);
    EXPECT_TRUE(validate(tr.definition).empty());
  }
}

// Mutual negation has two stable readings and no total well-founded model.
// The translation still has exactly one model, where p and q and their
// partners are all false, so the partners are not complements.
TEST(Transform, MutualNegationIsNotComplementary) {
  InductiveDefinition d = gid("GID { p <- ~q. q <- ~p. }");
  EXPECT_FALSE(fofd::testing::well_founded(d, {}).total());
  auto rep = check_correspondence(d, transform_gid(d), unit_frame());
  ASSERT_EQ(rep.models, 1u);
  EXPECT_FALSE(rep.complementary);
  EXPECT_TRUE(fofd::testing::true_atoms(rep.delta_models[0]).empty());
}

TEST(Transform, LiarIsNotComplementary) {
  InductiveDefinition d = gid(slurp(std::string(FOFD_SAMPLES_DIR) + "/liar.foid"));
  auto rep = check_correspondence(d, transform_gid(d), unit_frame());
  ASSERT_EQ(rep.models, 1u);
  EXPECT_FALSE(rep.complementary);
}

// For each open assignment: one model of the translation, P is the
// well-founded truth, P_neg the well-founded falsity.
TEST(Transform, MatchesWellFoundedSemantics) {
  Rng rng(41);
  for (int i = 0; i < 300; ++i) {
    InductiveDefinition d = fofd::testing::random_gid(rng);
    TransformResult tr = transform_gid(d);
    auto rep = check_correspondence(d, tr, unit_frame());
    std::vector<std::string> opens;
    fofd::testing::gid_models(d, &opens);
    std::set<std::string> defined;
    for (const auto& [p, n] : tr.negated) defined.insert(p);
    std::map<std::set<std::string>, std::set<std::string>> by_open;
    for (const auto& m : rep.delta_models) {
      std::set<std::string> all = fofd::testing::true_atoms(m), o;
      for (const auto& a : opens)
        if (all.count(a)) o.insert(a);
      ASSERT_TRUE(by_open.emplace(o, all).second) << print_inductive(d);
    }
    ASSERT_EQ(by_open.size(), size_t{1} << opens.size()) << print_inductive(d);
    bool all_total = true;
    for (const auto& [o, all] : by_open) {
      auto w = fofd::testing::well_founded(d, o);
      all_total = all_total && w.total();
      for (const auto& p : defined) {
        EXPECT_EQ(all.count(p) > 0, w.truth.count(p) > 0) << p << "\n" << print_inductive(d);
        EXPECT_EQ(all.count(tr.negated.at(p)) > 0, w.possible.count(p) == 0) << p << "\n" << print_inductive(d);
      }
    }
    EXPECT_EQ(rep.complementary, all_total) << print_inductive(d);
  }
}
