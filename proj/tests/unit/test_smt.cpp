#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <thread>

#include "fofd/fofd.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace fofd;
using fofd::testing::Rng;

namespace {

std::string fixture(const std::string& name) {
  std::ifstream in(std::string(FOFD_FIXTURES_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PropTheory prop_theory(const std::string& text) { return ground(parse_theory(text), std::vector<std::string>{"u"}); }

const char* kMixed = "LFD { p <- q | r. q <- p. GFD { r <- p. s <- t | a. t <- s. } }";
const char* kSelfLoops = "LFD { p <- p | a. GFD { q <- q & p. } }";

class Solver : public ::testing::Test {
 protected:
  void SetUp() override {
    auto c = find_solver();
    if (!c) GTEST_SKIP() << "no SMT solver on PATH";
    cfg = *c;
  }
  SolverConfig cfg;
};

std::vector<int> cube_of(const std::vector<bool>& v) {
  std::vector<int> c;
  for (size_t i = 0; i < v.size(); ++i) c.push_back(v[i] ? static_cast<int>(i) : -static_cast<int>(i) - 1);
  return c;
}

// Projected models of the DL theory: every assignment whose cube is SAT.
std::vector<std::vector<bool>> projected(const DLTheory& t, size_t atoms, const SolverConfig& cfg) {
  std::vector<std::vector<int>> cubes;
  std::vector<std::vector<bool>> all;
  for (uint64_t m = 0; m < (uint64_t{1} << atoms); ++m) {
    std::vector<bool> v(atoms);
    for (size_t i = 0; i < atoms; ++i) v[i] = (m >> i) & 1;
    cubes.push_back(cube_of(v));
    all.push_back(v);
  }
  auto st = check_cubes(t, cubes, cfg);
  std::vector<std::vector<bool>> out;
  for (size_t i = 0; i < st.size(); ++i)
    if (st[i] == SolveStatus::Sat) out.push_back(all[i]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Emit, NegativeConstants) {
  DLTheory t;
  t.levels = {{}, {0, 0}};
  t.formulas = {dl::diff(0, 1, DiffOp::Le, -1)};
  EXPECT_NE(emit_smtlib(t).find("(assert (<= (- l0 l1) (- 1)))"), std::string::npos);
}

TEST(Emit, Layout) {
  DLTheory t = reduce(prop_theory(kSelfLoops));
  std::string s = emit_smtlib(t);
  EXPECT_EQ(s.rfind("(set-option :produce-models true)\n(set-logic QF_IDL)\n", 0), 0u);
  EXPECT_NE(s.find("(declare-fun b2 () Bool)"), std::string::npos);
  EXPECT_NE(s.find("(declare-fun l3 () Int)"), std::string::npos);
  EXPECT_EQ(s.substr(s.size() - 24), "(check-sat)\n(get-model)\n");
  EXPECT_EQ(s, emit_smtlib(reduce(prop_theory(kSelfLoops))));
}

TEST(Emit, NameMap) {
  DLTheory t = reduce(prop_theory(kSelfLoops));
  EXPECT_EQ(name_map(t), "b0\ta\nb1\tp\nb2\tq\nl0\tZ\nl1\tlev0[p]\nl2\tlev0[q]\nl3\tlev1[q]\n");
}

TEST(ParseOutput, Z3Style) {
  DLTheory t = reduce(prop_theory(kSelfLoops));
  SolveResult r = parse_solver_output(fixture("z3_sat.out"), t);
  ASSERT_EQ(r.status, SolveStatus::Sat);
  EXPECT_EQ(r.bools, (std::vector<bool>{true, true, true}));
  EXPECT_EQ(r.ints, (std::vector<long>{-1, -1, 0, -1}));
  EXPECT_TRUE(r.missing.empty());
  for (const auto& f : t.formulas) EXPECT_TRUE(dl::eval(*f, r.bools, r.ints));
}

TEST(ParseOutput, Cvc5Style) {
  DLTheory t = reduce(prop_theory(kSelfLoops));
  SolveResult r = parse_solver_output(fixture("cvc5_sat.out"), t);
  ASSERT_EQ(r.status, SolveStatus::Sat);
  EXPECT_EQ(r.ints, (std::vector<long>{-1, -1, 0, -1}));
  for (const auto& f : t.formulas) EXPECT_TRUE(dl::eval(*f, r.bools, r.ints));
}

TEST(ParseOutput, WrappedModelWithMissingSymbols) {
  DLTheory t = reduce(prop_theory(kSelfLoops));
  SolveResult r = parse_solver_output(fixture("wrapped_sat.out"), t);
  ASSERT_EQ(r.status, SolveStatus::Sat);
  EXPECT_EQ(r.bools, (std::vector<bool>{true, true, false}));
  EXPECT_EQ(r.missing, (std::vector<std::string>{"b2", "l2", "l3"}));
}

TEST(ParseOutput, Unsat) {
  DLTheory t = reduce(prop_theory(kSelfLoops));
  EXPECT_EQ(parse_solver_output(fixture("unsat.out"), t).status, SolveStatus::Unsat);
}

TEST(ParseOutput, ErrorsAndGarbage) {
  DLTheory t = reduce(prop_theory(kSelfLoops));
  EXPECT_THROW(parse_solver_output(fixture("error.out"), t), SolverError);
  EXPECT_THROW(parse_solver_output("", t), SolverError);
  EXPECT_THROW(parse_solver_output("sat\n((define-fun", t), SolverError);
  EXPECT_EQ(parse_solver_output(fixture("garbled_model.out"), t).status, SolveStatus::Unknown);
}

TEST(Config, MissingSolver) {
  SolverConfig c;
  c.path = "/nonexistent/solver";
  DLTheory t = reduce(prop_theory(kSelfLoops));
  EXPECT_THROW(solve(t, c), SolverError);
  c.path.clear();
  EXPECT_THROW(solve(t, c), SolverError);
}

TEST(Config, NonPositiveTimeout) {
  SolverConfig c;
  c.path = "/bin/cat";
  c.timeout_seconds = 0;
  EXPECT_THROW(solve(reduce(prop_theory(kSelfLoops)), c), SolverError);
}

TEST(Process, Timeout) {
  auto r = run_process({"/bin/sleep", "5"}, 0.3);
  EXPECT_TRUE(r.timed_out);
  EXPECT_LT(r.seconds, 3.0);
}

TEST_F(Solver, SelfLoopsSat) {
  PropTheory pt = prop_theory(kSelfLoops);
  DLTheory t = reduce(pt);
  SolveResult r = solve(t, cfg);
  ASSERT_EQ(r.status, SolveStatus::Sat);
  for (const auto& f : t.formulas) EXPECT_TRUE(dl::eval(*f, r.bools, r.ints));
  EXPECT_TRUE(check_model(to_fo(pt), lift_model(r, pt)));
}

TEST_F(Solver, ContradictionUnsat) {
  EXPECT_EQ(solve(reduce(prop_theory("p. ~p.")), cfg).status, SolveStatus::Unsat);
  EXPECT_EQ(solve(reduce(prop_theory("(p | q) & ~p & ~q.")), cfg).status, SolveStatus::Unsat);
}

TEST_F(Solver, Mixed) {
  Theory th = parse_theory(kMixed);
  PropTheory pt = ground(th, std::vector<std::string>{"u"});
  DLTheory t = reduce(pt);
  SolveResult r = solve(t, cfg);
  ASSERT_EQ(r.status, SolveStatus::Sat);
  Structure m = lift_model(r, pt);
  EXPECT_TRUE(check_model(th, m));
  auto models = enumerate_models(th, std::vector<std::string>{"u"});
  bool found = false;
  for (const auto& x : models) found = found || x.relations == m.relations;
  EXPECT_TRUE(found);
  // s holds in both models
  EXPECT_EQ(solve(t, cfg, {-pt.atoms.find("s") - 1}).status, SolveStatus::Unsat);
}

TEST_F(Solver, SelfLoopsProjectedModels) {
  PropTheory pt = prop_theory(kSelfLoops);
  auto expect = enumerate_assignments(pt);
  std::sort(expect.begin(), expect.end());
  for (auto s : {Strength::Weak, Strength::Strong})
    for (bool scc : {false, true}) EXPECT_EQ(projected(reduce(pt, {s, scc}), pt.atoms.size(), cfg), expect);
}

TEST_F(Solver, CoinductiveSupportNeedsRelaxation) {
  PropTheory pt = prop_theory("LFD { a <- c. GFD { c <- d. d <- c. } } a.");
  for (auto s : {Strength::Weak, Strength::Strong})
    for (bool scc : {false, true}) {
      EXPECT_EQ(solve(reduce(pt, {s, scc, true}), cfg).status, SolveStatus::Sat);
      EXPECT_EQ(solve(reduce(pt, {s, scc, false}), cfg).status, SolveStatus::Unsat);
    }
}

// the inner p3 must not justify its own falsity for the outer family
TEST_F(Solver, NestedSameKindCycle) {
  PropTheory pt = prop_theory(
      "~p0 | ~p4. GFD { p0 <- p3. p1 <- p4 & p5. p2 <- p2. p4 <- p2 & p3. "
      "GFD { p3 <- p5 & p3 & p1. } LFD { p6 <- ~p5 & p0. } }");
  auto expect = enumerate_assignments(pt);
  std::sort(expect.begin(), expect.end());
  for (auto s : {Strength::Weak, Strength::Strong})
    for (bool scc : {false, true}) EXPECT_EQ(projected(reduce(pt, {s, scc}), pt.atoms.size(), cfg), expect);
}

TEST_F(Solver, AuxAtomsAreDropped) {
  Theory th = parse_theory("LFD { p <- (q & a) | b. q <- p. } a.");
  PropTheory pt = to_defnf(ground(th, std::vector<std::string>{"u"}));
  ASSERT_GT(pt.atoms.size(), 4u);
  SolveResult r = solve(reduce(pt), cfg);
  ASSERT_EQ(r.status, SolveStatus::Sat);
  Structure m = lift_model(r, pt);
  for (const auto& [p, rel] : m.relations) EXPECT_NE(p.rfind("_t", 0), 0u) << p;
  EXPECT_TRUE(check_model(th, m));
}

TEST_F(Solver, FairnessLift) {
  auto inst = gen_fairness(10, Shape::Ring, 7);
  auto row = run_pipeline(inst, {}, cfg);
  ASSERT_EQ(row.status, "SAT");
  EXPECT_EQ(row.fair, evaluate_fairness(inst));
}

// satisfiability agrees with enumeration; lifted models check; weak and
// strong project to the same models
TEST_F(Solver, RandomEquisatisfiable) {
  Rng rng(2024);
  for (int i = 0; i < 60; ++i) {
    PropTheory pt = fofd::testing::random_defnf(rng);
    auto models = enumerate_assignments(pt);
    std::sort(models.begin(), models.end());
    for (auto s : {Strength::Weak, Strength::Strong})
      for (bool scc : {false, true}) {
        DLTheory t = reduce(pt, {s, scc});
        SolveResult r = solve(t, cfg);
        ASSERT_EQ(r.status == SolveStatus::Sat, !models.empty()) << print_ground(pt);
        if (r.status == SolveStatus::Sat) {
          EXPECT_TRUE(check_model(to_fo(pt), lift_model(r, pt)));
        }
        EXPECT_EQ(projected(t, pt.atoms.size(), cfg), models) << print_ground(pt);
      }
  }
}

TEST_F(Solver, CubesAnswerInOrder) {
  PropTheory pt = prop_theory(kSelfLoops);
  DLTheory t = reduce(pt);
  // a,p,q
  auto st = check_cubes(t, {{0, 1, 2}, {0, 1, -3}, {-1, -2, -3}, {-1, 1, 2}}, cfg);
  EXPECT_EQ(st, (std::vector<SolveStatus>{SolveStatus::Sat, SolveStatus::Unsat, SolveStatus::Sat, SolveStatus::Unsat}));
  EXPECT_TRUE(check_cubes(t, {}, cfg).empty());
}

TEST_F(Solver, ConcurrentCalls) {
  PropTheory pt = prop_theory(kMixed);
  DLTheory t = reduce(pt);
  std::vector<SolveStatus> got(4);
  std::vector<std::thread> ts;
  for (size_t i = 0; i < got.size(); ++i) ts.emplace_back([&, i] { got[i] = solve(t, cfg).status; });
  for (auto& th : ts) th.join();
  for (auto s : got) EXPECT_EQ(s, SolveStatus::Sat);
}
