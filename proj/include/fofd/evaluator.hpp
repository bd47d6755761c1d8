#pragma once

// Reference semantics: formula evaluation over finite structures, the rule
// and nested-definition operators, least/greatest fixpoints, model checking
// and brute-force model enumeration. Everything else is tested against this.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "core.hpp"

namespace fofd {

/// Two-valued interpretations are structures that interpret the relevant
/// predicates; the truth order compares relations pointwise.
using Interpretation = Structure;

inline bool leq(const Interpretation& a, const Interpretation& b) {
  for (const auto& [p, r] : a.relations) {
    auto it = b.relations.find(p);
    if (it == b.relations.end() || !r.subset_of(it->second)) return false;
  }
  return true;
}

namespace detail {

// Formulas compiled against a predicate slot table. Arguments >= 0 are
// variable slots, negative ones encode domain elements as -(e + 1).
struct CNode {
  FormulaKind kind;
  int pred = -1;
  int var = -1;
  std::vector<int> args;
  std::vector<int> kids;
};

class SlotTable {
 public:
  int slot(const std::string& p) const {
    auto it = index_.find(p);
    return it == index_.end() ? -1 : it->second;
  }
  int intern(const std::string& p, int arity) {
    auto [it, fresh] = index_.emplace(p, static_cast<int>(names_.size()));
    if (fresh) {
      names_.push_back(p);
      arity_.push_back(arity);
    } else if (arity_[static_cast<size_t>(it->second)] != arity) {
      throw Error("predicate " + p + " used with arities " +
                  std::to_string(arity_[static_cast<size_t>(it->second)]) + " and " +
                  std::to_string(arity));
    }
    return it->second;
  }
  size_t size() const { return names_.size(); }
  const std::string& name(int s) const { return names_[static_cast<size_t>(s)]; }
  int arity(int s) const { return arity_[static_cast<size_t>(s)]; }

 private:
  std::map<std::string, int> index_;
  std::vector<std::string> names_;
  std::vector<int> arity_;
};

class Program {
 public:
  Program(SlotTable& preds, const Structure& consts) : preds_(preds), consts_(consts) {}

  /// Compiles f with the given variables pre-bound; their slots go to `slots`.
  int compile(const Formula& f, const std::vector<std::string>& bound, std::vector<int>* slots = nullptr) {
    std::vector<std::pair<std::string, int>> scope;
    for (const auto& v : bound) {
      scope.emplace_back(v, new_var());
      if (slots) slots->push_back(scope.back().second);
    }
    return compile_node(f, scope);
  }
  int new_var() { return nvars_++; }
  int var_count() const { return nvars_; }

  bool eval(int node, const std::vector<Relation>& rels, std::vector<int>& vars, int n) const {
    const CNode& c = nodes_[static_cast<size_t>(node)];
    switch (c.kind) {
      case FormulaKind::Atom: {
        size_t idx = 0;
        for (int a : c.args)
          idx = idx * static_cast<size_t>(n) +
                static_cast<size_t>(a >= 0 ? vars[static_cast<size_t>(a)] : -a - 1);
        return rels[static_cast<size_t>(c.pred)].test(idx);
      }
      case FormulaKind::Equal: {
        auto value = [&](int a) { return a >= 0 ? vars[static_cast<size_t>(a)] : -a - 1; };
        return value(c.args[0]) == value(c.args[1]);
      }
      case FormulaKind::Not:
        return !eval(c.kids[0], rels, vars, n);
      case FormulaKind::And:
        for (int k : c.kids)
          if (!eval(k, rels, vars, n)) return false;
        return true;
      case FormulaKind::Or:
        for (int k : c.kids)
          if (eval(k, rels, vars, n)) return true;
        return false;
      case FormulaKind::Forall:
        for (int d = 0; d < n; ++d) {
          vars[static_cast<size_t>(c.var)] = d;
          if (!eval(c.kids[0], rels, vars, n)) return false;
        }
        return true;
      case FormulaKind::Exists:
        for (int d = 0; d < n; ++d) {
          vars[static_cast<size_t>(c.var)] = d;
          if (eval(c.kids[0], rels, vars, n)) return true;
        }
        return false;
    }
    return false;
  }

 private:
  int compile_node(const Formula& f, std::vector<std::pair<std::string, int>>& scope) {
    CNode c;
    c.kind = f.kind;
    auto term = [&](const Term& t) {
      if (t.is_var()) {
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
          if (it->first == t.name) return it->second;
        throw Error("free variable " + t.name);
      }
      return -consts_.constant_value(t.name) - 1;
    };
    switch (f.kind) {
      case FormulaKind::Atom:
        c.pred = preds_.intern(f.symbol, static_cast<int>(f.terms.size()));
        [[fallthrough]];
      case FormulaKind::Equal:
        for (const auto& t : f.terms) c.args.push_back(term(t));
        break;
      case FormulaKind::Forall:
      case FormulaKind::Exists:
        c.var = new_var();
        scope.emplace_back(f.symbol, c.var);
        c.kids.push_back(compile_node(*f.children[0], scope));
        scope.pop_back();
        break;
      default:
        for (const auto& k : f.children) c.kids.push_back(compile_node(*k, scope));
    }
    nodes_.push_back(std::move(c));
    return static_cast<int>(nodes_.size()) - 1;
  }

  SlotTable& preds_;
  const Structure& consts_;
  std::vector<CNode> nodes_;
  int nvars_ = 0;
};

struct CRule {
  int head;
  int arity;
  int body;
  std::vector<int> vars;
};

struct CDef {
  FixpointKind kind;
  std::vector<CRule> rules;
  std::vector<CDef> subs;
  std::vector<int> defined;  // slots of def(D), whole subtree
};

/// A compiled definition (or bare rule set) plus the slot state it runs on.
class Machine {
 public:
  explicit Machine(const Structure& consts) : consts_(consts), prog_(slots_, consts_) {}

  CDef compile(const FixpointDefinition& d) {
    CDef c;
    c.kind = d.kind;
    c.rules = compile_rules(d.rules);
    for (const auto& r : c.rules) c.defined.push_back(r.head);
    for (const auto& s : d.subdefinitions) {
      c.subs.push_back(compile(s));
      const auto& sd = c.subs.back().defined;
      c.defined.insert(c.defined.end(), sd.begin(), sd.end());
    }
    return c;
  }

  std::vector<CRule> compile_rules(const std::vector<Rule>& rules) {
    std::vector<CRule> out;
    for (const auto& r : rules) {
      int arity = static_cast<int>(r.vars.size());
      CRule c{slots_.intern(r.head, arity), arity, -1, {}};
      c.body = prog_.compile(*r.body, r.vars, &c.vars);
      out.push_back(std::move(c));
    }
    return out;
  }

  int compile_formula(const Formula& f, const std::vector<std::string>& bound = {},
                      std::vector<int>* slots = nullptr) {
    return prog_.compile(f, bound, slots);
  }

  /// Allocates relations for every slot, copying from the given sources.
  /// Slots listed in `computed` may be missing and start out empty.
  void load(std::initializer_list<const Structure*> sources, std::span<const int> computed = {}) {
    state_.assign(slots_.size(), Relation());
    std::vector<bool> have(slots_.size(), false);
    for (const Structure* s : sources) {
      for (const auto& [p, rel] : s->relations) {
        int k = slots_.slot(p);
        if (k < 0) continue;
        Relation r = rel;
        r.conform(slots_.arity(k));
        if (r.domain_size() != n()) throw Error("relation " + p + " has the wrong domain size");
        state_[static_cast<size_t>(k)] = std::move(r);
        have[static_cast<size_t>(k)] = true;
      }
    }
    std::vector<bool> optional(slots_.size(), false);
    for (int k : computed) optional[static_cast<size_t>(k)] = true;
    for (size_t k = 0; k < slots_.size(); ++k) {
      if (have[k]) continue;
      if (!optional[k]) throw Error("uninterpreted symbol " + slots_.name(static_cast<int>(k)));
      state_[k] = Relation(slots_.arity(static_cast<int>(k)), n());
    }
    vars_.assign(static_cast<size_t>(prog_.var_count()) + 1, 0);
  }

  int n() const { return consts_.size(); }
  SlotTable& slots() { return slots_; }
  std::vector<Relation>& state() { return state_; }

  bool eval(int node, std::span<const int> slots = {}, std::span<const int> values = {}) {
    vars_.resize(std::max(vars_.size(), static_cast<size_t>(prog_.var_count()) + 1));
    for (size_t i = 0; i < slots.size(); ++i) vars_[static_cast<size_t>(slots[i])] = values[i];
    return prog_.eval(node, state_, vars_, n());
  }

  Relation apply_rule(const CRule& r) {
    Relation out(r.arity, n());
    for (size_t idx = 0; idx < out.cell_count(); ++idx) {
      size_t rest = idx;
      for (int i = r.arity - 1; i >= 0; --i) {
        vars_[static_cast<size_t>(r.vars[static_cast<size_t>(i)])] =
            static_cast<int>(rest % static_cast<size_t>(n()));
        rest /= static_cast<size_t>(n());
      }
      if (prog_.eval(r.body, state_, vars_, n())) out.set(idx);
    }
    return out;
  }

  /// One application of the nested operator; reads def(D) from the state and
  /// returns the new relations in `defined` order. The state is restored.
  std::vector<Relation> apply(const CDef& d) {
    std::vector<Relation> saved;
    for (const auto& s : d.subs)
      for (int k : s.defined) saved.push_back(state_[static_cast<size_t>(k)]);
    for (const auto& s : d.subs) run_fixpoint(s, s.kind, nullptr);
    std::vector<Relation> out;
    for (const auto& r : d.rules) out.push_back(apply_rule(r));
    for (const auto& s : d.subs)
      for (int k : s.defined) out.push_back(state_[static_cast<size_t>(k)]);
    size_t i = 0;
    for (const auto& s : d.subs)
      for (int k : s.defined) state_[static_cast<size_t>(k)] = std::move(saved[i++]);
    return out;
  }

  /// Iterates from bottom or top; leaves the fixpoint in the state.
  int run_fixpoint(const CDef& d, FixpointKind which, std::vector<std::vector<Relation>>* trace) {
    for (int k : d.defined)
      state_[static_cast<size_t>(k)] = which == FixpointKind::Least ? Relation(slots_.arity(k), n())
                                                                    : Relation::full(slots_.arity(k), n());
    int steps = 0;
    for (;;) {
      if (trace) trace->push_back(current(d));
      std::vector<Relation> next = apply(d);
      ++steps;
      bool same = true;
      for (size_t i = 0; i < d.defined.size(); ++i)
        if (!(next[i] == state_[static_cast<size_t>(d.defined[i])])) same = false;
      if (same) return steps;
      for (size_t i = 0; i < d.defined.size(); ++i)
        state_[static_cast<size_t>(d.defined[i])] = std::move(next[i]);
    }
  }

  std::vector<Relation> current(const CDef& d) const {
    std::vector<Relation> out;
    for (int k : d.defined) out.push_back(state_[static_cast<size_t>(k)]);
    return out;
  }

  Structure extract(std::span<const int> slots) const {
    Structure s;
    s.domain = consts_.domain;
    s.constants = consts_.constants;
    for (int k : slots) s.relations[slots_.name(k)] = state_[static_cast<size_t>(k)];
    return s;
  }

 private:
  Structure consts_;
  SlotTable slots_;
  Program prog_;
  std::vector<Relation> state_;
  std::vector<int> vars_;
};

inline Structure empty_like(const Structure& s) {
  Structure out;
  out.domain = s.domain;
  out.constants = s.constants;
  return out;
}

inline void require_disjoint(const Structure& a, const Structure& b) {
  for (const auto& [p, r] : a.relations)
    if (b.relations.count(p)) throw Error("symbol " + p + " interpreted twice");
}



inline void forbid_defined(const Structure& I, const std::set<std::string>& defined) {
  for (const auto& p : defined)
    if (I.relations.count(p)) throw Error("open interpretation also interprets defined symbol " + p);
}

inline Structure from_slots(Machine& m, std::span<const int> slots, const std::vector<Relation>& rels) {
  Structure s = m.extract({});
  for (size_t i = 0; i < slots.size(); ++i) s.relations[m.slots().name(slots[i])] = rels[i];
  return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------

/// Classical truth of f in I; free variables take values from `assignment`.
inline bool eval_formula(const Formula& f, const Interpretation& I,
                         const std::map<std::string, int>& assignment = {}) {
  detail::Machine m(I);
  std::vector<std::string> bound;
  std::vector<int> values;
  for (const auto& [v, e] : assignment) {
    if (e < 0 || e >= I.size()) throw Error("variable " + v + " assigned outside the domain");
    bound.push_back(v);
    values.push_back(e);
  }
  std::vector<int> slots;
  int root = m.compile_formula(f, bound, &slots);
  m.load({&I});
  return m.eval(root, slots, values);
}

inline bool eval_formula(const FormulaPtr& f, const Interpretation& I,
                         const std::map<std::string, int>& assignment = {}) {
  return eval_formula(*f, I, assignment);
}

/// One application of the rule operator: P^K = { d | (I+J)[x/d] |= body }.
inline Interpretation rule_operator(std::span<const Rule> rules, const Interpretation& I,
                                   const Interpretation& J) {
  detail::require_disjoint(I, J);
  std::set<std::string> heads;
  for (const auto& r : rules) heads.insert(r.head);
  detail::forbid_defined(I, heads);
  detail::Machine m(I);
  auto compiled = m.compile_rules(std::vector<Rule>(rules.begin(), rules.end()));
  m.load({&I, &J});
  Interpretation K = detail::empty_like(I);
  for (const auto& r : compiled) K.relations[m.slots().name(r.head)] = m.apply_rule(r);
  return K;
}

/// One application of the nested definition operator (K + K').
inline Interpretation definition_operator(const FixpointDefinition& d, const Interpretation& I,
                                         const Interpretation& J) {
  detail::require_disjoint(I, J);
  detail::forbid_defined(I, defined_predicates(d));
  detail::Machine m(I);
  auto c = m.compile(d);
  m.load({&I, &J});
  return detail::from_slots(m, c.defined, m.apply(c));
}

/// Kleene iteration of the definition operator from bottom (least) or top
/// (greatest). Every intermediate interpretation is recorded when `trace` is
/// given, starting with the initial one; `steps` counts operator applications.
inline Interpretation fixpoint(const FixpointDefinition& d, const Interpretation& I, FixpointKind which,
                               int* steps = nullptr, std::vector<Interpretation>* trace = nullptr) {
  detail::forbid_defined(I, defined_predicates(d));
  detail::Machine m(I);
  auto c = m.compile(d);
  m.load({&I}, c.defined);
  std::vector<std::vector<Relation>> raw;
  int k = m.run_fixpoint(c, which, trace ? &raw : nullptr);
  if (steps) *steps = k;
  if (trace)
    for (const auto& r : raw) trace->push_back(detail::from_slots(m, c.defined, r));
  return detail::from_slots(m, c.defined, m.current(c));
}

inline bool satisfies(const FixpointDefinition& d, const Interpretation& I) {
  auto def = defined_predicates(d);
  Interpretation open = restrict(I, open_symbols(d));
  Interpretation fp = fixpoint(d, open, d.kind);
  for (const auto& p : def) {
    Relation r = I.relation(p);
    r.conform(fp.relation(p).arity());
    if (!(r == fp.relation(p))) return false;
  }
  return true;
}

namespace detail {

/// How a theory's definitions are evaluated when searching for models:
/// `computed` definitions are evaluated in the given order from everything
/// else; `checked` ones have their defined symbols guessed and verified.
struct Plan {
  std::vector<size_t> computed;
  std::vector<size_t> checked;
  std::set<std::string> derived;  // defined by computed definitions
};

inline Plan plan_definitions(const Theory& t, const std::set<std::string>& fixed) {
  size_t k = t.definitions.size();
  std::vector<std::set<std::string>> defs(k), opens(k);
  std::map<std::string, int> definers;
  for (size_t i = 0; i < k; ++i) {
    defs[i] = defined_predicates(t.definitions[i]);
    opens[i] = open_symbols(t.definitions[i]);
    for (const auto& p : defs[i]) ++definers[p];
  }
  // deps[i] holds j when definition i reads a symbol defined by j
  std::vector<std::vector<size_t>> deps(k);
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j)
      if (i != j)
        for (const auto& p : opens[i])
          if (defs[j].count(p)) {
            deps[i].push_back(j);
            break;
          }
  // reachability closure; k is small
  std::vector<std::vector<bool>> reach(k, std::vector<bool>(k, false));
  for (size_t i = 0; i < k; ++i)
    for (size_t j : deps[i]) reach[i][j] = true;
  for (size_t m = 0; m < k; ++m)
    for (size_t i = 0; i < k; ++i)
      if (reach[i][m])
        for (size_t j = 0; j < k; ++j)
          if (reach[m][j]) reach[i][j] = true;
  std::vector<bool> computable(k, true);
  for (size_t i = 0; i < k; ++i) {
    if (reach[i][i]) computable[i] = false;
    for (const auto& p : defs[i])
      if (definers[p] > 1 || fixed.count(p)) computable[i] = false;
  }
  Plan plan;
  std::vector<int> state(k, 0);
  std::function<void(size_t)> visit = [&](size_t i) {
    if (state[i]) return;
    state[i] = 1;
    for (size_t j : deps[i])
      if (computable[j]) visit(j);
    plan.computed.push_back(i);
  };
  for (size_t i = 0; i < k; ++i) {
    if (computable[i]) {
      visit(i);
      plan.derived.insert(defs[i].begin(), defs[i].end());
    } else {
      plan.checked.push_back(i);
    }
  }
  return plan;
}

/// Compiled theory over a fixed frame.
class TheoryMachine {
 public:
  TheoryMachine(const Theory& t, const Structure& frame) : t_(t), m_(frame) {
    for (const auto& [p, a] : t.vocabulary.predicates) m_.slots().intern(p, a);
    for (const auto& s : t.sentences) sentences_.push_back(m_.compile_formula(*s));
    for (const auto& d : t.definitions) defs_.push_back(m_.compile(d));
  }

  Machine& machine() { return m_; }
  const CDef& def(size_t i) const { return defs_[i]; }

  bool sentences_hold() {
    for (int s : sentences_)
      if (!m_.eval(s)) return false;
    return true;
  }

  bool definition_holds(size_t i) {
    const CDef& c = defs_[i];
    auto before = m_.current(c);
    m_.run_fixpoint(c, c.kind, nullptr);
    bool same = before == m_.current(c);
    for (size_t k = 0; k < c.defined.size(); ++k) m_.state()[static_cast<size_t>(c.defined[k])] = before[k];
    return same;
  }

  void compute(size_t i) { m_.run_fixpoint(defs_[i], defs_[i].kind, nullptr); }

  std::vector<int> all_slots() const {
    std::vector<int> out(m_slots_size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = static_cast<int>(i);
    return out;
  }

 private:
  size_t m_slots_size() const { return const_cast<Machine&>(m_).slots().size(); }

  const Theory& t_;
  Machine m_;
  std::vector<int> sentences_;
  std::vector<CDef> defs_;
};

inline void require_total(const Theory& t, const Interpretation& I) {
  for (const auto& [p, a] : t.vocabulary.predicates)
    if (!I.relations.count(p)) throw Error("interpretation is partial: no relation for " + p);
  for (const auto& c : t.vocabulary.constants) (void)I.constant_value(c);
}

}  // namespace detail

/// True iff I satisfies every sentence and every definition of T.
inline bool check_model(const Theory& t, const Interpretation& I) {
  detail::require_total(t, I);
  detail::TheoryMachine tm(t, I);
  tm.machine().load({&I});
  if (!tm.sentences_hold()) return false;
  for (size_t i = 0; i < t.definitions.size(); ++i)
    if (!tm.definition_holds(i)) return false;
  return true;
}

constexpr size_t kEnumerationGuard = 24;

/// Calls `visit` on every total interpretation extending `frame` (domain,
/// constants and any fixed relations) that satisfies T. Symbols that cannot
/// be computed from the rest are guessed; at most kEnumerationGuard atoms.
inline void for_each_model(const Theory& t, const Structure& frame,
                           const std::function<void(const Interpretation&)>& visit) {
  std::set<std::string> fixed;
  for (const auto& [p, r] : frame.relations) fixed.insert(p);
  detail::Plan plan = detail::plan_definitions(t, fixed);
  detail::TheoryMachine tm(t, frame);
  auto& m = tm.machine();
  auto& slots = m.slots();
  std::vector<int> open_slots;
  for (size_t k = 0; k < slots.size(); ++k)
    if (!fixed.count(slots.name(static_cast<int>(k)))) open_slots.push_back(static_cast<int>(k));
  m.load({&frame}, open_slots);
  std::vector<std::pair<int, size_t>> guessed;
  for (int k : open_slots) {
    if (plan.derived.count(slots.name(k))) continue;
    size_t cells = m.state()[static_cast<size_t>(k)].cell_count();
    for (size_t c = 0; c < cells; ++c) {
      guessed.emplace_back(k, c);
      if (guessed.size() > kEnumerationGuard)
        throw Error("model enumeration needs more than " + std::to_string(kEnumerationGuard) +
                    " guessed atoms");
    }
  }
  std::vector<int> every = tm.all_slots();
  Interpretation I = frame;
  for (uint64_t mask = 0; mask < (uint64_t{1} << guessed.size()); ++mask) {
    for (size_t g = 0; g < guessed.size(); ++g)
      m.state()[static_cast<size_t>(guessed[g].first)].set(guessed[g].second, (mask >> g) & 1);
    for (size_t i : plan.computed) tm.compute(i);
    if (!tm.sentences_hold()) continue;
    bool ok = true;
    for (size_t i : plan.checked)
      if (!tm.definition_holds(i)) {
        ok = false;
        break;
      }
    if (!ok) continue;
    for (int k : every) I.relations[slots.name(k)] = m.state()[static_cast<size_t>(k)];
    visit(I);
  }
}

/// All models as for_each_model, in canonical order.
inline std::vector<Interpretation> enumerate_models(const Theory& t, const Structure& frame) {
  std::vector<Interpretation> out;
  for_each_model(t, frame, [&](const Interpretation& I) { out.push_back(I); });
  std::sort(out.begin(), out.end(),
            [](const Interpretation& a, const Interpretation& b) { return a.relations < b.relations; });
  return out;
}

inline std::vector<Interpretation> enumerate_models(const Theory& t, const std::vector<std::string>& domain) {
  return enumerate_models(t, make_domain(domain));
}

/// Extends S, which interprets every symbol not defined by a definition of
/// T, with the defined relations. Definitions are evaluated in dependency
/// order; mutually dependent definitions cannot be completed this way.
inline Interpretation complete_defined(const Theory& t, const Structure& s) {
  std::set<std::string> given;
  for (const auto& [p, r] : s.relations) given.insert(p);
  std::set<std::string> defined;
  for (const auto& d : t.definitions) {
    auto dp = defined_predicates(d);
    defined.insert(dp.begin(), dp.end());
  }
  std::set<std::string> fixed;
  for (const auto& p : given)
    if (!defined.count(p)) fixed.insert(p);
  detail::Plan plan = detail::plan_definitions(t, fixed);
  if (!plan.checked.empty())
    throw Error("definitions depend on each other cyclically or share defined symbols");
  detail::TheoryMachine tm(t, s);
  auto& m = tm.machine();
  std::vector<int> computed;
  for (const auto& p : defined) computed.push_back(m.slots().slot(p));
  Structure base = restrict(s, fixed);
  m.load({&base}, computed);
  for (size_t i : plan.computed) tm.compute(i);
  Interpretation I = s;
  for (int k : tm.all_slots()) I.relations[m.slots().name(k)] = m.state()[static_cast<size_t>(k)];
  return I;
}

/// Models of a single definition with the given open part fixed by `frame`.
inline Interpretation model_of(const FixpointDefinition& d, const Interpretation& open) {
  Interpretation I = open;
  Interpretation k = fixpoint(d, restrict(open, open_symbols(d)), d.kind);
  for (auto& [p, r] : k.relations) I.relations[p] = r;
  return I;
}

}  // namespace fofd
