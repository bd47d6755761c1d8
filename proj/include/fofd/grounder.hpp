#pragma once

// Propositional layer: ground formulas and definitions over interned atoms,
// grounding of FO(FD) theories over a finite domain, and the definitional
// normal form (every rule body a flat conjunction or disjunction of literals).

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "core.hpp"
#include "evaluator.hpp"

namespace fofd {

enum class PropKind { Atom, Not, And, Or };

struct PropFormula;
using PropPtr = std::shared_ptr<const PropFormula>;

struct PropFormula {
  PropKind kind;
  int atom = -1;
  std::vector<PropPtr> kids;

  bool is_true() const { return kind == PropKind::And && kids.empty(); }
  bool is_false() const { return kind == PropKind::Or && kids.empty(); }
  bool is_literal() const {
    return kind == PropKind::Atom || (kind == PropKind::Not && kids[0]->kind == PropKind::Atom);
  }
  /// Atom id of a literal, negative literals give -(id + 1).
  int literal() const { return kind == PropKind::Atom ? atom : -kids[0]->atom - 1; }
};

namespace prop {
inline PropPtr make(PropKind k, int a, std::vector<PropPtr> kids) {
  return std::make_shared<const PropFormula>(PropFormula{k, a, std::move(kids)});
}
inline PropPtr atom(int id) { return make(PropKind::Atom, id, {}); }
inline PropPtr neg(PropPtr f) { return make(PropKind::Not, -1, {std::move(f)}); }
inline PropPtr conj(std::vector<PropPtr> k) { return make(PropKind::And, -1, std::move(k)); }
inline PropPtr disj(std::vector<PropPtr> k) { return make(PropKind::Or, -1, std::move(k)); }
inline PropPtr top() { return conj({}); }
inline PropPtr bottom() { return disj({}); }
inline PropPtr literal(int lit) { return lit >= 0 ? atom(lit) : neg(atom(-lit - 1)); }

inline bool equal(const PropFormula& a, const PropFormula& b) {
  if (a.kind != b.kind || a.atom != b.atom || a.kids.size() != b.kids.size()) return false;
  for (size_t i = 0; i < a.kids.size(); ++i)
    if (!equal(*a.kids[i], *b.kids[i])) return false;
  return true;
}

inline size_t node_count(const PropFormula& f) {
  size_t n = 1;
  for (const auto& k : f.kids) n += node_count(*k);
  return n;
}

template <typename Fn>
void for_each_atom(const PropFormula& f, Fn&& fn, bool positive = true) {
  if (f.kind == PropKind::Atom) {
    fn(f.atom, positive);
    return;
  }
  for (const auto& k : f.kids) for_each_atom(*k, fn, f.kind == PropKind::Not ? !positive : positive);
}

inline bool eval(const PropFormula& f, const std::vector<bool>& v) {
  switch (f.kind) {
    case PropKind::Atom:
      return v[static_cast<size_t>(f.atom)];
    case PropKind::Not:
      return !eval(*f.kids[0], v);
    case PropKind::And:
      for (const auto& k : f.kids)
        if (!eval(*k, v)) return false;
      return true;
    case PropKind::Or:
      for (const auto& k : f.kids)
        if (eval(*k, v)) return true;
      return false;
  }
  return false;
}

/// Negation normal form; double negations disappear.
inline PropPtr nnf(const PropPtr& f, bool negate = false) {
  switch (f->kind) {
    case PropKind::Atom:
      return negate ? neg(f) : f;
    case PropKind::Not:
      return nnf(f->kids[0], !negate);
    case PropKind::And:
    case PropKind::Or: {
      std::vector<PropPtr> kids;
      for (const auto& k : f->kids) kids.push_back(nnf(k, negate));
      bool conj_out = (f->kind == PropKind::And) != negate;
      return conj_out ? conj(std::move(kids)) : disj(std::move(kids));
    }
  }
  return f;
}
}  // namespace prop

// ---------------------------------------------------------------------------
// Atoms

struct AtomInfo {
  std::string name;
  std::string pred;
  std::vector<int> args;
  bool aux = false;
};

class AtomTable {
 public:
  int intern(const std::string& pred, const std::vector<int>& args, const std::vector<std::string>& domain) {
    std::string name = pred;
    if (!args.empty()) {
      name += '(';
      for (size_t i = 0; i < args.size(); ++i) name += (i ? "," : "") + domain[static_cast<size_t>(args[i])];
      name += ')';
    }
    auto [it, fresh] = index_.emplace(name, static_cast<int>(atoms_.size()));
    if (fresh) atoms_.push_back({name, pred, args, false});
    return it->second;
  }
  /// Fresh auxiliary atom `_t<k>`, never clashing with existing names.
  int fresh_aux() {
    std::string name;
    do name = "_t" + std::to_string(next_aux_++);
    while (index_.count(name));
    index_.emplace(name, static_cast<int>(atoms_.size()));
    atoms_.push_back({name, name, {}, true});
    return static_cast<int>(atoms_.size()) - 1;
  }
  int find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
  }
  size_t size() const { return atoms_.size(); }
  const AtomInfo& operator[](int id) const { return atoms_[static_cast<size_t>(id)]; }
  const std::vector<AtomInfo>& all() const { return atoms_; }

 private:
  std::vector<AtomInfo> atoms_;
  std::map<std::string, int> index_;
  int next_aux_ = 0;
};

// ---------------------------------------------------------------------------
// Ground theories

struct PropRule {
  int head;
  PropPtr body;
};

struct PropDefinition {
  FixpointKind kind = FixpointKind::Least;
  std::vector<PropRule> rules;
  std::vector<PropDefinition> subdefinitions;
  bool is_least() const { return kind == FixpointKind::Least; }
};

struct PropTheory {
  std::vector<std::string> domain;
  std::map<std::string, int> constants;
  Vocabulary vocabulary;
  std::map<std::string, Relation> folded;  // frame relations compiled away
  AtomTable atoms;
  std::vector<PropPtr> sentences;
  std::vector<PropDefinition> definitions;
};

inline void collect_defined(const PropDefinition& d, std::vector<int>& out) {
  for (const auto& r : d.rules) out.push_back(r.head);
  for (const auto& s : d.subdefinitions) collect_defined(s, out);
}

inline std::set<int> defined_atoms(const PropDefinition& d) {
  std::vector<int> v;
  collect_defined(d, v);
  return {v.begin(), v.end()};
}

inline std::set<int> occurring_atoms(const PropDefinition& d) {
  std::set<int> out;
  for (const auto& r : d.rules) {
    out.insert(r.head);
    prop::for_each_atom(*r.body, [&](int a, bool) { out.insert(a); });
  }
  for (const auto& s : d.subdefinitions) {
    auto o = occurring_atoms(s);
    out.insert(o.begin(), o.end());
  }
  return out;
}

inline std::set<int> open_atoms(const PropDefinition& d) {
  auto occ = occurring_atoms(d);
  for (int a : defined_atoms(d)) occ.erase(a);
  return occ;
}

/// Ground-level well-formedness: partition of defined atoms and positive
/// occurrences of defined atoms. Returns a message per problem.
inline std::vector<std::string> validate(const PropDefinition& d, const AtomTable& atoms) {
  std::vector<std::string> out;
  std::vector<int> all;
  collect_defined(d, all);
  std::map<int, int> seen;
  for (int a : all)
    if (++seen[a] == 2) out.push_back("atom " + atoms[a].name + " defined more than once");
  auto def = defined_atoms(d);
  std::function<void(const PropDefinition&)> walk = [&](const PropDefinition& n) {
    for (const auto& r : n.rules)
      prop::for_each_atom(*r.body, [&](int a, bool pos) {
        if (!pos && def.count(a)) out.push_back("defined atom " + atoms[a].name + " occurs negatively");
      });
    for (const auto& s : n.subdefinitions) walk(s);
  };
  walk(d);
  return out;
}

// ---------------------------------------------------------------------------
// Grounding

struct GroundOptions {
  /// Replace frame relations of open predicates by truth constants. Off by
  /// default: frame facts then become unit sentences.
  bool fold_frame = false;
};

namespace detail {

class Grounder {
 public:
  Grounder(const Theory& t, const Structure& frame, GroundOptions opts) : t_(t), frame_(frame) {
    pt_.domain = frame.domain;
    pt_.vocabulary = t.vocabulary;
    for (const auto& c : t.vocabulary.constants) pt_.constants[c] = frame.constant_value(c);
    for (const auto& [c, e] : frame.constants) pt_.constants[c] = e;
    std::set<std::string> defined;
    for (const auto& d : t.definitions) {
      auto dp = defined_predicates(d);
      defined.insert(dp.begin(), dp.end());
    }
    if (opts.fold_frame)
      for (const auto& [p, r] : frame.relations)
        if (!defined.count(p) && t.vocabulary.predicates.count(p)) {
          Relation rel = r;
          rel.conform(t.vocabulary.predicates.at(p));
          pt_.folded.emplace(p, std::move(rel));
        }
    int n = frame.size();
    for (const auto& [p, a] : t.vocabulary.predicates) {
      if (pt_.folded.count(p)) continue;
      size_t cells = Relation::cells(a, n);
      Relation shape(a, n);
      for (size_t i = 0; i < cells; ++i) pt_.atoms.intern(p, shape.tuple_at(i), pt_.domain);
    }
  }

  PropTheory run() {
    for (const auto& [p, r] : frame_.relations) {
      if (pt_.folded.count(p) || !t_.vocabulary.predicates.count(p)) continue;
      Relation rel = r;
      rel.conform(t_.vocabulary.predicates.at(p));
      for (size_t i = 0; i < rel.cell_count(); ++i) {
        PropPtr a = prop::atom(pt_.atoms.intern(p, rel.tuple_at(i), pt_.domain));
        pt_.sentences.push_back(rel.test(i) ? a : prop::neg(a));
      }
    }
    for (const auto& s : t_.sentences) {
      std::map<std::string, int> env;
      pt_.sentences.push_back(ground(*s, env));
    }
    for (const auto& d : t_.definitions) pt_.definitions.push_back(ground(d));
    return std::move(pt_);
  }

 private:
  PropDefinition ground(const FixpointDefinition& d) {
    PropDefinition out;
    out.kind = d.kind;
    int n = static_cast<int>(pt_.domain.size());
    for (const auto& r : d.rules) {
      int arity = static_cast<int>(r.vars.size());
      Relation shape(arity, n);
      for (size_t i = 0; i < shape.cell_count(); ++i) {
        auto tuple = shape.tuple_at(i);
        std::map<std::string, int> env;
        for (size_t k = 0; k < tuple.size(); ++k) env[r.vars[k]] = tuple[k];
        out.rules.push_back({pt_.atoms.intern(r.head, tuple, pt_.domain), ground(*r.body, env)});
      }
    }
    for (const auto& s : d.subdefinitions) out.subdefinitions.push_back(ground(s));
    return out;
  }

  int value(const Term& t, const std::map<std::string, int>& env) const {
    if (t.is_var()) {
      auto it = env.find(t.name);
      if (it == env.end()) throw Error("free variable " + t.name + " during grounding");
      return it->second;
    }
    auto it = pt_.constants.find(t.name);
    if (it != pt_.constants.end()) return it->second;
    return frame_.constant_value(t.name);
  }

  PropPtr ground(const Formula& f, std::map<std::string, int>& env) {
    switch (f.kind) {
      case FormulaKind::Atom: {
        std::vector<int> args;
        for (const auto& t : f.terms) args.push_back(value(t, env));
        auto it = pt_.folded.find(f.symbol);
        if (it != pt_.folded.end()) return it->second.contains(args) ? prop::top() : prop::bottom();
        return prop::atom(pt_.atoms.intern(f.symbol, args, pt_.domain));
      }
      case FormulaKind::Equal:
        return value(f.terms[0], env) == value(f.terms[1], env) ? prop::top() : prop::bottom();
      case FormulaKind::Not: {
        PropPtr k = ground(*f.children[0], env);
        if (k->is_true()) return prop::bottom();
        if (k->is_false()) return prop::top();
        return prop::neg(k);
      }
      case FormulaKind::And:
      case FormulaKind::Or: {
        std::vector<PropPtr> kids;
        for (const auto& c : f.children) kids.push_back(ground(*c, env));
        return combine(f.kind == FormulaKind::And, std::move(kids));
      }
      case FormulaKind::Forall:
      case FormulaKind::Exists: {
        std::vector<PropPtr> kids;
        std::optional<int> saved;
        if (auto it = env.find(f.symbol); it != env.end()) saved = it->second;
        for (int d = 0; d < static_cast<int>(pt_.domain.size()); ++d) {
          env[f.symbol] = d;
          kids.push_back(ground(*f.children[0], env));
        }
        if (saved) env[f.symbol] = *saved;
        else env.erase(f.symbol);
        return combine(f.kind == FormulaKind::Forall, std::move(kids));
      }
    }
    return prop::top();
  }

  static PropPtr combine(bool conjunction, std::vector<PropPtr> kids) {
    std::vector<PropPtr> keep;
    for (auto& k : kids) {
      if (conjunction ? k->is_false() : k->is_true()) return conjunction ? prop::bottom() : prop::top();
      if (conjunction ? k->is_true() : k->is_false()) continue;
      keep.push_back(std::move(k));
    }
    return conjunction ? prop::conj(std::move(keep)) : prop::disj(std::move(keep));
  }

  const Theory& t_;
  const Structure& frame_;
  PropTheory pt_;
};

}  // namespace detail

/// Grounds T over the frame's domain. Constants denote frame elements; every
/// ground atom of a non-folded predicate is interned in sorted order.
inline PropTheory ground(const Theory& t, const Structure& frame, GroundOptions opts = {}) {
  return detail::Grounder(t, frame, opts).run();
}

inline PropTheory ground(const Theory& t, const std::vector<std::string>& domain, GroundOptions opts = {}) {
  return ground(t, make_domain(domain), opts);
}

// ---------------------------------------------------------------------------
// Definitional normal form

inline bool is_defnf_body(const PropFormula& f) {
  if (f.kind != PropKind::And && f.kind != PropKind::Or) return false;
  for (const auto& k : f.kids)
    if (!k->is_literal()) return false;
  return true;
}

inline bool is_defnf(const PropDefinition& d) {
  for (const auto& r : d.rules)
    if (!is_defnf_body(*r.body)) return false;
  for (const auto& s : d.subdefinitions)
    if (!is_defnf(s)) return false;
  return true;
}

namespace detail {

inline PropPtr flatten(const PropPtr& f) {
  if (f->kind != PropKind::And && f->kind != PropKind::Or) return f;
  std::vector<PropPtr> kids;
  for (const auto& k : f->kids) {
    PropPtr c = flatten(k);
    if (c->kind == f->kind) kids.insert(kids.end(), c->kids.begin(), c->kids.end());
    else kids.push_back(c);
  }
  if (kids.size() == 1) return kids.front();
  return prop::make(f->kind, -1, std::move(kids));
}

inline void defnf_rule(int head, PropPtr body, AtomTable& atoms, std::vector<PropRule>& out) {
  if (body->is_literal()) {
    out.push_back({head, prop::conj({body})});
    return;
  }
  std::vector<PropPtr> lits;
  std::vector<std::pair<int, PropPtr>> pending;
  for (const auto& k : body->kids) {
    if (k->is_literal()) {
      lits.push_back(k);
    } else {
      int aux = atoms.fresh_aux();
      lits.push_back(prop::atom(aux));
      pending.emplace_back(aux, k);
    }
  }
  out.push_back({head, prop::make(body->kind, -1, std::move(lits))});
  for (auto& [aux, k] : pending) defnf_rule(aux, k, atoms, out);
}

inline PropDefinition to_defnf(const PropDefinition& d, AtomTable& atoms) {
  PropDefinition out;
  out.kind = d.kind;
  for (const auto& r : d.rules) defnf_rule(r.head, flatten(prop::nnf(r.body)), atoms, out.rules);
  for (const auto& s : d.subdefinitions) out.subdefinitions.push_back(to_defnf(s, atoms));
  return out;
}

}  // namespace detail

/// Rewrites every rule body into a flat conjunction or disjunction of
/// literals; complex subformulas get fresh auxiliary atoms defined next to
/// the rule they came from. Sentences are left alone.
inline PropTheory to_defnf(const PropTheory& pt) {
  PropTheory out = pt;
  out.definitions.clear();
  for (const auto& d : pt.definitions) out.definitions.push_back(detail::to_defnf(d, out.atoms));
  return out;
}

inline PropDefinition to_defnf(const PropDefinition& d, AtomTable& atoms) { return detail::to_defnf(d, atoms); }

inline bool is_defnf(const PropTheory& pt) {
  for (const auto& d : pt.definitions)
    if (!is_defnf(d)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Conversion to and from structures

/// The same theory over 0-ary predicates named after the atoms, so the
/// first-order evaluator can serve as the propositional oracle too.
inline Theory to_fo(const PropTheory& pt) {
  auto conv = [&](auto&& self, const PropFormula& f) -> FormulaPtr {
    switch (f.kind) {
      case PropKind::Atom:
        return fml::atom(pt.atoms[f.atom].name);
      case PropKind::Not:
        return fml::neg(self(self, *f.kids[0]));
      case PropKind::And:
      case PropKind::Or: {
        std::vector<FormulaPtr> kids;
        for (const auto& k : f.kids) kids.push_back(self(self, *k));
        return fml::make(f.kind == PropKind::And ? FormulaKind::And : FormulaKind::Or, {}, {},
                         std::move(kids));
      }
    }
    return fml::top();
  };
  std::function<FixpointDefinition(const PropDefinition&)> def = [&](const PropDefinition& d) {
    FixpointDefinition out;
    out.kind = d.kind;
    for (const auto& r : d.rules) out.rules.push_back({pt.atoms[r.head].name, {}, conv(conv, *r.body), {}});
    for (const auto& s : d.subdefinitions) out.subdefinitions.push_back(def(s));
    return out;
  };
  Theory t;
  for (const auto& a : pt.atoms.all()) t.vocabulary.predicates[a.name] = 0;
  for (const auto& s : pt.sentences) t.sentences.push_back(conv(conv, *s));
  for (const auto& d : pt.definitions) t.definitions.push_back(def(d));
  return t;
}

/// Truth assignment (indexed by atom id) from a model of to_fo(pt).
inline std::vector<bool> assignment_of(const PropTheory& pt, const Interpretation& m) {
  std::vector<bool> v(pt.atoms.size(), false);
  for (size_t i = 0; i < v.size(); ++i) {
    auto it = m.relations.find(pt.atoms[static_cast<int>(i)].name);
    v[i] = it != m.relations.end() && it->second.test(0);
  }
  return v;
}

/// Lifts a truth assignment to a structure over the original vocabulary:
/// folded relations plus ground atoms; auxiliary atoms are dropped.
inline Structure lift(const PropTheory& pt, const std::vector<bool>& v) {
  Structure s;
  s.domain = pt.domain;
  s.constants = pt.constants;
  int n = static_cast<int>(pt.domain.size());
  for (const auto& [p, a] : pt.vocabulary.predicates) s.relations[p] = Relation(a, n);
  for (const auto& [p, r] : pt.folded) s.relations[p] = r;
  for (size_t i = 0; i < pt.atoms.size(); ++i) {
    const AtomInfo& a = pt.atoms[static_cast<int>(i)];
    if (a.aux || !v[i]) continue;
    auto it = s.relations.find(a.pred);
    if (it == s.relations.end()) continue;
    it->second.insert(a.args);
  }
  return s;
}

/// Models of the ground theory, by enumeration over to_fo(pt).
inline void for_each_assignment(const PropTheory& pt, const std::function<void(const std::vector<bool>&)>& visit) {
  for_each_model(to_fo(pt), make_domain({"u"}), [&](const Interpretation& m) { visit(assignment_of(pt, m)); });
}

inline std::vector<std::vector<bool>> enumerate_assignments(const PropTheory& pt) {
  std::vector<std::vector<bool>> out;
  for (const auto& m : enumerate_models(to_fo(pt), std::vector<std::string>{"u"}))
    out.push_back(assignment_of(pt, m));
  return out;
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline void print_prop(std::ostream& os, const PropFormula& f, const AtomTable& atoms, int parent) {
  // parent: 0 top, 1 under and, 2 under or, 3 under not
  switch (f.kind) {
    case PropKind::Atom:
      os << atoms[f.atom].name;
      return;
    case PropKind::Not: {
      os << '~';
      print_prop(os, *f.kids[0], atoms, 3);
      return;
    }
    case PropKind::And:
    case PropKind::Or: {
      if (f.kids.empty()) {
        os << (f.kind == PropKind::And ? "true" : "false");
        return;
      }
      if (f.kids.size() == 1) {
        print_prop(os, *f.kids[0], atoms, parent);
        return;
      }
      bool paren = parent != 0;
      if (paren) os << '(';
      for (size_t i = 0; i < f.kids.size(); ++i) {
        if (i) os << (f.kind == PropKind::And ? " & " : " | ");
        print_prop(os, *f.kids[i], atoms, f.kind == PropKind::And ? 1 : 2);
      }
      if (paren) os << ')';
      return;
    }
  }
}

inline void print_prop_definition(std::ostream& os, const PropDefinition& d, const AtomTable& atoms, int indent) {
  std::string pad(static_cast<size_t>(indent) * 2, ' ');
  os << pad << keyword(d.kind) << " {\n";
  for (const auto& r : d.rules) {
    os << pad << "  " << atoms[r.head].name << " <- ";
    print_prop(os, *r.body, atoms, 0);
    os << ".\n";
  }
  for (const auto& s : d.subdefinitions) print_prop_definition(os, s, atoms, indent + 1);
  os << pad << "}\n";
}

}  // namespace detail

inline std::string print_prop(const PropFormula& f, const AtomTable& atoms) {
  std::ostringstream os;
  detail::print_prop(os, f, atoms, 0);
  return os.str();
}

/// Ground theory in the theory surface syntax, atoms written P(e1,...,ek).
inline std::string print_ground(const PropTheory& pt) {
  std::ostringstream os;
  os << "// domain = {";
  for (size_t i = 0; i < pt.domain.size(); ++i) os << (i ? "," : "") << pt.domain[i];
  os << "}\n";
  for (const auto& s : pt.sentences) {
    detail::print_prop(os, *s, pt.atoms, 0);
    os << ".\n";
  }
  for (const auto& d : pt.definitions) detail::print_prop_definition(os, d, pt.atoms, 0);
  return os.str();
}

/// `id<TAB>name` per atom.
inline std::string atom_dictionary(const PropTheory& pt) {
  std::ostringstream os;
  for (size_t i = 0; i < pt.atoms.size(); ++i) os << i << '\t' << pt.atoms[static_cast<int>(i)].name << '\n';
  return os.str();
}

}  // namespace fofd
