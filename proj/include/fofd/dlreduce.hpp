#pragma once

// Reduction of ground fixpoint theories to difference logic: completion of
// every rule plus level-mapping constraints that force a finite
// justification for true atoms of least definitions and false atoms of
// greatest ones.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "grounder.hpp"

namespace fofd {

enum class DLKind { Atom, Diff, Not, And, Or, Implies, Iff };
enum class DiffOp { Lt, Le, Eq };

struct DLFormula;
using DLPtr = std::shared_ptr<const DLFormula>;

/// Boolean structure over atoms and difference constraints x - y op c.
struct DLFormula {
  DLKind kind;
  int atom = -1;
  int x = -1, y = -1;
  DiffOp op = DiffOp::Le;
  long c = 0;
  std::vector<DLPtr> kids;
};

namespace dl {
inline DLPtr make(DLKind k, std::vector<DLPtr> kids) {
  DLFormula f;
  f.kind = k;
  f.kids = std::move(kids);
  return std::make_shared<const DLFormula>(std::move(f));
}
inline DLPtr atom(int a) {
  DLFormula f;
  f.kind = DLKind::Atom;
  f.atom = a;
  return std::make_shared<const DLFormula>(std::move(f));
}
inline DLPtr diff(int x, int y, DiffOp op, long c) {
  DLFormula f;
  f.kind = DLKind::Diff;
  f.x = x;
  f.y = y;
  f.op = op;
  f.c = c;
  return std::make_shared<const DLFormula>(std::move(f));
}
inline DLPtr neg(DLPtr a) { return make(DLKind::Not, {std::move(a)}); }
inline DLPtr conj(std::vector<DLPtr> k) { return make(DLKind::And, std::move(k)); }
inline DLPtr disj(std::vector<DLPtr> k) { return make(DLKind::Or, std::move(k)); }
inline DLPtr implies(DLPtr a, DLPtr b) { return make(DLKind::Implies, {std::move(a), std::move(b)}); }
inline DLPtr iff(DLPtr a, DLPtr b) { return make(DLKind::Iff, {std::move(a), std::move(b)}); }
inline DLPtr literal(int lit) { return lit >= 0 ? atom(lit) : neg(atom(-lit - 1)); }

inline DLPtr from_prop(const PropFormula& f) {
  switch (f.kind) {
    case PropKind::Atom:
      return atom(f.atom);
    case PropKind::Not:
      return neg(from_prop(*f.kids[0]));
    case PropKind::And:
    case PropKind::Or: {
      std::vector<DLPtr> kids;
      for (const auto& k : f.kids) kids.push_back(from_prop(*k));
      return make(f.kind == PropKind::And ? DLKind::And : DLKind::Or, std::move(kids));
    }
  }
  return conj({});
}

inline bool eval(const DLFormula& f, const std::vector<bool>& b, const std::vector<long>& v) {
  switch (f.kind) {
    case DLKind::Atom:
      return b[static_cast<size_t>(f.atom)];
    case DLKind::Diff: {
      long d = v[static_cast<size_t>(f.x)] - v[static_cast<size_t>(f.y)];
      return f.op == DiffOp::Lt ? d < f.c : f.op == DiffOp::Le ? d <= f.c : d == f.c;
    }
    case DLKind::Not:
      return !eval(*f.kids[0], b, v);
    case DLKind::And:
      for (const auto& k : f.kids)
        if (!eval(*k, b, v)) return false;
      return true;
    case DLKind::Or:
      for (const auto& k : f.kids)
        if (eval(*k, b, v)) return true;
      return false;
    case DLKind::Implies:
      return !eval(*f.kids[0], b, v) || eval(*f.kids[1], b, v);
    case DLKind::Iff:
      return eval(*f.kids[0], b, v) == eval(*f.kids[1], b, v);
  }
  return false;
}

inline bool has_diff(const DLFormula& f) {
  if (f.kind == DLKind::Diff) return true;
  for (const auto& k : f.kids)
    if (has_diff(*k)) return true;
  return false;
}
}  // namespace dl

/// Integer variable lev_N(atom) of definition node N; node -1 is the ground Z.
/// A component other than N is a secondary counter for a nested node of the
/// same kind as N.
struct LevelVar {
  int node = -1;
  int atom = -1;
  int component = -1;
};

struct DLTheory {
  std::vector<std::string> bool_names;  // index = prop atom id
  std::vector<LevelVar> levels;         // index = integer variable, 0 is Z
  std::vector<DLPtr> formulas;
  size_t definition_nodes = 0;

  size_t level_count() const { return levels.size() - 1; }
};

enum class Strength { Weak, Strong };

struct ReduceOptions {
  Strength strength = Strength::Strong;
  bool scc = true;
  /// Non-strict comparisons for rules of nested definitions. Turning this off
  /// gives the all-strict variant, which loses models.
  bool relax_nested = true;
};

// ---------------------------------------------------------------------------
// Completion

/// h <=> body for every rule, all nesting levels, rules in preorder.
inline std::vector<DLPtr> completion(const PropDefinition& d) {
  std::vector<DLPtr> out;
  for (const auto& r : d.rules) out.push_back(dl::iff(dl::atom(r.head), dl::from_prop(*r.body)));
  for (const auto& s : d.subdefinitions) {
    auto k = completion(s);
    out.insert(out.end(), k.begin(), k.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dependency graph

struct DependencyGraph {
  std::vector<int> nodes;                   // def(N), sorted
  std::map<int, std::set<int>> edges;       // head -> defined body atoms
  std::vector<std::vector<int>> components;  // Tarjan order
  std::map<int, int> component_of;

  bool self_loop(int a) const {
    auto it = edges.find(a);
    return it != edges.end() && it->second.count(a);
  }
  bool same_component(int a, int b) const { return component_of.at(a) == component_of.at(b); }
  bool needs_level(int a) const {
    return components[static_cast<size_t>(component_of.at(a))].size() >= 2 || self_loop(a);
  }
};

namespace detail {

inline void collect_rules(const PropDefinition& d, std::vector<const PropRule*>& out) {
  for (const auto& r : d.rules) out.push_back(&r);
  for (const auto& s : d.subdefinitions) collect_rules(s, out);
}

inline void tarjan(DependencyGraph& g) {
  std::map<int, int> index, low;
  std::set<int> on_stack;
  std::vector<int> stack;
  int counter = 0;
  std::function<void(int)> strong = [&](int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    for (int w : g.edges[v]) {
      if (!index.count(w)) {
        strong(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack.count(w)) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<int> comp;
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        comp.push_back(w);
        g.component_of[w] = static_cast<int>(g.components.size());
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      g.components.push_back(std::move(comp));
    }
  };
  for (int v : g.nodes)
    if (!index.count(v)) strong(v);
}

}  // namespace detail

/// Dependency graph of the level family of node d: vertices are the atoms
/// defined anywhere in d, edges go from a head to its defined body atoms.
inline DependencyGraph dependency_sccs(const PropDefinition& d) {
  DependencyGraph g;
  auto def = defined_atoms(d);
  g.nodes.assign(def.begin(), def.end());
  std::vector<const PropRule*> rules;
  detail::collect_rules(d, rules);
  for (int v : g.nodes) g.edges[v];
  for (const PropRule* r : rules)
    prop::for_each_atom(*r->body, [&](int a, bool) {
      if (def.count(a)) g.edges[r->head].insert(a);
    });
  detail::tarjan(g);
  return g;
}

// ---------------------------------------------------------------------------
// Level constraints

namespace detail {

class Reducer {
 public:
  Reducer(const PropTheory& pt, ReduceOptions opts) : pt_(pt), opts_(opts) {
    out_.levels.push_back({});
    for (const auto& a : pt.atoms.all()) out_.bool_names.push_back(a.name);
  }

  DLTheory run() {
    for (const auto& s : pt_.sentences) out_.formulas.push_back(dl::from_prop(*s));
    int node = 0;
    for (const auto& d : pt_.definitions) number(d, node);
    for (const auto& d : pt_.definitions) complete(d);
    for (const auto& d : pt_.definitions) family(d);
    for (int v = 1; v < static_cast<int>(out_.levels.size()); ++v)
      out_.formulas.push_back(dl::diff(0, v, DiffOp::Le, 0));
    out_.definition_nodes = static_cast<size_t>(node);
    return std::move(out_);
  }

 private:
  void number(const PropDefinition& d, int& next) {
    ids_[&d] = next++;
    for (const auto& s : d.subdefinitions) number(s, next);
  }

  void complete(const PropDefinition& d) {
    std::vector<const PropRule*> rules;
    for (const auto& r : d.rules) rules.push_back(&r);
    std::sort(rules.begin(), rules.end(), [](auto* a, auto* b) { return a->head < b->head; });
    for (const PropRule* r : rules) out_.formulas.push_back(dl::iff(dl::atom(r->head), dl::from_prop(*r->body)));
    for (const auto& s : d.subdefinitions) complete(s);
  }

  int level(int node, int atom, int component = -1) {
    if (component == node) component = -1;
    auto key = std::make_tuple(node, atom, component);
    auto it = vars_.find(key);
    if (it != vars_.end()) return it->second;
    int v = static_cast<int>(out_.levels.size());
    out_.levels.push_back({node, atom, component});
    vars_.emplace(key, v);
    return v;
  }

  // Defining node of every atom below d, with its depth and the nodes on the
  // path from d whose kind matches d.
  struct Place {
    int node = 0;
    int depth = 0;
    std::vector<int> same_kind;
  };

  void places(const PropDefinition& d, bool least, int depth, std::vector<int> path, std::map<int, Place>& out) {
    int node = ids_.at(&d);
    if (d.is_least() == least) path.push_back(node);
    for (const auto& r : d.rules) out[r.head] = {node, depth, path};
    for (const auto& s : d.subdefinitions) places(s, least, depth + 1, path, out);
  }

  void family(const PropDefinition& d) {
    int node = ids_.at(&d);
    DependencyGraph g = dependency_sccs(d);
    std::vector<const PropRule*> rules;
    collect_rules(d, rules);
    std::sort(rules.begin(), rules.end(), [](auto* a, auto* b) { return a->head < b->head; });
    std::map<int, Place> at;
    places(d, d.is_least(), 0, {}, at);
    for (int a : g.nodes)
      if (!opts_.scc || g.needs_level(a)) level(node, a);
    for (const PropRule* r : rules) {
      int h = r->head;
      if (opts_.scc && !g.needs_level(h)) continue;
      // h -> d is compared at the shallower of the two defining nodes: on
      // every counter of a same-kind node down to it, strictly when that
      // node is itself of the same kind.
      auto compare = [&](int a) {
        const Place& q = at.at(h).depth <= at.at(a).depth ? at.at(h) : at.at(a);
        Comparison c;
        if (!opts_.relax_nested) {
          c.components = {node};
          c.strict = true;
          return c;
        }
        c.components = q.same_kind;
        c.strict = !c.components.empty() && c.components.back() == q.node;
        return c;
      };
      std::vector<int> defs, opens;
      for (const auto& k : r->body->kids) {
        int a = k->kind == PropKind::Atom ? k->atom : k->kids[0]->atom;
        bool defined = k->kind == PropKind::Atom && g.component_of.count(a) &&
                       (!opts_.scc || g.same_component(a, h));
        if (defined) defs.push_back(a);
        else opens.push_back(k->literal());
      }
      std::vector<Comparison> cmp;
      for (int a : defs) cmp.push_back(compare(a));
      emit(d.is_least(), r->body->kind == PropKind::And, node, h, defs, cmp, opens);
    }
    for (const auto& s : d.subdefinitions) family(s);
  }

  // LFD: the trigger is h and supports are true literals; GFD is the dual.
  struct Comparison {
    std::vector<int> components;
    bool strict = true;
  };

  void emit(bool least, bool conjunctive, int node, int h, const std::vector<int>& defs,
            const std::vector<Comparison>& cmp, const std::vector<int>& opens) {
    auto support = [&](int lit) { return least ? dl::literal(lit) : dl::neg(dl::literal(lit)); };
    DLPtr trigger = least ? dl::atom(h) : dl::neg(dl::atom(h));
    int lh = level(node, h);
    // lexicographic over the counters, first component outermost
    auto lex = [&](size_t i) {
      const Comparison& c = cmp[i];
      int d = defs[i];
      size_t k = c.components.size();
      DLPtr r = dl::diff(level(node, d, c.components[k - 1]), level(node, h, c.components[k - 1]),
                         c.strict ? DiffOp::Lt : DiffOp::Le, 0);
      for (size_t j = k - 1; j-- > 0;) {
        int x = level(node, d, c.components[j]), y = level(node, h, c.components[j]);
        r = dl::disj({dl::diff(x, y, DiffOp::Lt, 0), dl::conj({dl::diff(x, y, DiffOp::Le, 0), r})});
      }
      return r;
    };
    DLPtr zero = dl::diff(lh, 0, DiffOp::Le, 0);
    bool all_needed = conjunctive == least;

    out_.formulas.push_back(dl::implies(least ? dl::neg(dl::atom(h)) : dl::atom(h), zero));
    if (all_needed) {
      std::vector<DLPtr> parts;
      for (size_t i = 0; i < defs.size(); ++i) parts.push_back(dl::disj({lex(i), dl::neg(support(defs[i]))}));
      if (!parts.empty()) out_.formulas.push_back(dl::implies(trigger, dl::conj(std::move(parts))));
    } else {
      std::vector<DLPtr> parts;
      for (size_t i = 0; i < defs.size(); ++i) parts.push_back(dl::conj({lex(i), support(defs[i])}));
      for (int o : opens) parts.push_back(support(o));
      out_.formulas.push_back(dl::implies(trigger, dl::disj(std::move(parts))));
    }
    if (opts_.strength != Strength::Strong) return;
    // tight steps only make sense on a single counter
    for (const auto& c : cmp)
      if (c.components.size() != 1) return;
    auto step = [&](size_t i) {
      int ld = level(node, defs[i], cmp[i].components[0]), lx = level(node, h, cmp[i].components[0]);
      long delta = cmp[i].strict ? 1 : 0;
      return dl::conj({dl::diff(lx, ld, DiffOp::Le, delta), dl::diff(ld, lx, DiffOp::Le, -delta)});
    };
    std::vector<DLPtr> parts;
    for (size_t i = 0; i < defs.size(); ++i) parts.push_back(dl::conj({step(i), support(defs[i])}));
    if (all_needed) {
      if (defs.empty()) parts.push_back(zero);
    } else if (!opens.empty()) {
      std::vector<DLPtr> os;
      for (int o : opens) os.push_back(support(o));
      parts.push_back(dl::conj({dl::disj(std::move(os)), zero}));
    }
    out_.formulas.push_back(dl::implies(trigger, dl::disj(std::move(parts))));
  }

  const PropTheory& pt_;
  ReduceOptions opts_;
  DLTheory out_;
  std::map<const PropDefinition*, int> ids_;
  std::map<std::tuple<int, int, int>, int> vars_;
};

}  // namespace detail

/// Difference-logic theory equisatisfiable with pt: ground sentences, the
/// completion of every rule, and level constraints for every definition
/// node. Bodies are normalised first when pt is not in normal form.
inline DLTheory reduce(const PropTheory& pt, ReduceOptions opts = {}) {
  if (!is_defnf(pt)) {
    PropTheory nf = to_defnf(pt);
    return detail::Reducer(nf, opts).run();
  }
  return detail::Reducer(pt, opts).run();
}

// ---------------------------------------------------------------------------
// Dump

inline std::string level_name(const DLTheory& t, int v) {
  if (v == 0) return "Z";
  const LevelVar& l = t.levels[static_cast<size_t>(v)];
  std::string comp = l.component < 0 ? "" : "." + std::to_string(l.component);
  return "lev" + std::to_string(l.node) + comp + "[" + t.bool_names[static_cast<size_t>(l.atom)] + "]";
}

inline void dump_formula(std::ostream& os, const DLTheory& t, const DLFormula& f) {
  switch (f.kind) {
    case DLKind::Atom:
      os << t.bool_names[static_cast<size_t>(f.atom)];
      return;
    case DLKind::Diff:
      os << '(' << (f.op == DiffOp::Lt ? "<" : f.op == DiffOp::Le ? "<=" : "=") << " (- "
         << level_name(t, f.x) << ' ' << level_name(t, f.y) << ") " << f.c << ')';
      return;
    default:
      break;
  }
  static const char* names[] = {"", "", "not", "and", "or", "=>", "<=>"};
  os << '(' << names[static_cast<int>(f.kind)];
  for (const auto& k : f.kids) {
    os << ' ';
    dump_formula(os, t, *k);
  }
  os << ')';
}

/// One formula per line in prefix notation.
inline std::string dump(const DLTheory& t) {
  std::ostringstream os;
  for (const auto& f : t.formulas) {
    dump_formula(os, t, *f);
    os << '\n';
  }
  return os.str();
}

}  // namespace fofd
