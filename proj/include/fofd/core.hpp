#pragma once

// Core FO(FD) syntax: vocabularies, terms, formulas, rules, nested fixpoint
// definitions, theories and finite structures, plus the well-formedness
// checker for fixpoint definitions.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iterator>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fofd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SourceLoc {
  int line = 0;
  int column = 0;
  bool known() const { return line > 0; }
  std::string str() const {
    return known() ? std::to_string(line) + ":" + std::to_string(column) : "?";
  }
};

// ---------------------------------------------------------------------------
// Terms and formulas

struct Term {
  enum class Kind { Variable, Constant };
  Kind kind = Kind::Variable;
  std::string name;

  static Term var(std::string n) { return {Kind::Variable, std::move(n)}; }
  static Term constant(std::string n) { return {Kind::Constant, std::move(n)}; }
  bool is_var() const { return kind == Kind::Variable; }
  friend bool operator==(const Term&, const Term&) = default;
};

enum class FormulaKind { Atom, Equal, Not, And, Or, Forall, Exists };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Immutable formula node. `symbol` is the predicate of an Atom or the bound
/// variable of a quantifier; `terms` holds atom arguments or the two sides of
/// an equality. And/Or are n-ary; the empty conjunction is `true` and the
/// empty disjunction is `false`.
struct Formula {
  FormulaKind kind;
  std::string symbol;
  std::vector<Term> terms;
  std::vector<FormulaPtr> children;

  bool is_true() const { return kind == FormulaKind::And && children.empty(); }
  bool is_false() const { return kind == FormulaKind::Or && children.empty(); }
  bool is_quantifier() const {
    return kind == FormulaKind::Forall || kind == FormulaKind::Exists;
  }
  bool is_atomic() const {
    return kind == FormulaKind::Atom || kind == FormulaKind::Equal;
  }
};

namespace fml {

inline FormulaPtr make(FormulaKind k, std::string sym, std::vector<Term> ts,
                       std::vector<FormulaPtr> kids) {
  return std::make_shared<const Formula>(
      Formula{k, std::move(sym), std::move(ts), std::move(kids)});
}

inline FormulaPtr atom(std::string pred, std::vector<Term> args = {}) {
  return make(FormulaKind::Atom, std::move(pred), std::move(args), {});
}
inline FormulaPtr equal(Term a, Term b) {
  return make(FormulaKind::Equal, {}, {std::move(a), std::move(b)}, {});
}
inline FormulaPtr neg(FormulaPtr f) { return make(FormulaKind::Not, {}, {}, {std::move(f)}); }
inline FormulaPtr top() { return make(FormulaKind::And, {}, {}, {}); }
inline FormulaPtr bottom() { return make(FormulaKind::Or, {}, {}, {}); }

// A single-operand conjunction/disjunction is its operand.
inline FormulaPtr conj(std::vector<FormulaPtr> kids) {
  if (kids.size() == 1) return std::move(kids.front());
  return make(FormulaKind::And, {}, {}, std::move(kids));
}
inline FormulaPtr disj(std::vector<FormulaPtr> kids) {
  if (kids.size() == 1) return std::move(kids.front());
  return make(FormulaKind::Or, {}, {}, std::move(kids));
}
inline FormulaPtr conj(FormulaPtr a, FormulaPtr b) { return conj(std::vector{std::move(a), std::move(b)}); }
inline FormulaPtr disj(FormulaPtr a, FormulaPtr b) { return disj(std::vector{std::move(a), std::move(b)}); }
inline FormulaPtr forall(std::string v, FormulaPtr body) {
  return make(FormulaKind::Forall, std::move(v), {}, {std::move(body)});
}
inline FormulaPtr exists(std::string v, FormulaPtr body) {
  return make(FormulaKind::Exists, std::move(v), {}, {std::move(body)});
}
// Material implication and equivalence are sugar.
inline FormulaPtr implies(FormulaPtr a, FormulaPtr b) { return disj(neg(std::move(a)), std::move(b)); }
inline FormulaPtr iff(const FormulaPtr& a, const FormulaPtr& b) {
  return conj(implies(a, b), implies(b, a));
}

}  // namespace fml

inline bool structurally_equal(const Formula& a, const Formula& b) {
  if (a.kind != b.kind || a.symbol != b.symbol || a.terms != b.terms ||
      a.children.size() != b.children.size())
    return false;
  for (size_t i = 0; i < a.children.size(); ++i)
    if (!structurally_equal(*a.children[i], *b.children[i])) return false;
  return true;
}
inline bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b) {
  return structurally_equal(*a, *b);
}

inline size_t node_count(const Formula& f) {
  size_t n = 1;
  for (const auto& c : f.children) n += node_count(*c);
  return n;
}

inline int quantifier_depth(const Formula& f) {
  int d = 0;
  for (const auto& c : f.children) d = std::max(d, quantifier_depth(*c));
  return d + (f.is_quantifier() ? 1 : 0);
}

namespace detail {
inline void free_vars(const Formula& f, std::vector<std::string>& bound,
                      std::set<std::string>& out) {
  auto visit_term = [&](const Term& t) {
    if (t.is_var() && std::find(bound.begin(), bound.end(), t.name) == bound.end())
      out.insert(t.name);
  };
  for (const auto& t : f.terms) visit_term(t);
  if (f.is_quantifier()) bound.push_back(f.symbol);
  for (const auto& c : f.children) free_vars(*c, bound, out);
  if (f.is_quantifier()) bound.pop_back();
}
}  // namespace detail

inline std::set<std::string> free_variables(const Formula& f) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  detail::free_vars(f, bound, out);
  return out;
}

namespace detail {
inline void all_vars(const Formula& f, std::set<std::string>& out) {
  for (const auto& t : f.terms)
    if (t.is_var()) out.insert(t.name);
  if (f.is_quantifier()) out.insert(f.symbol);
  for (const auto& c : f.children) all_vars(*c, out);
}
}  // namespace detail

inline std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  if (!taken.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string cand = base + "_" + std::to_string(i);
    if (!taken.count(cand)) return cand;
  }
}

/// Capture-avoiding substitution of free occurrences of `var` by `by`.
inline FormulaPtr substitute(const FormulaPtr& f, const std::string& var, const Term& by) {
  auto subst_term = [&](const Term& t) { return (t.is_var() && t.name == var) ? by : t; };
  switch (f->kind) {
    case FormulaKind::Atom:
    case FormulaKind::Equal: {
      std::vector<Term> ts;
      ts.reserve(f->terms.size());
      for (const auto& t : f->terms) ts.push_back(subst_term(t));
      return fml::make(f->kind, f->symbol, std::move(ts), {});
    }
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      if (f->symbol == var) return f;
      const FormulaPtr& body = f->children.front();
      if (by.is_var() && by.name == f->symbol && free_variables(*body).count(var)) {
        std::set<std::string> taken;
        detail::all_vars(*body, taken);
        taken.insert(var);
        taken.insert(by.name);
        std::string fresh = fresh_name(f->symbol, taken);
        FormulaPtr renamed = substitute(body, f->symbol, Term::var(fresh));
        return fml::make(f->kind, fresh, {}, {substitute(renamed, var, by)});
      }
      return fml::make(f->kind, f->symbol, {}, {substitute(body, var, by)});
    }
    default: {
      std::vector<FormulaPtr> kids;
      kids.reserve(f->children.size());
      for (const auto& c : f->children) kids.push_back(substitute(c, var, by));
      return fml::make(f->kind, f->symbol, {}, std::move(kids));
    }
  }
}

/// Negation normal form: negations only directly above atoms and equalities,
/// double negations removed.
inline FormulaPtr nnf(const FormulaPtr& f, bool negate = false) {
  switch (f->kind) {
    case FormulaKind::Atom:
    case FormulaKind::Equal:
      return negate ? fml::neg(f) : f;
    case FormulaKind::Not:
      return nnf(f->children.front(), !negate);
    case FormulaKind::And:
    case FormulaKind::Or: {
      std::vector<FormulaPtr> kids;
      kids.reserve(f->children.size());
      for (const auto& c : f->children) kids.push_back(nnf(c, negate));
      bool is_and = (f->kind == FormulaKind::And) != negate;
      return fml::make(is_and ? FormulaKind::And : FormulaKind::Or, {}, {}, std::move(kids));
    }
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      bool is_all = (f->kind == FormulaKind::Forall) != negate;
      return fml::make(is_all ? FormulaKind::Forall : FormulaKind::Exists, f->symbol, {},
                       {nnf(f->children.front(), negate)});
    }
  }
  return f;
}

/// Calls fn(predicate, positive, arity) for every atom occurrence.
template <typename Fn>
void for_each_atom(const Formula& f, Fn&& fn, bool positive = true) {
  switch (f.kind) {
    case FormulaKind::Atom:
      fn(f.symbol, positive, static_cast<int>(f.terms.size()));
      return;
    case FormulaKind::Equal:
      return;
    case FormulaKind::Not:
      for_each_atom(*f.children.front(), fn, !positive);
      return;
    default:
      for (const auto& c : f.children) for_each_atom(*c, fn, positive);
  }
}

template <typename Fn>
void for_each_constant(const Formula& f, Fn&& fn) {
  for (const auto& t : f.terms)
    if (!t.is_var()) fn(t.name);
  for (const auto& c : f.children) for_each_constant(*c, fn);
}

// ---------------------------------------------------------------------------
// Rules, definitions, theories

/// forall vars (head(vars) <- body). Head variables are distinct.
struct Rule {
  std::string head;
  std::vector<std::string> vars;
  FormulaPtr body;
  SourceLoc loc;

  friend bool operator==(const Rule& a, const Rule& b) {
    return a.head == b.head && a.vars == b.vars && structurally_equal(a.body, b.body);
  }
};

enum class FixpointKind { Least, Greatest };

inline const char* keyword(FixpointKind k) { return k == FixpointKind::Least ? "LFD" : "GFD"; }

struct FixpointDefinition {
  FixpointKind kind = FixpointKind::Least;
  std::vector<Rule> rules;
  std::vector<FixpointDefinition> subdefinitions;
  SourceLoc loc;

  bool is_least() const { return kind == FixpointKind::Least; }
  friend bool operator==(const FixpointDefinition& a, const FixpointDefinition& b) {
    return a.kind == b.kind && a.rules == b.rules && a.subdefinitions == b.subdefinitions;
  }
};

/// Predicate symbols with arities and constant symbols. Symbol identity is
/// the name; a name used with two arities is rejected.
struct Vocabulary {
  std::map<std::string, int> predicates;
  std::set<std::string> constants;

  void add_predicate(const std::string& name, int arity) {
    if (arity < 0) throw Error("negative arity for " + name);
    auto [it, fresh] = predicates.emplace(name, arity);
    if (!fresh && it->second != arity)
      throw Error("predicate " + name + " used with arities " + std::to_string(it->second) +
                  " and " + std::to_string(arity));
    if (constants.count(name)) throw Error("symbol " + name + " is both constant and predicate");
  }
  void add_constant(const std::string& name) {
    if (predicates.count(name)) throw Error("symbol " + name + " is both constant and predicate");
    constants.insert(name);
  }
  std::optional<int> arity(const std::string& p) const {
    auto it = predicates.find(p);
    if (it == predicates.end()) return std::nullopt;
    return it->second;
  }
  void merge(const Vocabulary& o) {
    for (const auto& [p, a] : o.predicates) add_predicate(p, a);
    for (const auto& c : o.constants) add_constant(c);
  }
  friend bool operator==(const Vocabulary&, const Vocabulary&) = default;
};

struct Theory {
  Vocabulary vocabulary;
  std::vector<FormulaPtr> sentences;
  std::vector<FixpointDefinition> definitions;

  friend bool operator==(const Theory& a, const Theory& b) {
    if (!(a.vocabulary == b.vocabulary) || a.definitions != b.definitions ||
        a.sentences.size() != b.sentences.size())
      return false;
    for (size_t i = 0; i < a.sentences.size(); ++i)
      if (!structurally_equal(a.sentences[i], b.sentences[i])) return false;
    return true;
  }
};

/// Generalized inductive definition: a rule set with no positivity
/// restriction on its defined predicates.
struct InductiveDefinition {
  std::vector<Rule> rules;
  SourceLoc loc;
  friend bool operator==(const InductiveDefinition& a, const InductiveDefinition& b) {
    return a.rules == b.rules;
  }
};

namespace detail {
inline void add_formula_symbols(const Formula& f, Vocabulary& v) {
  for_each_atom(f, [&](const std::string& p, bool, int arity) { v.add_predicate(p, arity); });
  for_each_constant(f, [&](const std::string& c) { v.add_constant(c); });
}
inline void add_definition_symbols(const FixpointDefinition& d, Vocabulary& v) {
  for (const auto& r : d.rules) {
    v.add_predicate(r.head, static_cast<int>(r.vars.size()));
    add_formula_symbols(*r.body, v);
  }
  for (const auto& s : d.subdefinitions) add_definition_symbols(s, v);
}
}  // namespace detail

/// Vocabulary of every symbol used by the sentences and definitions.
inline Vocabulary infer_vocabulary(std::span<const FormulaPtr> sentences,
                                   std::span<const FixpointDefinition> definitions) {
  Vocabulary v;
  for (const auto& s : sentences) detail::add_formula_symbols(*s, v);
  for (const auto& d : definitions) detail::add_definition_symbols(d, v);
  return v;
}

inline Theory make_theory(std::vector<FormulaPtr> sentences,
                          std::vector<FixpointDefinition> definitions) {
  Theory t;
  t.vocabulary = infer_vocabulary(sentences, definitions);
  t.sentences = std::move(sentences);
  t.definitions = std::move(definitions);
  return t;
}

// ---------------------------------------------------------------------------
// merge_rules

/// Merges rules for one predicate into a single rule with a disjunctive body.
/// Head variables of later rules are renamed to those of the first rule.
inline Rule merge_rules(std::span<const Rule> rules) {
  if (rules.empty()) throw Error("merge_rules: empty rule set");
  const Rule& first = rules.front();
  if (rules.size() == 1) return first;
  std::vector<FormulaPtr> bodies;
  for (const auto& r : rules) {
    if (r.head != first.head) throw Error("merge_rules: different heads " + first.head + " and " + r.head);
    if (r.vars.size() != first.vars.size())
      throw Error("merge_rules: head arity mismatch for " + r.head);
    // Rename through fresh intermediates so swapped variable names are safe.
    std::set<std::string> taken;
    detail::all_vars(*r.body, taken);
    taken.insert(first.vars.begin(), first.vars.end());
    taken.insert(r.vars.begin(), r.vars.end());
    FormulaPtr body = r.body;
    std::vector<std::string> tmp;
    for (const auto& v : r.vars) {
      std::string t = fresh_name("_m" + v, taken);
      taken.insert(t);
      tmp.push_back(t);
    }
    for (size_t i = 0; i < r.vars.size(); ++i) body = substitute(body, r.vars[i], Term::var(tmp[i]));
    for (size_t i = 0; i < r.vars.size(); ++i) body = substitute(body, tmp[i], Term::var(first.vars[i]));
    bodies.push_back(body);
  }
  return Rule{first.head, first.vars, fml::disj(std::move(bodies)), first.loc};
}

/// Groups rules by head predicate (first-occurrence order) and merges each group.
inline std::vector<Rule> merge_rule_set(std::span<const Rule> rules) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<Rule>> groups;
  for (const auto& r : rules) {
    if (!groups.count(r.head)) order.push_back(r.head);
    groups[r.head].push_back(r);
  }
  std::vector<Rule> out;
  for (const auto& h : order) out.push_back(merge_rules(groups[h]));
  return out;
}

// ---------------------------------------------------------------------------
// Defined and open symbols

inline std::set<std::string> locally_defined(const FixpointDefinition& d) {
  std::set<std::string> out;
  for (const auto& r : d.rules) out.insert(r.head);
  return out;
}

inline void collect_defined(const FixpointDefinition& d, std::set<std::string>& out) {
  for (const auto& r : d.rules) out.insert(r.head);
  for (const auto& s : d.subdefinitions) collect_defined(s, out);
}

inline std::set<std::string> defined_predicates(const FixpointDefinition& d) {
  std::set<std::string> out;
  collect_defined(d, out);
  return out;
}

/// Every predicate and constant symbol occurring anywhere in d.
inline std::set<std::string> occurring_symbols(const FixpointDefinition& d) {
  std::set<std::string> out;
  for (const auto& r : d.rules) {
    out.insert(r.head);
    for_each_atom(*r.body, [&](const std::string& p, bool, int) { out.insert(p); });
    for_each_constant(*r.body, [&](const std::string& c) { out.insert(c); });
  }
  for (const auto& s : d.subdefinitions) {
    auto sub = occurring_symbols(s);
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

inline std::set<std::string> open_symbols(const FixpointDefinition& d) {
  auto occ = occurring_symbols(d);
  auto def = defined_predicates(d);
  std::set<std::string> out;
  std::set_difference(occ.begin(), occ.end(), def.begin(), def.end(),
                      std::inserter(out, out.end()));
  return out;
}

// ---------------------------------------------------------------------------
// Well-formedness

/// One failed well-formedness condition. `condition` numbers follow the
/// definition of fixpoint definitions: 1 rules over the vocabulary, 3
/// positivity, 4 unique local definition, 5 subdefinition opens.
struct Violation {
  int condition = 0;
  std::string predicate;
  std::string location;  // "D0.2/rule 1 (line:col)"
  std::string message;
};

namespace detail {

inline std::string rule_location(const std::string& path, size_t idx, const Rule& r) {
  return path + "/rule " + std::to_string(idx) + " (" + r.loc.str() + ")";
}

inline void validate_node(const FixpointDefinition& d, const std::string& path,
                          std::vector<Violation>& out) {
  const auto def_d = defined_predicates(d);

  // Condition 1: distinct head variables, closed bodies.
  for (size_t i = 0; i < d.rules.size(); ++i) {
    const Rule& r = d.rules[i];
    std::set<std::string> hv(r.vars.begin(), r.vars.end());
    if (hv.size() != r.vars.size())
      out.push_back({1, r.head, rule_location(path, i, r), "repeated head variable"});
    for (const auto& v : free_variables(*r.body))
      if (!hv.count(v))
        out.push_back({1, r.head, rule_location(path, i, r), "free variable " + v + " not in head"});
  }

  // Condition 3: defined symbols occur only positively in every rule of d.
  std::function<void(const FixpointDefinition&, const std::string&)> positivity =
      [&](const FixpointDefinition& n, const std::string& p) {
        for (size_t i = 0; i < n.rules.size(); ++i) {
          std::set<std::string> reported;
          for_each_atom(*n.rules[i].body, [&](const std::string& q, bool pos, int) {
            if (!pos && def_d.count(q) && reported.insert(q).second)
              out.push_back({3, q, rule_location(p, i, n.rules[i]),
                             "defined symbol " + q + " occurs negatively"});
          });
        }
        for (size_t j = 0; j < n.subdefinitions.size(); ++j)
          positivity(n.subdefinitions[j], p + "." + std::to_string(j));
      };
  positivity(d, path);

  // Condition 4: def(R), def(D_1), ... partition def(D).
  std::map<std::string, std::vector<std::string>> owners;
  for (size_t i = 0; i < d.rules.size(); ++i)
    owners[d.rules[i].head].push_back(rule_location(path, i, d.rules[i]));
  for (size_t j = 0; j < d.subdefinitions.size(); ++j)
    for (const auto& p : defined_predicates(d.subdefinitions[j]))
      owners[p].push_back(path + "." + std::to_string(j));
  for (const auto& [p, where] : owners)
    if (where.size() > 1) {
      std::string locs;
      for (const auto& w : where) locs += (locs.empty() ? "" : ", ") + w;
      out.push_back({4, p, where.front(), p + " has " + std::to_string(where.size()) +
                                              " local definitions: " + locs});
    }

  // Condition 5: open(D') within open(D) + def(R).
  const auto local = locally_defined(d);
  for (size_t j = 0; j < d.subdefinitions.size(); ++j) {
    const auto& sub = d.subdefinitions[j];
    for (const auto& s : open_symbols(sub))
      if (def_d.count(s) && !local.count(s))
        out.push_back({5, s, path + "." + std::to_string(j),
                       "symbol " + s + " defined in a sibling subdefinition occurs here"});
  }

  for (size_t j = 0; j < d.subdefinitions.size(); ++j)
    validate_node(d.subdefinitions[j], path + "." + std::to_string(j), out);
}

}  // namespace detail

/// Well-formedness report; empty iff the definition is a fixpoint definition.
inline std::vector<Violation> validate(const FixpointDefinition& d, const std::string& name = "D") {
  std::vector<Violation> out;
  detail::validate_node(d, name, out);
  return out;
}

// ---------------------------------------------------------------------------
// Relations and structures

/// Relation over a domain of size n, stored as a bitmap indexed by the
/// mixed-radix rank of each tuple. Arity -1 marks an empty relation whose
/// arity is not yet known (for instance `P = {}` in a structure file).
class Relation {
 public:
  Relation() = default;
  Relation(int arity, int domain_size)
      : arity_(arity), n_(domain_size), bits_(arity < 0 ? 0 : cells(arity, domain_size), false) {}

  static Relation full(int arity, int domain_size) {
    Relation r(arity, domain_size);
    std::fill(r.bits_.begin(), r.bits_.end(), true);
    return r;
  }
  static Relation unknown_arity(int domain_size) { return Relation(-1, domain_size); }

  static size_t cells(int arity, int n) {
    size_t c = 1;
    for (int i = 0; i < arity; ++i) {
      c *= static_cast<size_t>(n);
      if (c > (size_t{1} << 34)) throw Error("relation too large");
    }
    return c;
  }

  int arity() const { return arity_; }
  int domain_size() const { return n_; }
  size_t cell_count() const { return bits_.size(); }

  size_t index(std::span<const int> tuple) const {
    size_t idx = 0;
    for (int e : tuple) idx = idx * static_cast<size_t>(n_) + static_cast<size_t>(e);
    return idx;
  }
  std::vector<int> tuple_at(size_t idx) const {
    std::vector<int> t(static_cast<size_t>(std::max(arity_, 0)));
    for (int i = arity_ - 1; i >= 0; --i) {
      t[static_cast<size_t>(i)] = static_cast<int>(idx % static_cast<size_t>(n_));
      idx /= static_cast<size_t>(n_);
    }
    return t;
  }

  bool test(size_t idx) const { return bits_[idx]; }
  void set(size_t idx, bool v = true) { bits_[idx] = v; }
  bool contains(std::span<const int> tuple) const { return bits_[index(tuple)]; }
  void insert(std::span<const int> tuple) { bits_[index(tuple)] = true; }

  size_t count() const { return static_cast<size_t>(std::count(bits_.begin(), bits_.end(), true)); }
  bool empty() const { return count() == 0; }

  std::vector<std::vector<int>> tuples() const {
    std::vector<std::vector<int>> out;
    for (size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i]) out.push_back(tuple_at(i));
    return out;
  }

  bool subset_of(const Relation& o) const {
    for (size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i] && !o.bits_[i]) return false;
    return true;
  }

  /// Fixes the arity of an unknown-arity (necessarily empty) relation.
  void conform(int arity) {
    if (arity_ == arity) return;
    if (arity_ >= 0) throw Error("arity mismatch: relation has arity " + std::to_string(arity_) +
                                 ", expected " + std::to_string(arity));
    *this = Relation(arity, n_);
  }

  const std::vector<bool>& bits() const { return bits_; }

  friend bool operator==(const Relation&, const Relation&) = default;
  friend auto operator<=>(const Relation& a, const Relation& b) {
    if (a.arity_ != b.arity_) return a.arity_ <=> b.arity_;
    if (a.n_ != b.n_) return a.n_ <=> b.n_;
    return a.bits_ <=> b.bits_;
  }

 private:
  int arity_ = 0;
  int n_ = 0;
  std::vector<bool> bits_ = std::vector<bool>(1, false);
};

/// Finite (possibly partial) structure: named domain elements, relations for
/// some predicates, and constant interpretations. A constant without an
/// explicit interpretation denotes the domain element of the same name.
struct Structure {
  std::vector<std::string> domain;
  std::map<std::string, Relation> relations;
  std::map<std::string, int> constants;

  int size() const { return static_cast<int>(domain.size()); }

  std::optional<int> element(const std::string& name) const {
    auto it = std::find(domain.begin(), domain.end(), name);
    if (it == domain.end()) return std::nullopt;
    return static_cast<int>(it - domain.begin());
  }

  int constant_value(const std::string& c) const {
    if (auto it = constants.find(c); it != constants.end()) return it->second;
    if (auto e = element(c)) return *e;
    throw Error("constant " + c + " has no interpretation in the domain");
  }

  bool interprets(const std::string& p) const { return relations.count(p) > 0; }

  const Relation& relation(const std::string& p) const {
    auto it = relations.find(p);
    if (it == relations.end()) throw Error("uninterpreted symbol " + p);
    return it->second;
  }

  /// Sizes unknown-arity relations from the vocabulary and checks the rest.
  void conform(const Vocabulary& v) {
    for (auto& [p, rel] : relations) {
      auto a = v.arity(p);
      if (!a) continue;
      rel.conform(*a);
    }
  }

  friend bool operator==(const Structure&, const Structure&) = default;
};

inline Structure make_domain(std::vector<std::string> names) {
  Structure s;
  s.domain = std::move(names);
  return s;
}

/// Restriction to the given predicate symbols.
inline Structure restrict(const Structure& s, const std::set<std::string>& preds) {
  Structure out;
  out.domain = s.domain;
  out.constants = s.constants;
  for (const auto& [p, r] : s.relations)
    if (preds.count(p)) out.relations.emplace(p, r);
  return out;
}

}  // namespace fofd
