#pragma once

// Inductive definitions with arbitrary negation, and their translation into
// an alternating fixpoint definition LFD{ R, GFD{ R- } } where every defined
// predicate P gets a partner P_neg meant to hold its complement.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "evaluator.hpp"

namespace fofd {

struct TransformResult {
  FixpointDefinition definition;
  std::map<std::string, std::string> negated;  // P -> P_neg
  Vocabulary added;
};

namespace detail {

/// In an NNF formula, replaces each negated defined atom ~P(t) by P_neg(t).
inline FormulaPtr bar(const FormulaPtr& f, const std::map<std::string, std::string>& neg) {
  switch (f->kind) {
    case FormulaKind::Atom:
    case FormulaKind::Equal:
      return f;
    case FormulaKind::Not: {
      const Formula& a = *f->children.front();
      if (a.kind == FormulaKind::Atom) {
        auto it = neg.find(a.symbol);
        if (it != neg.end()) return fml::atom(it->second, a.terms);
      }
      return f;
    }
    default: {
      std::vector<FormulaPtr> kids;
      for (const auto& c : f->children) kids.push_back(bar(c, neg));
      return fml::make(f->kind, f->symbol, f->terms, std::move(kids));
    }
  }
}

}  // namespace detail

/// Translates an inductive definition. `taken` lists symbols the fresh
/// P_neg names must avoid (the surrounding vocabulary).
inline TransformResult transform_gid(const InductiveDefinition& d, const Vocabulary& taken = {}) {
  std::vector<Rule> rules = merge_rule_set(d.rules);
  std::set<std::string> used;
  for (const auto& [p, a] : taken.predicates) used.insert(p);
  for (const auto& c : taken.constants) used.insert(c);
  for (const auto& r : rules) {
    used.insert(r.head);
    for_each_atom(*r.body, [&](const std::string& p, bool, int) { used.insert(p); });
    for_each_constant(*r.body, [&](const std::string& c) { used.insert(c); });
  }
  TransformResult out;
  for (const auto& r : rules) {
    std::string name = fresh_name(r.head + "_neg", used);
    used.insert(name);
    out.negated[r.head] = name;
    out.added.add_predicate(name, static_cast<int>(r.vars.size()));
  }
  FixpointDefinition greatest;
  greatest.kind = FixpointKind::Greatest;
  greatest.loc = d.loc;
  out.definition.kind = FixpointKind::Least;
  out.definition.loc = d.loc;
  for (const auto& r : rules) {
    out.definition.rules.push_back({r.head, r.vars, detail::bar(nnf(r.body), out.negated), r.loc});
    greatest.rules.push_back({out.negated.at(r.head), r.vars, detail::bar(nnf(r.body, true), out.negated), r.loc});
  }
  out.definition.subdefinitions.push_back(std::move(greatest));
  return out;
}

/// Replaces every inductive definition by its translation.
inline Theory transform_theory(const Theory& base, const std::vector<InductiveDefinition>& gids) {
  Theory t = base;
  for (const auto& d : gids) {
    Vocabulary taken = t.vocabulary;
    for (const auto& r : d.rules) {
      taken.predicates.emplace(r.head, static_cast<int>(r.vars.size()));
      detail::add_formula_symbols(*r.body, taken);
    }
    TransformResult tr = transform_gid(d, taken);
    t.vocabulary.merge(taken);
    t.vocabulary.merge(tr.added);
    t.definitions.push_back(std::move(tr.definition));
  }
  return t;
}

struct CorrespondenceReport {
  size_t models = 0;
  bool distinct = true;
  bool complementary = true;
  std::vector<Interpretation> delta_models;
  std::vector<std::string> problems;
  bool ok() const { return distinct && complementary; }
};

/// Enumerates the models of the translated definition over `frame` and
/// checks that restricted to the original symbols they are pairwise
/// distinct and that every P_neg is the complement of P.
inline CorrespondenceReport check_correspondence(const InductiveDefinition& d, const TransformResult& tr,
                                                 const Structure& frame) {
  Theory t = make_theory({}, {tr.definition});
  for (const auto& [p, a] : tr.added.predicates) t.vocabulary.predicates[p] = a;
  CorrespondenceReport rep;
  rep.delta_models = enumerate_models(t, frame);
  rep.models = rep.delta_models.size();
  std::set<std::string> neg_names;
  for (const auto& [p, n] : tr.negated) neg_names.insert(n);
  std::set<std::map<std::string, Relation>> seen;
  for (const auto& m : rep.delta_models) {
    std::map<std::string, Relation> base;
    for (const auto& [p, r] : m.relations)
      if (!neg_names.count(p)) base.emplace(p, r);
    if (!seen.insert(base).second) {
      rep.distinct = false;
      rep.problems.push_back("two models agree on the original vocabulary");
    }
    for (const auto& [p, n] : tr.negated) {
      const Relation& pos = m.relation(p);
      const Relation& neg = m.relation(n);
      for (size_t i = 0; i < pos.cell_count(); ++i)
        if (pos.test(i) == neg.test(i)) {
          rep.complementary = false;
          rep.problems.push_back(n + " is not the complement of " + p);
          break;
        }
    }
  }
  (void)d;
  return rep;
}

}  // namespace fofd
