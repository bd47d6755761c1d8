#pragma once

// Text syntax for theories (.fofd, .foid) and structures (.struct).
//
//   theory    := item*
//   item      := 'vocab' '{' decl* '}' | block | formula '.'
//   decl      := 'pred' ID '/' ID '.' | 'const' ID (',' ID)* '.'
//   block     := ('LFD' | 'GFD') '{' (rule | block)* '}' | 'GID' '{' rule* '}'
//   rule      := [('!' | 'forall') ID+ ':'] ID ['(' ID (',' ID)* ')'] '<-' formula '.'
//   formula   := ('!' | '?' | 'forall' | 'exists') ID+ ':' formula | equiv
//   equiv     := implies ('<=>' implies)*
//   implies   := or ['=>' implies]
//   or        := and ('|' and)*
//   and       := unary ('&' unary)*
//   unary     := '~' unary | quantified | '(' formula ')' | 'true' | 'false'
//              | ID ['(' term (',' term)* ')'] | term ('=' | '~=' | '!=') term
//
// Identifiers bound by a quantifier or rule head are variables; every other
// identifier in term position is a constant. Comments run from `//` to the
// end of the line.

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "core.hpp"

namespace fofd {

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, SourceLoc loc)
      : Error(loc.str() + ": " + msg), loc_(loc), message_(msg) {}
  SourceLoc loc() const { return loc_; }
  const std::string& message() const { return message_; }

 private:
  SourceLoc loc_;
  std::string message_;
};

/// A parsed theory file. GID blocks are only accepted in FO(ID) input.
struct SourceTheory {
  std::string text;
  Theory theory;
  std::vector<InductiveDefinition> inductive;
};

namespace detail {

enum class Tok {
  Ident, LBrace, RBrace, LParen, RParen, Comma, Dot, Colon, Slash,
  And, Or, Not, Eq, Neq, Arrow, Implies, Equiv, Bang, Question, End
};

struct Token {
  Tok kind;
  std::string text;
  SourceLoc loc;
};

inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    SourceLoc loc{line, col};
    if (ident_char(c)) {
      size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), loc});
      advance(j - i);
      continue;
    }
    auto starts = [&](std::string_view s) { return src.substr(i, s.size()) == s; };
    struct P { std::string_view s; Tok t; };
    static constexpr P puncts[] = {
        {"<=>", Tok::Equiv}, {"<-", Tok::Arrow}, {"=>", Tok::Implies}, {"~=", Tok::Neq},
        {"!=", Tok::Neq},    {"{", Tok::LBrace}, {"}", Tok::RBrace},   {"(", Tok::LParen},
        {")", Tok::RParen},  {",", Tok::Comma},  {".", Tok::Dot},      {":", Tok::Colon},
        {"/", Tok::Slash},   {"&", Tok::And},    {"|", Tok::Or},       {"~", Tok::Not},
        {"=", Tok::Eq},      {"!", Tok::Bang},   {"?", Tok::Question}};
    bool matched = false;
    for (const auto& p : puncts) {
      if (starts(p.s)) {
        out.push_back({p.t, std::string(p.s), loc});
        advance(p.s.size());
        matched = true;
        break;
      }
    }
    if (!matched) {
      std::string shown = std::isprint(static_cast<unsigned char>(c))
                              ? std::string(1, c)
                              : "\\x" + std::to_string(static_cast<unsigned char>(c));
      throw ParseError("unexpected character '" + shown + "'", loc);
    }
  }
  out.push_back({Tok::End, "<end of input>", SourceLoc{line, col}});
  return out;
}

inline bool is_keyword(const std::string& s) {
  static const std::set<std::string> kw = {"LFD",    "GFD",   "GID",  "vocab", "pred", "const",
                                           "forall", "exists", "true", "false", "domain"};
  return kw.count(s) > 0;
}

class Cursor {
 public:
  explicit Cursor(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at(Tok t) const { return peek().kind == t; }
  bool at_word(std::string_view w) const { return at(Tok::Ident) && peek().text == w; }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool accept(Tok t) {
    if (!at(t)) return false;
    next();
    return true;
  }
  Token expect(Tok t, std::string_view what) {
    if (!at(t)) fail("expected " + std::string(what) + ", found '" + peek().text + "'");
    return next();
  }
  std::string identifier(std::string_view what) {
    if (!at(Tok::Ident) || is_keyword(peek().text))
      fail("expected " + std::string(what) + ", found '" + peek().text + "'");
    return next().text;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().loc); }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
};

class TheoryParser {
 public:
  TheoryParser(std::string_view text, bool allow_inductive)
      : cur_(tokenize(text)), allow_inductive_(allow_inductive) {}

  SourceTheory run(std::string text) {
    SourceTheory st;
    st.text = std::move(text);
    std::vector<FormulaPtr> sentences;
    std::vector<FixpointDefinition> defs;
    while (!cur_.at(Tok::End)) {
      if (cur_.at_word("vocab")) {
        parse_vocab();
      } else if (cur_.at_word("LFD") || cur_.at_word("GFD")) {
        SourceLoc loc = cur_.peek().loc;
        iffs_.clear();
        FixpointDefinition d = parse_definition(0);
        check_definition(d, loc, "D" + std::to_string(defs.size()));
        defs.push_back(std::move(d));
      } else if (cur_.at_word("GID")) {
        if (!allow_inductive_) cur_.fail("GID blocks are only allowed in FO(ID) input");
        st.inductive.push_back(parse_inductive());
      } else {
        FormulaPtr f = parse_formula();
        cur_.expect(Tok::Dot, "'.' after sentence");
        sentences.push_back(std::move(f));
      }
    }
    st.theory.vocabulary = vocab_;
    st.theory.sentences = std::move(sentences);
    st.theory.definitions = std::move(defs);
    return st;
  }

 private:
  static constexpr int kMaxDepth = 400;

  struct DepthGuard {
    TheoryParser& p;
    explicit DepthGuard(TheoryParser& pp) : p(pp) {
      if (++p.depth_ > kMaxDepth) p.cur_.fail("nesting too deep");
    }
    ~DepthGuard() { --p.depth_; }
  };

  struct IffUse {
    std::set<std::string> preds;
    SourceLoc loc;
  };

  void declare_predicate(const std::string& name, int arity, SourceLoc loc) {
    try {
      vocab_.add_predicate(name, arity);
    } catch (const Error& e) {
      throw ParseError(e.what(), loc);
    }
  }
  void declare_constant(const std::string& name, SourceLoc loc) {
    try {
      vocab_.add_constant(name);
    } catch (const Error& e) {
      throw ParseError(e.what(), loc);
    }
  }

  void parse_vocab() {
    cur_.next();
    cur_.expect(Tok::LBrace, "'{' after vocab");
    while (!cur_.accept(Tok::RBrace)) {
      if (cur_.at_word("pred")) {
        cur_.next();
        SourceLoc loc = cur_.peek().loc;
        std::string name = cur_.identifier("predicate name");
        cur_.expect(Tok::Slash, "'/' and arity");
        Token a = cur_.expect(Tok::Ident, "arity");
        int arity = 0;
        for (char c : a.text) {
          if (!std::isdigit(static_cast<unsigned char>(c)) || arity > 64)
            throw ParseError("bad arity '" + a.text + "'", a.loc);
          arity = arity * 10 + (c - '0');
        }
        declare_predicate(name, arity, loc);
        cur_.expect(Tok::Dot, "'.'");
      } else if (cur_.at_word("const")) {
        cur_.next();
        do {
          SourceLoc loc = cur_.peek().loc;
          declare_constant(cur_.identifier("constant name"), loc);
        } while (cur_.accept(Tok::Comma));
        cur_.expect(Tok::Dot, "'.'");
      } else {
        cur_.fail("expected 'pred' or 'const' declaration");
      }
    }
  }

  void check_definition(const FixpointDefinition& d, SourceLoc loc, const std::string& name) {
    auto defined = defined_predicates(d);
    for (const auto& use : iffs_)
      for (const auto& p : use.preds)
        if (defined.count(p))
          throw ParseError("equivalence mentions defined symbol " + p +
                               " inside a rule body (it would occur with both polarities)",
                           use.loc);
    auto report = validate(d, name);
    if (!report.empty()) {
      std::string msg = "ill-formed fixpoint definition:";
      for (const auto& v : report)
        msg += "\n  condition " + std::to_string(v.condition) + " at " + v.location + ": " + v.message;
      throw ParseError(msg, loc);
    }
  }

  FixpointDefinition parse_definition(int depth) {
    DepthGuard g(*this);
    FixpointDefinition d;
    d.loc = cur_.peek().loc;
    d.kind = cur_.next().text == "LFD" ? FixpointKind::Least : FixpointKind::Greatest;
    cur_.expect(Tok::LBrace, "'{'");
    std::vector<Rule> rules;
    while (!cur_.accept(Tok::RBrace)) {
      if (cur_.at(Tok::End)) cur_.fail("unterminated definition block");
      if (cur_.at_word("LFD") || cur_.at_word("GFD")) {
        d.subdefinitions.push_back(parse_definition(depth + 1));
      } else if (cur_.at_word("GID")) {
        cur_.fail("GID blocks cannot be nested");
      } else {
        rules.push_back(parse_rule());
      }
    }
    try {
      d.rules = merge_rule_set(rules);
    } catch (const Error& e) {
      throw ParseError(e.what(), d.loc);
    }
    return d;
  }

  InductiveDefinition parse_inductive() {
    InductiveDefinition d;
    d.loc = cur_.next().loc;
    cur_.expect(Tok::LBrace, "'{'");
    std::vector<Rule> rules;
    while (!cur_.accept(Tok::RBrace)) {
      if (cur_.at(Tok::End)) cur_.fail("unterminated GID block");
      if (cur_.at_word("LFD") || cur_.at_word("GFD") || cur_.at_word("GID"))
        cur_.fail("GID blocks contain rules only");
      rules.push_back(parse_rule());
    }
    try {
      d.rules = merge_rule_set(rules);
    } catch (const Error& e) {
      throw ParseError(e.what(), d.loc);
    }
    return d;
  }

  bool at_quantifier() const {
    return cur_.at(Tok::Bang) || cur_.at(Tok::Question) || cur_.at_word("forall") ||
           cur_.at_word("exists");
  }

  Rule parse_rule() {
    Rule r;
    r.loc = cur_.peek().loc;
    std::vector<std::string> prefix;
    bool has_prefix = false;
    if (cur_.at(Tok::Bang) || cur_.at_word("forall")) {
      has_prefix = true;
      cur_.next();
      while (!cur_.at(Tok::Colon)) prefix.push_back(cur_.identifier("variable"));
      cur_.next();
      if (prefix.empty()) cur_.fail("expected variables after quantifier");
    }
    SourceLoc head_loc = cur_.peek().loc;
    r.head = cur_.identifier("rule head");
    if (cur_.accept(Tok::LParen)) {
      do {
        Token v = cur_.peek();
        std::string name = cur_.identifier("head variable");
        if (vocab_.constants.count(name))
          throw ParseError("rule head argument " + name + " is a constant, not a variable", v.loc);
        if (has_prefix && std::find(prefix.begin(), prefix.end(), name) == prefix.end())
          throw ParseError("head argument " + name + " is not quantified by the rule", v.loc);
        if (std::find(r.vars.begin(), r.vars.end(), name) != r.vars.end())
          throw ParseError("repeated head variable " + name, v.loc);
        r.vars.push_back(name);
      } while (cur_.accept(Tok::Comma));
      cur_.expect(Tok::RParen, "')'");
    }
    for (const auto& v : prefix)
      if (std::find(r.vars.begin(), r.vars.end(), v) == r.vars.end())
        throw ParseError("quantified variable " + v + " does not occur in the head", head_loc);
    declare_predicate(r.head, static_cast<int>(r.vars.size()), head_loc);
    cur_.expect(Tok::Arrow, "'<-'");
    scope_ = r.vars;
    r.body = parse_formula();
    scope_.clear();
    cur_.expect(Tok::Dot, "'.' after rule");
    return r;
  }

  FormulaPtr parse_formula() {
    DepthGuard g(*this);
    if (at_quantifier()) return parse_quantified();
    return parse_equiv();
  }

  FormulaPtr parse_quantified() {
    bool universal = cur_.at(Tok::Bang) || cur_.at_word("forall");
    cur_.next();
    std::vector<std::string> vars;
    while (!cur_.at(Tok::Colon)) vars.push_back(cur_.identifier("variable"));
    cur_.next();
    if (vars.empty()) cur_.fail("expected variables after quantifier");
    for (const auto& v : vars) scope_.push_back(v);
    FormulaPtr body = parse_formula();
    for (size_t i = 0; i < vars.size(); ++i) scope_.pop_back();
    for (auto it = vars.rbegin(); it != vars.rend(); ++it)
      body = universal ? fml::forall(*it, body) : fml::exists(*it, body);
    return body;
  }

  FormulaPtr parse_equiv() {
    SourceLoc loc = cur_.peek().loc;
    FormulaPtr lhs = parse_implies();
    while (cur_.at(Tok::Equiv)) {
      cur_.next();
      FormulaPtr rhs = parse_implies();
      IffUse use{{}, loc};
      for (const auto* f : {&lhs, &rhs})
        for_each_atom(**f, [&](const std::string& p, bool, int) { use.preds.insert(p); });
      iffs_.push_back(std::move(use));
      lhs = fml::iff(lhs, rhs);
    }
    return lhs;
  }

  FormulaPtr parse_implies() {
    FormulaPtr lhs = parse_or();
    if (cur_.accept(Tok::Implies)) {
      FormulaPtr rhs = at_quantifier() ? parse_quantified() : parse_implies();
      return fml::implies(lhs, rhs);
    }
    return lhs;
  }

  FormulaPtr parse_or() {
    std::vector<FormulaPtr> kids{parse_and()};
    while (cur_.accept(Tok::Or)) kids.push_back(parse_and());
    return kids.size() == 1 ? kids.front() : fml::disj(std::move(kids));
  }

  FormulaPtr parse_and() {
    std::vector<FormulaPtr> kids{parse_unary()};
    while (cur_.accept(Tok::And)) kids.push_back(parse_unary());
    return kids.size() == 1 ? kids.front() : fml::conj(std::move(kids));
  }

  FormulaPtr parse_unary() {
    DepthGuard g(*this);
    if (cur_.accept(Tok::Not)) return fml::neg(parse_unary());
    if (at_quantifier()) return parse_quantified();
    if (cur_.accept(Tok::LParen)) {
      FormulaPtr f = parse_formula();
      cur_.expect(Tok::RParen, "')'");
      return f;
    }
    if (cur_.at_word("true")) {
      cur_.next();
      return fml::top();
    }
    if (cur_.at_word("false")) {
      cur_.next();
      return fml::bottom();
    }
    SourceLoc loc = cur_.peek().loc;
    std::string name = cur_.identifier("atom or term");
    if (cur_.at(Tok::Eq) || cur_.at(Tok::Neq)) {
      bool negated = cur_.next().kind == Tok::Neq;
      Term lhs = make_term(name, loc);
      SourceLoc rloc = cur_.peek().loc;
      Term rhs = make_term(cur_.identifier("term"), rloc);
      FormulaPtr eq = fml::equal(lhs, rhs);
      return negated ? fml::neg(eq) : eq;
    }
    std::vector<Term> args;
    if (cur_.accept(Tok::LParen)) {
      do {
        SourceLoc aloc = cur_.peek().loc;
        args.push_back(make_term(cur_.identifier("term"), aloc));
      } while (cur_.accept(Tok::Comma));
      cur_.expect(Tok::RParen, "')'");
    }
    if (std::find(scope_.begin(), scope_.end(), name) != scope_.end())
      throw ParseError("variable " + name + " used as a predicate", loc);
    declare_predicate(name, static_cast<int>(args.size()), loc);
    return fml::atom(name, std::move(args));
  }

  Term make_term(const std::string& name, SourceLoc loc) {
    if (std::find(scope_.begin(), scope_.end(), name) != scope_.end()) return Term::var(name);
    declare_constant(name, loc);
    return Term::constant(name);
  }

  Cursor cur_;
  bool allow_inductive_;
  Vocabulary vocab_;
  std::vector<std::string> scope_;
  std::vector<IffUse> iffs_;
  int depth_ = 0;
};

}  // namespace detail

inline SourceTheory parse_source(const std::string& text, bool allow_inductive) {
  detail::TheoryParser p(text, allow_inductive);
  return p.run(text);
}

/// Parses an FO(FD) theory; every definition is validated.
inline Theory parse_theory(const std::string& text) { return parse_source(text, false).theory; }

/// Parses an FO(ID) theory: FO(FD) content plus GID blocks.
inline SourceTheory parse_inductive_theory(const std::string& text) {
  return parse_source(text, true);
}

// ---------------------------------------------------------------------------
// Structures

inline Structure parse_structure(const std::string& text) {
  detail::Cursor cur(detail::tokenize(text));
  using detail::Tok;
  Structure s;
  bool have_domain = false;
  auto element = [&](const detail::Token& t) {
    auto e = s.element(t.text);
    if (!e) throw ParseError("element " + t.text + " is outside the domain", t.loc);
    return *e;
  };
  while (!cur.at(Tok::End)) {
    if (cur.at_word("domain")) {
      cur.next();
      if (have_domain) cur.fail("domain declared twice");
      cur.expect(Tok::Eq, "'='");
      cur.expect(Tok::LBrace, "'{'");
      if (!cur.at(Tok::RBrace)) {
        do {
          detail::Token t = cur.expect(Tok::Ident, "domain element");
          if (s.element(t.text)) throw ParseError("duplicate domain element " + t.text, t.loc);
          s.domain.push_back(t.text);
        } while (cur.accept(Tok::Comma));
      }
      cur.expect(Tok::RBrace, "'}'");
      cur.expect(Tok::Dot, "'.'");
      have_domain = true;
      continue;
    }
    if (!have_domain) cur.fail("the domain must be declared before any table");
    if (cur.at_word("const")) {
      cur.next();
      std::string name = cur.identifier("constant name");
      cur.expect(Tok::Eq, "'='");
      s.constants[name] = element(cur.expect(Tok::Ident, "domain element"));
      cur.expect(Tok::Dot, "'.'");
      continue;
    }
    SourceLoc loc = cur.peek().loc;
    std::string pred = cur.identifier("predicate name");
    if (s.relations.count(pred)) throw ParseError("table for " + pred + " given twice", loc);
    int declared = -1;
    if (cur.accept(Tok::Slash)) {
      detail::Token a = cur.expect(Tok::Ident, "arity");
      declared = 0;
      for (char c : a.text) {
        if (!std::isdigit(static_cast<unsigned char>(c)) || declared > 64)
          throw ParseError("bad arity '" + a.text + "'", a.loc);
        declared = declared * 10 + (c - '0');
      }
    }
    cur.expect(Tok::Eq, "'='");
    if (cur.at_word("true") || cur.at_word("false")) {
      if (declared > 0) cur.fail("truth value given for a relation of arity " + std::to_string(declared));
      bool v = cur.next().text == "true";
      Relation r(0, s.size());
      r.set(0, v);
      s.relations[pred] = r;
      cur.expect(Tok::Dot, "'.'");
      continue;
    }
    cur.expect(Tok::LBrace, "'{'");
    std::vector<std::pair<std::vector<int>, SourceLoc>> tuples;
    if (!cur.at(Tok::RBrace)) {
      do {
        SourceLoc tloc = cur.peek().loc;
        std::vector<int> t;
        if (cur.accept(Tok::LParen)) {
          if (!cur.at(Tok::RParen)) {
            do t.push_back(element(cur.expect(Tok::Ident, "domain element")));
            while (cur.accept(Tok::Comma));
          }
          cur.expect(Tok::RParen, "')'");
        } else {
          t.push_back(element(cur.expect(Tok::Ident, "domain element or tuple")));
        }
        tuples.emplace_back(std::move(t), tloc);
      } while (cur.accept(Tok::Comma));
    }
    cur.expect(Tok::RBrace, "'}'");
    cur.expect(Tok::Dot, "'.'");
    int arity = declared;
    for (const auto& [t, tloc] : tuples) {
      if (arity < 0) arity = static_cast<int>(t.size());
      if (static_cast<int>(t.size()) != arity)
        throw ParseError("arity mismatch in table for " + pred + ": expected " +
                             std::to_string(arity) + ", got " + std::to_string(t.size()),
                         tloc);
    }
    Relation r = arity < 0 ? Relation::unknown_arity(s.size()) : Relation(arity, s.size());
    for (const auto& [t, tloc] : tuples) r.insert(t);
    s.relations[pred] = std::move(r);
  }
  if (!have_domain) throw ParseError("missing domain declaration", SourceLoc{1, 1});
  return s;
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline std::string term_text(const Term& t) { return t.name; }

inline void print_formula(std::ostream& os, const Formula& f);

inline bool needs_parens_in(const Formula& child, FormulaKind parent) {
  if (child.is_quantifier()) return true;
  switch (parent) {
    case FormulaKind::Not:
      return child.kind == FormulaKind::Equal ||
             ((child.kind == FormulaKind::And || child.kind == FormulaKind::Or) &&
              !child.children.empty());
    case FormulaKind::And:
      return (child.kind == FormulaKind::And || child.kind == FormulaKind::Or) &&
             !child.children.empty();
    case FormulaKind::Or:
      return child.kind == FormulaKind::Or && !child.children.empty();
    default:
      return false;
  }
}

inline void print_child(std::ostream& os, const Formula& child, FormulaKind parent) {
  if (needs_parens_in(child, parent)) {
    os << '(';
    print_formula(os, child);
    os << ')';
  } else {
    print_formula(os, child);
  }
}

inline void print_formula(std::ostream& os, const Formula& f) {
  switch (f.kind) {
    case FormulaKind::Atom:
      os << f.symbol;
      if (!f.terms.empty()) {
        os << '(';
        for (size_t i = 0; i < f.terms.size(); ++i) os << (i ? "," : "") << term_text(f.terms[i]);
        os << ')';
      }
      return;
    case FormulaKind::Equal:
      os << term_text(f.terms[0]) << " = " << term_text(f.terms[1]);
      return;
    case FormulaKind::Not:
      os << '~';
      print_child(os, *f.children.front(), FormulaKind::Not);
      return;
    case FormulaKind::And:
    case FormulaKind::Or:
      if (f.children.empty()) {
        os << (f.kind == FormulaKind::And ? "true" : "false");
        return;
      }
      for (size_t i = 0; i < f.children.size(); ++i) {
        if (i) os << (f.kind == FormulaKind::And ? " & " : " | ");
        print_child(os, *f.children[i], f.kind);
      }
      return;
    case FormulaKind::Forall:
    case FormulaKind::Exists:
      os << (f.kind == FormulaKind::Forall ? '!' : '?') << f.symbol << ": ";
      print_formula(os, *f.children.front());
      return;
  }
}

inline void print_rule(std::ostream& os, const Rule& r) {
  if (!r.vars.empty()) {
    os << '!';
    for (size_t i = 0; i < r.vars.size(); ++i) os << (i ? " " : "") << r.vars[i];
    os << ": " << r.head << '(';
    for (size_t i = 0; i < r.vars.size(); ++i) os << (i ? "," : "") << r.vars[i];
    os << ')';
  } else {
    os << r.head;
  }
  os << " <- ";
  print_formula(os, *r.body);
  os << ".\n";
}

inline void print_definition(std::ostream& os, const FixpointDefinition& d, int indent) {
  std::string pad(static_cast<size_t>(indent) * 2, ' ');
  os << pad << keyword(d.kind) << " {\n";
  for (const auto& r : d.rules) {
    os << pad << "  ";
    print_rule(os, r);
  }
  for (const auto& s : d.subdefinitions) print_definition(os, s, indent + 1);
  os << pad << "}\n";
}

}  // namespace detail

inline std::string print_formula(const Formula& f) {
  std::ostringstream os;
  detail::print_formula(os, f);
  return os.str();
}
inline std::string print_formula(const FormulaPtr& f) { return print_formula(*f); }

inline std::string print_definition(const FixpointDefinition& d) {
  std::ostringstream os;
  detail::print_definition(os, d, 0);
  return os.str();
}

/// Canonical text: vocabulary block, sentences, then definitions.
inline std::string print_theory(const Theory& t) {
  std::ostringstream os;
  if (!t.vocabulary.predicates.empty() || !t.vocabulary.constants.empty()) {
    os << "vocab {\n";
    for (const auto& [p, a] : t.vocabulary.predicates) os << "  pred " << p << "/" << a << ".\n";
    for (const auto& c : t.vocabulary.constants) os << "  const " << c << ".\n";
    os << "}\n";
  }
  for (const auto& s : t.sentences) {
    detail::print_formula(os, *s);
    os << ".\n";
  }
  for (const auto& d : t.definitions) detail::print_definition(os, d, 0);
  return os.str();
}

inline std::string print_inductive(const InductiveDefinition& d) {
  std::ostringstream os;
  os << "GID {\n";
  for (const auto& r : d.rules) {
    os << "  ";
    detail::print_rule(os, r);
  }
  os << "}\n";
  return os.str();
}

inline std::string print_structure(const Structure& s) {
  std::ostringstream os;
  os << "domain = {";
  for (size_t i = 0; i < s.domain.size(); ++i) os << (i ? "," : "") << s.domain[i];
  os << "}.\n";
  for (const auto& [c, e] : s.constants) {
    auto byname = s.element(c);
    if (!byname || *byname != e) os << "const " << c << " = " << s.domain[static_cast<size_t>(e)] << ".\n";
  }
  for (const auto& [p, r] : s.relations) {
    if (r.arity() == 0) {
      os << p << " = " << (r.test(0) ? "true" : "false") << ".\n";
      continue;
    }
    auto tuples = r.tuples();
    if (tuples.empty()) {
      os << p;
      if (r.arity() > 0) os << "/" << r.arity();
      os << " = {}.\n";
      continue;
    }
    os << p << " = {";
    for (size_t i = 0; i < tuples.size(); ++i) {
      os << (i ? "," : "");
      const auto& t = tuples[i];
      if (t.size() == 1) {
        os << s.domain[static_cast<size_t>(t[0])];
      } else {
        os << '(';
        for (size_t k = 0; k < t.size(); ++k) os << (k ? "," : "") << s.domain[static_cast<size_t>(t[k])];
        os << ')';
      }
    }
    os << "}.\n";
  }
  return os.str();
}

}  // namespace fofd
