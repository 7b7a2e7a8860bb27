#pragma once

// Concrete syntax: lexer, parser, printer and sugar expansion.
//
//   []P   <>P   ~P   P /\ Q   P \/ Q   P => Q
//   \A x . P   \E x . P   \AA x . P   \EE x . P
//   [A]_<x,y>   x' = f(x)   R(x, c)
//
// Precedence, tightest first: ~ [] <>, /\, \/, =>. /\ and \/ associate left,
// => associates right, quantifier bodies extend as far right as possible.
// `\*` starts a comment running to the end of the line.

#include "faltertide/ast.hpp"
#include "faltertide/interp.hpp"

#include <cctype>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace faltertide {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t col, const std::string& msg)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg), line_(line), col_(col) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return col_; }

 private:
  std::size_t line_;
  std::size_t col_;
};

// ---------------------------------------------------------------------------
// Sugar expansion

inline Action desugar(const Action& a) {
  using K = Action::Kind;
  switch (a.kind) {
    case K::Rel:
    case K::Eq:
      return a;
    case K::Not:
      return Action::negate(desugar(a.sub()));
    case K::And:
      return Action::conj(desugar(a.sub(0)), desugar(a.sub(1)));
    case K::Forall:
      return Action::forall(a.name, desugar(a.sub()));
    case K::Or:
      return Action::negate(Action::conj(Action::negate(desugar(a.sub(0))), Action::negate(desugar(a.sub(1)))));
    case K::Implies: {
      Action lhs = Action::negate(desugar(a.sub(0)));
      return Action::negate(Action::conj(Action::negate(std::move(lhs)), Action::negate(desugar(a.sub(1)))));
    }
    case K::Exists:
      return Action::negate(Action::forall(a.name, Action::negate(desugar(a.sub()))));
  }
  return a;
}

inline Formula desugar(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::Atom:
      return Formula::atom(desugar(f.act()));
    case K::ActionBox:
      return Formula::action_box(desugar(f.act()), f.subscript);
    case K::Always:
      return Formula::always(desugar(f.sub()));
    case K::Not:
      return Formula::negate(desugar(f.sub()));
    case K::And:
      return Formula::conj(desugar(f.sub(0)), desugar(f.sub(1)));
    case K::Forall:
      return Formula::forall(f.name, desugar(f.sub()));
    case K::ForallFlex:
      return Formula::forall_flex(f.name, desugar(f.sub()));
    case K::Or:
      return Formula::negate(
          Formula::conj(Formula::negate(desugar(f.sub(0))), Formula::negate(desugar(f.sub(1)))));
    case K::Implies: {
      Formula lhs = Formula::negate(desugar(f.sub(0)));
      return Formula::negate(Formula::conj(Formula::negate(std::move(lhs)), Formula::negate(desugar(f.sub(1)))));
    }
    case K::Exists:
      return Formula::negate(Formula::forall(f.name, Formula::negate(desugar(f.sub()))));
    case K::ExistsFlex:
      return Formula::negate(Formula::forall_flex(f.name, Formula::negate(desugar(f.sub()))));
    case K::Eventually:
      return Formula::negate(Formula::always(Formula::negate(desugar(f.sub()))));
  }
  return f;
}

inline bool is_core(const Action& a) {
  using K = Action::Kind;
  if (a.kind == K::Or || a.kind == K::Implies || a.kind == K::Exists) return false;
  for (const auto& s : a.subs) {
    if (!is_core(s)) return false;
  }
  return true;
}

inline bool is_core(const Formula& f) {
  using K = Formula::Kind;
  if (f.kind == K::Or || f.kind == K::Implies || f.kind == K::Exists || f.kind == K::ExistsFlex ||
      f.kind == K::Eventually)
    return false;
  for (const auto& a : f.action) {
    if (!is_core(a)) return false;
  }
  for (const auto& s : f.subs) {
    if (!is_core(s)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

enum Prec : int { kImplies = 1, kOr = 2, kAnd = 3, kUnary = 4, kAtom = 5 };

inline std::string print_term(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Rigid:
    case Term::Kind::Flex:
      return t.name;
    case Term::Kind::Primed:
      return t.name + "'";
    case Term::Kind::Apply: {
      if (t.args.empty()) return t.name;
      std::string s = t.name + "(";
      for (std::size_t i = 0; i < t.args.size(); ++i) s += (i ? ", " : "") + print_term(t.args[i]);
      return s + ")";
    }
  }
  return {};
}

inline std::string parenthesize(bool paren, const std::string& s) { return paren ? "(" + s + ")" : s; }

inline std::string print_action(const Action& a, int ctx, bool rightmost, bool unary_operand = false) {
  using K = Action::Kind;
  switch (a.kind) {
    case K::Rel: {
      std::string s = a.name;
      if (!a.terms.empty()) {
        s += "(";
        for (std::size_t i = 0; i < a.terms.size(); ++i) s += (i ? ", " : "") + print_term(a.terms[i]);
        s += ")";
      }
      return s;
    }
    case K::Eq:
      return parenthesize(unary_operand, print_term(a.terms[0]) + " = " + print_term(a.terms[1]));
    case K::Not:
      return parenthesize(ctx > kUnary, "~" + print_action(a.sub(), kUnary, rightmost || ctx > kUnary, true));
    case K::And:
    case K::Or: {
      int my = a.kind == K::And ? kAnd : kOr;
      bool p = ctx > my;
      std::string op = a.kind == K::And ? " /\\ " : " \\/ ";
      return parenthesize(p, print_action(a.sub(0), my, false) + op + print_action(a.sub(1), my + 1, rightmost || p));
    }
    case K::Implies: {
      bool p = ctx > kImplies;
      return parenthesize(p, print_action(a.sub(0), kOr, false) + " => " +
                                 print_action(a.sub(1), kImplies, rightmost || p));
    }
    case K::Forall:
    case K::Exists: {
      std::string q = a.kind == K::Forall ? "\\A " : "\\E ";
      return parenthesize(!rightmost, q + a.name + " . " + print_action(a.sub(), kImplies, true));
    }
  }
  return {};
}

inline std::string print_formula(const Formula& f, int ctx, bool rightmost) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::Atom:
      return print_action(f.act(), ctx, rightmost, ctx == kUnary);
    case K::ActionBox: {
      std::string s = "[" + print_action(f.act(), kImplies, true) + "]_<";
      for (std::size_t i = 0; i < f.subscript.size(); ++i) s += (i ? "," : "") + f.subscript[i];
      return s + ">";
    }
    case K::Always:
    case K::Eventually:
    case K::Not: {
      std::string op = f.kind == K::Always ? "[]" : f.kind == K::Eventually ? "<>" : "~";
      bool p = ctx > kUnary;
      return parenthesize(p, op + print_formula(f.sub(), kUnary, rightmost || p));
    }
    case K::And:
    case K::Or: {
      int my = f.kind == K::And ? kAnd : kOr;
      bool p = ctx > my;
      std::string op = f.kind == K::And ? " /\\ " : " \\/ ";
      return parenthesize(p, print_formula(f.sub(0), my, false) + op + print_formula(f.sub(1), my + 1, rightmost || p));
    }
    case K::Implies: {
      bool p = ctx > kImplies;
      return parenthesize(p, print_formula(f.sub(0), kOr, false) + " => " +
                                 print_formula(f.sub(1), kImplies, rightmost || p));
    }
    case K::Forall:
    case K::Exists:
    case K::ForallFlex:
    case K::ExistsFlex: {
      std::string q = f.kind == K::Forall ? "\\A " : f.kind == K::Exists ? "\\E " : f.kind == K::ForallFlex ? "\\AA " : "\\EE ";
      return parenthesize(!rightmost, q + f.name + " . " + print_formula(f.sub(), kImplies, true));
    }
  }
  return {};
}

}  // namespace detail

inline std::string print(const Term& t) { return detail::print_term(t); }
inline std::string print(const Action& a) { return detail::print_action(a, detail::kImplies, true); }
inline std::string print(const Formula& f) { return detail::print_formula(f, detail::kImplies, true); }

// ---------------------------------------------------------------------------
// Lexing

namespace detail {

struct Token {
  enum class Kind {
    Ident, Box, Diamond, LBracket, RBracket, SubOpen, Gt, Comma, LParen, RParen, Dot, Prime,
    Tilde, And, Or, Implies, Eq, Forall, Exists, ForallFlex, ExistsFlex, End
  };
  Kind kind;
  std::string text;
  std::size_t line;
  std::size_t col;
};

inline bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

inline std::vector<Token> lex(std::string_view s) {
  using K = Token::Kind;
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < s.size(); ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto starts = [&](std::string_view p) { return s.substr(i, p.size()) == p; };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (starts("\\*")) {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    std::size_t l = line, cl = col;
    auto emit = [&](K k, std::size_t n) {
      out.push_back({k, std::string(s.substr(i, n)), l, cl});
      advance(n);
    };
    if (starts("[]")) emit(K::Box, 2);
    else if (starts("<>")) emit(K::Diamond, 2);
    else if (starts("_<")) emit(K::SubOpen, 2);
    else if (starts("/\\")) emit(K::And, 2);
    else if (starts("\\/")) emit(K::Or, 2);
    else if (starts("=>")) emit(K::Implies, 2);
    else if (starts("\\AA")) emit(K::ForallFlex, 3);
    else if (starts("\\EE")) emit(K::ExistsFlex, 3);
    else if (starts("\\A")) emit(K::Forall, 2);
    else if (starts("\\E")) emit(K::Exists, 2);
    else if (c == '[') emit(K::LBracket, 1);
    else if (c == ']') emit(K::RBracket, 1);
    else if (c == '>') emit(K::Gt, 1);
    else if (c == ',') emit(K::Comma, 1);
    else if (c == '(') emit(K::LParen, 1);
    else if (c == ')') emit(K::RParen, 1);
    else if (c == '.') emit(K::Dot, 1);
    else if (c == '\'') emit(K::Prime, 1);
    else if (c == '~') emit(K::Tilde, 1);
    else if (c == '=') emit(K::Eq, 1);
    else if (ident_char(c)) {
      std::size_t n = 0;
      while (i + n < s.size() && ident_char(s[i + n])) ++n;
      emit(K::Ident, n);
    } else {
      std::string shown = std::isprint(static_cast<unsigned char>(c)) ? std::string(1, c) : "byte " + std::to_string(static_cast<unsigned char>(c));
      throw ParseError(l, cl, "unexpected character '" + shown + "'");
    }
  }
  out.push_back({K::End, "", line, col});
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

class Parser {
 public:
  Parser(std::string_view text, const Signature& sig) : toks_(lex(text)), sig_(sig) {
    for (const auto& t : toks_) {
      if (t.kind == Token::Kind::Ident) used_.insert(t.text);
    }
    for (const auto& [n, a] : sig_.functions) used_.insert(n);
    for (const auto& [n, a] : sig_.relations) used_.insert(n);
    used_.insert(sig_.flexible.begin(), sig_.flexible.end());
    used_.insert(sig_.rigid.begin(), sig_.rigid.end());
    used_.insert(sig_.constants.begin(), sig_.constants.end());
  }

  Formula parse_all() {
    Parsed p = formula();
    if (peek().kind != Token::Kind::End) fail(peek(), "unexpected '" + peek().text + "'");
    return std::move(p.f);
  }

 private:
  using K = Token::Kind;

  struct Parsed {
    Formula f;
    std::optional<Token> prime;  // first primed variable when f is an action
  };

  enum class Binding { Rigid, Flex };
  struct Scope {
    std::string source;
    std::string internal;
    Binding kind;
  };

  static constexpr std::size_t kMaxDepth = 400;

  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool accept(K k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  const Token& expect(K k, const char* what) {
    if (peek().kind != k) fail(peek(), std::string("expected ") + what + (peek().kind == K::End ? " before end of input" : ", found '" + peek().text + "'"));
    return take();
  }
  [[noreturn]] static void fail(const Token& t, const std::string& msg) { throw ParseError(t.line, t.col, msg); }

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& q) : p(q) {
      if (++p.depth_ > kMaxDepth) fail(p.peek(), "formula nested too deeply");
    }
    ~DepthGuard() { --p.depth_; }
  };

  // Combining an action into a temporal context: it must not mention primes.
  static Formula temporal(Parsed p) {
    if (p.f.is_atom() && p.prime) fail(*p.prime, "primed variable '" + p.prime->text + "' outside an action");
    return std::move(p.f);
  }

  static Parsed combine(Formula f, const Parsed& a, const Parsed* b = nullptr) {
    if (!f.is_atom()) {
      temporal(a);
      if (b) temporal(*b);
      return {std::move(f), std::nullopt};
    }
    std::optional<Token> prime = a.prime;
    if (!prime && b) prime = b->prime;
    return {std::move(f), prime};
  }

  Parsed formula() {
    DepthGuard g(*this);
    Parsed lhs = disjunction();
    if (!accept(K::Implies)) return lhs;
    Parsed rhs = formula();
    return combine(Formula::implies(lhs.f, rhs.f), lhs, &rhs);
  }

  Parsed disjunction() {
    Parsed lhs = conjunction();
    while (accept(K::Or)) {
      Parsed rhs = conjunction();
      lhs = combine(Formula::disj(lhs.f, rhs.f), lhs, &rhs);
    }
    return lhs;
  }

  Parsed conjunction() {
    Parsed lhs = unary();
    while (accept(K::And)) {
      Parsed rhs = unary();
      lhs = combine(Formula::conj(lhs.f, rhs.f), lhs, &rhs);
    }
    return lhs;
  }

  Parsed unary() {
    DepthGuard g(*this);
    const Token& t = peek();
    switch (t.kind) {
      case K::Tilde: {
        take();
        Parsed p = unary();
        return combine(Formula::negate(p.f), p);
      }
      case K::Box: {
        take();
        Parsed p = unary();
        return {Formula::always(temporal(std::move(p))), std::nullopt};
      }
      case K::Diamond: {
        take();
        Parsed p = unary();
        return {Formula::eventually(temporal(std::move(p))), std::nullopt};
      }
      case K::Forall:
      case K::Exists:
      case K::ForallFlex:
      case K::ExistsFlex:
        return quantified();
      default:
        return primary();
    }
  }

  Parsed quantified() {
    Token q = take();
    const Token& name = expect(K::Ident, "a bound variable name");
    bool flex = q.kind == K::ForallFlex || q.kind == K::ExistsFlex;
    std::string internal = bind_name(name.text);
    expect(K::Dot, "'.'");
    scope_.push_back({name.text, internal, flex ? Binding::Flex : Binding::Rigid});
    Parsed body = formula();
    scope_.pop_back();
    switch (q.kind) {
      case K::Forall: return combine(Formula::forall(internal, body.f), body);
      case K::Exists: return combine(Formula::exists(internal, body.f), body);
      case K::ForallFlex: return {Formula::forall_flex(internal, temporal(std::move(body))), std::nullopt};
      default: return {Formula::exists_flex(internal, temporal(std::move(body))), std::nullopt};
    }
  }

  std::string bind_name(const std::string& src) {
    bool clash = sig_.is_flexible(src) || sig_.functions.count(src) || sig_.relations.count(src) ||
                 sig_.rigid.count(src) || sig_.constants.count(src) || is_bound(src);
    std::string internal = src;
    if (clash) {
      for (std::size_t k = 1;; ++k) {
        internal = src + "_" + std::to_string(k);
        if (!used_.count(internal)) break;
      }
    }
    used_.insert(internal);
    return internal;
  }

  Parsed primary() {
    const Token& t = peek();
    if (t.kind == K::LParen) {
      take();
      Parsed p = formula();
      expect(K::RParen, "')'");
      return p;
    }
    if (t.kind == K::LBracket) {
      take();
      Token open = t;
      Parsed inner = formula();
      if (!inner.f.is_atom()) fail(open, "the body of [A]_<...> must be an action");
      expect(K::RBracket, "']'");
      expect(K::SubOpen, "'_<' after ']'");
      std::vector<std::string> vars;
      do {
        const Token& v = expect(K::Ident, "a flexible variable");
        auto r = lookup(v.text);
        if (!r || r->kind != Binding::Flex) fail(v, "'" + v.text + "' in a subscript is not a flexible variable");
        vars.push_back(r->internal);
      } while (accept(K::Comma));
      expect(K::Gt, "'>'");
      return {Formula::action_box(inner.f.act(), std::move(vars)), std::nullopt};
    }
    if (t.kind != K::Ident) fail(t, t.kind == K::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
    if (!is_bound(t.text)) {
      auto rel = sig_.relations.find(t.text);
      if (rel != sig_.relations.end()) return relation(rel->second);
    }
    std::optional<Token> prime;
    Term lhs = term(prime);
    expect(K::Eq, "'='");
    Term rhs = term(prime);
    return {Formula::atom(Action::eq(std::move(lhs), std::move(rhs))), prime};
  }

  Parsed relation(std::size_t arity) {
    Token name = take();
    std::vector<Term> args;
    std::optional<Token> prime;
    if (accept(K::LParen)) {
      if (peek().kind != K::RParen) {
        do args.push_back(term(prime));
        while (accept(K::Comma));
      }
      expect(K::RParen, "')'");
    }
    if (args.size() != arity)
      fail(name, "relation '" + name.text + "' expects " + std::to_string(arity) + " argument(s), got " + std::to_string(args.size()));
    return {Formula::atom(Action::rel(name.text, std::move(args))), prime};
  }

  Term term(std::optional<Token>& prime) {
    DepthGuard g(*this);
    const Token& t = expect(K::Ident, "a term");
    Token name = t;
    if (accept(K::Prime)) {
      auto r = lookup(name.text);
      if (!r || r->kind != Binding::Flex) fail(name, "only flexible variables can be primed, not '" + name.text + "'");
      if (!prime) prime = name;
      return Term::primed(r->internal);
    }
    if (auto r = lookup(name.text); r && is_bound(name.text)) {
      return r->kind == Binding::Rigid ? Term::rigid(r->internal) : Term::flex(r->internal);
    }
    if (sig_.is_flexible(name.text)) return Term::flex(name.text);
    auto fn = sig_.functions.find(name.text);
    if (fn != sig_.functions.end()) {
      std::vector<Term> args;
      if (accept(K::LParen)) {
        if (peek().kind != K::RParen) {
          do args.push_back(term(prime));
          while (accept(K::Comma));
        }
        expect(K::RParen, "')'");
      }
      if (args.size() != fn->second)
        fail(name, "function '" + name.text + "' expects " + std::to_string(fn->second) + " argument(s), got " + std::to_string(args.size()));
      return Term::apply(name.text, std::move(args));
    }
    if (sig_.constants.count(name.text)) return Term::apply(name.text);
    if (sig_.rigid.count(name.text)) return Term::rigid(name.text);
    if (peek().kind == K::LParen) fail(name, "unknown symbol '" + name.text + "'");
    if (sig_.relations.count(name.text)) fail(name, "relation '" + name.text + "' used as a term");
    fail(name, "unbound variable '" + name.text + "'");
  }

  // Innermost binder or declared flexible variable named `src`.
  std::optional<Scope> lookup(const std::string& src) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->source == src) return *it;
    }
    if (sig_.is_flexible(src)) return Scope{src, src, Binding::Flex};
    return std::nullopt;
  }

  bool is_bound(const std::string& src) const {
    for (const auto& s : scope_) {
      if (s.source == src) return true;
    }
    return false;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t depth_ = 0;
  const Signature& sig_;
  std::vector<Scope> scope_;
  std::set<std::string> used_;
};

}  // namespace detail

/// Parses keeping sugar nodes (\/, =>, \E, \EE, <>).
inline Formula parse_surface(std::string_view text, const Signature& sig) {
  return detail::Parser(text, sig).parse_all();
}

/// Parses and expands all sugar.
inline Formula parse(std::string_view text, const Signature& sig) { return desugar(parse_surface(text, sig)); }

}  // namespace faltertide
