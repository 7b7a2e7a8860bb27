#pragma once

// S-expression syntax for types, terms, judgments and derivations.
//
//   type       ::= Prop | NAME | (-> type type ...)
//   term       ::= NAME | => | (all type) | (lam (NAME type) term)
//                | (forall (NAME type) term) | (exists (NAME type) term)
//                | bot | top | (not term) | (and term term) | (or term term)
//                | (term term ...)
//   context    ::= ((NAME type) ...)
//   hyps       ::= (term ...)
//   judgment   ::= (defeq context term term type) | (wf context hyps)
//                | (true context hyps term)
//   derivation ::= (RULE (derivation ...) judgment)
//
// `;` starts a comment that runs to the end of the line.

#include "faltertide/hol/derivation.hpp"
#include "faltertide/hol/library.hpp"

#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace faltertide::hol {

class SexpError : public std::runtime_error {
 public:
  SexpError(std::size_t line, std::size_t col, const std::string& msg)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg), line_(line), col_(col) {}
  std::size_t line() const { return line_; }
  std::size_t col() const { return col_; }

 private:
  std::size_t line_, col_;
};

struct Sexp {
  std::string atom;  // empty for lists
  std::vector<Sexp> items;
  std::size_t line = 0, col = 0;

  bool is_atom() const { return !atom.empty(); }
  bool is(std::string_view a) const { return atom == a; }
};

namespace detail {

class SexpReader {
 public:
  explicit SexpReader(std::string_view text) : text_(text) {}

  std::vector<Sexp> read_all() {
    std::vector<Sexp> out;
    for (skip(); pos_ < text_.size(); skip()) out.push_back(read());
    return out;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  Sexp read() {
    Sexp s;
    s.line = line_;
    s.col = col_;
    char c = text_[pos_];
    if (c == ')') throw SexpError(line_, col_, "unexpected ')'");
    if (c == '(') {
      advance();
      for (skip(); pos_ < text_.size() && text_[pos_] != ')'; skip()) s.items.push_back(read());
      if (pos_ >= text_.size()) throw SexpError(s.line, s.col, "unclosed '('");
      advance();
      return s;
    }
    while (pos_ < text_.size()) {
      c = text_[pos_];
      if (c == '(' || c == ')' || c == ';' || std::isspace(static_cast<unsigned char>(c))) break;
      s.atom += c;
      advance();
    }
    return s;
  }
};

[[noreturn]] inline void fail(const Sexp& s, const std::string& msg) { throw SexpError(s.line, s.col, msg); }

inline bool is_reserved(const std::string& a) {
  static const char* words[] = {"=>", "all", "lam", "forall", "exists", "bot", "top", "not", "and", "or", "Prop", "->"};
  for (const char* w : words) {
    if (a == w) return true;
  }
  return false;
}

inline const std::string& name_of(const Sexp& s) {
  if (!s.is_atom() || is_reserved(s.atom)) fail(s, "expected a name");
  return s.atom;
}

inline void expect_list(const Sexp& s, std::size_t n, const char* what) {
  if (s.is_atom() || s.items.size() != n) fail(s, std::string("malformed ") + what);
}

}  // namespace detail

inline std::vector<Sexp> read_sexps(std::string_view text) { return detail::SexpReader(text).read_all(); }

inline Type type_of_sexp(const Sexp& s) {
  if (s.is_atom()) {
    if (s.is("Prop")) return Type::prop();
    return Type::base(detail::name_of(s));
  }
  if (s.items.size() < 3 || !s.items[0].is("->")) detail::fail(s, "malformed type");
  Type t = type_of_sexp(s.items.back());
  for (std::size_t i = s.items.size() - 1; i-- > 1;) t = Type::arrow(type_of_sexp(s.items[i]), t);
  return t;
}

inline Term term_of_sexp(const Sexp& s);

namespace detail {

inline std::pair<std::string, Type> binder_of(const Sexp& s) {
  expect_list(s, 2, "binder");
  return {name_of(s.items[0]), type_of_sexp(s.items[1])};
}

}  // namespace detail

inline Term term_of_sexp(const Sexp& s) {
  if (s.is_atom()) {
    if (s.is("=>")) return imp_const();
    if (s.is("bot")) return bot();
    if (s.is("top")) return top();
    return var(detail::name_of(s));
  }
  if (s.items.empty()) detail::fail(s, "empty term");
  const Sexp& head = s.items[0];
  if (head.is("all")) {
    detail::expect_list(s, 2, "(all T)");
    return all_const(type_of_sexp(s.items[1]));
  }
  if (head.is("lam") || head.is("forall") || head.is("exists")) {
    detail::expect_list(s, 3, "binding form");
    auto [x, t] = detail::binder_of(s.items[1]);
    Term body = term_of_sexp(s.items[2]);
    if (head.is("lam")) return lam(x, t, body);
    if (head.is("forall")) return forall(x, t, body);
    return make_exists(x, t, body);
  }
  if (head.is("not")) {
    detail::expect_list(s, 2, "(not M)");
    return make_not(term_of_sexp(s.items[1]));
  }
  if (head.is("and") || head.is("or")) {
    detail::expect_list(s, 3, "binary connective");
    Term m = term_of_sexp(s.items[1]), n = term_of_sexp(s.items[2]);
    return head.is("and") ? make_and(m, n) : make_or(m, n);
  }
  if (s.items.size() < 2) detail::fail(s, "application needs an argument");
  Term t = term_of_sexp(head);
  for (std::size_t i = 1; i < s.items.size(); ++i) t = app(t, term_of_sexp(s.items[i]));
  return t;
}

inline Context context_of_sexp(const Sexp& s) {
  if (s.is_atom()) detail::fail(s, "expected a context list");
  Context g;
  for (const auto& b : s.items) g.push_back(detail::binder_of(b));
  return g;
}

inline std::vector<Term> hyps_of_sexp(const Sexp& s) {
  if (s.is_atom()) detail::fail(s, "expected a hypothesis list");
  std::vector<Term> out;
  for (const auto& h : s.items) out.push_back(term_of_sexp(h));
  return out;
}

inline Judgment judgment_of_sexp(const Sexp& s) {
  if (s.is_atom() || s.items.empty()) detail::fail(s, "expected a judgment");
  const Sexp& head = s.items[0];
  if (head.is("defeq")) {
    detail::expect_list(s, 5, "defeq judgment");
    return Judgment::defeq(context_of_sexp(s.items[1]), term_of_sexp(s.items[2]), term_of_sexp(s.items[3]),
                           type_of_sexp(s.items[4]));
  }
  if (head.is("wf")) {
    detail::expect_list(s, 3, "wf judgment");
    return Judgment::wf(context_of_sexp(s.items[1]), hyps_of_sexp(s.items[2]));
  }
  if (head.is("true")) {
    detail::expect_list(s, 4, "true judgment");
    return Judgment::truth(context_of_sexp(s.items[1]), hyps_of_sexp(s.items[2]), term_of_sexp(s.items[3]));
  }
  detail::fail(head, "unknown judgment form");
}

inline Derivation derivation_of_sexp(const Sexp& s) {
  detail::expect_list(s, 3, "derivation");
  if (!s.items[0].is_atom()) detail::fail(s.items[0], "expected a rule name");
  if (s.items[1].is_atom()) detail::fail(s.items[1], "expected a premise list");
  Derivation d{s.items[0].atom, {}, judgment_of_sexp(s.items[2])};
  for (const auto& p : s.items[1].items) d.premises.push_back(derivation_of_sexp(p));
  return d;
}

inline std::vector<Derivation> parse_derivations(std::string_view text) {
  std::vector<Derivation> out;
  for (const auto& s : read_sexps(text)) out.push_back(derivation_of_sexp(s));
  return out;
}

// ---------------------------------------------------------------------------
// Printing

inline std::string to_sexp(const Context& g) {
  std::string s = "(";
  for (std::size_t i = 0; i < g.size(); ++i) s += (i ? " (" : "(") + g[i].first + " " + g[i].second.str() + ")";
  return s + ")";
}

inline std::string to_sexp(const std::vector<Term>& hyps) {
  std::string s = "(";
  for (std::size_t i = 0; i < hyps.size(); ++i) s += (i ? " " : "") + to_sexp(hyps[i]);
  return s + ")";
}

inline std::string to_sexp(const Judgment& j) {
  switch (j.kind) {
    case Judgment::Kind::DefEq:
      return "(defeq " + to_sexp(j.ctx) + " " + to_sexp(j.lhs) + " " + to_sexp(j.rhs) + " " + j.type.str() + ")";
    case Judgment::Kind::Wf:
      return "(wf " + to_sexp(j.ctx) + " " + to_sexp(j.hyps) + ")";
    case Judgment::Kind::True:
      return "(true " + to_sexp(j.ctx) + " " + to_sexp(j.hyps) + " " + to_sexp(j.lhs) + ")";
  }
  return {};
}

inline std::string to_sexp(const Derivation& d, std::size_t indent = 0) {
  std::string pad(indent, ' ');
  std::string s = pad + "(" + d.rule + "\n" + pad + "  (";
  for (std::size_t i = 0; i < d.premises.size(); ++i) s += "\n" + to_sexp(d.premises[i], indent + 4);
  s += d.premises.empty() ? ")\n" : "\n" + pad + "  )\n";
  return s + pad + "  " + to_sexp(d.conclusion) + ")";
}

}  // namespace faltertide::hol
