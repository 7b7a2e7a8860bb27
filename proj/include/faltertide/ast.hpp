#pragma once

// Abstract syntax of TLA terms, actions and temporal formulas.
//
// Nodes are plain values; children live in vectors so that copying, comparison
// and destruction are structural. Sugar nodes (Or, Implies, Exists, ExistsFlex,
// Eventually) are kept distinct until `desugar` removes them.

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace faltertide {

struct Term {
  enum class Kind { Rigid, Flex, Primed, Apply };

  Kind kind = Kind::Rigid;
  std::string name;
  std::vector<Term> args;

  static Term rigid(std::string n) { return {Kind::Rigid, std::move(n), {}}; }
  static Term flex(std::string n) { return {Kind::Flex, std::move(n), {}}; }
  static Term primed(std::string n) { return {Kind::Primed, std::move(n), {}}; }
  static Term apply(std::string f, std::vector<Term> args = {}) { return {Kind::Apply, std::move(f), std::move(args)}; }

  friend bool operator==(const Term&, const Term&) = default;
};

struct Action {
  enum class Kind { Rel, Eq, Forall, And, Not, Or, Implies, Exists };

  Kind kind = Kind::Eq;
  std::string name;          // relation symbol, or bound rigid variable
  std::vector<Term> terms;   // relation arguments, or the two sides of =
  std::vector<Action> subs;

  static Action rel(std::string r, std::vector<Term> args = {}) { return {Kind::Rel, std::move(r), std::move(args), {}}; }
  static Action eq(Term a, Term b) { return {Kind::Eq, {}, {std::move(a), std::move(b)}, {}}; }
  static Action forall(std::string x, Action a) { return {Kind::Forall, std::move(x), {}, {std::move(a)}}; }
  static Action exists(std::string x, Action a) { return {Kind::Exists, std::move(x), {}, {std::move(a)}}; }
  static Action conj(Action a, Action b) { return {Kind::And, {}, {}, {std::move(a), std::move(b)}}; }
  static Action disj(Action a, Action b) { return {Kind::Or, {}, {}, {std::move(a), std::move(b)}}; }
  static Action implies(Action a, Action b) { return {Kind::Implies, {}, {}, {std::move(a), std::move(b)}}; }
  static Action negate(Action a) { return {Kind::Not, {}, {}, {std::move(a)}}; }

  const Action& sub(std::size_t i = 0) const { return subs.at(i); }

  friend bool operator==(const Action&, const Action&) = default;
};

/// Temporal formula. Constructors keep "atom-lifted" normal form: a Boolean
/// connective or rigid quantifier whose operands are all actions is itself an
/// action wrapped in a single Atom.
struct Formula {
  enum class Kind { Atom, Always, Not, And, ActionBox, Forall, ForallFlex, Or, Implies, Exists, ExistsFlex, Eventually };

  Kind kind = Kind::Atom;
  std::string name;                    // bound variable
  std::vector<std::string> subscript;  // ActionBox variables
  std::vector<Action> action;          // Atom / ActionBox payload (exactly one)
  std::vector<Formula> subs;

  bool is_atom() const { return kind == Kind::Atom; }
  const Action& act() const { return action.at(0); }
  const Formula& sub(std::size_t i = 0) const { return subs.at(i); }

  static Formula atom(Action a) { return {Kind::Atom, {}, {}, {std::move(a)}, {}}; }

  static Formula always(Formula f) { return {Kind::Always, {}, {}, {}, {std::move(f)}}; }
  static Formula eventually(Formula f) { return {Kind::Eventually, {}, {}, {}, {std::move(f)}}; }

  static Formula action_box(Action a, std::vector<std::string> vars) {
    return {Kind::ActionBox, {}, std::move(vars), {std::move(a)}, {}};
  }

  static Formula negate(Formula f) {
    if (f.is_atom()) return atom(Action::negate(std::move(f.action[0])));
    return {Kind::Not, {}, {}, {}, {std::move(f)}};
  }

  static Formula conj(Formula a, Formula b) { return binary(Kind::And, std::move(a), std::move(b)); }
  static Formula disj(Formula a, Formula b) { return binary(Kind::Or, std::move(a), std::move(b)); }
  static Formula implies(Formula a, Formula b) { return binary(Kind::Implies, std::move(a), std::move(b)); }

  static Formula forall(std::string x, Formula f) {
    if (f.is_atom()) return atom(Action::forall(std::move(x), std::move(f.action[0])));
    return {Kind::Forall, std::move(x), {}, {}, {std::move(f)}};
  }
  static Formula exists(std::string x, Formula f) {
    if (f.is_atom()) return atom(Action::exists(std::move(x), std::move(f.action[0])));
    return {Kind::Exists, std::move(x), {}, {}, {std::move(f)}};
  }

  static Formula forall_flex(std::string x, Formula f) { return {Kind::ForallFlex, std::move(x), {}, {}, {std::move(f)}}; }
  static Formula exists_flex(std::string x, Formula f) { return {Kind::ExistsFlex, std::move(x), {}, {}, {std::move(f)}}; }

  friend bool operator==(const Formula&, const Formula&) = default;

 private:
  static Formula binary(Kind k, Formula a, Formula b) {
    if (a.is_atom() && b.is_atom()) {
      Action x = std::move(a.action[0]), y = std::move(b.action[0]);
      switch (k) {
        case Kind::And: return atom(Action::conj(std::move(x), std::move(y)));
        case Kind::Or: return atom(Action::disj(std::move(x), std::move(y)));
        default: return atom(Action::implies(std::move(x), std::move(y)));
      }
    }
    return {k, {}, {}, {}, {std::move(a), std::move(b)}};
  }
};

// ---------------------------------------------------------------------------
// Variable occurrence queries

struct FreeVars {
  std::set<std::string> rigid;
  std::set<std::string> flexible;
  friend bool operator==(const FreeVars&, const FreeVars&) = default;
};

namespace detail {

inline void collect(const Term& t, const std::set<std::string>& bound_rigid,
                    const std::set<std::string>& bound_flex, FreeVars& out) {
  switch (t.kind) {
    case Term::Kind::Rigid:
      if (!bound_rigid.count(t.name)) out.rigid.insert(t.name);
      break;
    case Term::Kind::Flex:
    case Term::Kind::Primed:
      if (!bound_flex.count(t.name)) out.flexible.insert(t.name);
      break;
    case Term::Kind::Apply:
      for (const auto& a : t.args) collect(a, bound_rigid, bound_flex, out);
      break;
  }
}

inline void collect(const Action& a, std::set<std::string> bound_rigid,
                    const std::set<std::string>& bound_flex, FreeVars& out) {
  if (a.kind == Action::Kind::Forall || a.kind == Action::Kind::Exists) bound_rigid.insert(a.name);
  for (const auto& t : a.terms) collect(t, bound_rigid, bound_flex, out);
  for (const auto& s : a.subs) collect(s, bound_rigid, bound_flex, out);
}

inline void collect(const Formula& f, std::set<std::string> bound_rigid,
                    std::set<std::string> bound_flex, FreeVars& out) {
  using K = Formula::Kind;
  if (f.kind == K::Forall || f.kind == K::Exists) bound_rigid.insert(f.name);
  if (f.kind == K::ForallFlex || f.kind == K::ExistsFlex) bound_flex.insert(f.name);
  for (const auto& v : f.subscript) {
    if (!bound_flex.count(v)) out.flexible.insert(v);
  }
  for (const auto& a : f.action) collect(a, bound_rigid, bound_flex, out);
  for (const auto& s : f.subs) collect(s, bound_rigid, bound_flex, out);
}

}  // namespace detail

inline FreeVars free_vars(const Formula& f) {
  FreeVars out;
  detail::collect(f, {}, {}, out);
  return out;
}

inline FreeVars free_vars(const Action& a) {
  FreeVars out;
  detail::collect(a, {}, {}, out);
  return out;
}

inline bool mentions_primes(const Term& t) {
  if (t.kind == Term::Kind::Primed) return true;
  for (const auto& a : t.args) {
    if (mentions_primes(a)) return true;
  }
  return false;
}

inline bool mentions_primes(const Action& a) {
  for (const auto& t : a.terms) {
    if (mentions_primes(t)) return true;
  }
  for (const auto& s : a.subs) {
    if (mentions_primes(s)) return true;
  }
  return false;
}

/// True when the formula contains a flexible quantifier (\AA or \EE).
inline bool has_flexible_quantifier(const Formula& f) {
  if (f.kind == Formula::Kind::ForallFlex || f.kind == Formula::Kind::ExistsFlex) return true;
  for (const auto& s : f.subs) {
    if (has_flexible_quantifier(s)) return true;
  }
  return false;
}

inline std::size_t formula_size(const Formula& f) {
  std::size_t n = 1;
  for (const auto& s : f.subs) n += formula_size(s);
  return n;
}

}  // namespace faltertide
