#pragma once

// Judgments, derivation trees and the rule checker.
//
// Rules:
//   eq-sym eq-trans eq-var eq-app eq-lam eq-beta eq-eta eq-imp eq-all
//   wf-empty wf-cons hyp conv imp-elim imp-intro forall-elim forall-intro
//
// Hypothesis lists are compared as sets up to alpha-equivalence.

#include "faltertide/hol/term.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace faltertide::hol {

struct Judgment {
  enum class Kind { DefEq, Wf, True };

  Kind kind = Kind::True;
  Context ctx;
  std::vector<Term> hyps;  // Wf, True
  Term lhs;                // DefEq left side; True proposition
  Term rhs;                // DefEq right side
  Type type;               // DefEq

  static Judgment defeq(Context g, Term m, Term n, Type t) {
    return {Kind::DefEq, std::move(g), {}, std::move(m), std::move(n), std::move(t)};
  }
  static Judgment wf(Context g, std::vector<Term> th) { return {Kind::Wf, std::move(g), std::move(th), nullptr, nullptr, {}}; }
  static Judgment truth(Context g, std::vector<Term> th, Term m) {
    return {Kind::True, std::move(g), std::move(th), std::move(m), nullptr, {}};
  }
};

struct Derivation {
  std::string rule;
  std::vector<Derivation> premises;
  Judgment conclusion;
};

inline const std::vector<std::string>& rule_names() {
  static const std::vector<std::string> names{
      "eq-sym", "eq-trans", "eq-var", "eq-app", "eq-lam", "eq-beta", "eq-eta", "eq-imp", "eq-all",
      "wf-empty", "wf-cons", "hyp", "conv", "imp-elim", "imp-intro", "forall-elim", "forall-intro"};
  return names;
}

struct CheckResult {
  bool ok = true;
  std::string reason;
  std::vector<std::size_t> path;  // premise indices from the root to the failing node
  std::string rule;
};

// ---------------------------------------------------------------------------
// Hypothesis sets

inline bool mentions(const std::vector<Term>& hyps, const Term& m) {
  return std::any_of(hyps.begin(), hyps.end(), [&](const Term& h) { return alpha_eq(h, m); });
}

inline bool same_hyps(const std::vector<Term>& a, const std::vector<Term>& b) {
  return std::all_of(a.begin(), a.end(), [&](const Term& h) { return mentions(b, h); }) &&
         std::all_of(b.begin(), b.end(), [&](const Term& h) { return mentions(a, h); });
}

inline std::vector<Term> with_hyp(std::vector<Term> hyps, const Term& m) {
  if (!mentions(hyps, m)) hyps.push_back(m);
  return hyps;
}

namespace detail {

struct Failure {
  std::string reason;
};

inline void require(bool cond, const std::string& reason) {
  if (!cond) throw Failure{reason};
}

inline void require_kind(const Judgment& j, Judgment::Kind k, const char* what) {
  require(j.kind == k, std::string("expected a ") + what + " judgment");
}

inline bool same_ctx(const Context& a, const Context& b) { return a == b; }

inline Context extended(const Context& g, const std::string& x, const Type& t) {
  Context out = g;
  out.emplace_back(x, t);
  return out;
}

inline void check_context(const Context& g) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = i + 1; j < g.size(); ++j) require(g[i].first != g[j].first, "context repeats '" + g[i].first + "'");
  }
}

inline void check_well_formed(const Judgment& j) {
  check_context(j.ctx);
  switch (j.kind) {
    case Judgment::Kind::DefEq:
      require(j.lhs && j.rhs, "incomplete equality judgment");
      break;
    case Judgment::Kind::True:
      require(j.lhs != nullptr, "incomplete truth judgment");
      try {
        require(infer_type(j.ctx, j.lhs) == Type::prop(), "asserted term is not a proposition");
      } catch (const TypeError& e) {
        throw Failure{std::string("asserted term is ill-typed: ") + e.what()};
      }
      break;
    case Judgment::Kind::Wf:
      break;
  }
}

inline void check_node(const Derivation& d) {
  const Judgment& c = d.conclusion;
  const auto& p = d.premises;
  auto arity = [&](std::size_t n) {
    require(p.size() == n, "rule " + d.rule + " takes " + std::to_string(n) + " premise(s), got " + std::to_string(p.size()));
  };
  auto premise = [&](std::size_t i) -> const Judgment& { return p[i].conclusion; };
  using JK = Judgment::Kind;
  check_well_formed(c);

  if (d.rule == "eq-sym") {
    arity(1);
    require_kind(c, JK::DefEq, "definitional equality");
    const Judgment& a = premise(0);
    require_kind(a, JK::DefEq, "definitional equality");
    require(same_ctx(a.ctx, c.ctx) && a.type == c.type && alpha_eq(a.lhs, c.rhs) && alpha_eq(a.rhs, c.lhs),
            "conclusion is not the premise reversed");
  } else if (d.rule == "eq-trans") {
    arity(2);
    require_kind(c, JK::DefEq, "definitional equality");
    const Judgment& a = premise(0);
    const Judgment& b = premise(1);
    require_kind(a, JK::DefEq, "definitional equality");
    require_kind(b, JK::DefEq, "definitional equality");
    require(same_ctx(a.ctx, c.ctx) && same_ctx(b.ctx, c.ctx), "contexts differ");
    require(a.type == c.type && b.type == c.type, "types differ");
    require(alpha_eq(a.rhs, b.lhs), "middle terms differ");
    require(alpha_eq(a.lhs, c.lhs) && alpha_eq(b.rhs, c.rhs), "conclusion does not chain the premises");
  } else if (d.rule == "eq-var") {
    arity(0);
    require_kind(c, JK::DefEq, "definitional equality");
    require(c.lhs->kind == TermNode::Kind::Var && c.rhs->kind == TermNode::Kind::Var && c.lhs->name == c.rhs->name,
            "eq-var relates a variable to itself");
    const Type* t = lookup(c.ctx, c.lhs->name);
    require(t && *t == c.type, "(" + c.lhs->name + " : " + c.type.str() + ") is not in the context");
  } else if (d.rule == "eq-app") {
    arity(2);
    require_kind(c, JK::DefEq, "definitional equality");
    require(c.lhs->kind == TermNode::Kind::App && c.rhs->kind == TermNode::Kind::App, "eq-app concludes about applications");
    const Judgment& f = premise(0);
    const Judgment& a = premise(1);
    require_kind(f, JK::DefEq, "definitional equality");
    require_kind(a, JK::DefEq, "definitional equality");
    require(same_ctx(f.ctx, c.ctx) && same_ctx(a.ctx, c.ctx), "contexts differ");
    require(f.type == Type::arrow(a.type, c.type), "function premise has the wrong type");
    require(alpha_eq(f.lhs, c.lhs->fn) && alpha_eq(f.rhs, c.rhs->fn), "function parts do not match");
    require(alpha_eq(a.lhs, c.lhs->arg) && alpha_eq(a.rhs, c.rhs->arg), "argument parts do not match");
  } else if (d.rule == "eq-lam") {
    arity(1);
    require_kind(c, JK::DefEq, "definitional equality");
    require(c.lhs->kind == TermNode::Kind::Lam && c.rhs->kind == TermNode::Kind::Lam, "eq-lam concludes about abstractions");
    require(c.lhs->name == c.rhs->name && c.lhs->type == c.rhs->type, "binders differ");
    const Judgment& b = premise(0);
    require_kind(b, JK::DefEq, "definitional equality");
    require(!lookup(c.ctx, c.lhs->name), "bound variable '" + c.lhs->name + "' already in the context");
    require(same_ctx(b.ctx, extended(c.ctx, c.lhs->name, c.lhs->type)), "premise context is not the extended context");
    require(c.type == Type::arrow(c.lhs->type, b.type), "type is not an arrow over the body type");
    require(alpha_eq(b.lhs, c.lhs->arg) && alpha_eq(b.rhs, c.rhs->arg), "bodies do not match");
  } else if (d.rule == "eq-beta") {
    arity(2);
    require_kind(c, JK::DefEq, "definitional equality");
    require(c.lhs->kind == TermNode::Kind::App && c.lhs->fn->kind == TermNode::Kind::Lam, "left side is not a redex");
    const Term& abs = c.lhs->fn;
    const Judgment& bt = premise(0);
    const Judgment& at = premise(1);
    require_kind(bt, JK::DefEq, "definitional equality");
    require_kind(at, JK::DefEq, "definitional equality");
    require(!lookup(c.ctx, abs->name), "bound variable '" + abs->name + "' already in the context");
    require(same_ctx(bt.ctx, extended(c.ctx, abs->name, abs->type)), "body premise context is not the extended context");
    require(alpha_eq(bt.lhs, abs->arg) && alpha_eq(bt.rhs, abs->arg) && bt.type == c.type, "body premise is not M == M : S");
    require(same_ctx(at.ctx, c.ctx) && alpha_eq(at.lhs, c.lhs->arg) && alpha_eq(at.rhs, c.lhs->arg) && at.type == abs->type,
            "argument premise is not N == N : T");
    require(alpha_eq(c.rhs, subst(abs->arg, abs->name, c.lhs->arg)), "right side is not the substitution instance");
  } else if (d.rule == "eq-eta") {
    arity(1);
    require_kind(c, JK::DefEq, "definitional equality");
    require(c.type.is_arrow(), "eq-eta concludes at an arrow type");
    const Judgment& b = premise(0);
    require_kind(b, JK::DefEq, "definitional equality");
    require(b.ctx.size() == c.ctx.size() + 1, "premise context must extend the conclusion by one variable");
    const auto& [x, t] = b.ctx.back();
    require(same_ctx(b.ctx, extended(c.ctx, x, t)), "premise context is not the extended context");
    require(!lookup(c.ctx, x) && !occurs_free(c.lhs, x) && !occurs_free(c.rhs, x), "'" + x + "' is not fresh");
    require(t == c.type.dom() && b.type == c.type.cod(), "types do not match the arrow");
    require(alpha_eq(b.lhs, app(c.lhs, var(x))) && alpha_eq(b.rhs, app(c.rhs, var(x))), "premise is not M x == N x");
  } else if (d.rule == "eq-imp") {
    arity(0);
    require_kind(c, JK::DefEq, "definitional equality");
    require(c.lhs->kind == TermNode::Kind::Imp && c.rhs->kind == TermNode::Kind::Imp, "eq-imp relates (=>) to itself");
    require(c.type == infer_type({}, imp_const()), "(=>) has type Prop -> Prop -> Prop");
  } else if (d.rule == "eq-all") {
    arity(0);
    require_kind(c, JK::DefEq, "definitional equality");
    require(c.lhs->kind == TermNode::Kind::All && c.rhs->kind == TermNode::Kind::All && c.lhs->type == c.rhs->type,
            "eq-all relates a forall constant to itself");
    require(c.type == infer_type({}, c.lhs), "forall constant has type (T -> Prop) -> Prop");
  } else if (d.rule == "wf-empty") {
    arity(0);
    require_kind(c, JK::Wf, "well-formedness");
    require(c.hyps.empty(), "wf-empty concludes the empty hypothesis list");
  } else if (d.rule == "wf-cons") {
    arity(2);
    require_kind(c, JK::Wf, "well-formedness");
    const Judgment& w = premise(0);
    const Judgment& m = premise(1);
    require_kind(w, JK::Wf, "well-formedness");
    require_kind(m, JK::DefEq, "definitional equality");
    require(same_ctx(w.ctx, c.ctx) && same_ctx(m.ctx, c.ctx), "contexts differ");
    require(m.type == Type::prop() && alpha_eq(m.lhs, m.rhs), "added hypothesis is not shown to be a proposition");
    require(same_hyps(c.hyps, with_hyp(w.hyps, m.lhs)), "conclusion does not add the hypothesis");
  } else if (d.rule == "hyp") {
    arity(1);
    require_kind(c, JK::True, "truth");
    const Judgment& w = premise(0);
    require_kind(w, JK::Wf, "well-formedness");
    require(same_ctx(w.ctx, c.ctx) && same_hyps(w.hyps, c.hyps), "well-formedness premise is about other hypotheses");
    require(mentions(c.hyps, c.lhs), "proposition is not among the hypotheses");
  } else if (d.rule == "conv") {
    arity(2);
    require_kind(c, JK::True, "truth");
    const Judgment& t = premise(0);
    const Judgment& e = premise(1);
    require_kind(t, JK::True, "truth");
    require_kind(e, JK::DefEq, "definitional equality");
    require(same_ctx(t.ctx, c.ctx) && same_ctx(e.ctx, c.ctx) && same_hyps(t.hyps, c.hyps), "contexts differ");
    require(e.type == Type::prop(), "conversion must be at type Prop");
    require(alpha_eq(e.lhs, t.lhs) && alpha_eq(e.rhs, c.lhs), "equality does not connect premise and conclusion");
  } else if (d.rule == "imp-elim") {
    arity(2);
    require_kind(c, JK::True, "truth");
    const Judgment& f = premise(0);
    const Judgment& a = premise(1);
    require_kind(f, JK::True, "truth");
    require_kind(a, JK::True, "truth");
    require(same_ctx(f.ctx, c.ctx) && same_ctx(a.ctx, c.ctx) && same_hyps(f.hyps, c.hyps) && same_hyps(a.hyps, c.hyps),
            "contexts differ");
    Term m, n;
    require(as_imp(f.lhs, m, n), "major premise is not an implication");
    require(alpha_eq(m, a.lhs), "minor premise is not the antecedent");
    require(alpha_eq(n, c.lhs), "conclusion is not the consequent");
  } else if (d.rule == "imp-intro") {
    arity(1);
    require_kind(c, JK::True, "truth");
    Term m, n;
    require(as_imp(c.lhs, m, n), "conclusion is not an implication");
    const Judgment& b = premise(0);
    require_kind(b, JK::True, "truth");
    require(same_ctx(b.ctx, c.ctx), "contexts differ");
    require(same_hyps(b.hyps, with_hyp(c.hyps, m)), "premise does not assume the antecedent");
    require(alpha_eq(b.lhs, n), "premise does not prove the consequent");
  } else if (d.rule == "forall-elim") {
    arity(2);
    require_kind(c, JK::True, "truth");
    const Judgment& u = premise(0);
    const Judgment& w = premise(1);
    require_kind(u, JK::True, "truth");
    require_kind(w, JK::DefEq, "definitional equality");
    require(same_ctx(u.ctx, c.ctx) && same_ctx(w.ctx, c.ctx) && same_hyps(u.hyps, c.hyps), "contexts differ");
    const Term& all = u.lhs;
    require(all->kind == TermNode::Kind::App && all->fn->kind == TermNode::Kind::All, "major premise is not forall_T M");
    require(alpha_eq(w.lhs, w.rhs) && w.type == all->fn->type, "witness is not shown to have the quantified type");
    require(alpha_eq(c.lhs, app(all->arg, w.lhs)), "conclusion is not M N");
  } else if (d.rule == "forall-intro") {
    arity(3);
    require_kind(c, JK::True, "truth");
    const Term& all = c.lhs;
    require(all->kind == TermNode::Kind::App && all->fn->kind == TermNode::Kind::All, "conclusion is not forall_T M");
    const Type& t = all->fn->type;
    const Judgment& ty = premise(0);
    const Judgment& w = premise(1);
    const Judgment& b = premise(2);
    require_kind(ty, JK::DefEq, "definitional equality");
    require_kind(w, JK::Wf, "well-formedness");
    require_kind(b, JK::True, "truth");
    require(same_ctx(ty.ctx, c.ctx) && alpha_eq(ty.lhs, all->arg) && alpha_eq(ty.rhs, all->arg) &&
                ty.type == Type::arrow(t, Type::prop()),
            "typing premise is not M == M : T -> Prop");
    require(same_ctx(w.ctx, c.ctx) && same_hyps(w.hyps, c.hyps), "well-formedness premise is about other hypotheses");
    require(b.ctx.size() == c.ctx.size() + 1, "body premise must extend the context by one variable");
    const auto& [x, xt] = b.ctx.back();
    require(same_ctx(b.ctx, extended(c.ctx, x, xt)) && xt == t, "body premise context is not Gamma, x : T");
    require(!lookup(c.ctx, x), "'" + x + "' is not fresh");
    require(same_hyps(b.hyps, c.hyps), "body premise changes the hypotheses");
    require(alpha_eq(b.lhs, app(all->arg, var(x))), "body premise is not M x");
  } else {
    throw Failure{"unknown rule '" + d.rule + "'"};
  }
}

inline void check_tree(const Derivation& d, CheckResult& out, std::vector<std::size_t>& path) {
  for (std::size_t i = 0; i < d.premises.size() && out.ok; ++i) {
    path.push_back(i);
    check_tree(d.premises[i], out, path);
    path.pop_back();
  }
  if (!out.ok) return;
  try {
    check_node(d);
  } catch (const Failure& f) {
    out = {false, f.reason, path, d.rule};
  } catch (const TypeError& e) {
    out = {false, e.what(), path, d.rule};
  }
}

}  // namespace detail

/// Checks every node; reports the first failure in premise-first order.
inline CheckResult check(const Derivation& d) {
  CheckResult out;
  std::vector<std::size_t> path;
  detail::check_tree(d, out, path);
  return out;
}

// ---------------------------------------------------------------------------
// Derivation builders

inline Term rename_binder(const Context& g, const Term& m) {
  std::set<std::string> avoid = free_vars(m->arg);
  for (const auto& [n, t] : g) avoid.insert(n);
  std::string y = fresh_name(m->name, avoid);
  return lam(y, m->type, subst(m->arg, m->name, var(y)));
}

/// Gamma |- M == M : T, built from the typing rules. Binders that shadow the
/// context are renamed, so the conclusion is alpha-equal to M.
inline Derivation typing(const Context& g, const Term& m) {
  using K = TermNode::Kind;
  if (m->kind == K::Lam && lookup(g, m->name)) return typing(g, rename_binder(g, m));
  Type t = infer_type(g, m);
  Judgment c = Judgment::defeq(g, m, m, t);
  switch (m->kind) {
    case K::Var: return {"eq-var", {}, c};
    case K::Imp: return {"eq-imp", {}, c};
    case K::All: return {"eq-all", {}, c};
    case K::App: return {"eq-app", {typing(g, m->fn), typing(g, m->arg)}, c};
    case K::Lam: return {"eq-lam", {typing(detail::extended(g, m->name, m->type), m->arg)}, c};
  }
  throw TypeError("malformed term");
}

/// Gamma | Theta |- wf.
inline Derivation well_formed(const Context& g, const std::vector<Term>& hyps) {
  Derivation d{"wf-empty", {}, Judgment::wf(g, {})};
  std::vector<Term> sofar;
  for (const auto& h : hyps) {
    if (mentions(sofar, h)) continue;
    sofar.push_back(h);
    d = Derivation{"wf-cons", {std::move(d), typing(g, h)}, Judgment::wf(g, sofar)};
  }
  return d;
}

inline Derivation hypothesis(const Context& g, const std::vector<Term>& hyps, const Term& m) {
  return {"hyp", {well_formed(g, hyps)}, Judgment::truth(g, hyps, m)};
}

inline Derivation symmetric(Derivation d) {
  Judgment c = Judgment::defeq(d.conclusion.ctx, d.conclusion.rhs, d.conclusion.lhs, d.conclusion.type);
  return {"eq-sym", {std::move(d)}, std::move(c)};
}

inline Derivation transitive(Derivation a, Derivation b) {
  Judgment c = Judgment::defeq(a.conclusion.ctx, a.conclusion.lhs, b.conclusion.rhs, a.conclusion.type);
  return {"eq-trans", {std::move(a), std::move(b)}, std::move(c)};
}

namespace detail {

// One leftmost-outermost beta step on m with its derivation, or nullopt if m is normal.
inline std::optional<Derivation> beta_step(const Context& g, const Term& m) {
  using K = TermNode::Kind;
  if (m->kind == K::App && m->fn->kind == K::Lam) {
    const Term& f = m->fn;
    Term fn = lookup(g, f->name) ? rename_binder(g, f) : f;
    const std::string& x = fn->name;
    Term redex = app(fn, m->arg);
    Derivation step{"eq-beta",
                    {typing(extended(g, x, fn->type), fn->arg), typing(g, m->arg)},
                    Judgment::defeq(g, redex, subst(fn->arg, x, m->arg), infer_type(g, m))};
    return step;
  }
  if (m->kind == K::App) {
    if (auto s = beta_step(g, m->fn)) {
      Term r = app(s->conclusion.rhs, m->arg);
      return Derivation{"eq-app", {std::move(*s), typing(g, m->arg)}, Judgment::defeq(g, m, r, infer_type(g, m))};
    }
    if (auto s = beta_step(g, m->arg)) {
      Term r = app(m->fn, s->conclusion.rhs);
      return Derivation{"eq-app", {typing(g, m->fn), std::move(*s)}, Judgment::defeq(g, m, r, infer_type(g, m))};
    }
    return std::nullopt;
  }
  if (m->kind == K::Lam) {
    if (lookup(g, m->name)) return beta_step(g, rename_binder(g, m));
    if (auto s = beta_step(extended(g, m->name, m->type), m->arg)) {
      Term r = lam(m->name, m->type, s->conclusion.rhs);
      return Derivation{"eq-lam", {std::move(*s)}, Judgment::defeq(g, m, r, infer_type(g, m))};
    }
  }
  return std::nullopt;
}

// Derivation of m == beta-normal form of m.
inline Derivation to_beta_normal(const Context& g, const Term& m) {
  Derivation d = typing(g, m);
  while (auto s = beta_step(g, d.conclusion.rhs)) {
    d = transitive(std::move(d), std::move(*s));
  }
  return d;
}

}  // namespace detail

/// Gamma |- M == N : T when M and N have alpha-equal beta-normal forms.
inline std::optional<Derivation> conversion(const Context& g, const Term& m, const Term& n) {
  Derivation a = detail::to_beta_normal(g, m);
  Derivation b = detail::to_beta_normal(g, n);
  if (!(a.conclusion.type == b.conclusion.type) || !alpha_eq(a.conclusion.rhs, b.conclusion.rhs)) return std::nullopt;
  return transitive(std::move(a), symmetric(std::move(b)));
}

/// From a proof of M, a proof of the beta-convertible N.
inline Derivation convert(Derivation proof, const Term& n) {
  const Judgment& c = proof.conclusion;
  auto eq = conversion(c.ctx, c.lhs, n);
  if (!eq) throw TypeError("terms are not beta-convertible: " + to_sexp(c.lhs) + " and " + to_sexp(n));
  Judgment j = Judgment::truth(c.ctx, c.hyps, n);
  return {"conv", {std::move(proof), std::move(*eq)}, std::move(j)};
}

/// Same derivation with `m` added to every hypothesis list.
inline Derivation weaken(const Derivation& d, const Term& m) {
  const Judgment& c = d.conclusion;
  switch (c.kind) {
    case Judgment::Kind::DefEq:
      return d;
    case Judgment::Kind::Wf:
      return well_formed(c.ctx, with_hyp(c.hyps, m));
    case Judgment::Kind::True: {
      Derivation out{d.rule, {}, Judgment::truth(c.ctx, with_hyp(c.hyps, m), c.lhs)};
      for (const auto& p : d.premises) out.premises.push_back(weaken(p, m));
      return out;
    }
  }
  return d;
}

}  // namespace faltertide::hol
