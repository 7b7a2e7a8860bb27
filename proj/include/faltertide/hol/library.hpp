#pragma once

// Derived connectives and a small library of checked derivations.

#include "faltertide/hol/derivation.hpp"

#include <functional>
#include <initializer_list>
#include <set>
#include <string>
#include <vector>

namespace faltertide::hol {

namespace detail {

inline std::string fresh_for(const std::string& base, std::initializer_list<Term> terms, std::set<std::string> avoid = {}) {
  for (const auto& t : terms) {
    auto fv = free_vars(t);
    avoid.insert(fv.begin(), fv.end());
  }
  return fresh_name(base, avoid);
}

}  // namespace detail

inline Term bot() { return forall("p", Type::prop(), var("p")); }
inline Term top() { return forall("p", Type::prop(), imp(var("p"), var("p"))); }
inline Term make_not(Term m) { return imp(std::move(m), bot()); }

inline Term make_and(Term m, Term n) {
  std::string p = detail::fresh_for("p", {m, n});
  return forall(p, Type::prop(), imp(imp(m, imp(n, var(p))), var(p)));
}

inline Term make_or(Term m, Term n) {
  std::string p = detail::fresh_for("p", {m, n});
  return forall(p, Type::prop(), imp(imp(m, var(p)), imp(imp(n, var(p)), var(p))));
}

inline Term make_exists(const std::string& x, const Type& t, Term m) {
  std::string p = detail::fresh_for("p", {m}, {x});
  return forall(p, Type::prop(), imp(forall(x, t, imp(m, var(p))), var(p)));
}

/// Closed encoding of a derived connective: bot, top, not, and, or, exists.
/// `exists` is indexed by `t`.
inline Term elaborate_sugar(const std::string& name, const Type& t = Type::base("i")) {
  const Type prop = Type::prop();
  if (name == "bot" || name == "⊥") return bot();
  if (name == "top" || name == "⊤") return top();
  if (name == "not" || name == "¬") return lam("m", prop, make_not(var("m")));
  if (name == "and" || name == "∧") return lam("m", prop, lam("n", prop, make_and(var("m"), var("n"))));
  if (name == "or" || name == "∨") return lam("m", prop, lam("n", prop, make_or(var("m"), var("n"))));
  if (name == "exists" || name == "∃") {
    Term body = make_exists("x", t, app(var("P"), var("x")));
    return lam("P", Type::arrow(t, prop), body);
  }
  throw TypeError("unknown connective '" + name + "'");
}

// ---------------------------------------------------------------------------
// Proof-building steps. Each returns a derivation whose root is one rule.

inline Derivation imp_intro(Derivation body, const Term& m) {
  std::vector<Term> hyps;
  for (const auto& h : body.conclusion.hyps) {
    if (!alpha_eq(h, m)) hyps.push_back(h);
  }
  Judgment c = Judgment::truth(body.conclusion.ctx, std::move(hyps), imp(m, body.conclusion.lhs));
  return {"imp-intro", {std::move(body)}, std::move(c)};
}

inline Derivation imp_elim(Derivation f, Derivation a) {
  Term m, n;
  if (!as_imp(f.conclusion.lhs, m, n)) throw TypeError("not an implication: " + to_sexp(f.conclusion.lhs));
  Judgment c = Judgment::truth(f.conclusion.ctx, f.conclusion.hyps, n);
  return {"imp-elim", {std::move(f), std::move(a)}, std::move(c)};
}

/// forall-elim followed by beta-normalization of the instance.
inline Derivation instantiate(Derivation u, const Term& n) {
  const Term& all = u.conclusion.lhs;
  if (all->kind != TermNode::Kind::App || all->fn->kind != TermNode::Kind::All)
    throw TypeError("not a universal: " + to_sexp(all));
  Term inst = app(all->arg, n);
  Judgment c = Judgment::truth(u.conclusion.ctx, u.conclusion.hyps, inst);
  Derivation w = typing(u.conclusion.ctx, n);
  Derivation d{"forall-elim", {std::move(u), std::move(w)}, std::move(c)};
  Term target = detail::beta_normal(inst);
  return alpha_eq(target, inst) ? d : convert(std::move(d), target);
}

/// Proves `all` = forall_T M. `body` receives the extended context and the
/// fresh variable, and proves any term beta-convertible to M x.
inline Derivation forall_intro(const Context& g, const std::vector<Term>& hyps, const Term& all,
                               const std::function<Derivation(const Context&, const Term&)>& body) {
  if (all->kind != TermNode::Kind::App || all->fn->kind != TermNode::Kind::All)
    throw TypeError("not a universal: " + to_sexp(all));
  const Term& m = all->arg;
  const Type& t = all->fn->type;
  std::set<std::string> avoid = free_vars(m);
  for (const auto& [n, ty] : g) avoid.insert(n);
  for (const auto& h : hyps) {
    auto fv = free_vars(h);
    avoid.insert(fv.begin(), fv.end());
  }
  std::string x = fresh_name(m->kind == TermNode::Kind::Lam ? m->name : "x", avoid);
  Context inner = g;
  inner.emplace_back(x, t);
  Derivation b = body(inner, var(x));
  Term goal = app(m, var(x));
  if (!alpha_eq(b.conclusion.lhs, goal)) b = convert(std::move(b), goal);
  return {"forall-intro",
          {typing(g, m), well_formed(g, hyps), std::move(b)},
          Judgment::truth(g, hyps, all)};
}

// ---------------------------------------------------------------------------
// Library

/// |- top
inline Derivation top_intro(const Context& g = {}) {
  return forall_intro(g, {}, top(), [](const Context& ctx, const Term& p) {
    return imp_intro(hypothesis(ctx, {p}, p), p);
  });
}

/// M, N |- M and N
inline Derivation and_intro(const Context& g, const Term& m, const Term& n) {
  std::vector<Term> hyps{m, n};
  return forall_intro(g, hyps, make_and(m, n), [&](const Context& ctx, const Term& p) {
    Term h = imp(m, imp(n, p));
    std::vector<Term> inner{m, n, h};
    Derivation step = imp_elim(hypothesis(ctx, inner, h), hypothesis(ctx, inner, m));
    return imp_intro(imp_elim(std::move(step), hypothesis(ctx, inner, n)), h);
  });
}

/// M and N |- M (first) or N (second)
inline Derivation and_elim(const Context& g, const Term& m, const Term& n, bool first) {
  Term conj = make_and(m, n);
  std::vector<Term> hyps{conj};
  Term goal = first ? m : n;
  Derivation inst = instantiate(hypothesis(g, hyps, conj), goal);
  std::vector<Term> inner{conj, m, n};
  Derivation pick = imp_intro(imp_intro(hypothesis(g, inner, goal), n), m);
  return imp_elim(std::move(inst), std::move(pick));
}

/// M |- M or N (first), N |- M or N (second)
inline Derivation or_intro(const Context& g, const Term& m, const Term& n, bool first) {
  Term given = first ? m : n;
  std::vector<Term> hyps{given};
  return forall_intro(g, hyps, make_or(m, n), [&](const Context& ctx, const Term& p) {
    Term h1 = imp(m, p), h2 = imp(n, p);
    std::vector<Term> inner{given, h1, h2};
    Derivation use = imp_elim(hypothesis(ctx, inner, first ? h1 : h2), hypothesis(ctx, inner, given));
    return imp_intro(imp_intro(std::move(use), h2), h1);
  });
}

/// M or N, M => O, N => O |- O
inline Derivation or_elim(const Context& g, const Term& m, const Term& n, const Term& o) {
  Term disj = make_or(m, n);
  Term l = imp(m, o), r = imp(n, o);
  std::vector<Term> hyps{disj, l, r};
  Derivation inst = instantiate(hypothesis(g, hyps, disj), o);
  return imp_elim(imp_elim(std::move(inst), hypothesis(g, hyps, l)), hypothesis(g, hyps, r));
}

/// P w |- exists (x : T). P x, with P : T -> Prop and w : T in the context.
inline Derivation exists_intro(const Context& g, const Term& pred, const Term& w) {
  Type t = infer_type(g, w);
  std::string x = detail::fresh_for("x", {pred, w});
  Term goal = make_exists(x, t, app(pred, var(x)));
  Term given = app(pred, w);
  std::vector<Term> hyps{given};
  return forall_intro(g, hyps, goal, [&](const Context& ctx, const Term& p) {
    Term h = forall(x, t, imp(app(pred, var(x)), p));
    std::vector<Term> inner{given, h};
    return imp_intro(imp_elim(instantiate(hypothesis(ctx, inner, h), w), hypothesis(ctx, inner, given)), h);
  });
}

/// exists (x : T). P x, forall (x : T). P x => Q |- Q
inline Derivation exists_elim(const Context& g, const Term& pred, const Type& t, const Term& q) {
  std::string x = detail::fresh_for("x", {pred, q});
  Term ex = make_exists(x, t, app(pred, var(x)));
  Term all = forall(x, t, imp(app(pred, var(x)), q));
  std::vector<Term> hyps{ex, all};
  return imp_elim(instantiate(hypothesis(g, hyps, ex), q), hypothesis(g, hyps, all));
}

/// bot |- M
inline Derivation ex_falso(const Context& g, const Term& m) {
  if (!(infer_type(g, m) == Type::prop())) throw TypeError("ex falso needs a proposition");
  Term b = bot();
  Derivation d = instantiate(hypothesis(g, {b}, b), m);
  return alpha_eq(d.conclusion.lhs, m) ? d : convert(std::move(d), m);
}

struct LibraryEntry {
  std::string name;
  Derivation derivation;
};

inline std::vector<LibraryEntry> library() {
  const Type prop = Type::prop();
  const Type i = Type::base("i");
  Term a = var("a"), b = var("b"), c = var("c");
  Context abc{{"a", prop}, {"b", prop}, {"c", prop}};
  Context preds{{"P", Type::arrow(i, prop)}, {"w", i}, {"q", prop}};
  Term pred = var("P");
  return {
      {"top-intro", top_intro()},
      {"and-intro", and_intro(abc, a, b)},
      {"and-elim-left", and_elim(abc, a, b, true)},
      {"and-elim-right", and_elim(abc, a, b, false)},
      {"or-intro-left", or_intro(abc, a, b, true)},
      {"or-intro-right", or_intro(abc, a, b, false)},
      {"or-elim", or_elim(abc, a, b, c)},
      {"exists-intro", exists_intro(preds, pred, var("w"))},
      {"exists-elim", exists_elim(preds, pred, i, var("q"))},
      {"ex-falso", ex_falso(abc, make_and(a, imp(b, c)))},
  };
}

}  // namespace faltertide::hol
