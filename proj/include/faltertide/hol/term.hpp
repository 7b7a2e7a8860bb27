#pragma once

// Simply typed terms of intuitionistic higher-order logic.

#include <cstddef>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace faltertide::hol {

class TypeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Type {
  enum class Kind { Base, Arrow, Prop };

  Kind kind = Kind::Prop;
  std::string name;         // Base
  std::vector<Type> parts;  // Arrow: domain, codomain

  static Type prop() { return {}; }
  static Type base(std::string n) { return {Kind::Base, std::move(n), {}}; }
  static Type arrow(Type a, Type b) { return {Kind::Arrow, {}, {std::move(a), std::move(b)}}; }

  bool is_arrow() const { return kind == Kind::Arrow; }
  const Type& dom() const { return parts.at(0); }
  const Type& cod() const { return parts.at(1); }

  friend bool operator==(const Type&, const Type&) = default;

  std::string str() const {
    switch (kind) {
      case Kind::Prop: return "Prop";
      case Kind::Base: return name;
      case Kind::Arrow: {
        std::string s = "(-> " + dom().str();
        const Type* t = &cod();
        while (t->is_arrow()) {
          s += " " + t->dom().str();
          t = &t->cod();
        }
        return s + " " + t->str() + ")";
      }
    }
    return {};
  }
};

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
  enum class Kind { Var, Lam, App, Imp, All };

  Kind kind;
  std::string name;  // Var, Lam binder
  Type type;         // Lam binder type, All index type
  Term fn;           // App
  Term arg;          // App; Lam body
};

inline Term var(std::string x) { return std::make_shared<const TermNode>(TermNode{TermNode::Kind::Var, std::move(x), {}, nullptr, nullptr}); }
inline Term lam(std::string x, Type t, Term body) {
  return std::make_shared<const TermNode>(TermNode{TermNode::Kind::Lam, std::move(x), std::move(t), nullptr, std::move(body)});
}
inline Term app(Term f, Term a) {
  return std::make_shared<const TermNode>(TermNode{TermNode::Kind::App, {}, {}, std::move(f), std::move(a)});
}
inline Term imp_const() { return std::make_shared<const TermNode>(TermNode{TermNode::Kind::Imp, {}, {}, nullptr, nullptr}); }
inline Term all_const(Type t) {
  return std::make_shared<const TermNode>(TermNode{TermNode::Kind::All, {}, std::move(t), nullptr, nullptr});
}

/// M => N
inline Term imp(Term m, Term n) { return app(app(imp_const(), std::move(m)), std::move(n)); }
/// forall (x : T). M
inline Term forall(std::string x, Type t, Term m) { return app(all_const(t), lam(std::move(x), t, std::move(m))); }

inline const Term& body(const Term& lam_term) { return lam_term->arg; }

/// Matches M => N, returning {M, N}.
inline bool as_imp(const Term& t, Term& m, Term& n) {
  if (t->kind != TermNode::Kind::App || t->fn->kind != TermNode::Kind::App) return false;
  if (t->fn->fn->kind != TermNode::Kind::Imp) return false;
  m = t->fn->arg;
  n = t->arg;
  return true;
}

using Context = std::vector<std::pair<std::string, Type>>;

inline const Type* lookup(const Context& ctx, const std::string& x) {
  for (auto it = ctx.rbegin(); it != ctx.rend(); ++it) {
    if (it->first == x) return &it->second;
  }
  return nullptr;
}

inline Type infer_type(const Context& ctx, const Term& m) {
  using K = TermNode::Kind;
  switch (m->kind) {
    case K::Var: {
      const Type* t = lookup(ctx, m->name);
      if (!t) throw TypeError("unbound variable '" + m->name + "'");
      return *t;
    }
    case K::Lam: {
      Context inner = ctx;
      inner.emplace_back(m->name, m->type);
      return Type::arrow(m->type, infer_type(inner, m->arg));
    }
    case K::App: {
      Type f = infer_type(ctx, m->fn);
      Type a = infer_type(ctx, m->arg);
      if (!f.is_arrow()) throw TypeError("applying a term of non-function type " + f.str());
      if (!(f.dom() == a)) throw TypeError("argument of type " + a.str() + " where " + f.dom().str() + " is expected");
      return f.cod();
    }
    case K::Imp:
      return Type::arrow(Type::prop(), Type::arrow(Type::prop(), Type::prop()));
    case K::All:
      return Type::arrow(Type::arrow(m->type, Type::prop()), Type::prop());
  }
  throw TypeError("malformed term");
}

inline void collect_free(const Term& m, std::set<std::string>& bound, std::set<std::string>& out) {
  using K = TermNode::Kind;
  switch (m->kind) {
    case K::Var:
      if (!bound.count(m->name)) out.insert(m->name);
      return;
    case K::Lam: {
      bool fresh = bound.insert(m->name).second;
      collect_free(m->arg, bound, out);
      if (fresh) bound.erase(m->name);
      return;
    }
    case K::App:
      collect_free(m->fn, bound, out);
      collect_free(m->arg, bound, out);
      return;
    default:
      return;
  }
}

inline std::set<std::string> free_vars(const Term& m) {
  std::set<std::string> bound, out;
  collect_free(m, bound, out);
  return out;
}

inline bool occurs_free(const Term& m, const std::string& x) { return free_vars(m).count(x) > 0; }

/// `base` or `base_k` for the least k making it absent from `avoid`.
inline std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  std::string stem = base;
  auto us = stem.rfind('_');
  if (us != std::string::npos && us + 1 < stem.size() &&
      stem.find_first_not_of("0123456789", us + 1) == std::string::npos)
    stem = stem.substr(0, us);
  for (std::size_t k = 1;; ++k) {
    std::string c = stem + "_" + std::to_string(k);
    if (!avoid.count(c)) return c;
  }
}

/// M<N/x>, renaming binders that would capture free variables of N.
inline Term subst(const Term& m, const std::string& x, const Term& n) {
  using K = TermNode::Kind;
  switch (m->kind) {
    case K::Var:
      return m->name == x ? n : m;
    case K::App: {
      Term f = subst(m->fn, x, n), a = subst(m->arg, x, n);
      if (f == m->fn && a == m->arg) return m;
      return app(f, a);
    }
    case K::Lam: {
      if (m->name == x) return m;
      auto fv_n = free_vars(n);
      if (!occurs_free(m->arg, x)) return m;
      if (!fv_n.count(m->name)) return lam(m->name, m->type, subst(m->arg, x, n));
      std::set<std::string> avoid = fv_n;
      auto fv_b = free_vars(m->arg);
      avoid.insert(fv_b.begin(), fv_b.end());
      avoid.insert(x);
      std::string y = fresh_name(m->name, avoid);
      return lam(y, m->type, subst(subst(m->arg, m->name, var(y)), x, n));
    }
    default:
      return m;
  }
}

namespace detail {

inline bool alpha_eq(const Term& a, const Term& b, std::vector<std::pair<std::string, std::string>>& env) {
  using K = TermNode::Kind;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case K::Var:
      for (auto it = env.rbegin(); it != env.rend(); ++it) {
        if (it->first == a->name || it->second == b->name) return it->first == a->name && it->second == b->name;
      }
      return a->name == b->name;
    case K::Lam: {
      if (!(a->type == b->type)) return false;
      env.emplace_back(a->name, b->name);
      bool r = alpha_eq(a->arg, b->arg, env);
      env.pop_back();
      return r;
    }
    case K::App:
      return alpha_eq(a->fn, b->fn, env) && alpha_eq(a->arg, b->arg, env);
    case K::Imp:
      return true;
    case K::All:
      return a->type == b->type;
  }
  return false;
}

inline Term beta_normal(const Term& m) {
  using K = TermNode::Kind;
  switch (m->kind) {
    case K::Lam: {
      Term b = beta_normal(m->arg);
      return b == m->arg ? m : lam(m->name, m->type, b);
    }
    case K::App: {
      Term f = beta_normal(m->fn);
      if (f->kind == K::Lam) return beta_normal(subst(f->arg, f->name, m->arg));
      Term a = beta_normal(m->arg);
      return f == m->fn && a == m->arg ? m : app(f, a);
    }
    default:
      return m;
  }
}

inline Term eta_reduce(const Term& m) {
  using K = TermNode::Kind;
  switch (m->kind) {
    case K::Lam: {
      Term b = eta_reduce(m->arg);
      if (b->kind == K::App && b->arg->kind == K::Var && b->arg->name == m->name && !occurs_free(b->fn, m->name))
        return b->fn;
      return b == m->arg ? m : lam(m->name, m->type, b);
    }
    case K::App: {
      Term f = eta_reduce(m->fn), a = eta_reduce(m->arg);
      return f == m->fn && a == m->arg ? m : app(f, a);
    }
    default:
      return m;
  }
}

}  // namespace detail

inline bool alpha_eq(const Term& a, const Term& b) {
  std::vector<std::pair<std::string, std::string>> env;
  return detail::alpha_eq(a, b, env);
}

/// beta-eta normal form of a well-typed term.
inline Term normalize(const Term& m) { return detail::eta_reduce(detail::beta_normal(m)); }

/// Definitional equality at type t; throws TypeError if either side is not of type t.
inline bool def_eq(const Context& ctx, const Term& m, const Term& n, const Type& t) {
  Type tm = infer_type(ctx, m), tn = infer_type(ctx, n);
  if (!(tm == t)) throw TypeError("left side has type " + tm.str() + ", not " + t.str());
  if (!(tn == t)) throw TypeError("right side has type " + tn.str() + ", not " + t.str());
  return alpha_eq(normalize(m), normalize(n));
}

/// S-expression rendering, e.g. (forall (p Prop) (=> p p)).
inline std::string to_sexp(const Term& m) {
  using K = TermNode::Kind;
  switch (m->kind) {
    case K::Var: return m->name;
    case K::Imp: return "=>";
    case K::All: return "(all " + m->type.str() + ")";
    case K::Lam: return "(lam (" + m->name + " " + m->type.str() + ") " + to_sexp(m->arg) + ")";
    case K::App: {
      if (m->fn->kind == K::All && m->arg->kind == K::Lam && m->arg->type == m->fn->type)
        return "(forall (" + m->arg->name + " " + m->arg->type.str() + ") " + to_sexp(m->arg->arg) + ")";
      std::vector<const Term*> args;
      const Term* h = &m;
      while ((*h)->kind == K::App) {
        args.push_back(&(*h)->arg);
        h = &(*h)->fn;
      }
      std::string s = "(" + to_sexp(*h);
      for (auto it = args.rbegin(); it != args.rend(); ++it) s += " " + to_sexp(**it);
      return s + ")";
    }
  }
  return {};
}

}  // namespace faltertide::hol
