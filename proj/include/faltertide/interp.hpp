#pragma once

// Finite first-order structures and term/action evaluation over a pair of states.

#include "faltertide/ast.hpp"
#include "faltertide/traces.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace faltertide {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Signature {
  std::map<std::string, std::size_t> functions;
  std::map<std::string, std::size_t> relations;
  std::vector<std::string> flexible;  // sorted
  std::set<std::string> rigid;        // free rigid names the model binds
  std::set<std::string> constants;    // domain elements, usable as 0-ary functions

  bool is_flexible(const std::string& n) const { return std::binary_search(flexible.begin(), flexible.end(), n); }
  bool is_constant(const std::string& n) const {
    auto it = functions.find(n);
    return constants.count(n) || (it != functions.end() && it->second == 0);
  }
};

/// Function table: flat, first argument most significant.
struct FunctionTable {
  std::size_t arity = 0;
  std::vector<Value> table;
};

struct RelationTable {
  std::size_t arity = 0;
  std::vector<bool> table;
};

class Interpretation {
 public:
  Interpretation() = default;

  Interpretation(std::vector<std::string> domain, std::map<std::string, FunctionTable> functions,
                 std::map<std::string, RelationTable> relations)
      : domain_(std::move(domain)), functions_(std::move(functions)), relations_(std::move(relations)) {
    if (domain_.empty()) throw std::invalid_argument("domain must be nonempty");
    std::set<std::string> seen;
    for (const auto& d : domain_) {
      if (!seen.insert(d).second) throw std::invalid_argument("duplicate domain element '" + d + "'");
    }
    for (const auto& [name, f] : functions_) {
      if (relations_.count(name)) throw std::invalid_argument("symbol '" + name + "' is both function and relation");
      if (f.table.size() != cells(f.arity)) throw std::invalid_argument("function '" + name + "' table is not total");
      for (auto v : f.table) {
        if (v.index >= domain_.size()) throw std::invalid_argument("function '" + name + "' leaves the domain");
      }
    }
    for (const auto& [name, r] : relations_) {
      if (r.table.size() != cells(r.arity)) throw std::invalid_argument("relation '" + name + "' table is not total");
    }
  }

  const std::vector<std::string>& domain() const { return domain_; }
  std::size_t domain_size() const { return domain_.size(); }
  const std::map<std::string, FunctionTable>& functions() const { return functions_; }
  const std::map<std::string, RelationTable>& relations() const { return relations_; }

  std::optional<Value> element(const std::string& name) const {
    auto it = std::find(domain_.begin(), domain_.end(), name);
    if (it == domain_.end()) return std::nullopt;
    return Value{static_cast<std::uint32_t>(it - domain_.begin())};
  }

  const std::string& name(Value v) const { return domain_.at(v.index); }

  Value apply(const std::string& f, const std::vector<Value>& args) const {
    auto it = functions_.find(f);
    if (it == functions_.end()) {
      if (args.empty()) {
        if (auto e = element(f)) return *e;
      }
      throw EvalError("unknown function symbol '" + f + "'");
    }
    if (args.size() != it->second.arity) throw EvalError("arity mismatch for '" + f + "'");
    return it->second.table[offset(args)];
  }

  bool holds(const std::string& r, const std::vector<Value>& args) const {
    auto it = relations_.find(r);
    if (it == relations_.end()) throw EvalError("unknown relation symbol '" + r + "'");
    if (args.size() != it->second.arity) throw EvalError("arity mismatch for '" + r + "'");
    return it->second.table[offset(args)];
  }

  std::size_t cells(std::size_t arity) const {
    std::size_t n = 1;
    for (std::size_t i = 0; i < arity; ++i) n *= domain_.size();
    return n;
  }

 private:
  std::size_t offset(const std::vector<Value>& args) const {
    std::size_t k = 0;
    for (auto v : args) k = k * domain_.size() + v.index;
    return k;
  }

  std::vector<std::string> domain_;
  std::map<std::string, FunctionTable> functions_;
  std::map<std::string, RelationTable> relations_;
};

using RigidEnv = std::map<std::string, Value>;

/// An interpretation together with its flexible variables and rigid bindings.
struct Model {
  Interpretation interp;
  Layout flexible = make_layout({});
  RigidEnv rigid;

  Signature signature() const {
    Signature s;
    for (const auto& [n, f] : interp.functions()) s.functions[n] = f.arity;
    for (const auto& [n, r] : interp.relations()) s.relations[n] = r.arity;
    s.flexible = *flexible;
    for (const auto& [n, v] : rigid) s.rigid.insert(n);
    s.constants.insert(interp.domain().begin(), interp.domain().end());
    return s;
  }
};

inline Value eval_term(const Interpretation& I, const Term& e, const RigidEnv& theta, const State& s,
                       const State& s_next) {
  switch (e.kind) {
    case Term::Kind::Rigid: {
      auto it = theta.find(e.name);
      if (it == theta.end()) throw EvalError("unbound rigid variable '" + e.name + "'");
      return it->second;
    }
    case Term::Kind::Flex:
      return s.get(e.name);
    case Term::Kind::Primed:
      return s_next.get(e.name);
    case Term::Kind::Apply: {
      std::vector<Value> args;
      args.reserve(e.args.size());
      for (const auto& a : e.args) args.push_back(eval_term(I, a, theta, s, s_next));
      return I.apply(e.name, args);
    }
  }
  throw EvalError("malformed term");
}

inline bool eval_action(const Interpretation& I, const Action& a, const RigidEnv& theta, const State& s,
                        const State& s_next) {
  using K = Action::Kind;
  switch (a.kind) {
    case K::Rel: {
      std::vector<Value> args;
      args.reserve(a.terms.size());
      for (const auto& t : a.terms) args.push_back(eval_term(I, t, theta, s, s_next));
      return I.holds(a.name, args);
    }
    case K::Eq:
      return eval_term(I, a.terms.at(0), theta, s, s_next) == eval_term(I, a.terms.at(1), theta, s, s_next);
    case K::Not:
      return !eval_action(I, a.sub(), theta, s, s_next);
    case K::And:
      return eval_action(I, a.sub(0), theta, s, s_next) && eval_action(I, a.sub(1), theta, s, s_next);
    case K::Or:
      return eval_action(I, a.sub(0), theta, s, s_next) || eval_action(I, a.sub(1), theta, s, s_next);
    case K::Implies:
      return !eval_action(I, a.sub(0), theta, s, s_next) || eval_action(I, a.sub(1), theta, s, s_next);
    case K::Forall:
    case K::Exists: {
      bool universal = a.kind == K::Forall;
      RigidEnv inner = theta;
      for (std::uint32_t v = 0; v < I.domain_size(); ++v) {
        inner[a.name] = Value{v};
        if (eval_action(I, a.sub(), inner, s, s_next) != universal) return !universal;
      }
      return universal;
    }
  }
  throw EvalError("malformed action");
}

}  // namespace faltertide
