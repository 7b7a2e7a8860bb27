#pragma once

// Discrete-time satisfaction over lasso behaviors.
//
// Every subformula is evaluated once per lasso position: a position in the
// cycle stands for all of its later repetitions, so the result vector is the
// memo of satisfaction by each distinct suffix.

#include "faltertide/ast.hpp"
#include "faltertide/interp.hpp"
#include "faltertide/syntax.hpp"
#include "faltertide/traces.hpp"
#include "faltertide/verdict.hpp"

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace faltertide {

namespace detail {

using Truths = std::vector<Truth>;

class DiscEvaluator {
 public:
  DiscEvaluator(const Interpretation& I, const FlexBound& bound) : I_(I), bound_(bound) {}

  std::size_t branches() const { return branches_; }
  bool truncated() const { return truncated_; }

  Truths eval(const Formula& f, const RigidEnv& theta, const DiscreteBehavior& rho) {
    using K = Formula::Kind;
    const std::size_t L = rho.size();
    Truths out(L);
    switch (f.kind) {
      case K::Atom:
        for (std::size_t i = 0; i < L; ++i)
          out[i].value = eval_action(I_, f.act(), theta, rho.at(i), rho.at(rho.successor(i)));
        return out;
      case K::ActionBox: {
        Truths step(L);
        for (std::size_t i = 0; i < L; ++i) step[i].value = step_ok(f, theta, rho, i);
        return always(step, rho);
      }
      case K::Always:
        return always(eval(f.sub(), theta, rho), rho);
      case K::Not:
        out = eval(f.sub(), theta, rho);
        for (auto& t : out) t.value = !t.value;
        return out;
      case K::And: {
        out = eval(f.sub(0), theta, rho);
        Truths b = eval(f.sub(1), theta, rho);
        for (std::size_t i = 0; i < L; ++i) out[i] = truth_and(out[i], b[i]);
        return out;
      }
      case K::Forall: {
        RigidEnv inner = theta;
        for (std::uint32_t v = 0; v < I_.domain_size(); ++v) {
          inner[f.name] = Value{v};
          Truths b = eval(f.sub(), inner, rho);
          for (std::size_t i = 0; i < L; ++i) out[i] = v == 0 ? b[i] : truth_and(out[i], b[i]);
        }
        return out;
      }
      case K::ForallFlex: {
        std::vector<bool> refuted(L, false);
        for_each_branch(f, rho, [&](const DiscreteBehavior& ext, const std::vector<std::size_t>& first) {
          Truths b = eval(f.sub(), theta, ext);
          for (std::size_t i = 0; i < L; ++i) {
            const Truth& t = b[first[i]];
            out[i].value = out[i].value && t.value;
            if (!t.value && t.certain) refuted[i] = true;
          }
          return true;
        });
        for (std::size_t i = 0; i < L; ++i) out[i].certain = refuted[i];
        return out;
      }
      default:
        return eval(desugar(f), theta, rho);
    }
  }

  /// Extended behaviors for a flexible quantifier over `rho`, with the first
  /// copy of each original position. Returns false if `visit` stopped early.
  template <class Visit>
  bool for_each_branch(const Formula& f, const DiscreteBehavior& rho, Visit&& visit) {
    Layout ext_layout = extend_layout(rho.layout(), f.name);
    auto e = enumerate_refinements(
        rho.size(), bound_.max_stutter_expansion, I_.domain_size(), bound_.branch_budget,
        [&](const std::vector<std::size_t>& extra, const std::vector<std::uint32_t>& values) {
          auto [expanded, first] = expand_disc(rho, extra);
          std::vector<State> pre, cyc;
          std::size_t j = 0;
          for (const auto& s : expanded.prefix()) pre.push_back(s.extended(ext_layout, f.name, Value{values[j++]}));
          for (const auto& s : expanded.cycle()) cyc.push_back(s.extended(ext_layout, f.name, Value{values[j++]}));
          return visit(DiscreteBehavior(ext_layout, std::move(pre), std::move(cyc)), first);
        });
    branches_ += e.branches;
    truncated_ = truncated_ || e.truncated;
    return !e.stopped;
  }

  bool step_ok(const Formula& box, const RigidEnv& theta, const DiscreteBehavior& rho, std::size_t i) const {
    const State& s = rho.at(i);
    const State& t = rho.at(rho.successor(i));
    return s.agrees_on(t, box.subscript) || eval_action(I_, box.act(), theta, s, t);
  }

  /// First position at or after i (in visiting order) where `xs` is false.
  static std::optional<std::size_t> first_false(const Truths& xs, const DiscreteBehavior& rho, std::size_t i) {
    std::size_t from = std::min(i, rho.prefix().size());
    for (std::size_t j = std::max(from, i); j < xs.size(); ++j) {
      if (!xs[j].value) return j;
    }
    for (std::size_t j = from; j < i && j < xs.size(); ++j) {
      if (!xs[j].value) return j;
    }
    return std::nullopt;
  }

 private:
  static Truths always(const Truths& sub, const DiscreteBehavior& rho) {
    const std::size_t L = sub.size(), P = rho.prefix().size();
    // Suffix fold: value AND, plus "every value certain" and "some certain false".
    std::vector<Truth> fold(L + 1);
    std::vector<bool> all_certain(L + 1, true), some_refuted(L + 1, false);
    fold[L] = {true, true};
    for (std::size_t j = L; j-- > 0;) {
      fold[j].value = fold[j + 1].value && sub[j].value;
      all_certain[j] = all_certain[j + 1] && sub[j].certain;
      some_refuted[j] = some_refuted[j + 1] || (!sub[j].value && sub[j].certain);
    }
    Truths out(L);
    for (std::size_t i = 0; i < L; ++i) {
      std::size_t from = std::min(i, P);
      out[i].value = fold[from].value;
      out[i].certain = all_certain[from] || some_refuted[from];
    }
    return out;
  }

  const Interpretation& I_;
  FlexBound bound_;
  std::size_t branches_ = 0;
  bool truncated_ = false;
};

class DiscExplainer {
 public:
  DiscExplainer(const Interpretation& I, DiscEvaluator& ev) : I_(I), ev_(ev) {}

  Witness run(const Formula& f, const RigidEnv& theta, const DiscreteBehavior& rho) {
    explain(f, theta, rho, 0, false, false);
    return std::move(w_);
  }

 private:
  void note(std::string s) { w_.explanation.push_back(std::move(s)); }

  void locate(std::size_t i, bool nested) {
    if (!nested) w_.position = i;
  }

  std::string step_str(const DiscreteBehavior& rho, std::size_t i) const {
    return "step " + std::to_string(i) + " -> " + std::to_string(rho.successor(i)) + ": " +
           state_str(I_, rho.at(i)) + " -> " + state_str(I_, rho.at(rho.successor(i)));
  }

  void explain(const Formula& f, const RigidEnv& theta, const DiscreteBehavior& rho, std::size_t i, bool want,
               bool nested) {
    using K = Formula::Kind;
    switch (f.kind) {
      case K::Atom:
        note("action " + print(f.act()) + " is " + (want ? "true" : "false") + " at " + step_str(rho, i));
        locate(i, nested);
        return;
      case K::ActionBox: {
        if (want) {
          note(print(f) + " holds from position " + std::to_string(i));
          return;
        }
        Truths step(rho.size());
        for (std::size_t j = 0; j < rho.size(); ++j) step[j].value = ev_.step_ok(f, theta, rho, j);
        auto j = DiscEvaluator::first_false(step, rho, i);
        if (!j) return;
        note(print(f) + " violated at " + step_str(rho, *j));
        locate(*j, nested);
        return;
      }
      case K::Always: {
        if (want) {
          note(print(f) + " holds from position " + std::to_string(i));
          return;
        }
        auto j = DiscEvaluator::first_false(ev_.eval(f.sub(), theta, rho), rho, i);
        if (!j) return;
        note("[] fails: " + print(f.sub()) + " is false at position " + std::to_string(*j));
        locate(*j, nested);
        explain(f.sub(), theta, rho, *j, false, nested);
        return;
      }
      case K::Not:
        explain(f.sub(), theta, rho, i, !want, nested);
        return;
      case K::And: {
        if (want) {
          explain(f.sub(0), theta, rho, i, true, nested);
          explain(f.sub(1), theta, rho, i, true, nested);
          return;
        }
        bool left_false = !ev_.eval(f.sub(0), theta, rho)[i].value;
        explain(f.sub(left_false ? 0 : 1), theta, rho, i, false, nested);
        return;
      }
      case K::Forall: {
        RigidEnv inner = theta;
        for (std::uint32_t v = 0; v < I_.domain_size(); ++v) {
          inner[f.name] = Value{v};
          if (ev_.eval(f.sub(), inner, rho)[i].value != want) {
            if (want) return;
            note("\\A " + f.name + " fails for " + f.name + " = " + I_.name(Value{v}));
            explain(f.sub(), inner, rho, i, false, nested);
            return;
          }
        }
        if (want) note("\\A " + f.name + " holds for every value");
        return;
      }
      case K::ForallFlex: {
        if (want) {
          note("\\AA " + f.name + ": no counter-witness within bound");
          return;
        }
        std::optional<FlexWitness> found;
        auto scan = [&](bool need_certain) {
          ev_.for_each_branch(f, rho, [&](const DiscreteBehavior& ext, const std::vector<std::size_t>& first) {
            Truth t = ev_.eval(f.sub(), theta, ext)[first[i]];
            if (t.value || (need_certain && !t.certain)) return true;
            found = FlexWitness{f.name, f.sub(), theta, ext, first[i], std::nullopt, Rat(0)};
            return false;
          });
        };
        scan(true);
        if (!found) scan(false);
        if (!found) return;
        note("\\AA " + f.name + " refuted by an expanded behavior of length " +
             std::to_string(found->behavior->size()) + " at position " + std::to_string(found->position));
        locate(i, nested);
        FlexWitness fw = *found;
        if (!w_.flex) w_.flex = fw;
        explain(fw.body, theta, *fw.behavior, fw.position, false, true);
        return;
      }
      default:
        explain(desugar(f), theta, rho, i, want, nested);
        return;
    }
  }

  const Interpretation& I_;
  DiscEvaluator& ev_;
  Witness w_;
};

}  // namespace detail

/// Satisfaction by the suffix at every lasso position.
inline std::vector<bool> satisfaction_disc(const Interpretation& I, const Formula& P, const RigidEnv& theta,
                                           const DiscreteBehavior& rho, const FlexBound& bound = {}) {
  detail::check_closed(P, theta, rho.layout());
  detail::DiscEvaluator ev(I, bound);
  auto t = ev.eval(P, theta, rho);
  std::vector<bool> out;
  for (const auto& x : t) out.push_back(x.value);
  return out;
}

inline Verdict eval_disc(const Interpretation& I, const Formula& P, const RigidEnv& theta,
                         const DiscreteBehavior& rho, const FlexBound& bound = {}) {
  detail::check_closed(P, theta, rho.layout());
  const Formula core = is_core(P) ? P : desugar(P);
  detail::DiscEvaluator ev(I, bound);
  detail::Truth t = ev.eval(core, theta, rho)[0];
  Verdict v = detail::make_verdict(t, has_flexible_quantifier(core));
  v.branches = ev.branches();
  v.truncated = ev.truncated();
  if (!t.value) {
    v.witness = detail::DiscExplainer(I, ev).run(core, theta, rho);
    if (v.kind == VerdictKind::False && (v.witness->position || v.witness->flex))
      v.kind = VerdictKind::FalseWitnessed;
  }
  return v;
}

/// Re-evaluates a flexible-quantifier witness; true when the body is still false there.
inline bool replay_disc(const Interpretation& I, const FlexWitness& w, const FlexBound& bound = {}) {
  if (!w.behavior) return false;
  detail::DiscEvaluator ev(I, bound);
  detail::Truth t = ev.eval(w.body, w.theta, *w.behavior).at(w.position);
  return !t.value;
}

/// A random member of rho's stuttering class: the cycle may be unrolled and
/// every position repeated up to `max_extra` more times.
template <class Rng>
DiscreteBehavior random_stutter_expansion(const DiscreteBehavior& rho, Rng& rng, std::size_t max_extra = 2) {
  std::uniform_int_distribution<std::size_t> coin(0, 1), reps(0, max_extra);
  std::vector<State> pre = rho.prefix(), cyc = rho.cycle();
  if (coin(rng)) pre.insert(pre.end(), rho.cycle().begin(), rho.cycle().end());
  if (coin(rng)) cyc.insert(cyc.end(), rho.cycle().begin(), rho.cycle().end());
  DiscreteBehavior unrolled(rho.layout(), std::move(pre), std::move(cyc));
  std::vector<std::size_t> extra(unrolled.size());
  for (auto& e : extra) e = reps(rng);
  return expand_disc(unrolled, extra).first;
}

/// Checks that `eval(P, theta, rho')` agrees with `eval(P, theta, rho)` on
/// `trials` random stutter expansions rho'. `eval` returns the truth value.
template <class Eval, class Rng>
bool check_stutter_invariance_disc(const Formula& P, const RigidEnv& theta, const DiscreteBehavior& rho,
                                   std::size_t trials, Rng& rng, Eval&& eval) {
  const bool expected = eval(P, theta, rho);
  for (std::size_t k = 0; k < trials; ++k) {
    if (eval(P, theta, random_stutter_expansion(rho, rng)) != expected) return false;
  }
  return true;
}

template <class Rng>
bool check_stutter_invariance_disc(const Interpretation& I, const Formula& P, const RigidEnv& theta,
                                   const DiscreteBehavior& rho, std::size_t trials, Rng& rng,
                                   const FlexBound& bound = {}) {
  return check_stutter_invariance_disc(P, theta, rho, trials, rng,
                                       [&](const Formula& f, const RigidEnv& th, const DiscreteBehavior& r) {
                                         return eval_disc(I, f, th, r, bound).holds();
                                       });
}

}  // namespace faltertide
