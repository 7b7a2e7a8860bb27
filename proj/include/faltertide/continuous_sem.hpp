#pragma once

// Continuous-time semantics: a formula denotes the set of instants t at which
// the suffix r -> tau(t + r) satisfies it.

#include "faltertide/ast.hpp"
#include "faltertide/interp.hpp"
#include "faltertide/syntax.hpp"
#include "faltertide/timeset.hpp"
#include "faltertide/traces.hpp"
#include "faltertide/verdict.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace faltertide {

struct Denotation {
  TimeSet set;
  bool exact = true;
  TimeSet certain = TimeSet::full();  // instants whose membership bounded search cannot flip
};

namespace detail {

class ContEvaluator {
 public:
  ContEvaluator(const Interpretation& I, const FlexBound& bound) : I_(I), bound_(bound) {}

  std::size_t branches() const { return branches_; }
  bool truncated() const { return truncated_; }

  /// `tau` must be in canonical form.
  Denotation eval(const Formula& f, const RigidEnv& theta, const ContTrace& tau) {
    using K = Formula::Kind;
    switch (f.kind) {
      case K::Atom:
        return exact(per_segment(tau, [&](const State& s, const State* next, const std::vector<std::string>&) {
          return eval_action(I_, f.act(), theta, s, next ? *next : s);
        }, *tau.layout()));
      case K::ActionBox:
        return exact(per_segment(tau, [&](const State& s, const State* next, const std::vector<std::string>&) {
          return next == nullptr || eval_action(I_, f.act(), theta, s, *next);
        }, f.subscript));
      case K::Always: {
        Denotation a = eval(f.sub(), theta, tau);
        if (a.exact) return exact(box(a.set));
        return combine(box(a.set), box(a.set & a.certain) | diamond(difference(a.certain, a.set)));
      }
      case K::Not: {
        Denotation a = eval(f.sub(), theta, tau);
        a.set = complement(a.set);
        return a;
      }
      case K::And:
        return conj(eval(f.sub(0), theta, tau), eval(f.sub(1), theta, tau));
      case K::Forall: {
        RigidEnv inner = theta;
        std::optional<Denotation> acc;
        for (std::uint32_t v = 0; v < I_.domain_size(); ++v) {
          inner[f.name] = Value{v};
          Denotation b = eval(f.sub(), inner, tau);
          acc = acc ? conj(*acc, b) : b;
        }
        return *acc;
      }
      case K::ForallFlex: {
        TimeSet all = TimeSet::full(), refuted = TimeSet::empty();
        for_each_branch(f, tau, [&](const ContTrace& ext) {
          Denotation b = eval(f.sub(), theta, ext);
          all = all & b.set;
          refuted = refuted | difference(b.certain, b.set);
          return true;
        });
        return combine(all, refuted);
      }
      default:
        return eval(desugar(f), theta, tau);
    }
  }

  /// Traces extending canonical `tau` with a stream for the bound variable:
  /// every piece is cut into up to max_stutter_expansion + 1 equal parts.
  template <class Visit>
  bool for_each_branch(const Formula& f, const ContTrace& tau, Visit&& visit) {
    Layout ext_layout = extend_layout(tau.layout(), f.name);
    const auto& pre = tau.segments();
    const auto& cyc = tau.cycle();
    auto e = enumerate_refinements(
        pre.size() + cyc.size(), bound_.max_stutter_expansion, I_.domain_size(), bound_.branch_budget,
        [&](const std::vector<std::size_t>& extra, const std::vector<std::uint32_t>& values) {
          std::vector<Segment> p2, c2;
          std::size_t slot = 0, j = 0;
          for (const auto* part : {&pre, &cyc}) {
            auto& dst = part == &pre ? p2 : c2;
            for (const auto& seg : *part) {
              Rat len = seg.length / Rat(static_cast<long>(extra[slot] + 1));
              for (std::size_t k = 0; k <= extra[slot]; ++k)
                dst.push_back({seg.value.extended(ext_layout, f.name, Value{values[j++]}), len});
              ++slot;
            }
          }
          return visit(ContTrace(ext_layout, std::move(p2), std::move(c2)).canonical());
        });
    branches_ += e.branches;
    truncated_ = truncated_ || e.truncated;
    return !e.stopped;
  }

  /// State after the first change of `vars` strictly after time t; nullopt if none.
  static std::optional<State> next_state(const ContTrace& tau, const Rat& t, const std::vector<std::string>& vars) {
    ContTrace suffix = suffix_cont(tau, t);
    Rat r = next_change(suffix, vars);
    if (r.is_zero()) return std::nullopt;
    return suffix.value_at(r);
  }

 private:
  static Denotation exact(TimeSet s) { return {std::move(s), true, TimeSet::full()}; }

  static Denotation combine(TimeSet s, TimeSet certain) {
    bool ex = certain.is_full();
    return {std::move(s), ex, std::move(certain)};
  }

  static Denotation conj(const Denotation& a, const Denotation& b) {
    if (a.exact && b.exact) return exact(a.set & b.set);
    return combine(a.set & b.set, (a.certain & b.certain) | difference(a.certain, a.set) | difference(b.certain, b.set));
  }

  // Evaluates `pred(state, next)` on every piece, where `next` is the state of
  // the first later piece that differs on `vars` (null if there is none).
  template <class Pred>
  static TimeSet per_segment(const ContTrace& tau, Pred pred, const std::vector<std::string>& vars) {
    const auto& pre = tau.segments();
    const auto& cyc = tau.cycle();
    const std::size_t np = pre.size(), nc = cyc.size();
    auto piece = [&](std::size_t k) -> const Segment& { return k < np ? pre[k] : cyc[(k - np) % nc]; };
    auto value = [&](std::size_t k) {
      const State& s = piece(k).value;
      for (std::size_t m = k + 1; m < std::max(k + 1, np) + nc + 1; ++m) {
        const State& n = piece(m).value;
        if (!s.agrees_on(n, vars)) return pred(s, &n, vars);
      }
      return pred(s, nullptr, vars);
    };
    std::vector<Piece<bool>> p, c;
    for (std::size_t k = 0; k < np; ++k) p.push_back({value(k), pre[k].length});
    for (std::size_t k = 0; k < nc; ++k) c.push_back({value(np + k), cyc[k].length});
    return TimeSet(StepFunction<bool>(std::move(p), std::move(c)));
  }

  const Interpretation& I_;
  FlexBound bound_;
  std::size_t branches_ = 0;
  bool truncated_ = false;
};

class ContExplainer {
 public:
  ContExplainer(const Interpretation& I, ContEvaluator& ev) : I_(I), ev_(ev) {}

  Witness run(const Formula& f, const RigidEnv& theta, const ContTrace& tau) {
    explain(f, theta, tau, Rat(0), false, false);
    return std::move(w_);
  }

 private:
  void note(std::string s) { w_.explanation.push_back(std::move(s)); }

  void locate(const Rat& t, bool nested) {
    if (!nested) w_.time = t;
  }

  std::string change_str(const ContTrace& tau, const Rat& t, const std::vector<std::string>& vars) const {
    auto n = ContEvaluator::next_state(tau, t, vars);
    return state_str(I_, tau.value_at(t)) + " -> " + (n ? state_str(I_, *n) : std::string("(no change)"));
  }

  void explain(const Formula& f, const RigidEnv& theta, const ContTrace& tau, const Rat& t, bool want, bool nested) {
    using K = Formula::Kind;
    switch (f.kind) {
      case K::Atom:
        note("action " + print(f.act()) + " is " + (want ? "true" : "false") + " at time " + t.str() + ": " +
             change_str(tau, t, *tau.layout()));
        locate(t, nested);
        return;
      case K::ActionBox:
        if (want) {
          note(print(f) + " holds at time " + t.str());
          return;
        }
        note(print(f) + " violated at time " + t.str() + ": " + change_str(tau, t, f.subscript));
        locate(t, nested);
        return;
      case K::Always: {
        if (want) {
          note(print(f) + " holds from time " + t.str());
          return;
        }
        TimeSet bad = difference(TimeSet::interval(t), ev_.eval(f.sub(), theta, tau).set);
        auto j = bad.first();
        if (!j) return;
        note("[] fails: " + print(f.sub()) + " is false at time " + j->str());
        locate(*j, nested);
        explain(f.sub(), theta, tau, *j, false, nested);
        return;
      }
      case K::Not:
        explain(f.sub(), theta, tau, t, !want, nested);
        return;
      case K::And: {
        if (want) {
          explain(f.sub(0), theta, tau, t, true, nested);
          explain(f.sub(1), theta, tau, t, true, nested);
          return;
        }
        bool left_false = !ev_.eval(f.sub(0), theta, tau).set.contains(t);
        explain(f.sub(left_false ? 0 : 1), theta, tau, t, false, nested);
        return;
      }
      case K::Forall: {
        RigidEnv inner = theta;
        for (std::uint32_t v = 0; v < I_.domain_size(); ++v) {
          inner[f.name] = Value{v};
          if (ev_.eval(f.sub(), inner, tau).set.contains(t) != want) {
            if (want) return;
            note("\\A " + f.name + " fails for " + f.name + " = " + I_.name(Value{v}));
            explain(f.sub(), inner, tau, t, false, nested);
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
        std::optional<ContTrace> found;
        auto scan = [&](bool need_certain) {
          ev_.for_each_branch(f, tau, [&](const ContTrace& ext) {
            Denotation d = ev_.eval(f.sub(), theta, ext);
            if (d.set.contains(t) || (need_certain && !d.certain.contains(t))) return true;
            found = ext;
            return false;
          });
        };
        scan(true);
        if (!found) scan(false);
        if (!found) return;
        note("\\AA " + f.name + " refuted at time " + t.str() + " by a trace with " +
             std::to_string(found->segments().size() + found->cycle().size()) + " pieces");
        locate(t, nested);
        if (!w_.flex) w_.flex = FlexWitness{f.name, f.sub(), theta, std::nullopt, 0, *found, t};
        explain(f.sub(), theta, *found, t, false, true);
        return;
      }
      default:
        explain(desugar(f), theta, tau, t, want, nested);
        return;
    }
  }

  const Interpretation& I_;
  ContEvaluator& ev_;
  Witness w_;
};

}  // namespace detail

inline Denotation denote(const Interpretation& I, const Formula& T, const RigidEnv& theta, const ContTrace& tau,
                         const FlexBound& bound = {}) {
  detail::check_closed(T, theta, tau.layout());
  detail::ContEvaluator ev(I, bound);
  return ev.eval(is_core(T) ? T : desugar(T), theta, tau.canonical());
}

inline Verdict sat_cont(const Interpretation& I, const Formula& T, const RigidEnv& theta, const ContTrace& tau,
                        const FlexBound& bound = {}) {
  detail::check_closed(T, theta, tau.layout());
  const Formula core = is_core(T) ? T : desugar(T);
  const ContTrace canon = tau.canonical();
  detail::ContEvaluator ev(I, bound);
  Denotation d = ev.eval(core, theta, canon);
  detail::Truth t{d.set.contains(Rat(0)), d.certain.contains(Rat(0))};
  Verdict v = detail::make_verdict(t, has_flexible_quantifier(core));
  v.branches = ev.branches();
  v.truncated = ev.truncated();
  if (!t.value) {
    v.witness = detail::ContExplainer(I, ev).run(core, theta, canon);
    if (v.kind == VerdictKind::False && (v.witness->time || v.witness->flex)) v.kind = VerdictKind::FalseWitnessed;
  }
  return v;
}

inline bool replay_cont(const Interpretation& I, const FlexWitness& w, const FlexBound& bound = {}) {
  if (!w.trace) return false;
  return !denote(I, w.body, w.theta, *w.trace, bound).set.contains(w.time);
}

/// Membership of each sample in the denotation matches satisfaction by the suffix there.
inline bool coherence_check(const Interpretation& I, const Formula& T, const RigidEnv& theta, const ContTrace& tau,
                            const std::vector<Rat>& samples, const FlexBound& bound = {}) {
  const TimeSet d = denote(I, T, theta, tau, bound).set;
  for (const auto& t : samples) {
    if (d.contains(t) != sat_cont(I, T, theta, suffix_cont(tau, t), bound).holds()) return false;
  }
  return true;
}

}  // namespace faltertide
