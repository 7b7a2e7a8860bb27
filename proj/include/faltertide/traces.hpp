#pragma once

#include "faltertide/rational.hpp"
#include "faltertide/reparam.hpp"
#include "faltertide/step_function.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace faltertide {

/// An element of the interpretation's finite domain, by position in the domain list.
struct Value {
  std::uint32_t index = 0;
  friend auto operator<=>(const Value&, const Value&) = default;
};

/// Sorted, duplicate-free flexible variable names shared by all states of a trace.
using Layout = std::shared_ptr<const std::vector<std::string>>;

inline Layout make_layout(std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end())
    throw std::invalid_argument("duplicate flexible variable");
  return std::make_shared<const std::vector<std::string>>(std::move(names));
}

inline bool same_layout(const Layout& a, const Layout& b) { return a == b || *a == *b; }

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Total assignment of values to the variables of a layout.
class State {
 public:
  State() = default;
  State(Layout layout, std::vector<Value> values) : layout_(std::move(layout)), values_(std::move(values)) {
    if (!layout_ || layout_->size() != values_.size())
      throw TraceError("state does not assign exactly the declared variables");
  }

  const Layout& layout() const { return layout_; }
  const std::vector<Value>& values() const { return values_; }

  std::optional<std::size_t> slot(const std::string& var) const {
    auto it = std::lower_bound(layout_->begin(), layout_->end(), var);
    if (it == layout_->end() || *it != var) return std::nullopt;
    return static_cast<std::size_t>(it - layout_->begin());
  }

  Value get(const std::string& var) const {
    auto s = slot(var);
    if (!s) throw TraceError("unknown flexible variable '" + var + "'");
    return values_[*s];
  }

  /// This state plus one more variable; `layout` must be the extended layout.
  State extended(const Layout& layout, const std::string& var, Value v) const {
    std::vector<Value> vals;
    vals.reserve(layout->size());
    std::size_t j = 0;
    for (const auto& name : *layout) {
      if (name == var) {
        vals.push_back(v);
      } else {
        vals.push_back(values_.at(j++));
      }
    }
    return State(layout, std::move(vals));
  }

  /// Agreement on the given variables.
  bool agrees_on(const State& other, const std::vector<std::string>& vars) const {
    for (const auto& v : vars) {
      if (get(v) != other.get(v)) return false;
    }
    return true;
  }

  friend bool operator==(const State& a, const State& b) { return a.values_ == b.values_; }
  friend auto operator<=>(const State& a, const State& b) { return a.values_ <=> b.values_; }

 private:
  Layout layout_;
  std::vector<Value> values_;
};

inline Layout extend_layout(const Layout& base, const std::string& var) {
  std::vector<std::string> names = *base;
  if (std::find(names.begin(), names.end(), var) != names.end())
    throw TraceError("flexible variable '" + var + "' already present");
  names.push_back(var);
  return make_layout(std::move(names));
}

// ---------------------------------------------------------------------------
// Discrete behaviors

/// Lasso: rho(n) = prefix[n] for n < |prefix|, then the cycle repeats forever.
class DiscreteBehavior {
 public:
  DiscreteBehavior(Layout layout, std::vector<State> prefix, std::vector<State> cycle)
      : layout_(std::move(layout)), prefix_(std::move(prefix)), cycle_(std::move(cycle)) {
    if (cycle_.empty()) throw TraceError("behavior cycle must be nonempty");
    for (const auto* part : {&prefix_, &cycle_}) {
      for (const auto& s : *part) {
        if (!same_layout(s.layout(), layout_)) throw TraceError("behavior state over the wrong variables");
      }
    }
  }

  const Layout& layout() const { return layout_; }
  const std::vector<State>& prefix() const { return prefix_; }
  const std::vector<State>& cycle() const { return cycle_; }

  /// Number of distinct suffixes (positions modulo the cycle).
  std::size_t size() const { return prefix_.size() + cycle_.size(); }

  /// Reduces a position to its representative in [0, size()).
  std::size_t reduce(std::size_t n) const {
    if (n < prefix_.size()) return n;
    return prefix_.size() + (n - prefix_.size()) % cycle_.size();
  }

  /// Representative of position n + 1.
  std::size_t successor(std::size_t n) const { return reduce(reduce(n) + 1); }

  const State& at(std::size_t n) const {
    std::size_t r = reduce(n);
    return r < prefix_.size() ? prefix_[r] : cycle_[r - prefix_.size()];
  }

  friend bool operator==(const DiscreteBehavior& a, const DiscreteBehavior& b) {
    return *a.layout_ == *b.layout_ && a.prefix_ == b.prefix_ && a.cycle_ == b.cycle_;
  }

 private:
  Layout layout_;
  std::vector<State> prefix_;
  std::vector<State> cycle_;
};

/// m -> rho(n + m).
inline DiscreteBehavior suffix_disc(const DiscreteBehavior& rho, std::size_t n) {
  const auto& pre = rho.prefix();
  const auto& cyc = rho.cycle();
  if (n <= pre.size())
    return DiscreteBehavior(rho.layout(), std::vector<State>(pre.begin() + static_cast<std::ptrdiff_t>(n), pre.end()), cyc);
  std::size_t k = (n - pre.size()) % cyc.size();
  std::vector<State> rotated(cyc.begin() + static_cast<std::ptrdiff_t>(k), cyc.end());
  rotated.insert(rotated.end(), cyc.begin(), cyc.begin() + static_cast<std::ptrdiff_t>(k));
  return DiscreteBehavior(rho.layout(), {}, std::move(rotated));
}

/// Canonical representative of the stuttering class: no two consecutive equal
/// states anywhere in the infinite word, shortest cycle, shortest prefix.
inline DiscreteBehavior destutter_disc(const DiscreteBehavior& rho) {
  auto collapse = [](const std::vector<State>& xs) {
    std::vector<State> out;
    for (const auto& s : xs) {
      if (out.empty() || !(out.back() == s)) out.push_back(s);
    }
    return out;
  };
  std::vector<State> cyc = collapse(rho.cycle());
  while (cyc.size() > 1 && cyc.front() == cyc.back()) cyc.pop_back();
  // Minimal cycle: smallest divisor period of the cyclic word.
  const std::size_t n = cyc.size();
  for (std::size_t step = 1; step <= n; ++step) {
    if (n % step != 0) continue;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) ok = cyc[i] == cyc[(i + step) % n];
    if (ok) {
      cyc.resize(step);
      break;
    }
  }
  std::vector<State> pre = collapse(rho.prefix());
  for (;;) {
    if (!pre.empty() && pre.back() == cyc.front()) {
      pre.pop_back();
      continue;
    }
    if (!pre.empty() && pre.back() == cyc.back()) {
      std::rotate(cyc.rbegin(), cyc.rbegin() + 1, cyc.rend());
      pre.pop_back();
      continue;
    }
    break;
  }
  return DiscreteBehavior(rho.layout(), std::move(pre), std::move(cyc));
}

inline void require_same_variables(const Layout& a, const Layout& b) {
  if (!same_layout(a, b)) throw TraceError("traces are over different variable sets");
}

/// Stuttering equivalence: both behaviors destutter to the same lasso.
inline bool stutter_equiv_disc(const DiscreteBehavior& a, const DiscreteBehavior& b) {
  require_same_variables(a.layout(), b.layout());
  return destutter_disc(a) == destutter_disc(b);
}

/// Repeats each position i an extra `extra[i]` times (cycle repeats are the same
/// in every round). Returns the expanded behavior and the first copy of each position.
inline std::pair<DiscreteBehavior, std::vector<std::size_t>> expand_disc(const DiscreteBehavior& rho,
                                                                         const std::vector<std::size_t>& extra) {
  if (extra.size() != rho.size()) throw std::invalid_argument("expansion vector has the wrong length");
  std::vector<State> pre, cyc;
  std::vector<std::size_t> first(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    bool in_prefix = i < rho.prefix().size();
    auto& dst = in_prefix ? pre : cyc;
    first[i] = in_prefix ? pre.size() : pre.size() + cyc.size();
    for (std::size_t k = 0; k <= extra[i]; ++k) dst.push_back(rho.at(i));
  }
  return {DiscreteBehavior(rho.layout(), std::move(pre), std::move(cyc)), std::move(first)};
}

// ---------------------------------------------------------------------------
// Continuous traces

using Segment = Piece<State>;

/// Piecewise-constant, ultimately periodic non-Zeno trace over ℝ≥0.
class ContTrace {
 public:
  ContTrace(Layout layout, std::vector<Segment> segments, std::vector<Segment> cycle)
      : layout_(std::move(layout)), fn_(std::move(segments), std::move(cycle)) {
    check();
  }

  ContTrace(Layout layout, StepFunction<State> fn) : layout_(std::move(layout)), fn_(std::move(fn)) { check(); }

  const Layout& layout() const { return layout_; }
  const std::vector<Segment>& segments() const { return fn_.prefix(); }
  const std::vector<Segment>& cycle() const { return fn_.cycle(); }
  const StepFunction<State>& function() const { return fn_; }
  const Rat& threshold() const { return fn_.threshold(); }
  const Rat& period() const { return fn_.period(); }

  const State& value_at(const Rat& t) const { return fn_.at(t); }

  ContTrace canonical() const { return {layout_, fn_.canonical()}; }

  friend bool operator==(const ContTrace& a, const ContTrace& b) {
    return *a.layout_ == *b.layout_ && a.fn_ == b.fn_;
  }

 private:
  void check() const {
    for (const auto* part : {&fn_.prefix(), &fn_.cycle()}) {
      for (const auto& s : *part) {
        if (!same_layout(s.value.layout(), layout_)) throw TraceError("trace state over the wrong variables");
      }
    }
  }

  Layout layout_;
  StepFunction<State> fn_;
};

/// Same function of time (representation-independent).
inline bool same_trace(const ContTrace& a, const ContTrace& b) {
  return *a.layout() == *b.layout() && same_function(a.function(), b.function());
}

inline const State& value_at(const ContTrace& tau, const Rat& t) { return tau.value_at(t); }

/// Time until the first change of any variable in `vars`; 0 when none of them
/// ever changes.
inline Rat next_change(const ContTrace& tau, const std::vector<std::string>& vars) {
  for (const auto& v : vars) {
    if (!tau.value_at(Rat(0)).slot(v)) throw TraceError("unknown flexible variable '" + v + "'");
  }
  const State& s0 = tau.value_at(Rat(0));
  Rat start(0);
  for (const auto* part : {&tau.segments(), &tau.cycle()}) {
    for (const auto& seg : *part) {
      if (!seg.value.agrees_on(s0, vars)) return start;
      start += seg.length;
    }
  }
  return Rat(0);  // every value seen from 0 through a full cycle agrees: never changes
}

inline ContTrace suffix_cont(const ContTrace& tau, const Rat& t) {
  return {tau.layout(), tau.function().suffix(t)};
}

/// tau . f
inline ContTrace apply_reparam(const ContTrace& tau, const Reparam& f) {
  return {tau.layout(), tau.function().pullback(f)};
}

/// Each discrete state held for `step` time units.
inline ContTrace embed_discrete(const DiscreteBehavior& rho, const Rat& step = Rat(1)) {
  if (step.sign() <= 0) throw std::invalid_argument("embedding step must be positive");
  std::vector<Segment> pre, cyc;
  for (const auto& s : rho.prefix()) pre.push_back({s, step});
  for (const auto& s : rho.cycle()) cyc.push_back({s, step});
  return {rho.layout(), std::move(pre), std::move(cyc)};
}

/// The sequence of states visited, as a lasso, with durations forgotten.
inline DiscreteBehavior state_sequence(const ContTrace& tau) {
  std::vector<State> pre, cyc;
  for (const auto& s : tau.segments()) pre.push_back(s.value);
  for (const auto& s : tau.cycle()) cyc.push_back(s.value);
  return DiscreteBehavior(tau.layout(), std::move(pre), std::move(cyc));
}

/// Same stutter orbit: equal destuttered state sequences.
inline bool stutter_equiv_cont(const ContTrace& a, const ContTrace& b) {
  require_same_variables(a.layout(), b.layout());
  return destutter_disc(state_sequence(a)) == destutter_disc(state_sequence(b));
}

}  // namespace faltertide
