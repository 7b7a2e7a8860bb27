#pragma once

#include "faltertide/rational.hpp"
#include "faltertide/reparam.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace faltertide {

/// A value held for a positive length of time.
template <class V>
struct Piece {
  V value;
  Rat length;
  friend bool operator==(const Piece&, const Piece&) = default;
};

/// A value on the half-open span [lo, hi).
template <class V>
struct Span {
  Rat lo;
  Rat hi;
  V value;
  friend bool operator==(const Span&, const Span&) = default;
};

/// Right-continuous, piecewise-constant, ultimately periodic function on [0,inf).
///
/// The prefix pieces cover [0, threshold); after that the cycle pieces repeat
/// forever with period = sum of cycle lengths. Every piece has positive length,
/// so each value is held for positive time and only finitely many changes happen
/// in bounded time.
template <class V>
class StepFunction {
 public:
  StepFunction() = default;

  StepFunction(std::vector<Piece<V>> prefix, std::vector<Piece<V>> cycle)
      : prefix_(std::move(prefix)), cycle_(std::move(cycle)) {
    if (cycle_.empty()) throw std::invalid_argument("step function needs a nonempty cycle");
    for (const auto& p : prefix_) check_length(p);
    for (const auto& p : cycle_) check_length(p);
    threshold_ = total(prefix_);
    period_ = total(cycle_);
  }

  static StepFunction constant(V v) { return StepFunction({}, {{std::move(v), Rat(1)}}); }

  const std::vector<Piece<V>>& prefix() const { return prefix_; }
  const std::vector<Piece<V>>& cycle() const { return cycle_; }
  const Rat& threshold() const { return threshold_; }
  const Rat& period() const { return period_; }

  const V& at(const Rat& t) const {
    if (t.sign() < 0) throw std::domain_error("step function evaluated at negative time");
    Rat start(0);
    if (t < threshold_) {
      for (const auto& p : prefix_) {
        if (t < start + p.length) return p.value;
        start += p.length;
      }
    }
    Rat u = mod(t - threshold_, period_);
    start = Rat(0);
    for (const auto& p : cycle_) {
      if (u < start + p.length) return p.value;
      start += p.length;
    }
    return cycle_.back().value;  // unreachable: u < period
  }

  /// Pieces restricted to [lo, hi), in order, unmerged.
  std::vector<Span<V>> spans(const Rat& lo, const Rat& hi) const {
    std::vector<Span<V>> out;
    if (!(lo < hi)) return out;
    auto emit = [&](const Rat& a, const Rat& b, const V& v) {
      Rat l = max(a, lo), h = min(b, hi);
      if (l < h) out.push_back({l, h, v});
    };
    Rat start(0);
    for (const auto& p : prefix_) {
      if (start >= hi) return out;
      emit(start, start + p.length, p.value);
      start += p.length;
    }
    if (lo > threshold_) start = threshold_ + period_ * ((lo - threshold_) / period_).floor();
    while (start < hi) {
      for (const auto& p : cycle_) {
        emit(start, start + p.length, p.value);
        start += p.length;
        if (start >= hi) break;
      }
    }
    return out;
  }

  /// Same function, re-cut so that the prefix ends at `threshold` and the cycle
  /// spans `period`. Requires threshold >= threshold() and period a multiple of period().
  StepFunction aligned(const Rat& threshold, const Rat& period) const {
    if (threshold < threshold_) throw std::logic_error("cannot align below the threshold");
    exact_multiple(period, period_);
    return StepFunction(to_pieces(spans(Rat(0), threshold)),
                        to_pieces(spans(threshold, threshold + period)));
  }

  /// r -> f(t + r).
  StepFunction suffix(const Rat& t) const {
    if (t.sign() < 0) throw std::domain_error("suffix at negative time");
    if (t < threshold_)
      return StepFunction(to_pieces(spans(t, threshold_)), cycle_);
    Rat u = threshold_ + mod(t - threshold_, period_);
    return StepFunction({}, to_pieces(spans(u, u + period_)));
  }

  /// t -> f(g(t)) for an eventually affine reparameterization g.
  StepFunction pullback(const Reparam& g) const {
    // Beyond `top` both f is periodic and g is affine.
    Rat top = max(threshold_, g(g.last_x()));
    auto through = [&](const std::vector<Span<V>>& sp) {
      std::vector<Piece<V>> out;
      for (const auto& s : sp) {
        Rat a = g.inverse_at(s.lo), b = g.inverse_at(s.hi);
        if (a < b) out.push_back({s.value, b - a});
      }
      return out;
    };
    return StepFunction(through(spans(g(Rat(0)), top)), through(spans(top, top + period_)));
  }

  /// Pointwise combination h(t) = op(a(t), b(t)).
  template <class A, class B, class Op>
  static StepFunction zip(const StepFunction<A>& a, const StepFunction<B>& b, Op op) {
    Rat t = max(a.threshold(), b.threshold());
    Rat p = lcm(a.period(), b.period());
    auto pieces = [&](const Rat& lo, const Rat& hi) {
      auto sa = a.spans(lo, hi);
      auto sb = b.spans(lo, hi);
      std::vector<Piece<V>> out;
      std::size_t i = 0, j = 0;
      Rat cur = lo;
      while (i < sa.size() && j < sb.size()) {
        Rat end = min(sa[i].hi, sb[j].hi);
        out.push_back({op(sa[i].value, sb[j].value), end - cur});
        cur = end;
        if (sa[i].hi == end) ++i;
        if (sb[j].hi == end) ++j;
      }
      return out;
    };
    return StepFunction(pieces(Rat(0), t), pieces(t, t + p));
  }

  template <class Op>
  auto map(Op op) const {
    using W = decltype(op(std::declval<const V&>()));
    std::vector<Piece<W>> pre, cyc;
    for (const auto& p : prefix_) pre.push_back({op(p.value), p.length});
    for (const auto& p : cycle_) cyc.push_back({op(p.value), p.length});
    return StepFunction<W>(std::move(pre), std::move(cyc));
  }

  /// Unique representation of the function: minimal period (period 1 for a
  /// constant tail), then minimal threshold, adjacent equal pieces merged.
  StepFunction canonical() const {
    std::vector<Piece<V>> pre = merge_adjacent(prefix_);
    std::vector<Piece<V>> cyc = minimal_cycle(merge_adjacent(cycle_));
    // Pull the threshold back while the prefix ends the way the cycle does.
    if (cyc.size() == 1) {
      while (!pre.empty() && pre.back().value == cyc[0].value) pre.pop_back();
      return StepFunction(std::move(pre), std::move(cyc));
    }
    std::deque<Piece<V>> ring(cyc.begin(), cyc.end());
    while (!pre.empty() && pre.back().value == ring.back().value) {
      V v = ring.back().value;
      Rat d = min(pre.back().length, ring.back().length);
      if ((pre.back().length -= d).is_zero()) pre.pop_back();
      if ((ring.back().length -= d).is_zero()) ring.pop_back();
      if (ring.front().value == v)
        ring.front().length += d;
      else
        ring.push_front({std::move(v), d});
    }
    return StepFunction(std::move(pre), std::vector<Piece<V>>(ring.begin(), ring.end()));
  }

  /// Same function, regardless of representation.
  friend bool same_function(const StepFunction& a, const StepFunction& b) {
    Rat t = max(a.threshold_, b.threshold_);
    Rat p = lcm(a.period_, b.period_);
    return merged(a.spans(Rat(0), t + p)) == merged(b.spans(Rat(0), t + p));
  }

  /// Structural equality of representations.
  friend bool operator==(const StepFunction& a, const StepFunction& b) {
    return a.prefix_ == b.prefix_ && a.cycle_ == b.cycle_;
  }

  /// Spans with equal neighbours merged, as (value, length) pieces.
  static std::vector<Piece<V>> merged(const std::vector<Span<V>>& spans) {
    std::vector<Piece<V>> out;
    for (const auto& s : spans) {
      if (!out.empty() && out.back().value == s.value) {
        out.back().length += s.hi - s.lo;
      } else {
        out.push_back({s.value, s.hi - s.lo});
      }
    }
    return out;
  }

  static std::vector<Piece<V>> to_pieces(const std::vector<Span<V>>& spans) {
    std::vector<Piece<V>> out;
    out.reserve(spans.size());
    for (const auto& s : spans) out.push_back({s.value, s.hi - s.lo});
    return out;
  }

 private:
  static void check_length(const Piece<V>& p) {
    if (p.length.sign() <= 0) throw std::invalid_argument("step function piece with non-positive length");
  }

  static Rat total(const std::vector<Piece<V>>& ps) {
    Rat s(0);
    for (const auto& p : ps) s += p.length;
    return s;
  }

  static std::vector<Piece<V>> merge_adjacent(const std::vector<Piece<V>>& ps) {
    std::vector<Piece<V>> out;
    out.reserve(ps.size());
    for (const auto& p : ps) {
      if (!out.empty() && out.back().value == p.value)
        out.back().length += p.length;
      else
        out.push_back(p);
    }
    return out;
  }

  // Shortest cycle with the same tail, starting at the same threshold; a
  // constant tail gets period 1.
  static std::vector<Piece<V>> minimal_cycle(std::vector<Piece<V>> lin) {
    // Cyclic runs: the last piece merged into the first across the seam.
    std::vector<Piece<V>> runs = lin;
    if (runs.size() > 1 && runs.front().value == runs.back().value) {
      runs.front().length += runs.back().length;
      runs.pop_back();
    }
    if (runs.size() == 1) return {{runs[0].value, Rat(1)}};
    const std::size_t n = runs.size();
    // The stored period is an integer multiple of the minimal one, and that
    // multiple divides the run count.
    for (std::size_t step = 1; step < n; ++step) {
      if (n % step != 0) continue;
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i) ok = runs[i] == runs[(i + step) % n];
      if (!ok) continue;
      Rat q(0);
      for (std::size_t i = 0; i < step; ++i) q += runs[i].length;
      // First q of the linear cycle.
      std::vector<Piece<V>> out;
      Rat left = q;
      for (const auto& p : lin) {
        if (p.length < left) {
          out.push_back(p);
          left -= p.length;
        } else {
          out.push_back({p.value, left});
          break;
        }
      }
      return out;
    }
    return lin;
  }

  std::vector<Piece<V>> prefix_;
  std::vector<Piece<V>> cycle_;
  Rat threshold_{0};
  Rat period_{0};
};

}  // namespace faltertide
