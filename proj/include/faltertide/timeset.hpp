#pragma once

// Eventually periodic subsets of [0,inf) built from half-open rational intervals.
//
// A proposition is identified with the set of instants at which it holds. The
// Boolean connectives act pointwise, `box` keeps the instants from which the set
// holds forever, and `preimage` pulls a set back along a stutter or falter.

#include "faltertide/rational.hpp"
#include "faltertide/reparam.hpp"
#include "faltertide/step_function.hpp"

#include <algorithm>
#include <cctype>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace faltertide {

/// Half-open interval [lo, hi); hi == nullopt means +inf.
struct Interval {
  Rat lo;
  std::optional<Rat> hi;

  friend bool operator==(const Interval&, const Interval&) = default;

  std::string str() const {
    return "[" + lo.str() + "," + (hi ? hi->str() : std::string("inf")) + ")";
  }
};

class TimeSet {
 public:
  /// The empty set.
  TimeSet() : TimeSet(StepFunction<bool>::constant(false)) {}

  static TimeSet empty() { return {}; }
  static TimeSet full() { return TimeSet(StepFunction<bool>::constant(true)); }

  /// [lo, hi), or [lo, inf) when hi is absent.
  static TimeSet interval(const Rat& lo, const std::optional<Rat>& hi = std::nullopt) {
    if (lo.sign() < 0) throw std::invalid_argument("interval starts below 0");
    if (hi && !(lo < *hi)) throw std::invalid_argument("interval " + Interval{lo, hi}.str() + " is empty");
    std::vector<Piece<bool>> pre;
    if (lo.sign() > 0) pre.push_back({false, lo});
    if (!hi) return TimeSet(StepFunction<bool>(std::move(pre), {{true, Rat(1)}}));
    pre.push_back({true, *hi - lo});
    return TimeSet(StepFunction<bool>(std::move(pre), {{false, Rat(1)}}));
  }

  static TimeSet interval(const Interval& i) { return interval(i.lo, i.hi); }

  /// Transient intervals below `threshold`, then `pattern` (inside [0, period))
  /// repeated at threshold + k*period for every k >= 0. Intervals may overlap or
  /// touch; the result is normalized.
  static TimeSet periodic(const Rat& threshold, const std::vector<Interval>& transient,
                          const Rat& period, const std::vector<Interval>& pattern) {
    if (threshold.sign() < 0) throw std::invalid_argument("negative threshold");
    if (period.sign() <= 0) throw std::invalid_argument("period must be positive");
    auto indicator = [](const std::vector<Interval>& ivs, const Rat& length, const char* what) {
      std::vector<Rat> cuts{Rat(0), length};
      for (const auto& iv : ivs) {
        if (!iv.hi || iv.lo.sign() < 0 || !(iv.lo < *iv.hi) || *iv.hi > length)
          throw std::invalid_argument(std::string(what) + " interval " + iv.str() + " out of range");
        cuts.push_back(iv.lo);
        cuts.push_back(*iv.hi);
      }
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
      std::vector<Piece<bool>> out;
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        bool in = false;
        for (const auto& iv : ivs) in = in || (iv.lo <= cuts[k] && cuts[k] < *iv.hi);
        out.push_back({in, cuts[k + 1] - cuts[k]});
      }
      return out;
    };
    auto pre = threshold.is_zero() ? std::vector<Piece<bool>>{} : indicator(transient, threshold, "transient");
    if (threshold.is_zero() && !transient.empty())
      throw std::invalid_argument("transient intervals require a positive threshold");
    return TimeSet(StepFunction<bool>(std::move(pre), indicator(pattern, period, "pattern")));
  }

  explicit TimeSet(const StepFunction<bool>& indicator) : fn_(indicator.canonical()) {
    Rat start(0);
    for (const auto& p : fn_.prefix()) {
      if (p.value) transient_.push_back({start, start + p.length});
      start += p.length;
    }
    start = Rat(0);
    for (const auto& p : fn_.cycle()) {
      if (p.value) pattern_.push_back({start, start + p.length});
      start += p.length;
    }
  }

  const Rat& threshold() const { return fn_.threshold(); }
  const Rat& period() const { return fn_.period(); }
  const std::vector<Interval>& transient() const { return transient_; }
  const std::vector<Interval>& pattern() const { return pattern_; }
  const StepFunction<bool>& indicator() const { return fn_; }

  bool is_empty() const { return transient_.empty() && pattern_.empty(); }
  bool is_full() const {
    return threshold().is_zero() && pattern_.size() == 1 && pattern_[0].lo.is_zero() &&
           *pattern_[0].hi == period();
  }

  bool contains(const Rat& t) const {
    if (t.sign() < 0) throw std::domain_error("membership queried at negative time " + t.str());
    return fn_.at(t);
  }

  /// Least element; nullopt for the empty set.
  std::optional<Rat> first() const {
    if (!transient_.empty()) return transient_.front().lo;
    if (!pattern_.empty()) return threshold() + pattern_.front().lo;
    return std::nullopt;
  }

  /// Maximal intervals covering the set on [0, horizon).
  std::vector<Interval> intervals_until(const Rat& horizon) const {
    std::vector<Interval> out;
    Rat start(0);
    for (const auto& p : StepFunction<bool>::merged(fn_.spans(Rat(0), horizon))) {
      if (p.value) out.push_back({start, start + p.length});
      start += p.length;
    }
    return out;
  }

  /// Canonical text form, e.g. `[0,1) ∪ [2,5/2) ⟨period=1 from 3: [0,1/2)⟩`.
  std::string str() const {
    auto join = [](const std::vector<Interval>& ivs) {
      if (ivs.empty()) return std::string("∅");
      std::string s;
      for (std::size_t i = 0; i < ivs.size(); ++i) s += (i ? " ∪ " : "") + ivs[i].str();
      return s;
    };
    return join(transient_) + " ⟨period=" + period().str() + " from " + threshold().str() + ": " +
           join(pattern_) + "⟩";
  }

  static TimeSet parse(std::string_view text);

  /// Structural equality of canonical forms (equivalent to `equals`).
  friend bool operator==(const TimeSet& a, const TimeSet& b) { return a.fn_ == b.fn_; }

  friend std::ostream& operator<<(std::ostream& os, const TimeSet& s) { return os << s.str(); }

 private:
  StepFunction<bool> fn_;
  std::vector<Interval> transient_;
  std::vector<Interval> pattern_;
};

inline TimeSet union_of(const TimeSet& a, const TimeSet& b) {
  return TimeSet(StepFunction<bool>::zip(a.indicator(), b.indicator(), [](bool x, bool y) { return x || y; }));
}

inline TimeSet intersect(const TimeSet& a, const TimeSet& b) {
  return TimeSet(StepFunction<bool>::zip(a.indicator(), b.indicator(), [](bool x, bool y) { return x && y; }));
}

inline TimeSet complement(const TimeSet& a) {
  return TimeSet(a.indicator().map([](bool x) { return !x; }));
}

inline TimeSet difference(const TimeSet& a, const TimeSet& b) { return intersect(a, complement(b)); }

/// {r | [r, inf) is contained in a}: empty, or a single unbounded interval.
inline TimeSet box(const TimeSet& a) {
  const auto& pat = a.pattern();
  bool tail_full = pat.size() == 1 && pat[0].lo.is_zero() && *pat[0].hi == a.period();
  if (!tail_full) return TimeSet::empty();
  Rat from = a.threshold();
  const auto& tr = a.transient();
  if (!tr.empty() && tr.back().hi == from) from = tr.back().lo;
  return TimeSet::interval(from);
}

/// Instants with some present or future instant in a.
inline TimeSet diamond(const TimeSet& a) { return complement(box(complement(a))); }

/// {t | f(t) in a}.
inline TimeSet preimage(const Reparam& f, const TimeSet& a) { return TimeSet(a.indicator().pullback(f)); }

inline bool contains(const TimeSet& a, const Rat& t) { return a.contains(t); }

inline bool subset(const TimeSet& a, const TimeSet& b) { return difference(a, b).is_empty(); }

/// Decides equality by re-cutting both sets at a common threshold and period
/// and comparing the merged interval lists.
inline bool equals(const TimeSet& a, const TimeSet& b) {
  Rat t = max(a.threshold(), b.threshold());
  Rat p = lcm(a.period(), b.period());
  return a.intervals_until(t + p) == b.intervals_until(t + p);
}

inline TimeSet operator|(const TimeSet& a, const TimeSet& b) { return union_of(a, b); }
inline TimeSet operator&(const TimeSet& a, const TimeSet& b) { return intersect(a, b); }
inline TimeSet operator~(const TimeSet& a) { return complement(a); }

namespace detail {

class TimeSetReader {
 public:
  explicit TimeSetReader(std::string_view s) : s_(s) {}

  TimeSet read() {
    auto transient = intervals();
    expect_any({"⟨", "<"});
    keyword("period");
    expect_any({"="});
    Rat period = number();
    keyword("from");
    Rat threshold = number();
    expect_any({":"});
    auto pattern = intervals();
    expect_any({"⟩", ">"});
    skip_ws();
    if (i_ != s_.size()) fail("trailing input");
    return TimeSet::periodic(threshold, transient, period, pattern);
  }

 private:
  std::vector<Interval> intervals() {
    std::vector<Interval> out;
    skip_ws();
    if (accept_any({"∅", "{}"})) return out;
    for (;;) {
      expect_any({"["});
      Rat lo = number();
      expect_any({","});
      Rat hi = number();
      expect_any({")"});
      out.push_back({lo, hi});
      if (!accept_any({"∪", "U", "u"})) break;
    }
    return out;
  }

  Rat number() {
    skip_ws();
    std::size_t b = i_;
    while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '/' || s_[i_] == '-'))
      ++i_;
    if (b == i_) fail("expected a rational");
    try {
      return Rat::parse(s_.substr(b, i_ - b));
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }

  void keyword(std::string_view w) {
    skip_ws();
    if (s_.substr(i_, w.size()) != w) fail("expected '" + std::string(w) + "'");
    i_ += w.size();
  }

  bool accept_any(std::initializer_list<std::string_view> options) {
    skip_ws();
    for (auto o : options) {
      if (s_.substr(i_, o.size()) == o) {
        i_ += o.size();
        return true;
      }
    }
    return false;
  }

  void expect_any(std::initializer_list<std::string_view> options) {
    if (!accept_any(options)) fail("expected '" + std::string(*options.begin()) + "'");
  }

  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("time set text, offset " + std::to_string(i_) + ": " + what);
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace detail

inline TimeSet TimeSet::parse(std::string_view text) { return detail::TimeSetReader(text).read(); }

}  // namespace faltertide
