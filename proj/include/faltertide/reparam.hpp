#pragma once

#include "faltertide/rational.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace faltertide {

/// A point (x, y) on the graph of a piecewise-linear map.
struct Knot {
  Rat x;
  Rat y;
  friend bool operator==(const Knot&, const Knot&) = default;
};

/// Piecewise-linear, strictly increasing, eventually affine self-map of [0,inf):
///
///   f(t) = offset + pl(t)
///
/// where pl passes through the knots (starting at (0,0)) and continues with
/// `final_slope` after the last knot. offset == 0 is a stutter (a homeomorphism
/// fixing 0); offset > 0 is a falter (delay followed by dilation).
///
/// Knots are kept minimal: no knot sits where the slope does not change, so two
/// Reparams denote the same map iff they compare equal.
class Reparam {
 public:
  Reparam() : knots_{{Rat(0), Rat(0)}}, final_slope_(1) {}

  Reparam(Rat offset, std::vector<Knot> knots, Rat final_slope)
      : offset_(std::move(offset)), knots_(std::move(knots)), final_slope_(std::move(final_slope)) {
    if (offset_.sign() < 0) throw std::invalid_argument("reparam offset must be >= 0");
    if (final_slope_.sign() <= 0) throw std::invalid_argument("reparam final slope must be positive");
    if (knots_.empty() || !(knots_.front().x.is_zero() && knots_.front().y.is_zero()))
      knots_.insert(knots_.begin(), Knot{Rat(0), Rat(0)});
    for (std::size_t i = 1; i < knots_.size(); ++i) {
      if (!(knots_[i - 1].x < knots_[i].x) || !(knots_[i - 1].y < knots_[i].y))
        throw std::invalid_argument("reparam knots must be strictly increasing in both coordinates");
    }
    simplify();
  }

  static Reparam identity() { return {}; }
  static Reparam shift(const Rat& by) { return {by, {}, Rat(1)}; }
  static Reparam scale(const Rat& slope) { return {Rat(0), {}, slope}; }

  const Rat& offset() const { return offset_; }
  const std::vector<Knot>& knots() const { return knots_; }
  const Rat& final_slope() const { return final_slope_; }

  bool is_stutter() const { return offset_.is_zero(); }
  bool is_identity() const { return is_stutter() && knots_.size() == 1 && final_slope_ == Rat(1); }

  /// The abscissa after which the map is affine.
  const Rat& last_x() const { return knots_.back().x; }

  Rat operator()(const Rat& t) const {
    if (t.sign() < 0) throw std::domain_error("reparam evaluated at negative time");
    return offset_ + stutter_value(t);
  }

  /// Least t with f(t) >= y; 0 when y <= f(0).
  Rat inverse_at(const Rat& y) const {
    Rat z = y - offset_;
    if (z.sign() <= 0) return Rat(0);
    for (std::size_t i = 1; i < knots_.size(); ++i) {
      if (z <= knots_[i].y) {
        const Knot& a = knots_[i - 1];
        const Knot& b = knots_[i];
        return a.x + (z - a.y) * (b.x - a.x) / (b.y - a.y);
      }
    }
    const Knot& l = knots_.back();
    return l.x + (z - l.y) / final_slope_;
  }

  /// x -> f(x) - f(0), always a stutter.
  Reparam stutter_part() const { return {Rat(0), knots_, final_slope_}; }

  Reparam inverse() const {
    if (!is_stutter()) throw std::domain_error("only stutters are invertible");
    std::vector<Knot> swapped;
    swapped.reserve(knots_.size());
    for (const auto& k : knots_) swapped.push_back({k.y, k.x});
    return {Rat(0), std::move(swapped), Rat(1) / final_slope_};
  }

  /// (f . g)(t) = f(g(t)).
  friend Reparam compose(const Reparam& f, const Reparam& g) {
    std::vector<Rat> xs;
    for (const auto& k : g.knots_) xs.push_back(k.x);
    for (const auto& k : f.knots_) {
      if (k.x > g.offset_) xs.push_back(g.inverse_at(k.x));
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    Rat base = f(g(Rat(0)));
    std::vector<Knot> knots;
    knots.reserve(xs.size());
    for (const auto& x : xs) knots.push_back({x, f(g(x)) - base});
    return {base, std::move(knots), f.final_slope_ * g.final_slope_};
  }

  friend bool operator==(const Reparam&, const Reparam&) = default;

  std::string str() const {
    std::string s = "offset=" + offset_.str() + " knots=[";
    for (std::size_t i = 0; i < knots_.size(); ++i) {
      if (i) s += ",";
      s += "(" + knots_[i].x.str() + "," + knots_[i].y.str() + ")";
    }
    return s + "] slope=" + final_slope_.str();
  }

 private:
  Rat stutter_value(const Rat& t) const {
    for (std::size_t i = 1; i < knots_.size(); ++i) {
      if (t <= knots_[i].x) {
        const Knot& a = knots_[i - 1];
        const Knot& b = knots_[i];
        return a.y + (t - a.x) * (b.y - a.y) / (b.x - a.x);
      }
    }
    const Knot& l = knots_.back();
    return l.y + (t - l.x) * final_slope_;
  }

  void simplify() {
    auto slope = [&](std::size_t i) {  // slope of the piece leaving knot i
      if (i + 1 < knots_.size())
        return (knots_[i + 1].y - knots_[i].y) / (knots_[i + 1].x - knots_[i].x);
      return final_slope_;
    };
    std::vector<Knot> kept{knots_.front()};
    for (std::size_t i = 1; i < knots_.size(); ++i) {
      Rat in = (knots_[i].y - kept.back().y) / (knots_[i].x - kept.back().x);
      if (in != slope(i)) kept.push_back(knots_[i]);
    }
    knots_ = std::move(kept);
  }

  Rat offset_{0};
  std::vector<Knot> knots_;
  Rat final_slope_;
};

}  // namespace faltertide
