#pragma once

// Seeded random rationals and reparametrizations.

#include "faltertide/rational.hpp"
#include "faltertide/reparam.hpp"

#include <cstddef>
#include <random>
#include <vector>

namespace faltertide {

/// Uniform over {k/den : 0 <= k <= max * den} for a random den in [1, max_den].
template <class Rng>
Rat random_rat(Rng& rng, long max, long max_den = 4) {
  long den = std::uniform_int_distribution<long>(1, max_den)(rng);
  long num = std::uniform_int_distribution<long>(0, max * den)(rng);
  return Rat(num, den);
}

template <class Rng>
Rat random_positive_rat(Rng& rng, long max, long max_den = 4) {
  long den = std::uniform_int_distribution<long>(1, max_den)(rng);
  long num = std::uniform_int_distribution<long>(1, max * den)(rng);
  return Rat(num, den);
}

/// Piecewise-linear stutter with up to `max_knots` interior knots.
template <class Rng>
Reparam random_stutter(Rng& rng, std::size_t max_knots = 3) {
  std::size_t n = std::uniform_int_distribution<std::size_t>(0, max_knots)(rng);
  std::vector<Knot> knots;
  Rat x(0), y(0);
  for (std::size_t i = 0; i < n; ++i) {
    x += random_positive_rat(rng, 3);
    y += random_positive_rat(rng, 3);
    knots.push_back({x, y});
  }
  return Reparam(Rat(0), std::move(knots), random_positive_rat(rng, 3));
}

/// A stutter preceded by a random nonnegative delay.
template <class Rng>
Reparam random_falter(Rng& rng, std::size_t max_knots = 3) {
  Reparam s = random_stutter(rng, max_knots);
  return Reparam(random_rat(rng, 3), s.knots(), s.final_slope());
}

}  // namespace faltertide
