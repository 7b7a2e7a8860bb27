#include "support/generators.hpp"

#include <gtest/gtest.h>

using namespace faltertide;
using faltertide::testing::grid_equal;
using faltertide::testing::random_timeset;
using faltertide::testing::Rng;

namespace {

Rat r(long n, long d = 1) { return Rat(n, d); }

TimeSet iv(long lo, std::optional<long> hi = std::nullopt) {
  return TimeSet::interval(Rat(lo), hi ? std::optional<Rat>(Rat(*hi)) : std::nullopt);
}

/// Rationals k/d with d <= max_den and k/d <= horizon.
std::vector<Rat> grid(long horizon, long max_den = 8) {
  std::vector<Rat> out;
  for (long d = 1; d <= max_den; ++d) {
    for (long k = 0; k <= horizon * d; ++k) out.push_back(Rat(k, d));
  }
  return out;
}

}  // namespace

TEST(TimeSetUnion, Examples) {
  TimeSet s = iv(1, 3) | TimeSet::periodic(r(4), {}, r(2), {{r(0), r(1, 2)}});
  EXPECT_EQ(TimeSet::empty() | s, s);
  EXPECT_TRUE((iv(0, 1) | iv(1)).is_full());

  TimeSet a = TimeSet::periodic(r(1), {{r(0), r(1)}}, r(1), {{r(0), r(1, 2)}});
  TimeSet b = iv(0, 1) | TimeSet::periodic(r(0), {}, r(1), {{r(1, 2), r(1)}});
  TimeSet u = a | b;
  for (const auto& t : grid(10)) {
    EXPECT_TRUE(u.contains(t)) << t;
  }
  EXPECT_TRUE(u.is_full());
}

TEST(TimeSetIntersect, Examples) {
  TimeSet s = TimeSet::periodic(r(1), {}, r(3), {{r(0), r(1)}});
  EXPECT_EQ(s & TimeSet::full(), s);
  EXPECT_EQ(iv(0, 2) & iv(1), iv(1, 2));

  TimeSet two = TimeSet::periodic(r(0), {}, r(2), {{r(0), r(1)}});
  TimeSet three = TimeSet::periodic(r(0), {}, r(3), {{r(0), r(1)}});
  TimeSet both = two & three;
  EXPECT_EQ(both.period(), r(6));
  for (const auto& t : grid(30, 4)) {
    bool expected = mod(t, r(2)) < r(1) && mod(t, r(3)) < r(1);
    EXPECT_EQ(both.contains(t), expected) << t;
  }
}

TEST(TimeSetComplement, Examples) {
  EXPECT_TRUE(complement(TimeSet::empty()).is_full());
  EXPECT_TRUE(complement(TimeSet::full()).is_empty());
  EXPECT_EQ(complement(iv(1, 2)), iv(0, 1) | iv(2));
}

TEST(TimeSetBox, Examples) {
  EXPECT_TRUE(box(TimeSet::full()).is_full());
  EXPECT_TRUE(box(iv(0, 1)).is_empty());

  TimeSet s = iv(0, 1) | iv(2);
  TimeSet b = box(s);
  EXPECT_EQ(b, iv(2));
  auto samples = grid(6);
  for (const auto& t : samples) {
    bool future_closed = true;
    for (const auto& u : samples) {
      if (u >= t && !s.contains(u)) future_closed = false;
    }
    EXPECT_EQ(b.contains(t), future_closed) << t;
  }
}

TEST(TimeSetDiamond, Examples) {
  EXPECT_TRUE(diamond(TimeSet::empty()).is_empty());

  TimeSet s = iv(1, 2);
  TimeSet d = diamond(s);
  EXPECT_EQ(d, iv(0, 2));
  auto samples = grid(5);
  for (const auto& t : samples) {
    bool some_future = false;
    for (const auto& u : samples) {
      if (u >= t && s.contains(u)) some_future = true;
    }
    EXPECT_EQ(d.contains(t), some_future) << t;
  }

  TimeSet recurring = TimeSet::periodic(r(0), {}, r(1), {{r(0), r(1, 2)}});
  EXPECT_TRUE(diamond(recurring).is_full());
}

TEST(TimeSetPreimage, Examples) {
  TimeSet s = iv(1, 4) | TimeSet::periodic(r(5), {}, r(1), {{r(0), r(1, 3)}});
  EXPECT_EQ(preimage(Reparam::identity(), s), s);
  EXPECT_TRUE(preimage(Reparam::shift(r(1)), iv(1)).is_full());

  Reparam twice = Reparam::scale(r(2));
  TimeSet p = preimage(twice, iv(2, 4));
  EXPECT_EQ(p, iv(1, 2));
  for (const auto& t : grid(6)) {
    EXPECT_EQ(p.contains(t), iv(2, 4).contains(twice(t))) << t;
  }
}

TEST(TimeSetContains, Examples) {
  EXPECT_TRUE(iv(0, 1).contains(r(0)));
  EXPECT_FALSE(iv(0, 1).contains(r(1)));
  TimeSet half = TimeSet::periodic(r(0), {}, r(1), {{r(0), r(1, 2)}});
  EXPECT_FALSE(half.contains(r(7, 2)));
  EXPECT_TRUE(half.contains(r(13, 4)));
  EXPECT_THROW(half.contains(r(-1)), std::domain_error);
}

TEST(TimeSetEquals, Examples) {
  TimeSet s = TimeSet::periodic(r(2), {{r(0), r(1, 2)}}, r(3, 2), {{r(1, 2), r(1)}});
  EXPECT_TRUE(equals(s, s));
  EXPECT_TRUE(equals(iv(0, 1) | iv(1, 2), iv(0, 2)));

  TimeSet p2 = TimeSet::periodic(r(0), {}, r(2), {{r(0), r(1)}});
  TimeSet p4 = TimeSet::periodic(r(0), {}, r(4), {{r(0), r(1)}, {r(2), r(3)}});
  EXPECT_TRUE(equals(p2, p4));
  EXPECT_TRUE(grid_equal(p2, p4));
  EXPECT_EQ(p4.period(), r(2));
}

TEST(TimeSetCanonical, EmptyAndFullRepresentatives) {
  EXPECT_EQ(TimeSet::periodic(r(3), {}, r(5, 2), {}), TimeSet::empty());
  EXPECT_EQ(TimeSet::periodic(r(3), {{r(0), r(3)}}, r(7), {{r(0), r(7)}}), TimeSet::full());
  EXPECT_EQ(TimeSet::empty().threshold(), r(0));
  EXPECT_EQ(TimeSet::full().threshold(), r(0));
}

TEST(TimeSetCanonical, MinimalThresholdAndPeriod) {
  // [0,1/2) then the same pattern repeating with period 1 from threshold 1.
  TimeSet s = TimeSet::periodic(r(1), {{r(0), r(1, 2)}}, r(1), {{r(0), r(1, 2)}});
  EXPECT_EQ(s.threshold(), r(0));
  EXPECT_EQ(s.period(), r(1));
  EXPECT_TRUE(s.transient().empty());
}

TEST(TimeSetCanonical, RejectsBadShapes) {
  EXPECT_THROW(TimeSet::periodic(r(-1), {}, r(1), {}), std::invalid_argument);
  EXPECT_THROW(TimeSet::periodic(r(0), {}, r(0), {}), std::invalid_argument);
  EXPECT_THROW(TimeSet::periodic(r(1), {{r(0), r(2)}}, r(1), {}), std::invalid_argument);
  EXPECT_THROW(TimeSet::periodic(r(0), {}, r(1), {{r(1, 2), r(1, 4)}}), std::invalid_argument);
}

TEST(TimeSetText, RoundTrip) {
  Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    TimeSet s = random_timeset(rng);
    EXPECT_EQ(TimeSet::parse(s.str()), s) << s;
  }
  EXPECT_EQ(TimeSet::parse("[0,1) ∪ [2,5/2) <period=1 from 3: [0,1/2)>"),
            TimeSet::periodic(r(3), {{r(0), r(1)}, {r(2), r(5, 2)}}, r(1), {{r(0), r(1, 2)}}));
  EXPECT_EQ(TimeSet::full().str(), "∅ ⟨period=1 from 0: [0,1)⟩");
  EXPECT_EQ(TimeSet::empty().str(), "∅ ⟨period=1 from 0: ∅⟩");
  EXPECT_THROW(TimeSet::parse("[0,1) ⟨period=1"), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Properties

class TimeSetLaws : public ::testing::Test {
 protected:
  Rng rng{20240611};
};

TEST_F(TimeSetLaws, BooleanAlgebra) {
  for (int k = 0; k < 300; ++k) {
    TimeSet a = random_timeset(rng), b = random_timeset(rng), c = random_timeset(rng);
    ASSERT_TRUE(equals(a | b, b | a));
    ASSERT_TRUE(equals(a & b, b & a));
    ASSERT_TRUE(equals((a | b) | c, a | (b | c)));
    ASSERT_TRUE(equals((a & b) & c, a & (b & c)));
    ASSERT_TRUE(equals(a & (b | c), (a & b) | (a & c)));
    ASSERT_TRUE(equals(a | (b & c), (a | b) & (a | c)));
    ASSERT_TRUE(equals(~(a | b), ~a & ~b));
    ASSERT_TRUE(equals(~(a & b), ~a | ~b));
    ASSERT_TRUE(equals(~~a, a));
    ASSERT_TRUE((a | ~a).is_full());
    ASSERT_TRUE((a & ~a).is_empty());
  }
}

TEST_F(TimeSetLaws, OperationsMatchGridMembership) {
  for (int k = 0; k < 150; ++k) {
    TimeSet a = random_timeset(rng), b = random_timeset(rng);
    TimeSet u = a | b, i = a & b, c = ~a;
    Rat horizon = max(a.threshold(), b.threshold()) + Rat(3) * lcm(a.period(), b.period());
    for (long n = 0; n <= static_cast<long>(horizon.to_double()) * 24; ++n) {
      Rat t(n, 24);
      ASSERT_EQ(u.contains(t), a.contains(t) || b.contains(t));
      ASSERT_EQ(i.contains(t), a.contains(t) && b.contains(t));
      ASSERT_EQ(c.contains(t), !a.contains(t));
    }
  }
}

TEST_F(TimeSetLaws, BoxIsS4Comonad) {
  for (int k = 0; k < 300; ++k) {
    TimeSet s = random_timeset(rng), t = random_timeset(rng);
    TimeSet b = box(s);
    ASSERT_TRUE(subset(b, s));
    ASSERT_TRUE(equals(box(b), b));
    ASSERT_TRUE(equals(box(s & t), box(s) & box(t)));
    ASSERT_TRUE(b.is_empty() || b == TimeSet::interval(*b.first()));
  }
  EXPECT_TRUE(box(TimeSet::full()).is_full());
}

TEST_F(TimeSetLaws, PreimageIsHomomorphism) {
  for (int k = 0; k < 200; ++k) {
    TimeSet a = random_timeset(rng), b = random_timeset(rng);
    Reparam f = random_falter(rng), g = random_falter(rng);
    ASSERT_TRUE(equals(preimage(f, a | b), preimage(f, a) | preimage(f, b)));
    ASSERT_TRUE(equals(preimage(f, a & b), preimage(f, a) & preimage(f, b)));
    ASSERT_TRUE(equals(preimage(f, ~a), ~preimage(f, a)));
    ASSERT_TRUE(equals(preimage(compose(f, g), a), preimage(g, preimage(f, a))));
  }
}

TEST_F(TimeSetLaws, PreimageMatchesPointwise) {
  for (int k = 0; k < 100; ++k) {
    TimeSet a = random_timeset(rng);
    Reparam f = random_falter(rng);
    TimeSet p = preimage(f, a);
    for (long n = 0; n <= 12 * 8; ++n) {
      Rat t(n, 8);
      ASSERT_EQ(p.contains(t), a.contains(f(t))) << f.str() << " " << a << " at " << t;
    }
  }
}

TEST_F(TimeSetLaws, BoxCommutesWithStutters) {
  for (int k = 0; k < 200; ++k) {
    TimeSet a = random_timeset(rng);
    Reparam s = random_stutter(rng);
    ASSERT_TRUE(equals(preimage(s, box(a)), box(preimage(s, a))));
  }
}

TEST_F(TimeSetLaws, NormalizationIsIdempotent) {
  for (int k = 0; k < 200; ++k) {
    TimeSet a = random_timeset(rng);
    TimeSet again(a.indicator());
    ASSERT_EQ(again, a);
    ASSERT_EQ(TimeSet::periodic(a.threshold(), a.transient(), a.period(), a.pattern()), a);
  }
}

/// The same set written with a later threshold and a doubled period.
TimeSet restated(const TimeSet& a) {
  Rat t = a.threshold() + Rat(1), p = a.period() * Rat(2);
  std::vector<Interval> transient, pattern;
  for (const auto& iv : a.intervals_until(t + p)) {
    Rat lo = iv.lo, hi = *iv.hi;
    if (lo < t) transient.push_back({lo, min(hi, t)});
    if (hi > t) pattern.push_back({max(lo, t) - t, hi - t});
  }
  return TimeSet::periodic(t, transient, p, pattern);
}

TEST_F(TimeSetLaws, EqualsAgreesWithGridOracle) {
  for (int k = 0; k < 300; ++k) {
    TimeSet a = random_timeset(rng);
    TimeSet b = restated(a);
    ASSERT_TRUE(grid_equal(a, b));
    ASSERT_TRUE(equals(a, b)) << a << " vs " << b;
    TimeSet c = random_timeset(rng);
    ASSERT_EQ(equals(a, c), grid_equal(a, c)) << a << " vs " << c;
  }
}
