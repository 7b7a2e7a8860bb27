#include "support/generators.hpp"

#include <gtest/gtest.h>

using namespace faltertide;
using faltertide::testing::pick;
using faltertide::testing::random_lasso;
using faltertide::testing::random_trace;
using faltertide::testing::Rng;

namespace {

Rat r(long n, long d = 1) { return Rat(n, d); }

const Layout& X() {
  static const Layout l = make_layout({"x"});
  return l;
}
const Layout& XY() {
  static const Layout l = make_layout({"x", "y"});
  return l;
}

State s(std::uint32_t v) { return State(X(), {Value{v}}); }
State s2(std::uint32_t x, std::uint32_t y) { return State(XY(), {Value{x}, Value{y}}); }

DiscreteBehavior lasso(std::vector<std::uint32_t> pre, std::vector<std::uint32_t> cyc) {
  std::vector<State> p, c;
  for (auto v : pre) p.push_back(s(v));
  for (auto v : cyc) c.push_back(s(v));
  return DiscreteBehavior(X(), p, c);
}

ContTrace trace(std::vector<std::pair<std::uint32_t, Rat>> pre, std::vector<std::pair<std::uint32_t, Rat>> cyc) {
  std::vector<Segment> p, c;
  for (auto& [v, d] : pre) p.push_back({s(v), d});
  for (auto& [v, d] : cyc) c.push_back({s(v), d});
  return ContTrace(X(), p, c);
}

/// Walks segment by segment; independent of the step-function lookup.
const State& unrolled_value(const ContTrace& tau, const Rat& t) {
  Rat start(0);
  for (const auto& seg : tau.segments()) {
    if (t < start + seg.length) return seg.value;
    start += seg.length;
  }
  for (;;) {
    for (const auto& seg : tau.cycle()) {
      if (t < start + seg.length) return seg.value;
      start += seg.length;
    }
  }
}

std::vector<Rat> time_grid(long horizon, long den) {
  std::vector<Rat> out;
  for (long k = 0; k <= horizon * den; ++k) out.push_back(Rat(k, den));
  return out;
}

std::vector<State> unroll(const DiscreteBehavior& rho, std::size_t n) {
  std::vector<State> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(rho.at(i));
  return out;
}

std::vector<State> collapse(const std::vector<State>& xs) {
  std::vector<State> out;
  for (const auto& x : xs) {
    if (out.empty() || !(out.back() == x)) out.push_back(x);
  }
  return out;
}

bool eventually_constant(const DiscreteBehavior& rho) {
  for (const auto& c : rho.cycle()) {
    if (!(c == rho.cycle().front())) return false;
  }
  return true;
}

/// Compares the run-collapsed words of long unrollings. Runs before the last
/// one are exact; a trailing run is exact only for eventually constant words.
bool stutter_equiv_oracle(const DiscreteBehavior& a, const DiscreteBehavior& b) {
  const std::size_t len = 4 * (a.size() + b.size()) * (a.cycle().size() * b.cycle().size() + 1);
  auto ca = collapse(unroll(a, len)), cb = collapse(unroll(b, len));
  bool fa = eventually_constant(a), fb = eventually_constant(b);
  if (fa != fb) return false;
  if (fa) return ca == cb;
  std::size_t n = std::min(ca.size(), cb.size()) - 1;
  return std::equal(ca.begin(), ca.begin() + static_cast<long>(n), cb.begin());
}

bool no_consecutive_repeats(const DiscreteBehavior& rho) {
  for (std::size_t i = 0; i < rho.size() + rho.cycle().size(); ++i) {
    if (rho.at(i) == rho.at(i + 1) && rho.cycle().size() > 1) return false;
    if (rho.at(i) == rho.at(i + 1) && i < rho.prefix().size()) return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Discrete behaviors

TEST(DiscreteBehavior, RejectsEmptyCycle) {
  EXPECT_THROW(DiscreteBehavior(X(), {s(0)}, {}), TraceError);
  EXPECT_THROW(DiscreteBehavior(X(), {}, {s2(0, 0)}), TraceError);
}

TEST(DiscreteBehavior, IndexesThroughTheCycle) {
  DiscreteBehavior rho = lasso({2, 1}, {2, 3, 4});
  EXPECT_EQ(rho.at(0), s(2));
  EXPECT_EQ(rho.at(1), s(1));
  EXPECT_EQ(rho.at(2), s(2));
  EXPECT_EQ(rho.at(5), s(2));
  EXPECT_EQ(rho.at(9), s(3));
}

TEST(SuffixDisc, Examples) {
  DiscreteBehavior rho = lasso({0, 1}, {2});
  EXPECT_EQ(suffix_disc(rho, 0), rho);
  EXPECT_EQ(suffix_disc(rho, 1), lasso({1}, {2}));

  DiscreteBehavior abc = lasso({}, {0, 1, 2});
  EXPECT_EQ(suffix_disc(abc, 4), lasso({}, {1, 2, 0}));
  for (std::size_t n = 0; n <= 20; ++n) {
    DiscreteBehavior suf = suffix_disc(abc, n);
    for (std::size_t m = 0; m <= 20; ++m) ASSERT_EQ(suf.at(m), abc.at(n + m));
  }
}

TEST(SuffixDisc, AgreesPointwiseOnRandomLassos) {
  Rng rng(21);
  for (int k = 0; k < 200; ++k) {
    DiscreteBehavior rho = random_lasso(rng);
    std::size_t n = pick(rng, 15);
    DiscreteBehavior suf = suffix_disc(rho, n);
    for (std::size_t m = 0; m < 20; ++m) ASSERT_EQ(suf.at(m), rho.at(n + m));
  }
}

TEST(DestutterDisc, Examples) {
  EXPECT_EQ(destutter_disc(lasso({0, 0, 1}, {1, 1})), lasso({0}, {1}));
  EXPECT_EQ(destutter_disc(lasso({}, {0})), lasso({}, {0}));
  DiscreteBehavior alternating = destutter_disc(lasso({0}, {1, 0, 1, 0}));
  EXPECT_EQ(alternating, destutter_disc(lasso({0, 0}, {0, 1})));
  EXPECT_EQ(alternating, lasso({}, {0, 1}));
  EXPECT_TRUE(stutter_equiv_oracle(lasso({0}, {1, 0, 1, 0}), lasso({0, 0}, {0, 1})));
}

TEST(DestutterDisc, OutputIsCanonical) {
  Rng rng(22);
  for (int k = 0; k < 400; ++k) {
    DiscreteBehavior rho = random_lasso(rng, 4, 5, 3);
    DiscreteBehavior d = destutter_disc(rho);
    ASSERT_TRUE(no_consecutive_repeats(d)) << k;
    ASSERT_EQ(destutter_disc(d), d);
    ASSERT_TRUE(stutter_equiv_oracle(rho, d));
  }
}

TEST(StutterEquivDisc, Examples) {
  DiscreteBehavior rho = lasso({0, 1}, {2, 3});
  EXPECT_TRUE(stutter_equiv_disc(rho, lasso({0, 1, 1}, {2, 3})));
  EXPECT_FALSE(stutter_equiv_disc(lasso({}, {0, 1}), lasso({}, {0, 2})));
  EXPECT_THROW(stutter_equiv_disc(rho, DiscreteBehavior(XY(), {}, {s2(0, 0)})), TraceError);
}

TEST(StutterEquivDisc, RotationMustMatchTheStartingState) {
  // a b a b ... and b a b a ... differ at position 0; any monotone surjection
  // on the naturals maps 0 to 0.
  EXPECT_FALSE(stutter_equiv_disc(lasso({}, {0, 1}), lasso({}, {1, 0})));
  EXPECT_FALSE(stutter_equiv_oracle(lasso({}, {0, 1}), lasso({}, {1, 0})));
  // Rotated cycles reached through a prefix denote the same word.
  EXPECT_TRUE(stutter_equiv_disc(lasso({0}, {1, 0}), lasso({}, {0, 1})));
}

TEST(StutterEquivDisc, MatchesUnrollingOracle) {
  Rng rng(23);
  int equivalent = 0;
  for (int k = 0; k < 2000; ++k) {
    DiscreteBehavior a = random_lasso(rng, 3, 3, 2);
    DiscreteBehavior b = random_lasso(rng, 3, 3, 2);
    bool e = stutter_equiv_disc(a, b);
    equivalent += e;
    ASSERT_EQ(e, stutter_equiv_oracle(a, b)) << k;
  }
  EXPECT_GT(equivalent, 20);
}

TEST(StutterEquivDisc, IsAnEquivalenceRelation) {
  Rng rng(24);
  for (int k = 0; k < 300; ++k) {
    DiscreteBehavior a = random_lasso(rng, 3, 3, 2);
    DiscreteBehavior b = random_stutter_expansion(a, rng);
    DiscreteBehavior c = random_stutter_expansion(b, rng);
    DiscreteBehavior d = random_lasso(rng, 3, 3, 2);
    ASSERT_TRUE(stutter_equiv_disc(a, a));
    ASSERT_TRUE(stutter_equiv_disc(a, b));
    ASSERT_TRUE(stutter_equiv_disc(b, a));
    ASSERT_TRUE(stutter_equiv_disc(a, c));
    ASSERT_EQ(stutter_equiv_disc(a, d), stutter_equiv_disc(d, a));
    if (stutter_equiv_disc(a, d) && stutter_equiv_disc(d, c)) {
      ASSERT_TRUE(stutter_equiv_disc(a, c));
    }
  }
}

TEST(ExpandDisc, RepeatsPositions) {
  auto [e, first] = expand_disc(lasso({0}, {1, 2}), {1, 0, 2});
  EXPECT_EQ(e, lasso({0, 0}, {1, 2, 2, 2}));
  EXPECT_EQ(first, (std::vector<std::size_t>{0, 2, 3}));
  EXPECT_THROW(expand_disc(lasso({}, {0}), {1, 1}), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Continuous traces

TEST(ContTrace, RejectsZeroDurations) {
  EXPECT_THROW(trace({{0, r(0)}}, {{1, r(1)}}), std::invalid_argument);
  EXPECT_THROW(trace({}, {{1, r(-1)}}), std::invalid_argument);
  EXPECT_THROW(trace({}, {}), std::invalid_argument);
}

TEST(ValueAt, Examples) {
  EXPECT_EQ(value_at(trace({}, {{3, r(1)}}), r(5)), s(3));
  ContTrace tau = trace({{0, r(1)}, {1, r(2)}}, {{2, r(1)}});
  EXPECT_EQ(value_at(tau, r(3, 2)), s(1));
  EXPECT_EQ(value_at(tau, r(100)), s(2));
  EXPECT_EQ(value_at(tau, r(100)), unrolled_value(tau, r(100)));
  EXPECT_EQ(value_at(tau, r(3)), s(2));
  EXPECT_EQ(value_at(tau, r(1)), s(1));
  EXPECT_THROW(value_at(tau, r(-1, 2)), std::domain_error);
}

TEST(ValueAt, MatchesUnrollOracle) {
  Rng rng(31);
  for (int k = 0; k < 200; ++k) {
    ContTrace tau = random_trace(rng);
    for (const auto& t : time_grid(12, 6)) ASSERT_EQ(value_at(tau, t), unrolled_value(tau, t));
  }
}

struct NextChangeCase {
  const char* name;
  std::vector<std::pair<std::pair<std::uint32_t, std::uint32_t>, Rat>> prefix, cycle;
  std::vector<std::string> vars;
  Rat expected;
};

class NextChangeTable : public ::testing::TestWithParam<NextChangeCase> {};

TEST_P(NextChangeTable, Matches) {
  const auto& c = GetParam();
  std::vector<Segment> pre, cyc;
  for (auto& [v, d] : c.prefix) pre.push_back({s2(v.first, v.second), d});
  for (auto& [v, d] : c.cycle) cyc.push_back({s2(v.first, v.second), d});
  EXPECT_EQ(next_change(ContTrace(XY(), pre, cyc), c.vars), c.expected);
}

INSTANTIATE_TEST_SUITE_P(
    Cases, NextChangeTable,
    ::testing::Values(
        NextChangeCase{"constant", {}, {{{0, 0}, r(1)}}, {"x", "y"}, r(0)},
        NextChangeCase{"constant_no_vars", {}, {{{0, 0}, r(1)}}, {}, r(0)},
        NextChangeCase{"x_changes_at_3", {{{0, 0}, r(3)}}, {{{1, 0}, r(1)}}, {"x"}, r(3)},
        NextChangeCase{"y_change_skipped", {{{0, 0}, r(1)}, {{0, 1}, r(2)}}, {{{1, 1}, r(1)}}, {"x"}, r(3)},
        NextChangeCase{"y_change_seen", {{{0, 0}, r(1)}, {{0, 1}, r(2)}}, {{{1, 1}, r(1)}}, {"y"}, r(1)},
        NextChangeCase{"cycle_returns", {}, {{{0, 0}, r(1, 2)}, {{1, 0}, r(1, 2)}}, {"x"}, r(1, 2)},
        NextChangeCase{"change_only_in_cycle", {{{2, 2}, r(5, 2)}}, {{{2, 2}, r(1)}, {{2, 3}, r(1)}}, {"y"},
                       r(7, 2)},
        NextChangeCase{"other_var_never", {{{2, 2}, r(5, 2)}}, {{{2, 2}, r(1)}, {{2, 3}, r(1)}}, {"x"}, r(0)}),
    [](const auto& info) { return std::string(info.param.name); });

TEST(NextChange, RejectsUnknownVariable) {
  EXPECT_THROW(next_change(trace({}, {{0, r(1)}}), {"z"}), TraceError);
}

TEST(NextChange, MatchesBoundaryScan) {
  Rng rng(32);
  for (int k = 0; k < 300; ++k) {
    ContTrace tau = random_trace(rng, 3, 3, 2);
    std::vector<std::string> vars;
    if (faltertide::testing::coin(rng)) vars.push_back("x");
    if (faltertide::testing::coin(rng)) vars.push_back("y");
    // Scan the unrolled boundaries for the first change of a watched variable.
    Rat expected(0), start(0);
    const State& s0 = value_at(tau, r(0));
    bool found = false;
    std::vector<Segment> walk = tau.segments();
    for (int round = 0; round < 2; ++round) walk.insert(walk.end(), tau.cycle().begin(), tau.cycle().end());
    for (const auto& seg : walk) {
      if (!found && !seg.value.agrees_on(s0, vars)) {
        expected = start;
        found = true;
      }
      start += seg.length;
    }
    ASSERT_EQ(next_change(tau, vars), expected);
  }
}

TEST(SuffixCont, Examples) {
  ContTrace tau = trace({{0, r(2)}}, {{1, r(1)}});
  EXPECT_TRUE(same_trace(suffix_cont(tau, r(0)), tau));
  EXPECT_TRUE(same_trace(suffix_cont(tau, r(1)), trace({{0, r(1)}}, {{1, r(1)}})));

  ContTrace ab = trace({}, {{0, r(1)}, {1, r(1)}});
  ContTrace suf = suffix_cont(ab, r(5, 2));
  EXPECT_TRUE(same_trace(suf, trace({{0, r(1, 2)}}, {{1, r(1)}, {0, r(1)}})));
  EXPECT_EQ(value_at(suf, r(0)), s(0));
  for (const auto& t : time_grid(8, 4)) ASSERT_EQ(value_at(suf, t), value_at(ab, t + r(5, 2)));
  EXPECT_THROW(suffix_cont(ab, r(-1)), std::domain_error);
}

TEST(SuffixCont, ComposesAdditively) {
  Rng rng(33);
  for (int k = 0; k < 200; ++k) {
    ContTrace tau = random_trace(rng);
    Rat a = random_rat(rng, 4, 6), b = random_rat(rng, 4, 6);
    ContTrace lhs = suffix_cont(suffix_cont(tau, a), b), rhs = suffix_cont(tau, a + b);
    ASSERT_TRUE(same_trace(lhs, rhs));
    for (const auto& t : time_grid(8, 6)) ASSERT_EQ(value_at(lhs, t), value_at(tau, a + b + t));
  }
}

TEST(ApplyReparam, Examples) {
  ContTrace ab = trace({}, {{0, r(1)}, {1, r(1)}});
  EXPECT_TRUE(same_trace(apply_reparam(ab, Reparam::identity()), ab));

  Reparam twice = Reparam::scale(r(2));
  ContTrace fast = apply_reparam(ab, twice);
  EXPECT_TRUE(same_trace(fast, trace({}, {{0, r(1, 2)}, {1, r(1, 2)}})));
  for (const auto& t : time_grid(6, 8)) ASSERT_EQ(value_at(fast, t), value_at(ab, twice(t)));

  ContTrace late = trace({{0, r(1)}}, {{1, r(1)}});
  ContTrace shifted = apply_reparam(late, Reparam::shift(r(1)));
  EXPECT_TRUE(same_trace(shifted, trace({}, {{1, r(1)}})));
  for (const auto& t : time_grid(6, 8)) ASSERT_EQ(value_at(shifted, t), value_at(late, t + r(1)));
}

TEST(ApplyReparam, IsPrecomposition) {
  Rng rng(34);
  for (int k = 0; k < 200; ++k) {
    ContTrace tau = random_trace(rng);
    Reparam f = random_falter(rng);
    ContTrace g = apply_reparam(tau, f);
    for (const auto& t : time_grid(10, 6)) ASSERT_EQ(value_at(g, t), value_at(tau, f(t)));
  }
}

TEST(ApplyReparam, RightActionAndInverses) {
  Rng rng(35);
  for (int k = 0; k < 200; ++k) {
    ContTrace tau = random_trace(rng);
    Reparam f = random_falter(rng), g = random_falter(rng), s = random_stutter(rng);
    ASSERT_TRUE(same_trace(apply_reparam(tau, compose(f, g)), apply_reparam(apply_reparam(tau, f), g)));
    ASSERT_TRUE(same_trace(apply_reparam(apply_reparam(tau, s), s.inverse()), tau));
    ASSERT_TRUE(stutter_equiv_cont(tau, apply_reparam(tau, s)));
  }
}

TEST(StutterEquivCont, Examples) {
  ContTrace ab = trace({}, {{0, r(1)}, {1, r(1)}});
  ContTrace stretched = trace({}, {{0, r(7)}, {1, r(1, 3)}});
  EXPECT_TRUE(stutter_equiv_cont(ab, stretched));
  // Witness: a stutter sending the k-th change point of `stretched` to k, over
  // twelve changes.
  std::vector<Knot> knots;
  Rat c(0);
  for (long k = 1; k <= 12; ++k) {
    c += k % 2 ? r(7) : r(1, 3);
    knots.push_back({c, Rat(k)});
  }
  Reparam w(r(0), knots, r(1));
  ContTrace mapped = apply_reparam(ab, w);
  for (const auto& t : time_grid(40, 6)) {
    if (t < c) {
      ASSERT_EQ(value_at(mapped, t), value_at(stretched, t)) << t;
    }
  }
  EXPECT_FALSE(stutter_equiv_cont(trace({}, {{0, r(1)}}), trace({}, {{1, r(1)}})));
}

TEST(StutterEquivCont, OrbitMembership) {
  Rng rng(36);
  for (int k = 0; k < 200; ++k) {
    ContTrace tau = random_trace(rng, 3, 3, 2);
    ASSERT_TRUE(stutter_equiv_cont(tau, apply_reparam(tau, random_stutter(rng))));
    ContTrace other = random_trace(rng, 3, 3, 2);
    ASSERT_EQ(stutter_equiv_cont(tau, other), stutter_equiv_oracle(state_sequence(tau), state_sequence(other)));
  }
}

TEST(EmbedDiscrete, Examples) {
  EXPECT_TRUE(same_trace(embed_discrete(lasso({}, {3})), trace({}, {{3, r(1)}})));
  EXPECT_TRUE(same_trace(embed_discrete(lasso({0}, {1}), r(2)), trace({{0, r(2)}}, {{1, r(2)}})));
  DiscreteBehavior rho = lasso({4, 0}, {1, 2, 3});
  ContTrace tau = embed_discrete(rho);
  for (std::size_t n = 0; n <= 10; ++n) ASSERT_EQ(value_at(tau, Rat(static_cast<long>(n)) + r(1, 2)), rho.at(n));
  EXPECT_THROW(embed_discrete(rho, r(0)), std::invalid_argument);
}
