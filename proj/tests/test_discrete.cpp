#include "support/generators.hpp"

#include <gtest/gtest.h>

using namespace faltertide;
using faltertide::testing::mod5_model;
using faltertide::testing::naive_disc;
using faltertide::testing::random_formula;
using faltertide::testing::random_lasso;
using faltertide::testing::Rng;

namespace {

const Model& model() {
  static const Model m = mod5_model();
  return m;
}

Formula parse_f(const std::string& text) { return parse(text, model().signature()); }

DiscreteBehavior xs(std::vector<std::uint32_t> prefix, std::vector<std::uint32_t> cycle) {
  Layout l = make_layout({"x", "y"});
  std::vector<State> p, c;
  for (auto v : prefix) p.push_back(faltertide::testing::xy(l, v, 0));
  for (auto v : cycle) c.push_back(faltertide::testing::xy(l, v, 0));
  return DiscreteBehavior(l, p, c);
}

VerdictKind kind(const std::string& f, const DiscreteBehavior& rho, FlexBound b = {}) {
  return eval_disc(model().interp, parse_f(f), model().rigid, rho, b).kind;
}

}  // namespace

TEST(EvalDisc, Examples) {
  EXPECT_EQ(kind("[][x' = x]_<x>", xs({}, {3})), VerdictKind::True);
  EXPECT_EQ(kind("[][x' = succ(x)]_<x>", xs({}, {0, 1, 2, 3, 4})), VerdictKind::True);

  Verdict v = eval_disc(model().interp, parse_f("[][x' = succ(x)]_<x>"), model().rigid, xs({}, {0, 2}));
  EXPECT_EQ(v.kind, VerdictKind::FalseWitnessed);
  ASSERT_TRUE(v.witness && v.witness->position);
  const DiscreteBehavior rho = xs({}, {0, 2});
  EXPECT_EQ(rho.at(*v.witness->position).get("x"), Value{0});
  EXPECT_EQ(rho.at(*v.witness->position + 1).get("x"), Value{2});
}

TEST(EvalDisc, AlwaysRangesOverEverySuffix) {
  EXPECT_EQ(kind("[](x = c)", xs({}, {2})), VerdictKind::True);
  EXPECT_EQ(kind("[](x = c)", xs({1}, {2})), VerdictKind::FalseWitnessed);
  EXPECT_EQ(kind("<>[](x = 2)", xs({0, 1}, {2})), VerdictKind::True);
  EXPECT_EQ(kind("<>[](x = 2)", xs({}, {2, 3})), VerdictKind::False);
  auto sat = satisfaction_disc(model().interp, parse_f("[](x = 2)"), model().rigid, xs({0, 1}, {2}));
  EXPECT_EQ(sat, (std::vector<bool>{false, false, true}));
}

TEST(EvalDisc, RigidQuantifierEnumeratesDomain) {
  EXPECT_EQ(kind("\\E v . [](x = v)", xs({}, {4})), VerdictKind::True);
  EXPECT_EQ(kind("\\E v . [](x = v)", xs({}, {4, 3})), VerdictKind::False);
  EXPECT_EQ(kind("\\A v . <>~(x = v)", xs({}, {0, 1})), VerdictKind::True);
}

TEST(EvalDisc, FlexibleQuantifierIsBounded) {
  Verdict exists = eval_disc(model().interp, parse_f("\\EE z . [](z = x)"), model().rigid, xs({}, {0, 1}));
  EXPECT_EQ(exists.kind, VerdictKind::TrueWithinBound);
  EXPECT_TRUE(exists.bounded);

  Verdict all = eval_disc(model().interp, parse_f("\\AA z . [](z = x)"), model().rigid, xs({}, {0, 1}));
  EXPECT_EQ(all.kind, VerdictKind::FalseWitnessed);
  ASSERT_TRUE(all.witness && all.witness->flex);
  EXPECT_TRUE(replay_disc(model().interp, *all.witness->flex));

  // A zero bound still quantifies over the unexpanded behavior.
  EXPECT_EQ(kind("\\EE z . [](z = x)", xs({}, {0, 1}), {0, 4096}), VerdictKind::TrueWithinBound);
}

TEST(EvalDisc, UnboundVariablesAreErrors) {
  Formula f = Formula::always(Formula::atom(Action::eq(Term::flex("x"), Term::rigid("k"))));
  EXPECT_THROW(eval_disc(model().interp, f, model().rigid, xs({}, {0})), EvalError);
  Formula g = Formula::always(Formula::atom(Action::eq(Term::flex("w"), Term::flex("x"))));
  EXPECT_THROW(eval_disc(model().interp, g, model().rigid, xs({}, {0})), EvalError);
}

TEST(StutterInvariance, Examples) {
  Rng rng(21);
  const auto& I = model().interp;
  DiscreteBehavior rho = xs({1}, {2, 3});
  DiscreteBehavior doubled = xs({1, 1}, {2, 2, 3, 3});
  for (const char* f : {"[](x = c)", "[][x' = succ(x)]_<x>", "<>(x = 3)", "\\A v . [](lt(x, v) \\/ x = v)"}) {
    EXPECT_EQ(eval_disc(I, parse_f(f), model().rigid, rho).kind, eval_disc(I, parse_f(f), model().rigid, doubled).kind)
        << f;
    EXPECT_TRUE(check_stutter_invariance_disc(I, parse_f(f), model().rigid, rho, 20, rng)) << f;
  }
}

TEST(StutterInvariance, StepCountingEvaluatorIsCaught) {
  Rng rng(22);
  auto counts_steps = [](const Formula&, const RigidEnv&, const DiscreteBehavior& r) { return r.size() % 2 == 0; };
  int caught = 0;
  for (int k = 0; k < 50; ++k) {
    DiscreteBehavior rho = random_lasso(rng);
    caught += !check_stutter_invariance_disc(parse_f("[](x = x)"), model().rigid, rho, 20, rng, counts_steps);
  }
  EXPECT_GT(caught, 40);
}

// ---------------------------------------------------------------------------
// Properties

TEST(DiscLaws, SuffixEvaluationMatchesNaiveUnrolling) {
  Rng rng(23);
  const auto& I = model().interp;
  for (int k = 0; k < 400; ++k) {
    Formula f = random_formula(rng);
    DiscreteBehavior rho = random_lasso(rng);
    auto sat = satisfaction_disc(I, f, model().rigid, rho);
    ASSERT_EQ(sat.size(), rho.size());
    for (std::size_t n = 0; n < 3 * rho.size(); ++n) {
      ASSERT_EQ(sat[rho.reduce(n)], naive_disc(I, f, model().rigid, rho, n)) << print(f) << " at " << n;
    }
  }
}

TEST(DiscLaws, StutterInvarianceIsExact) {
  Rng rng(24);
  const auto& I = model().interp;
  for (int k = 0; k < 200; ++k) {
    Formula f = random_formula(rng);
    DiscreteBehavior rho = random_lasso(rng);
    bool expected = eval_disc(I, f, model().rigid, rho).holds();
    for (int j = 0; j < 10; ++j) {
      DiscreteBehavior expanded = random_stutter_expansion(rho, rng);
      ASSERT_TRUE(stutter_equiv_disc(rho, expanded));
      ASSERT_EQ(eval_disc(I, f, model().rigid, expanded).holds(), expected) << print(f);
    }
  }
}

TEST(DiscLaws, DoubleNegation) {
  Rng rng(25);
  const auto& I = model().interp;
  for (int k = 0; k < 300; ++k) {
    Formula f = random_formula(rng);
    DiscreteBehavior rho = random_lasso(rng);
    Formula nn = Formula::negate(Formula::negate(f));
    ASSERT_EQ(satisfaction_disc(I, nn, model().rigid, rho), satisfaction_disc(I, f, model().rigid, rho));
  }
}

TEST(DiscLaws, FlexibleBoundIsMonotoneAndWitnessesReplay) {
  Rng rng(26);
  const auto& I = model().interp;
  int refuted = 0;
  for (int k = 0; k < 60; ++k) {
    Formula f = random_formula(rng, {.flexible_quantifiers = true, .depth = 2});
    if (!has_flexible_quantifier(f)) continue;
    DiscreteBehavior rho = random_lasso(rng, 1, 2, 3);
    std::optional<Verdict> previous;
    for (std::size_t bound = 0; bound <= 2; ++bound) {
      Verdict v = eval_disc(I, f, model().rigid, rho, {bound, 256});
      ASSERT_NE(v.kind, VerdictKind::True) << print(f);
      if (v.kind == VerdictKind::FalseWitnessed && v.witness->flex) {
        ASSERT_TRUE(replay_disc(I, *v.witness->flex, {bound, 256})) << print(f);
      }
      if (previous && previous->kind == VerdictKind::FalseWitnessed) {
        ASSERT_EQ(v.kind, VerdictKind::FalseWitnessed) << print(f) << " bound " << bound;
      }
      refuted += v.kind == VerdictKind::FalseWitnessed;
      previous = v;
    }
  }
  EXPECT_GT(refuted, 0);
}
