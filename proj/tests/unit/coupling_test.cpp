#include <gtest/gtest.h>

#include "cbd/coupling.hpp"
#include "cbd/cyclic.hpp"
#include "cbd/errors.hpp"
#include "cbd/scenarios.hpp"
#include "support/builders.hpp"
#include "support/random_systems.hpp"
#include "support/transforms.hpp"

namespace cbd {
namespace {

using testing::make_system;
const std::array<double, 8> kZero{};
constexpr auto kAlways = CouplingConstraint::EqualAlways;
constexpr auto kMax = CouplingConstraint::MaxEquality;

TEST(MaxEquality, Examples) {
  EXPECT_EQ(max_equality_probability(0.7, 0.7), 1.0);
  EXPECT_EQ(max_equality_probability(1.0, 0.0), 0.0);
  EXPECT_NEAR(max_equality_probability(0.6, 0.4), 0.8, 1e-15);
  EXPECT_THROW(max_equality_probability(-0.1, 0.5), std::invalid_argument);
  EXPECT_THROW(max_equality_probability(0.5, 1.5), std::invalid_argument);
}

TEST(ConstraintNames, RoundTrip) {
  for (auto c : {kAlways, kMax}) EXPECT_EQ(parse_constraint(to_string(c)), c);
  EXPECT_FALSE(parse_constraint("sometimes"));
}

TEST(FeasibilityProblem, RankFourShape) {
  const auto p = build_feasibility_problem(build_bell({1, 1, 1, 1}, kZero), kMax);
  EXPECT_EQ(p.variables().size(), 8u);
  EXPECT_EQ(p.cols(), 256u);
  EXPECT_EQ(p.rows(), 4u * 4u + 4u + 1u);
  EXPECT_EQ(p.equalities().size(), 4u);
  EXPECT_EQ(p.blocks().size(), 4u);
  EXPECT_EQ(p.blocks()[1].bit_offset, 2u);
  EXPECT_EQ(p.blocks()[1].row_offset, 4u);
}

TEST(FeasibilityProblem, RankTwoShape) {
  const auto p = build_feasibility_problem(
      build_question_order({{0.25, 0.25, 0.25, 0.25}, {0.25, 0.25, 0.25, 0.25}}), kMax);
  EXPECT_EQ(p.variables().size(), 4u);
  EXPECT_EQ(p.cols(), 16u);
}

TEST(FeasibilityProblem, EqualityTargets) {
  const auto sys = build_double_slit({0.1, 0.1, 0.08, 0.08, 0.05});
  const auto pmax = build_feasibility_problem(sys, kMax);
  const auto palways = build_feasibility_problem(sys, kAlways);
  for (const auto& e : palways.equalities()) EXPECT_EQ(e.target, 1.0);
  bool some_below_one = false;
  for (const auto& e : pmax.equalities()) some_below_one |= e.target < 1.0;
  EXPECT_TRUE(some_below_one);
}

TEST(FeasibilityProblem, ColumnsMatchDenseReference) {
  testing::Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const auto sys = testing::random_small_system(rng, 7);
    const auto p = build_feasibility_problem(sys, kMax);
    std::vector<double> y(p.rows());
    for (auto& v : y) v = testing::uniform(rng, -1, 1);
    for (std::size_t j = 0; j < p.cols(); ++j) {
      std::vector<double> col(p.rows(), 0.0);
      p.add_column(j, 1.0, col);
      double dot = 0.0;
      for (std::size_t i = 0; i < col.size(); ++i) {
        EXPECT_TRUE(col[i] == 0.0 || col[i] == 1.0);
        dot += col[i] * y[i];
      }
      EXPECT_NEAR(p.dot_column(j, y), dot, 1e-12);
    }
  }
}

TEST(FeasibilityProblem, Limits) {
  const std::vector<double> u(2, 0.5);
  const auto triple = make_system({{"c1", {"a"}, u}, {"c2", {"a"}, u}, {"c3", {"a"}, u}});
  try {
    build_feasibility_problem(triple, kMax);
    FAIL();
  } catch (const UnsupportedError& e) {
    EXPECT_NE(std::string(e.what()).find("unsupported connection size"), std::string::npos);
  }
  const auto bell = build_bell({1, 1, 1, 1}, kZero);
  EXPECT_THROW(build_feasibility_problem(bell, kMax, 7), UnsupportedError);
  EXPECT_NO_THROW(build_feasibility_problem(bell, kMax, 8));
}

TEST(Decide, SingleContextWitnessIsTheBunch) {
  const auto sys = make_system({{"c", {"a", "b"}, {0.1, 0.2, 0.3, 0.4}}});
  const auto v = decide(sys, kMax);
  ASSERT_TRUE(v.feasible);
  ASSERT_TRUE(v.witness);
  for (std::size_t e = 0; e < 4; ++e) EXPECT_NEAR(v.witness->probs[e], sys.bunch("c").probs[e], 1e-12);
  EXPECT_LE(witness_violation(sys, *v.witness, kMax), 1e-9);
}

TEST(Decide, QqSystemsAreFeasible) {
  testing::Rng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    EXPECT_TRUE(decide(testing::random_qq_rank2(rng), kMax).feasible);
  }
}

TEST(Decide, DoubleSlitIsFeasible) {
  const auto sys = build_double_slit({0.1, 0.1, 0.08, 0.08, 0.05});
  const auto v = decide(sys, kMax);
  ASSERT_TRUE(v.feasible);
  EXPECT_LE(witness_violation(sys, *v.witness, kMax), 1e-7);
  EXPECT_FALSE(decide(sys, kAlways).feasible);
}

TEST(Decide, PrBoxIsInfeasible) {
  const auto pr = build_bell({1, 1, 1, -1}, kZero);
  for (auto c : {kAlways, kMax}) {
    const auto v = decide(pr, c);
    EXPECT_FALSE(v.feasible);
    EXPECT_FALSE(v.witness);
    EXPECT_GT(v.max_constraint_violation, 0.1);
  }
}

TEST(Decide, TsirelsonPointIsInfeasible) {
  const double t = 1.0 / std::sqrt(2.0);
  EXPECT_FALSE(decide(build_bell({t, t, t, -t}, kZero), kMax).feasible);
}

TEST(Decide, BoundaryPointIsFeasibleAndFlaggedByCriterion) {
  const auto sys = build_bell({1, 1, 1, 1}, kZero);
  EXPECT_TRUE(decide(sys, kAlways).feasible);
}

TEST(WitnessViolation, DetectsCorruption) {
  const auto sys = build_double_slit({0.1, 0.1, 0.08, 0.08, 0.05});
  auto w = *decide(sys, kMax).witness;
  EXPECT_LE(witness_violation(sys, w, kMax), 1e-9);
  // Moving mass between two assignments that differ in one bit breaks a
  // bunch entry or an equality target.
  std::size_t j = 0;
  while (w.probs[j] < 0.01) ++j;
  w.probs[j] -= 0.01;
  w.probs[j ^ 1] += 0.01;
  EXPECT_GT(witness_violation(sys, w, kMax), 1e-3);
  w.variables.pop_back();
  EXPECT_THROW(witness_violation(sys, w, kMax), std::invalid_argument);
}

TEST(DecideProperties, EqualAlwaysFeasibleImpliesConsistent) {
  testing::Rng rng(23);
  int feasible = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const auto sys = testing::random_small_system(rng);
    if (decide(sys, kAlways).feasible) {
      ++feasible;
      EXPECT_LE(consistency(sys).max_marginal_gap, 1e-7);
    }
  }
  EXPECT_GT(feasible, 20);
}

TEST(DecideProperties, ConstraintsAgreeOnConsistentSystems) {
  testing::Rng rng(24);
  for (int trial = 0; trial < 300; ++trial) {
    const auto sys = testing::random_consistent_rank4(rng);
    EXPECT_EQ(decide(sys, kAlways).feasible, decide(sys, kMax).feasible);
  }
}

TEST(DecideProperties, InvariantUnderFlipsAndPermutations) {
  testing::Rng rng(25);
  for (int trial = 0; trial < 200; ++trial) {
    const auto sys = testing::random_small_system(rng);
    for (auto c : {kAlways, kMax}) {
      const bool base = decide(sys, c).feasible;
      const auto& id = sys.contents()[rng() % sys.contents().size()].id;
      EXPECT_EQ(decide(testing::flip_content(sys, id), c).feasible, base);
      EXPECT_EQ(decide(testing::reverse_everything(sys), c).feasible, base);
    }
  }
}

TEST(DecideProperties, MatchesClosedFormOnRankFour) {
  testing::Rng rng(26);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto sys = testing::random_rank4(rng);
    const auto crit = cbd_cyclic4(sys, *detect_cyclic(sys));
    EXPECT_EQ(decide(sys, kMax).feasible, crit.noncontextual)
        << "lhs " << crit.lhs << " rhs " << crit.rhs;
  }
}

TEST(DecideProperties, MatchesClosedFormOnRankTwo) {
  testing::Rng rng(27);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto sys = testing::random_rank2(rng);
    const auto crit = cbd_cyclic2(sys, *detect_cyclic(sys));
    EXPECT_EQ(decide(sys, kMax).feasible, crit.noncontextual)
        << "lhs " << crit.lhs << " rhs " << crit.rhs;
  }
}

}  // namespace
}  // namespace cbd
