#include <gtest/gtest.h>

#include "cbd/coupling.hpp"
#include "cbd/cyclic.hpp"
#include "cbd/errors.hpp"
#include "cbd/scenarios.hpp"
#include "oracle/brute_force.hpp"
#include "support/builders.hpp"
#include "support/random_systems.hpp"

namespace cbd {
namespace {

using testing::brute_force_decide;
const std::array<double, 8> kZero{};
constexpr auto kAlways = CouplingConstraint::EqualAlways;
constexpr auto kMax = CouplingConstraint::MaxEquality;

TEST(Oracle, MaxEqualityVertices) {
  EXPECT_NEAR(testing::brute_force_max_equality(0.6, 0.4), 0.8, 1e-15);
  EXPECT_NEAR(testing::brute_force_max_equality(1.0, 0.0), 0.0, 1e-15);
  EXPECT_NEAR(testing::brute_force_max_equality(0.7, 0.7), 1.0, 1e-15);
}

TEST(Oracle, DecideExamples) {
  const auto qq = build_question_order({{0.1, 0.2, 0.3, 0.4}, {0.2, 0.1, 0.4, 0.3}});
  const auto slit = build_double_slit({0.1, 0.1, 0.08, 0.08, 0.05});
  const auto pr = build_bell({1, 1, 1, -1}, kZero);
  for (const auto* sys : {&qq, &slit, &pr}) {
    for (auto c : {kAlways, kMax}) {
      EXPECT_EQ(brute_force_decide(*sys, c).feasible, decide(*sys, c).feasible);
    }
  }
  EXPECT_TRUE(brute_force_decide(slit, kMax).feasible);
  EXPECT_FALSE(brute_force_decide(pr, kMax).feasible);
  EXPECT_FALSE(brute_force_decide(pr, kAlways).feasible);
}

TEST(Oracle, WitnessValidates) {
  const auto slit = build_double_slit({0.1, 0.1, 0.08, 0.08, 0.05});
  const auto v = brute_force_decide(slit, kMax);
  ASSERT_TRUE(v.witness);
  EXPECT_LE(witness_violation(slit, *v.witness, kMax), 1e-7);
}

TEST(Oracle, Limits) {
  const std::vector<double> u(2, 0.5);
  const auto triple = testing::make_system(
      {{"c1", {"a"}, u}, {"c2", {"a"}, u}, {"c3", {"a"}, u}});
  EXPECT_THROW(brute_force_decide(triple, kMax), UnsupportedError);
  const std::vector<double> wide(std::size_t{1} << 13, 1.0 / 8192);
  std::vector<std::string> names;
  for (int i = 0; i < 13; ++i) names.push_back("v" + std::to_string(i));
  EXPECT_THROW(brute_force_decide(testing::make_system({{"c", names, wide}}), kMax),
               UnsupportedError);
}

TEST(Oracle, AgreesWithEngineOnRandomSystems) {
  testing::Rng rng(31);
  int feasible = 0, infeasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto sys = testing::random_small_system(rng);
    for (auto c : {kAlways, kMax}) {
      const bool mine = decide(sys, c).feasible;
      EXPECT_EQ(brute_force_decide(sys, c).feasible, mine);
      (mine ? feasible : infeasible)++;
    }
  }
  EXPECT_GT(feasible, 100);
  EXPECT_GT(infeasible, 100);
}

TEST(Oracle, AgreesWithClosedForms) {
  testing::Rng rng(32);
  for (int trial = 0; trial < 300; ++trial) {
    const auto r4 = testing::random_rank4(rng);
    EXPECT_EQ(brute_force_decide(r4, kMax).feasible,
              cbd_cyclic4(r4, *detect_cyclic(r4)).noncontextual);
    const auto r2 = testing::random_rank2(rng);
    EXPECT_EQ(brute_force_decide(r2, kMax).feasible,
              cbd_cyclic2(r2, *detect_cyclic(r2)).noncontextual);
  }
}

TEST(Oracle, ChshBoundFromDeterministicAssignments) {
  // Over the 16 deterministic +-1 quadruples, the CHSH expression never
  // exceeds 2, so any convex combination is bounded by 2 as well.
  double best = 0.0;
  for (int s = 0; s < 16; ++s) {
    double v[4];
    for (int i = 0; i < 4; ++i) v[i] = (s >> i) & 1 ? 1.0 : -1.0;
    double prods[4];
    for (int i = 0; i < 4; ++i) prods[i] = v[i] * v[(i + 1) % 4];
    const double sum = prods[0] + prods[1] + prods[2] + prods[3];
    for (int j = 0; j < 4; ++j) best = std::max(best, std::abs(sum - 2 * prods[j]));
  }
  EXPECT_EQ(best, 2.0);
}

}  // namespace
}  // namespace cbd
