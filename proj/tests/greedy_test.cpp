// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "metasub/greedy.hpp"
#include "metasub/objectives.hpp"
#include "metasub/verify.hpp"

namespace metasub {
namespace {

std::vector<ElementId> elements(const std::vector<GreedyPick>& picks) {
  std::vector<ElementId> out;
  for (const auto& p : picks) out.push_back(p.element);
  return out;
}

ModularObjective modular(std::initializer_list<double> w) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(w.size()));
  Eigen::Index i = 0;
  for (double x : w) v[i++] = x;
  return ModularObjective(v);
}

TEST(GreedyTest, TiesGoToSmallestId) {
  const auto f = modular({1.0, 2.0, 2.0, 2.0});
  const GreedyTrace t = greedy(f, {}, 2);
  EXPECT_EQ(elements(t.picks), (std::vector<ElementId>{1_e, 2_e}));
  EXPECT_DOUBLE_EQ(t.final_value, 4.0);
}

TEST(GreedyTest, StopsWhenNothingGains) {
  const auto f = modular({0.0, 3.0, 0.0});
  const GreedyTrace t = greedy(f, {}, 3);
  EXPECT_EQ(t.picks.size(), 1u);
  EXPECT_EQ(t.solution, ElementSet({1_e}));
}

TEST(GreedyTest, StartsFromInitialAndHonoursExclusions) {
  const auto f = modular({5.0, 4.0, 3.0, 2.0});
  const ElementSet exclude{1_e};
  const GreedyTrace t = greedy(f, {0_e}, 2, &exclude);
  EXPECT_EQ(t.solution, ElementSet({0_e, 2_e, 3_e}));
  EXPECT_EQ(t.picked(), ElementSet({2_e, 3_e}));
}

TEST(GreedyTest, OracleCallsForClassicRounds) {
  const auto f = modular({1.0, 2.0, 3.0, 4.0, 5.0});
  const GreedyTrace t = greedy(f, {}, 2);
  // 1 for the context, then n and n - 1 gains.
  EXPECT_EQ(t.oracle_calls, 1u + 5u + 4u);
}

TEST(GreedyTest, RestrictedCandidates) {
  const auto f = modular({9.0, 1.0, 2.0});
  const std::vector<ElementId> pool{1_e, 2_e};
  const GreedyTrace t = greedy_over(f, {}, 1, pool);
  EXPECT_EQ(t.solution, ElementSet({2_e}));
}

TEST(LazyGreedyTest, SamePicksFewerCalls) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SmallInstance inst = random_small_instance(seed, 12, 1, 6);
    const SetFunction& f = *inst.tasks.front();
    const GreedyTrace classic = greedy(f, {}, inst.budget.k);
    const GreedyTrace lazy = lazy_greedy(f, {}, inst.budget.k);
    EXPECT_EQ(elements(classic.picks), elements(lazy.picks)) << seed;
    EXPECT_LE(lazy.oracle_calls, classic.oracle_calls) << seed;
  }
}

TEST(GreedyTest, ApproximationOnSmallInstances) {
  const double ratio = 1.0 - 1.0 / std::numbers::e;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const SmallInstance inst = random_small_instance(seed);
    const SetFunction& f = *inst.tasks.front();
    const double opt = brute_force_max(f, inst.budget.k).value;
    EXPECT_GE(greedy(f, {}, inst.budget.k).final_value, ratio * opt - 1e-9);
  }
}

TEST(CompleteAtTestTest, AddsPerTaskBudget) {
  const auto f = modular({1.0, 2.0, 3.0, 4.0, 5.0});
  const TestCompletion c = complete_at_test(f, {0_e}, 3, 1);
  EXPECT_EQ(c.solution, ElementSet({0_e, 4_e, 3_e}));
  EXPECT_DOUBLE_EQ(c.value, 10.0);
  EXPECT_EQ(c.oracle_calls, 1u + 4u + 3u);
}

TEST(CompleteAtTestTest, ValidatesBudgets) {
  const auto f = modular({1.0, 2.0, 3.0});
  EXPECT_THROW(complete_at_test(f, {0_e, 1_e}, 3, 1), std::domain_error);
  EXPECT_THROW(complete_at_test(f, {}, 2, 2), std::domain_error);
  EXPECT_THROW(complete_at_test(f, {}, 4, 1), std::domain_error);
}

TEST(RandomSelectTest, ReproducibleDistinct) {
  const GroundSet g(50);
  const ElementSet a = random_select(g, 10, 3);
  EXPECT_EQ(a.size(), 10u);
  EXPECT_EQ(a, random_select(g, 10, 3));
  EXPECT_NE(a, random_select(g, 10, 4));
  EXPECT_THROW(random_select(g, 51, 0), std::domain_error);
}

}  // namespace
}  // namespace metasub
