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

#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "metasub/meta.hpp"
#include "metasub/objectives.hpp"
#include "metasub/verify.hpp"

namespace metasub {
namespace {

const double kRatio = 1.0 - 1.0 / std::numbers::e;

SetFunctionPtr modular(std::initializer_list<double> w) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(w.size()));
  Eigen::Index i = 0;
  for (double x : w) v[i++] = x;
  return std::make_shared<ModularObjective>(v);
}

TEST(BruteForceTest, MetaOptimumOnHandInstance) {
  const TaskList tasks{modular({5, 4, 0, 1}), modular({5, 0, 4, 1})};
  const BruteForceResult r = brute_force_meta_opt(tasks, {2, 1});
  EXPECT_DOUBLE_EQ(r.opt_value, 9.0);
  EXPECT_EQ(r.opt_s_tr, ElementSet({0_e}));
  EXPECT_EQ(r.opt_per_task[0], ElementSet({1_e}));
  EXPECT_EQ(r.opt_per_task[1], ElementSet({2_e}));
  EXPECT_EQ(tasks[0]->calls(), 0u);
  // 1 + 4 candidate S_tr; each pairs with 2 tasks x (1 + |pool|) subsets.
  EXPECT_EQ(r.subsets_examined, 2u * (1u + 4u) + 4u * 2u * (1u + 3u));
}

TEST(BruteForceTest, SizingErrorInsteadOfTruncation) {
  const SmallInstance inst = random_small_instance(1);
  EXPECT_THROW(brute_force_meta_opt(inst.tasks, inst.budget, 10), SizingError);
  EXPECT_THROW(brute_force_max(*inst.tasks.front(), 3, 5), SizingError);
}

TEST(BruteForceTest, MaxAndTwoStage) {
  const TaskList tasks{modular({3, 0, 1}), modular({0, 3, 1})};
  EXPECT_DOUBLE_EQ(brute_force_max(*tasks[0], 2).value, 4.0);
  // q = 2, k = 1: keep {0, 1}, each task takes its favourite.
  const BruteForceMax two = brute_force_two_stage(tasks, 2, 1);
  EXPECT_DOUBLE_EQ(two.value, 3.0);
  EXPECT_EQ(two.best, ElementSet({0_e, 1_e}));
}

TEST(BruteForceTest, GreedyNeverBeatsOptimum) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const SmallInstance inst = random_small_instance(seed);
    const double opt = brute_force_meta_opt(inst.tasks, inst.budget).opt_value;
    EXPECT_LE(meta_greedy(inst.tasks, inst.budget).objective, opt + 1e-9);
  }
}

TEST(BoundTest, PropositionBound) {
  EXPECT_DOUBLE_EQ(proposition_bound(BoundKind::kBeta, 0.0, 1.0), kRatio);
  EXPECT_DOUBLE_EQ(proposition_bound(BoundKind::kGamma, 0.9, 1.0), 0.9);
  EXPECT_DOUBLE_EQ(proposition_bound(BoundKind::kBeta, 0.2, 2.0),
                   kRatio * 1.6 + 0.2);
}

TEST(BoundTest, CertificateClosedForm) {
  // At beta = gamma = 0.4 both lower bounds meet the inner maximum, giving
  // 0.4 + 0.2 (1 - 1/e).
  const double closed = 0.4 + 0.2 * kRatio;
  EXPECT_NEAR(meta_greedy_inner_min(0.4, 0.4), closed, 1e-12);
  const Certificate c = theorem1_certificate(1000);
  EXPECT_NEAR(c.value, closed, 1e-9);
  EXPECT_LE(c.value, kRatio);
}

TEST(BoundTest, CertificateRefinesMonotonically) {
  const double a = theorem1_certificate(100).value;
  const double b = theorem1_certificate(200).value;
  const double c = theorem1_certificate(1000).value;
  EXPECT_LE(b, a + 1e-15);
  EXPECT_LE(c, a + 1e-15);
  EXPECT_LT(std::abs(a - c), 1e-3);
  EXPECT_THROW(theorem1_certificate(50), std::domain_error);
}

TEST(BoundTest, InnerMinAtCorners) {
  // beta = gamma = 0: both thetas start at (1 - 1/e); terms three and four
  // then read (1 - 1/e) - 2 (1 - 1/e) + ... <= the thetas.
  EXPECT_NEAR(meta_greedy_inner_min(0.0, 0.0), kRatio, 1e-12);
  // beta = 1 forces theta1 >= 1.
  EXPECT_GE(meta_greedy_inner_min(1.0, 0.0), 1.0 - 1e-12);
}

TEST(BoundTest, Theorem2Values) {
  const double b = 0.01;
  const double expected = 1.0 - b - std::exp(-1.0 + 3.0 * std::sqrt(b * std::log(1.0 / b)));
  EXPECT_NEAR(theorem2_bound(200, 100), expected, 1e-12);
  EXPECT_NEAR(theorem2_bound(200, 100), 0.2897, 1e-3);
  EXPECT_LT(theorem2_bound(4, 2), 0.0);  // vacuous at small budgets
  EXPECT_THROW(theorem2_bound(3, 3), std::domain_error);
}

TEST(PropertyTest, DetectsCounterexample) {
  auto base = build_counterexample();
  auto f = std::make_shared<BestAugmentationObjective>(base, 1);
  const PropertyReport r = check_submodular(*f);
  ASSERT_FALSE(r.passed);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_GT(r.witness->rhs, r.witness->lhs);
  EXPECT_TRUE(check_monotone(*f).passed);

  const Witness w =
      diminishing_returns(*f, {}, {*base->find("ACDJ")}, *base->find("IDEH"));
  EXPECT_DOUBLE_EQ(w.lhs, 0.25);
  EXPECT_DOUBLE_EQ(w.rhs, 0.75);
}

// Sum of weights, one of them negative, so f decreases.
class SignedSum final : public SetFunction {
 public:
  SignedSum() : SetFunction(GroundSet(3)) {}
  double value_of(std::span<const ElementId> s) const override {
    double v = 0.0;
    for (ElementId e : s) v += e == 1_e ? -1.0 : 1.0;
    return v;
  }
};

TEST(PropertyTest, DetectsNonMonotone) {
  SignedSum f;
  const PropertyReport r = check_monotone(f, 200);
  EXPECT_FALSE(r.passed);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_GT(r.witness->lhs, r.witness->rhs);
}

TEST(InstanceTest, ReproducibleAndWithinLimits) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const SmallInstance a = random_small_instance(seed);
    const SmallInstance b = random_small_instance(seed);
    const std::size_t n = a.tasks.front()->size();
    EXPECT_LE(n, 12u);
    EXPECT_LE(a.tasks.size(), 3u);
    EXPECT_GE(a.budget.l, 1u);
    EXPECT_LT(a.budget.l, a.budget.k);
    EXPECT_LE(a.budget.k, std::min<std::size_t>(4, n));
    const ElementSet all = ElementSet::all(n);
    EXPECT_EQ(a.tasks.front()->value_of(all.members()),
              b.tasks.front()->value_of(all.members()));
  }
}

}  // namespace
}  // namespace metasub
