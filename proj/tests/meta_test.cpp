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

#include "metasub/data.hpp"
#include "metasub/meta.hpp"
#include "metasub/objectives.hpp"
#include "metasub/verify.hpp"

namespace metasub {
namespace {

SetFunctionPtr modular(std::initializer_list<double> w) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(w.size()));
  Eigen::Index i = 0;
  for (double x : w) v[i++] = x;
  return std::make_shared<ModularObjective>(v);
}

// Both tasks like element 0; each has one private favourite.
TaskList two_tasks() {
  return {modular({5, 4, 0, 1}), modular({5, 0, 4, 1})};
}

TEST(TrainFirstTest, SharedElementThenPrivateOnes) {
  const MetaSolution s = train_first_greedy(two_tasks(), {2, 1});
  EXPECT_EQ(s.s_tr, ElementSet({0_e}));
  EXPECT_EQ(s.per_task[0], ElementSet({1_e}));
  EXPECT_EQ(s.per_task[1], ElementSet({2_e}));
  EXPECT_DOUBLE_EQ(s.objective, 9.0);
  EXPECT_EQ(s.origin, "train-first");
}

TEST(TaskFirstTest, PrivateFirstThenSummedGains) {
  const MetaSolution s = task_first_greedy(two_tasks(), {2, 1});
  EXPECT_EQ(s.per_task[0], ElementSet({0_e}));
  EXPECT_EQ(s.per_task[1], ElementSet({0_e}));
  // Summed gains: e1 -> 4, e2 -> 4, tie to the smaller id.
  EXPECT_EQ(s.s_tr, ElementSet({1_e}));
  EXPECT_DOUBLE_EQ(s.objective, (9.0 + 5.0) / 2.0);
}

TEST(MetaGreedyTest, KeepsBetterOrdering) {
  const MetaSolution s = meta_greedy(two_tasks(), {2, 1});
  EXPECT_EQ(s.origin, "train-first");
  EXPECT_DOUBLE_EQ(s.objective, 9.0);
}

TEST(MetaGreedyTest, ObjectiveMatchesReevaluation) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SmallInstance inst = random_small_instance(seed);
    const MetaSolution s = meta_greedy(inst.tasks, inst.budget);
    EXPECT_NEAR(s.objective, meta_objective(inst.tasks, s.s_tr, s.per_task),
                1e-12);
    EXPECT_LE(s.s_tr.size(), inst.budget.l);
    for (const auto& p : s.per_task) {
      EXPECT_LE(p.size(), inst.budget.per_task());
    }
  }
}

TEST(MetaGreedyTest, SingleTaskSetsAreDisjoint) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SmallInstance inst = random_small_instance(seed);
    inst.tasks.resize(1);
    for (const MetaSolution& s : {train_first_greedy(inst.tasks, inst.budget),
                                  task_first_greedy(inst.tasks, inst.budget)}) {
      for (ElementId e : s.per_task[0]) EXPECT_FALSE(s.s_tr.contains(e));
    }
  }
}

TEST(MetaGreedyTest, RejectsBadBudgets) {
  EXPECT_THROW(meta_greedy(two_tasks(), {2, 2}), std::domain_error);
  EXPECT_THROW(meta_greedy(two_tasks(), {5, 1}), std::domain_error);
  EXPECT_THROW(meta_greedy({}, {2, 1}), std::domain_error);
}

TEST(RandomizedTest, ReproducibleAndWithinBudget) {
  const Suite suite = synthetic_suite(SuiteKind::kCoverage, 40, 5, 0, 1);
  const Budget b{10, 4};
  const MetaSolution a = randomized_meta_greedy(suite.train, b, 7);
  const MetaSolution c = randomized_meta_greedy(suite.train, b, 7);
  EXPECT_EQ(a.s_tr, c.s_tr);
  EXPECT_EQ(a.train_steps, c.train_steps);
  EXPECT_LE(a.s_tr.size(), b.l);
  for (const auto& p : a.per_task) EXPECT_LE(p.size(), b.per_task());
  // The main loop ends as soon as one side has used its budget.
  std::size_t train = 0;
  for (bool t : a.train_steps) train += t ? 1 : 0;
  const std::size_t task = a.train_steps.size() - train;
  EXPECT_TRUE(train == b.l || task == b.per_task());
  EXPECT_LE(train, b.l);
  EXPECT_LE(task, b.per_task());
}

TEST(RandomizedTest, CoinFrequencyMatchesRatio) {
  const TaskList tasks = two_tasks();
  const Budget b{4, 1};  // n = 4
  std::size_t train = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    const MetaSolution s = randomized_meta_greedy(tasks, b, seed);
    // The first coin is unconditioned.
    train += s.train_steps.front() ? 1 : 0;
    ++total;
  }
  const double freq = static_cast<double>(train) / static_cast<double>(total);
  EXPECT_NEAR(freq, 0.25, 0.03);
}

TEST(GreedyTrainTest, GreedyOnTheAverage) {
  const ElementSet s = greedy_train(two_tasks(), 2);
  // Averages: e0 5, e1 2, e2 2, e3 1.
  EXPECT_EQ(s, ElementSet({0_e, 1_e}));
  EXPECT_THROW(greedy_train(two_tasks(), 5), std::domain_error);
}

TEST(ReplacementGreedyTest, HandExample) {
  const TaskList tasks{modular({3, 0, 1}), modular({0, 3, 1})};
  const TwoStageArtifact a = replacement_greedy(tasks, 2, 1);
  EXPECT_EQ(a.reduced, ElementSet({0_e, 1_e}));
  EXPECT_EQ(a.per_task[0], ElementSet({0_e}));
  EXPECT_EQ(a.per_task[1], ElementSet({1_e}));
  EXPECT_DOUBLE_EQ(a.objective, 3.0);
}

TEST(ReplacementGreedyTest, SwapsInABetterElement) {
  // With k = 1 the single task first takes e0, then swaps it for e1.
  const TaskList tasks{modular({2, 3, 0}), modular({2, 0, 0})};
  const TwoStageArtifact a = replacement_greedy(tasks, 2, 1);
  EXPECT_EQ(a.reduced, ElementSet({0_e, 1_e}));
  EXPECT_EQ(a.per_task[0], ElementSet({1_e}));
  EXPECT_EQ(a.per_task[1], ElementSet({0_e}));
}

TEST(ReplacementGreedyTest, InvariantsAndGuarantee) {
  const double ratio = 0.5 * (1.0 - std::exp(-2.0));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SmallInstance inst = random_small_instance(seed, 9, 3, 4);
    const std::size_t k = inst.budget.per_task();
    const std::size_t q = std::min(inst.tasks.front()->size(), k + 2);
    const TwoStageArtifact a = replacement_greedy(inst.tasks, q, k);
    EXPECT_LE(a.reduced.size(), q);
    for (const auto& s : a.per_task) {
      EXPECT_LE(s.size(), k);
      for (ElementId e : s) EXPECT_TRUE(a.reduced.contains(e));
    }
    const double opt = brute_force_two_stage(inst.tasks, q, k).value;
    EXPECT_GE(a.objective, ratio * opt - 1e-9) << seed;
  }
}

TEST(ReplacementGreedyTest, ValidatesSizes) {
  EXPECT_THROW(replacement_greedy(two_tasks(), 1, 2), std::domain_error);
  EXPECT_THROW(replacement_greedy(two_tasks(), 5, 2), std::domain_error);
  EXPECT_THROW(replacement_greedy(two_tasks(), 2, 0), std::domain_error);
}

TEST(MethodTest, NamesRoundTrip) {
  for (Method m : all_methods()) EXPECT_EQ(parse_method(method_name(m)), m);
  EXPECT_FALSE(parse_method("nope").has_value());
  EXPECT_EQ(all_methods().size(), 6u);
}

TEST(MethodSuiteTest, GreedyTestOnlyIsNormalizedToOne) {
  const Suite suite = synthetic_suite(SuiteKind::kCoverage, 30, 4, 4, 2);
  SuiteOptions o{{5, 2}, 0, 1, {Method::kGreedyTest}};
  const auto out = run_method_suite(suite.train, suite.test, o);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_DOUBLE_EQ(out[0].normalized, 1.0);
  EXPECT_EQ(out[0].train_calls, 0u);
}

TEST(MethodSuiteTest, TestCallBounds) {
  const std::size_t n = 60;
  const Suite suite = synthetic_suite(SuiteKind::kRideshareLike, n, 6, 4, 3);
  const Budget b{8, 5};
  SuiteOptions o{b, 20, 3, all_methods()};
  const auto out = run_method_suite(suite.train, suite.test, o);
  ASSERT_EQ(out.size(), all_methods().size());
  for (const MethodOutcome& m : out) {
    EXPECT_EQ(m.method, o.methods[&m - out.data()]);
    EXPECT_GE(m.avg_value, 0.0);
    if (m.method == Method::kGreedyTest) {
      EXPECT_LE(m.test_calls_per_task, 2.0 * b.k * n + b.k);
    }
    if (m.method == Method::kMetaGreedy ||
        m.method == Method::kRandomizedMetaGreedy) {
      EXPECT_LE(m.test_calls_per_task,
                2.0 * b.per_task() * n + b.per_task());
    }
  }
}

}  // namespace
}  // namespace metasub
