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

// Training-phase algorithms for the meta problem
//
//   max_{|S_tr| <= l}  (1/m) sum_i  max_{|S_i| <= k - l}  f_i(S_tr + S_i)
//
// and the baselines they are compared against. Every trainer produces a set
// S_tr that is completed per test task by complete_at_test().

#ifndef METASUB_META_HPP_
#define METASUB_META_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metasub/core.hpp"

namespace metasub {

// Fill S_tr greedily on the summed gains, then complete each S_i greedily on
// top of it.
MetaSolution train_first_greedy(const TaskList& tasks, Budget budget);

// Build each S_i greedily from scratch, then fill S_tr greedily on the summed
// gains conditioned on the S_i.
MetaSolution task_first_greedy(const TaskList& tasks, Budget budget);

// Runs both orderings and keeps the better objective (train-first on ties).
MetaSolution meta_greedy(const TaskList& tasks, Budget budget);

// Each round updates S_tr with probability l/k and otherwise every S_i.
// Once one side is full the other is filled greedily.
MetaSolution randomized_meta_greedy(const TaskList& tasks, Budget budget,
                                    std::uint64_t seed);

// Plain greedy with budget k on the average of the training tasks; applied at
// test time without adaptation.
ElementSet greedy_train(const TaskList& tasks, std::size_t k);

struct TwoStageArtifact {
  ElementSet reduced;                // |reduced| <= q
  std::vector<ElementSet> per_task;  // |S~_i| <= k, S~_i inside reduced
  double objective = 0.0;            // (1/m) sum_i f_i(S~_i)
};

// Replacement-greedy for the two-stage problem
//   max_{|S| <= q} sum_i max_{S_i in S, |S_i| <= k} f_i(S_i).
// Throws std::domain_error unless 1 <= k <= q <= n.
TwoStageArtifact replacement_greedy(const TaskList& tasks, std::size_t q,
                                    std::size_t k);

enum class Method {
  kGreedyTest,
  kMetaGreedy,
  kRandomizedMetaGreedy,
  kGreedyTrain,
  kRandom,
  kReplacementGreedy,
};

std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view name);
const std::vector<Method>& all_methods();

struct MethodOutcome {
  Method method;
  double avg_value = 0.0;
  double normalized = 0.0;  // avg_value / Greedy-Test avg_value
  std::uint64_t train_calls = 0;
  double test_calls_per_task = 0.0;
  double wall_ms = 0.0;  // training plus all test-time adaptation
};

struct SuiteOptions {
  Budget budget;
  std::size_t q = 0;  // reduced ground-set size for replacement-greedy
  std::uint64_t seed = 0;
  std::vector<Method> methods = all_methods();
};

// Trains every requested method once on train_tasks and scores it on each
// test task. Greedy-Test is always run for normalization; it is reported
// only when requested. Outcomes follow the order of options.methods.
std::vector<MethodOutcome> run_method_suite(const TaskList& train_tasks,
                                            const TaskList& test_tasks,
                                            const SuiteOptions& options);

}  // namespace metasub

#endif  // METASUB_META_HPP_
