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

// Cardinality-constrained greedy engines.
//
// All engines share one rule set: a round adds the candidate with the largest
// marginal gain, ties go to the smallest element index, and the run stops
// early once the best gain is <= 0. Budgets are therefore upper bounds.

#ifndef METASUB_GREEDY_HPP_
#define METASUB_GREEDY_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "metasub/core.hpp"

namespace metasub {

struct GreedyPick {
  ElementId element;
  double gain = 0.0;
};

struct GreedyTrace {
  std::vector<GreedyPick> picks;
  ElementSet solution;  // initial followed by picks
  double final_value = 0.0;
  std::uint64_t oracle_calls = 0;

  ElementSet picked() const;
};

// Context-level rounds, used by the meta-training loops. Candidates default
// to the whole ground set; members of the context are always skipped.
std::vector<GreedyPick> greedy_rounds(
    EvalContext& ctx, std::size_t budget,
    std::optional<std::span<const ElementId>> candidates = std::nullopt,
    const ElementSet* exclude = nullptr);

// Lazy (stale upper bound) variant. Only valid for submodular functions, for
// which it makes the same picks as greedy_rounds.
std::vector<GreedyPick> lazy_greedy_rounds(
    EvalContext& ctx, std::size_t budget,
    std::optional<std::span<const ElementId>> candidates = std::nullopt,
    const ElementSet* exclude = nullptr);

GreedyTrace greedy(const SetFunction& f, const ElementSet& initial,
                   std::size_t budget, const ElementSet* exclude = nullptr);

GreedyTrace lazy_greedy(const SetFunction& f, const ElementSet& initial,
                        std::size_t budget, const ElementSet* exclude = nullptr);

// Greedy restricted to the given candidates (e.g. a learned reduced ground
// set).
GreedyTrace greedy_over(const SetFunction& f, const ElementSet& initial,
                        std::size_t budget,
                        std::span<const ElementId> candidates);

struct TestCompletion {
  ElementSet solution;
  double value = 0.0;
  std::uint64_t oracle_calls = 0;
};

// Runs k - l classic greedy rounds on the test task on top of s_tr.
// Throws std::domain_error unless 1 <= l < k <= n and |s_tr| <= l.
TestCompletion complete_at_test(const SetFunction& f_test,
                                const ElementSet& s_tr, std::size_t budget_k,
                                std::size_t budget_l);

// Uniform sample of `budget` distinct elements, reproducible from seed.
// Throws std::domain_error when budget > n.
ElementSet random_select(const GroundSet& ground, std::size_t budget,
                         std::uint64_t seed);

}  // namespace metasub

#endif  // METASUB_GREEDY_HPP_
