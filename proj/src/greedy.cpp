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

#include "metasub/greedy.hpp"

#include <queue>
#include <stdexcept>

#include <fmt/format.h>

#include "metasub/rng.hpp"

namespace metasub {

ElementSet GreedyTrace::picked() const {
  ElementSet out;
  for (const GreedyPick& p : picks) out.insert(p.element);
  return out;
}

namespace {

std::vector<ElementId> candidate_list(
    const EvalContext& ctx,
    std::optional<std::span<const ElementId>> candidates,
    const ElementSet* exclude) {
  std::vector<ElementId> out;
  auto keep = [&](ElementId e) {
    ctx.function().ground().check(e);
    if (exclude == nullptr || !exclude->contains(e)) out.push_back(e);
  };
  if (candidates) {
    for (ElementId e : *candidates) keep(e);
  } else {
    for (std::size_t i = 0; i < ctx.function().size(); ++i) {
      keep(ElementId{i});
    }
  }
  return out;
}

// Max-heap entry: larger bound first, then smaller id.
struct Bound {
  double value;
  ElementId element;
  std::size_t round;  // round in which value was computed

  friend bool operator<(const Bound& a, const Bound& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.element > b.element;
  }
};

GreedyTrace finish(const EvalContext& ctx, std::vector<GreedyPick> picks,
                   std::uint64_t calls_before) {
  GreedyTrace trace;
  trace.picks = std::move(picks);
  trace.solution = ctx.members();
  trace.final_value = ctx.value();
  trace.oracle_calls = ctx.function().calls() - calls_before;
  return trace;
}

}  // namespace

std::vector<GreedyPick> greedy_rounds(
    EvalContext& ctx, std::size_t budget,
    std::optional<std::span<const ElementId>> candidates,
    const ElementSet* exclude) {
  const std::vector<ElementId> pool = candidate_list(ctx, candidates, exclude);
  std::vector<GreedyPick> picks;
  for (std::size_t round = 0; round < budget; ++round) {
    std::optional<GreedyPick> best;
    for (ElementId e : pool) {
      if (ctx.members().contains(e)) continue;
      const double g = ctx.gain(e);
      if (!best || g > best->gain) best = GreedyPick{e, g};
    }
    if (!best || best->gain <= 0.0) break;
    ctx.add(best->element);
    picks.push_back(*best);
  }
  return picks;
}

std::vector<GreedyPick> lazy_greedy_rounds(
    EvalContext& ctx, std::size_t budget,
    std::optional<std::span<const ElementId>> candidates,
    const ElementSet* exclude) {
  std::vector<GreedyPick> picks;
  if (budget == 0) return picks;
  std::vector<ElementId> pool = candidate_list(ctx, candidates, exclude);
  std::priority_queue<Bound> heap;
  for (ElementId e : pool) {
    if (!ctx.members().contains(e)) heap.push({ctx.gain(e), e, 0});
  }
  std::size_t round = 0;
  while (picks.size() < budget && !heap.empty()) {
    Bound top = heap.top();
    heap.pop();
    if (ctx.members().contains(top.element)) continue;
    if (top.round != round) {
      top.value = ctx.gain(top.element);
      top.round = round;
      heap.push(top);
      continue;
    }
    if (top.value <= 0.0) break;
    ctx.add(top.element);
    picks.push_back({top.element, top.value});
    ++round;
  }
  return picks;
}

GreedyTrace greedy(const SetFunction& f, const ElementSet& initial,
                   std::size_t budget, const ElementSet* exclude) {
  const std::uint64_t before = f.calls();
  std::unique_ptr<EvalContext> ctx = f.context(initial);
  auto picks = greedy_rounds(*ctx, budget, std::nullopt, exclude);
  return finish(*ctx, std::move(picks), before);
}

GreedyTrace lazy_greedy(const SetFunction& f, const ElementSet& initial,
                        std::size_t budget, const ElementSet* exclude) {
  const std::uint64_t before = f.calls();
  std::unique_ptr<EvalContext> ctx = f.context(initial);
  auto picks = lazy_greedy_rounds(*ctx, budget, std::nullopt, exclude);
  return finish(*ctx, std::move(picks), before);
}

GreedyTrace greedy_over(const SetFunction& f, const ElementSet& initial,
                        std::size_t budget,
                        std::span<const ElementId> candidates) {
  const std::uint64_t before = f.calls();
  std::unique_ptr<EvalContext> ctx = f.context(initial);
  auto picks = greedy_rounds(*ctx, budget, candidates);
  return finish(*ctx, std::move(picks), before);
}

TestCompletion complete_at_test(const SetFunction& f_test,
                                const ElementSet& s_tr, std::size_t budget_k,
                                std::size_t budget_l) {
  Budget{budget_k, budget_l}.check(f_test.size());
  if (s_tr.size() > budget_l) {
    throw std::domain_error(fmt::format(
        "trained set has {} elements, budget l is {}", s_tr.size(), budget_l));
  }
  GreedyTrace trace = greedy(f_test, s_tr, budget_k - budget_l);
  return {std::move(trace.solution), trace.final_value, trace.oracle_calls};
}

ElementSet random_select(const GroundSet& ground, std::size_t budget,
                         std::uint64_t seed) {
  if (budget > ground.size()) {
    throw std::domain_error(fmt::format(
        "cannot sample {} elements from a ground set of {}", budget,
        ground.size()));
  }
  Rng rng(seed);
  const auto picks = rng.sample_without_replacement(ground.size(), budget);
  return ElementSet::from_indices(picks);
}

}  // namespace metasub
