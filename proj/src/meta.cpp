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

#include "metasub/meta.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <memory>
#include <stdexcept>

#include <fmt/format.h>

#include "metasub/greedy.hpp"
#include "metasub/objectives.hpp"
#include "metasub/rng.hpp"

namespace metasub {

namespace {

using Contexts = std::vector<std::unique_ptr<EvalContext>>;

Contexts make_contexts(const TaskList& tasks) {
  Contexts out;
  out.reserve(tasks.size());
  for (const auto& f : tasks) out.push_back(f->context());
  return out;
}

struct SummedPick {
  ElementId element;
  double gain;
};

// argmax_{e not in s_tr} sum_i gain_i(e), smallest id on ties.
std::optional<SummedPick> best_summed(const Contexts& ctxs,
                                      const ElementSet& s_tr, std::size_t n) {
  std::optional<SummedPick> best;
  for (std::size_t idx = 0; idx < n; ++idx) {
    const ElementId e{idx};
    if (s_tr.contains(e)) continue;
    double total = 0.0;
    for (const auto& ctx : ctxs) total += ctx->gain(e);
    if (!best || total > best->gain) best = SummedPick{e, total};
  }
  return best;
}

// Up to `rounds` additions to S_tr; returns the number actually made.
std::size_t grow_train_set(Contexts& ctxs, ElementSet& s_tr, std::size_t n,
                           std::size_t rounds) {
  std::size_t made = 0;
  for (; made < rounds; ++made) {
    const auto pick = best_summed(ctxs, s_tr, n);
    if (!pick || pick->gain <= 0.0) break;
    s_tr.insert(pick->element);
    for (auto& ctx : ctxs) ctx->add(pick->element);
  }
  return made;
}

void grow_task_sets(Contexts& ctxs, std::vector<ElementSet>& per_task,
                    std::size_t rounds) {
  for (std::size_t i = 0; i < ctxs.size(); ++i) {
    for (const GreedyPick& p : lazy_greedy_rounds(*ctxs[i], rounds)) {
      per_task[i].insert(p.element);
    }
  }
}

double mean_value(const Contexts& ctxs) {
  double total = 0.0;
  for (const auto& ctx : ctxs) total += ctx->value();
  return total / static_cast<double>(ctxs.size());
}

std::size_t check_inputs(const TaskList& tasks, Budget budget) {
  const std::size_t n = common_ground_size(tasks);
  budget.check(n);
  return n;
}

}  // namespace

MetaSolution train_first_greedy(const TaskList& tasks, Budget budget) {
  const std::size_t n = check_inputs(tasks, budget);
  Contexts ctxs = make_contexts(tasks);
  MetaSolution sol;
  sol.origin = "train-first";
  sol.per_task.resize(tasks.size());
  grow_train_set(ctxs, sol.s_tr, n, budget.l);
  grow_task_sets(ctxs, sol.per_task, budget.per_task());
  sol.objective = mean_value(ctxs);
  return sol;
}

MetaSolution task_first_greedy(const TaskList& tasks, Budget budget) {
  const std::size_t n = check_inputs(tasks, budget);
  Contexts ctxs = make_contexts(tasks);
  MetaSolution sol;
  sol.origin = "task-first";
  sol.per_task.resize(tasks.size());
  grow_task_sets(ctxs, sol.per_task, budget.per_task());
  grow_train_set(ctxs, sol.s_tr, n, budget.l);
  sol.objective = mean_value(ctxs);
  return sol;
}

MetaSolution meta_greedy(const TaskList& tasks, Budget budget) {
  MetaSolution first = train_first_greedy(tasks, budget);
  MetaSolution second = task_first_greedy(tasks, budget);
  return second.objective > first.objective ? second : first;
}

MetaSolution randomized_meta_greedy(const TaskList& tasks, Budget budget,
                                    std::uint64_t seed) {
  const std::size_t n = check_inputs(tasks, budget);
  Rng rng(seed);
  const double p_train =
      static_cast<double>(budget.l) / static_cast<double>(budget.k);
  Contexts ctxs = make_contexts(tasks);
  MetaSolution sol;
  sol.origin = "randomized";
  sol.per_task.resize(tasks.size());

  // Rounds are counted per side so that every S_i advances in lockstep even
  // when a task has nothing left to gain.
  std::size_t train_rounds = 0;
  std::size_t task_rounds = 0;
  while (task_rounds < budget.per_task() && train_rounds < budget.l) {
    const bool update_train = rng.bernoulli(p_train);
    sol.train_steps.push_back(update_train);
    if (update_train) {
      const auto pick = best_summed(ctxs, sol.s_tr, n);
      if (pick && pick->gain > 0.0) {
        sol.s_tr.insert(pick->element);
        for (auto& ctx : ctxs) ctx->add(pick->element);
      }
      ++train_rounds;
    } else {
      for (std::size_t i = 0; i < ctxs.size(); ++i) {
        for (const GreedyPick& p : greedy_rounds(*ctxs[i], 1)) {
          sol.per_task[i].insert(p.element);
        }
      }
      ++task_rounds;
    }
  }
  if (train_rounds == budget.l) {
    grow_task_sets(ctxs, sol.per_task, budget.per_task() - task_rounds);
  } else {
    grow_train_set(ctxs, sol.s_tr, n, budget.l - train_rounds);
  }
  sol.objective = mean_value(ctxs);
  return sol;
}

ElementSet greedy_train(const TaskList& tasks, std::size_t k) {
  const std::size_t n = common_ground_size(tasks);
  if (k > n) {
    throw std::domain_error(
        fmt::format("budget k={} exceeds ground set of {}", k, n));
  }
  const TaskAverageObjective average(tasks);
  return greedy(average, {}, k).solution;
}

TwoStageArtifact replacement_greedy(const TaskList& tasks, std::size_t q,
                                    std::size_t k) {
  const std::size_t n = common_ground_size(tasks);
  if (k < 1 || k > q || q > n) {
    throw std::domain_error(fmt::format(
        "replacement greedy needs 1 <= k <= q <= n (k={}, q={}, n={})", k, q,
        n));
  }
  Contexts ctxs = make_contexts(tasks);

  // Add gain while S~_i has room, best non-negative swap gain once full.
  auto task_gain = [&](std::size_t i, ElementId e) {
    EvalContext& ctx = *ctxs[i];
    if (ctx.members().size() < k) return ctx.gain(e);
    return std::max(0.0, ctx.best_swap(e).gain);
  };

  TwoStageArtifact out;
  for (std::size_t round = 0; round < q; ++round) {
    std::optional<SummedPick> best;
    for (std::size_t idx = 0; idx < n; ++idx) {
      const ElementId e{idx};
      if (out.reduced.contains(e)) continue;
      double total = 0.0;
      for (std::size_t i = 0; i < ctxs.size(); ++i) total += task_gain(i, e);
      if (!best || total > best->gain) best = SummedPick{e, total};
    }
    if (!best || best->gain <= 0.0) break;

    const ElementId e = best->element;
    out.reduced.insert(e);
    for (std::size_t i = 0; i < ctxs.size(); ++i) {
      EvalContext& ctx = *ctxs[i];
      if (ctx.members().size() < k) {
        if (ctx.gain(e) > 0.0) ctx.add(e);
        continue;
      }
      const SwapMove swap = ctx.best_swap(e);
      if (swap.gain <= 0.0 || !swap.removed) continue;
      ElementSet next = ctx.members();
      next.erase(*swap.removed);
      next.insert(e);
      ctxs[i] = tasks[i]->context(next);
    }
  }
  out.per_task.reserve(ctxs.size());
  for (const auto& ctx : ctxs) out.per_task.push_back(ctx->members());
  out.objective = mean_value(ctxs);
  return out;
}

// --- Method suite ----------------------------------------------------------

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 6> kMethodNames = {{
    {Method::kGreedyTest, "greedy-test"},
    {Method::kMetaGreedy, "meta-greedy"},
    {Method::kRandomizedMetaGreedy, "randomized-meta-greedy"},
    {Method::kGreedyTrain, "greedy-train"},
    {Method::kRandom, "random"},
    {Method::kReplacementGreedy, "replacement-greedy"},
}};

// Stream tags for the per-method PRNGs derived from the suite seed.
constexpr std::uint64_t kRandomizedStream = 1;
constexpr std::uint64_t kRandomStream = 2;

struct Scores {
  double total = 0.0;
  std::uint64_t calls = 0;
};

template <typename PerTask>
Scores score_tests(const TaskList& test_tasks, PerTask&& per_task) {
  Scores s;
  for (const auto& f : test_tasks) {
    const std::uint64_t before = f->calls();
    s.total += per_task(*f);
    s.calls += f->calls() - before;
  }
  return s;
}

}  // namespace

std::string_view method_name(Method m) {
  for (const auto& [method, name] : kMethodNames) {
    if (method == m) return name;
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (const auto& [method, n] : kMethodNames) {
    if (n == name) return method;
  }
  return std::nullopt;
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods = [] {
    std::vector<Method> out;
    for (const auto& entry : kMethodNames) out.push_back(entry.first);
    return out;
  }();
  return methods;
}

std::vector<MethodOutcome> run_method_suite(const TaskList& train_tasks,
                                            const TaskList& test_tasks,
                                            const SuiteOptions& options) {
  const std::size_t n = common_ground_size(train_tasks);
  if (test_tasks.empty()) throw std::domain_error("no test tasks");
  if (common_ground_size(test_tasks) != n) {
    throw std::domain_error("train and test tasks use different ground sets");
  }
  const Budget budget = options.budget;
  budget.check(n);
  const GroundSet& ground = train_tasks.front()->ground();
  const auto m_test = static_cast<double>(test_tasks.size());

  auto run = [&](Method method) {
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    const std::uint64_t train_before = total_calls(train_tasks);
    Scores scores;
    switch (method) {
      case Method::kGreedyTest:
        scores = score_tests(test_tasks, [&](const SetFunction& f) {
          return greedy(f, {}, budget.k).final_value;
        });
        break;
      case Method::kMetaGreedy:
      case Method::kRandomizedMetaGreedy: {
        const MetaSolution trained =
            method == Method::kMetaGreedy
                ? meta_greedy(train_tasks, budget)
                : randomized_meta_greedy(
                      train_tasks, budget,
                      mix_seed(options.seed, kRandomizedStream));
        scores = score_tests(test_tasks, [&](const SetFunction& f) {
          return complete_at_test(f, trained.s_tr, budget.k, budget.l).value;
        });
        break;
      }
      case Method::kGreedyTrain: {
        const ElementSet fixed = greedy_train(train_tasks, budget.k);
        scores = score_tests(test_tasks, [&](const SetFunction& f) {
          return f.evaluate(fixed);
        });
        break;
      }
      case Method::kRandom: {
        const ElementSet fixed = random_select(
            ground, budget.k, mix_seed(options.seed, kRandomStream));
        scores = score_tests(test_tasks, [&](const SetFunction& f) {
          return f.evaluate(fixed);
        });
        break;
      }
      case Method::kReplacementGreedy: {
        const TwoStageArtifact artifact =
            replacement_greedy(train_tasks, options.q, budget.k);
        scores = score_tests(test_tasks, [&](const SetFunction& f) {
          return greedy_over(f, {}, budget.k, artifact.reduced.members())
              .final_value;
        });
        break;
      }
    }
    MethodOutcome out{method};
    out.avg_value = scores.total / m_test;
    out.train_calls = total_calls(train_tasks) - train_before;
    out.test_calls_per_task = static_cast<double>(scores.calls) / m_test;
    out.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() -
                                                            start)
                      .count();
    return out;
  };

  const MethodOutcome reference = run(Method::kGreedyTest);
  std::vector<MethodOutcome> outcomes;
  for (Method method : options.methods) {
    MethodOutcome out =
        method == Method::kGreedyTest ? reference : run(method);
    out.normalized = method == Method::kGreedyTest
                         ? 1.0
                         : (reference.avg_value > 0.0
                                ? out.avg_value / reference.avg_value
                                : 0.0);
    outcomes.push_back(out);
  }
  return outcomes;
}

}  // namespace metasub
