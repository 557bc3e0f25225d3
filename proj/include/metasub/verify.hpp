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

// Exact oracles for small instances, closed-form approximation bounds, and
// randomized property probes.

#ifndef METASUB_VERIFY_HPP_
#define METASUB_VERIFY_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "metasub/core.hpp"

namespace metasub {

inline constexpr std::uint64_t kDefaultWorkCap = 10'000'000;

// Raised instead of silently truncating an enumeration.
class SizingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BruteForceResult {
  double opt_value = 0.0;  // (1/m) sum_i f_i(S_tr + S_i) at the optimum
  ElementSet opt_s_tr;
  std::vector<ElementSet> opt_per_task;
  std::uint64_t subsets_examined = 0;
};

// Exact optimum of the meta problem. For each candidate S_tr the inner
// maxima decompose across tasks, so the work is
// C(n, <=l) * m * C(n, <=k-l) evaluations. Ties keep the first S_tr in
// enumeration order. Evaluations are not counted on the tasks.
BruteForceResult brute_force_meta_opt(const TaskList& tasks, Budget budget,
                                      std::uint64_t work_cap = kDefaultWorkCap);

struct BruteForceMax {
  double value = 0.0;
  ElementSet best;
  std::uint64_t subsets_examined = 0;
};

// max_{|S| <= k} f(S).
BruteForceMax brute_force_max(const SetFunction& f, std::size_t k,
                              std::uint64_t work_cap = kDefaultWorkCap);

// max_{|S| <= q} (1/m) sum_i max_{S_i in S, |S_i| <= k} f_i(S_i); S is taken
// with exactly min(q, n) members, which loses nothing for monotone f_i.
BruteForceMax brute_force_two_stage(const TaskList& tasks, std::size_t q,
                                    std::size_t k,
                                    std::uint64_t work_cap = kDefaultWorkCap);

enum class BoundKind { kBeta, kGamma };

// max{stat, (1 - 1/e)(opt - 2 stat) + stat}. The same expression bounds the
// train-first ordering through beta = (1/m) sum_i f_i(S_tr) and the
// task-first ordering through gamma = (1/m) sum_i f_i(S_i).
double proposition_bound(BoundKind kind, double stat, double opt);

// Inner minimum over (theta1, theta2) for one (beta, gamma), OPT = 1:
//   min max{t1, t2, (1-1/e)(1-g) + b - 2(t2-g), (1-1/e)(1-b) + g - 2(t1-b)}
//   s.t. t1 >= max{b, (1-1/e)(1-2b) + b}, t2 >= max{g, (1-1/e)(1-2g) + g}.
double meta_greedy_inner_min(double beta, double gamma);

struct Certificate {
  double value = 0.0;
  double beta = 0.0;   // grid point attaining the minimum
  double gamma = 0.0;
};

// Minimum of meta_greedy_inner_min over a (grid_steps + 1)^2 grid on
// [0, 1]^2. Throws std::domain_error when grid_steps < 100.
Certificate theorem1_certificate(std::size_t grid_steps);

// 1 - b - exp(-1 + c) with b = max{1/(k-l), 1/l} and c = 3 sqrt(b ln(1/b)).
// Can be negative (vacuous) for small budgets.
double theorem2_bound(std::size_t k, std::size_t l);

// A, B and e with A inside B and e outside B. For diminishing returns lhs and
// rhs are the gains of e at A and B; for monotonicity they are f(A), f(B).
struct Witness {
  ElementSet a;
  ElementSet b;
  std::optional<ElementId> e;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct PropertyReport {
  bool passed = true;
  std::size_t trials = 0;
  std::optional<Witness> witness;  // first violation found
};

// Gains of e at A and at B, uncounted.
Witness diminishing_returns(const SetFunction& f, const ElementSet& a,
                            const ElementSet& b, ElementId e);

// Random A inside B, e outside B; fails when gain at B exceeds gain at A by
// more than tol.
PropertyReport check_submodular(const SetFunction& f, std::size_t trials = 1000,
                                std::uint64_t seed = 42, double tol = 1e-9);
// Random A inside B; fails when f(A) exceeds f(B) by more than tol.
PropertyReport check_monotone(const SetFunction& f, std::size_t trials = 1000,
                              std::uint64_t seed = 42, double tol = 1e-9);

struct SmallInstance {
  TaskList tasks;
  Budget budget;
};

// Random weighted-coverage meta instance with n <= max_n, m <= max_m and
// 1 <= l < k <= max_k, reproducible from seed.
SmallInstance random_small_instance(std::uint64_t seed, std::size_t max_n = 12,
                                    std::size_t max_m = 3,
                                    std::size_t max_k = 4);

}  // namespace metasub

#endif  // METASUB_VERIFY_HPP_
