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

#include "metasub/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "metasub/objectives.hpp"
#include "metasub/rng.hpp"
#include "metasub/subsets.hpp"

namespace metasub {

namespace {

constexpr double kOneMinusInvE = 1.0 - 1.0 / std::numbers::e;

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
  return a * b;
}

void check_work(std::uint64_t work, std::uint64_t cap, const char* what) {
  if (work > cap) {
    throw SizingError(fmt::format(
        "{} needs about {} evaluations, over the cap of {}", what, work, cap));
  }
}

std::vector<ElementId> all_ids(std::size_t n) {
  std::vector<ElementId> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = ElementId{i};
  return ids;
}

ElementSet to_set(std::span<const ElementId> ids) {
  ElementSet s;
  for (ElementId e : ids) s.insert(e);
  return s;
}

// Max of affine pieces a + b t over t >= lb. Convex and piecewise linear, so
// the minimum sits at lb or where a rising piece meets a falling one.
struct Piece {
  double a;
  double b;
};

double max_pieces(std::span<const Piece> pieces, double t) {
  double v = -std::numeric_limits<double>::infinity();
  for (const Piece& p : pieces) v = std::max(v, p.a + p.b * t);
  return v;
}

double argmin_pieces(std::span<const Piece> pieces, double lb) {
  double best_t = lb;
  double best_v = max_pieces(pieces, lb);
  for (const Piece& up : pieces) {
    if (up.b <= 0.0) continue;
    for (const Piece& down : pieces) {
      if (down.b >= 0.0) continue;
      const double t = (down.a - up.a) / (up.b - down.b);
      if (t < lb) continue;
      const double v = max_pieces(pieces, t);
      if (v < best_v) {
        best_v = v;
        best_t = t;
      }
    }
  }
  return best_t;
}

}  // namespace

BruteForceResult brute_force_meta_opt(const TaskList& tasks, Budget budget,
                                      std::uint64_t work_cap) {
  const std::size_t n = common_ground_size(tasks);
  budget.check(n);
  const std::size_t m = tasks.size();
  const std::size_t k_task = budget.per_task();
  check_work(saturating_mul(saturating_mul(count_subsets_up_to(n, budget.l), m),
                            count_subsets_up_to(n, k_task)),
             work_cap, "meta brute force");

  const std::vector<ElementId> ids = all_ids(n);
  BruteForceResult result;
  result.opt_value = -std::numeric_limits<double>::infinity();
  std::vector<ElementId> pool;
  std::vector<ElementId> joined;
  std::vector<ElementId> best_task;

  for_each_subset_up_to(ids, budget.l, [&](std::span<const ElementId> s_tr) {
    // Members of s_tr in an S_i only waste budget, so they are left out.
    pool.clear();
    for (ElementId e : ids) {
      if (std::find(s_tr.begin(), s_tr.end(), e) == s_tr.end()) {
        pool.push_back(e);
      }
    }
    double total = 0.0;
    std::vector<ElementSet> per_task(m);
    for (std::size_t i = 0; i < m; ++i) {
      double best = -std::numeric_limits<double>::infinity();
      for_each_subset_up_to(pool, k_task, [&](std::span<const ElementId> s_i) {
        joined.assign(s_tr.begin(), s_tr.end());
        joined.insert(joined.end(), s_i.begin(), s_i.end());
        const double v = tasks[i]->value_of(joined);
        ++result.subsets_examined;
        if (v > best) {
          best = v;
          best_task.assign(s_i.begin(), s_i.end());
        }
      });
      total += best;
      per_task[i] = to_set(best_task);
    }
    const double avg = total / static_cast<double>(m);
    if (avg > result.opt_value) {
      result.opt_value = avg;
      result.opt_s_tr = to_set(s_tr);
      result.opt_per_task = std::move(per_task);
    }
  });
  return result;
}

BruteForceMax brute_force_max(const SetFunction& f, std::size_t k,
                              std::uint64_t work_cap) {
  const std::size_t n = f.size();
  check_work(count_subsets_up_to(n, k), work_cap, "brute-force maximum");
  const std::vector<ElementId> ids = all_ids(n);
  BruteForceMax out;
  out.value = -std::numeric_limits<double>::infinity();
  for_each_subset_up_to(ids, k, [&](std::span<const ElementId> s) {
    const double v = f.value_of(s);
    ++out.subsets_examined;
    if (v > out.value) {
      out.value = v;
      out.best = to_set(s);
    }
  });
  return out;
}

BruteForceMax brute_force_two_stage(const TaskList& tasks, std::size_t q,
                                    std::size_t k, std::uint64_t work_cap) {
  const std::size_t n = common_ground_size(tasks);
  if (k == 0 || k > q) {
    throw std::domain_error(
        fmt::format("two-stage sizes need 1 <= k <= q, got k={} q={}", k, q));
  }
  q = std::min(q, n);
  const std::uint64_t outer = count_subsets_up_to(n, q) -
                              (q == 0 ? 0 : count_subsets_up_to(n, q - 1));
  check_work(saturating_mul(saturating_mul(outer, tasks.size()),
                            count_subsets_up_to(q, k)),
             work_cap, "two-stage brute force");

  const std::vector<ElementId> ids = all_ids(n);
  BruteForceMax out;
  out.value = -std::numeric_limits<double>::infinity();
  for_each_subset_up_to(ids, q, [&](std::span<const ElementId> reduced) {
    if (reduced.size() != q) return;
    double total = 0.0;
    for (const SetFunctionPtr& f : tasks) {
      double best = 0.0;
      for_each_subset_up_to(reduced, k, [&](std::span<const ElementId> s) {
        best = std::max(best, f->value_of(s));
        ++out.subsets_examined;
      });
      total += best;
    }
    const double avg = total / static_cast<double>(tasks.size());
    if (avg > out.value) {
      out.value = avg;
      out.best = to_set(reduced);
    }
  });
  return out;
}

double proposition_bound(BoundKind /*kind*/, double stat, double opt) {
  return std::max(stat, kOneMinusInvE * (opt - 2.0 * stat) + stat);
}

double meta_greedy_inner_min(double beta, double gamma) {
  const double lb1 = std::max(beta, kOneMinusInvE * (1.0 - 2.0 * beta) + beta);
  const double lb2 =
      std::max(gamma, kOneMinusInvE * (1.0 - 2.0 * gamma) + gamma);
  // Third and fourth terms as a - 2 theta.
  const double a3 = kOneMinusInvE * (1.0 - gamma) + beta + 2.0 * gamma;
  const double a4 = kOneMinusInvE * (1.0 - beta) + gamma + 2.0 * beta;
  auto objective = [&](double t1, double t2) {
    return std::max({t1, t2, a3 - 2.0 * t2, a4 - 2.0 * t1});
  };

  double t1 = lb1;
  double t2 = lb2;
  double current = objective(t1, t2);
  for (int sweep = 0; sweep < 100; ++sweep) {
    const double c2 = std::max(t2, a3 - 2.0 * t2);
    const std::array<Piece, 3> in_t1{{{0.0, 1.0}, {a4, -2.0}, {c2, 0.0}}};
    t1 = argmin_pieces(in_t1, lb1);
    const double c1 = std::max(t1, a4 - 2.0 * t1);
    const std::array<Piece, 3> in_t2{{{0.0, 1.0}, {a3, -2.0}, {c1, 0.0}}};
    t2 = argmin_pieces(in_t2, lb2);
    const double next = objective(t1, t2);
    if (current - next <= 1e-12) {
      current = std::min(current, next);
      break;
    }
    current = next;
  }
  return current;
}

Certificate theorem1_certificate(std::size_t grid_steps) {
  if (grid_steps < 100) {
    throw std::domain_error(
        fmt::format("grid needs at least 100 steps, got {}", grid_steps));
  }
  Certificate cert;
  cert.value = std::numeric_limits<double>::infinity();
  const double h = 1.0 / static_cast<double>(grid_steps);
  for (std::size_t i = 0; i <= grid_steps; ++i) {
    const double beta = static_cast<double>(i) * h;
    for (std::size_t j = 0; j <= grid_steps; ++j) {
      const double gamma = static_cast<double>(j) * h;
      const double v = meta_greedy_inner_min(beta, gamma);
      if (v < cert.value) cert = {v, beta, gamma};
    }
  }
  return cert;
}

double theorem2_bound(std::size_t k, std::size_t l) {
  Budget{k, l}.check(k);
  const double b = std::max(1.0 / static_cast<double>(k - l),
                            1.0 / static_cast<double>(l));
  // b = 1 makes ln(1/b) zero, which is the right limit.
  const double c = 3.0 * std::sqrt(b * std::log(1.0 / b));
  return 1.0 - b - std::exp(-1.0 + c);
}

Witness diminishing_returns(const SetFunction& f, const ElementSet& a,
                            const ElementSet& b, ElementId e) {
  auto gain_at = [&](const ElementSet& s) {
    if (s.contains(e)) return 0.0;
    std::vector<ElementId> with(s.begin(), s.end());
    const double base = f.value_of(with);
    with.push_back(e);
    return f.value_of(with) - base;
  };
  return {a, b, e, gain_at(a), gain_at(b)};
}

namespace {

// Random B with A a random subset of B; B leaves at least one element out.
std::pair<ElementSet, ElementSet> random_nested(Rng& rng, std::size_t n) {
  const std::size_t b_size = rng.index(n);  // 0 .. n-1
  const auto b_ids = rng.sample_without_replacement(n, b_size);
  ElementSet a;
  ElementSet b;
  for (std::size_t i : b_ids) {
    b.insert(ElementId{i});
    if (rng.bernoulli(0.5)) a.insert(ElementId{i});
  }
  return {std::move(a), std::move(b)};
}

}  // namespace

PropertyReport check_submodular(const SetFunction& f, std::size_t trials,
                                std::uint64_t seed, double tol) {
  PropertyReport report;
  const std::size_t n = f.size();
  if (n == 0) return report;
  Rng rng(seed);
  std::vector<ElementId> outside;
  for (std::size_t t = 0; t < trials; ++t) {
    auto [a, b] = random_nested(rng, n);
    outside.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (!b.contains(ElementId{i})) outside.push_back(ElementId{i});
    }
    const ElementId e = outside[rng.index(outside.size())];
    ++report.trials;
    Witness w = diminishing_returns(f, a, b, e);
    if (w.rhs > w.lhs + tol) {
      report.passed = false;
      report.witness = std::move(w);
      break;
    }
  }
  return report;
}

PropertyReport check_monotone(const SetFunction& f, std::size_t trials,
                              std::uint64_t seed, double tol) {
  PropertyReport report;
  const std::size_t n = f.size();
  if (n == 0) return report;
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    auto [a, b] = random_nested(rng, n);
    ++report.trials;
    const double fa = f.value_of(a.members());
    const double fb = f.value_of(b.members());
    if (fa > fb + tol) {
      report.passed = false;
      report.witness = Witness{std::move(a), std::move(b), std::nullopt, fa, fb};
      break;
    }
  }
  return report;
}

SmallInstance random_small_instance(std::uint64_t seed, std::size_t max_n,
                                    std::size_t max_m, std::size_t max_k) {
  if (max_k < 2 || max_n < max_k || max_m == 0) {
    throw std::domain_error("random instance limits need 2 <= max_k <= max_n");
  }
  Rng rng(seed);
  const std::size_t k = 2 + rng.index(max_k - 1);
  const std::size_t l = 1 + rng.index(k - 1);
  const std::size_t n = k + rng.index(max_n - k + 1);
  const std::size_t m = 1 + rng.index(max_m);
  const std::size_t items = 6 + rng.index(15);

  // A shared layout perturbed per task, so that the trained part matters.
  std::vector<CoverageObjective::ItemList> shared(n);
  for (auto& list : shared) {
    const std::size_t c = 1 + rng.index(3);
    for (std::size_t j = 0; j < c; ++j) {
      list.push_back(static_cast<std::uint32_t>(rng.index(items)));
    }
  }
  SmallInstance out{{}, Budget{k, l}};
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<CoverageObjective::ItemList> covers = shared;
    for (auto& list : covers) {
      if (rng.bernoulli(0.4)) {
        list.push_back(static_cast<std::uint32_t>(rng.index(items)));
      }
    }
    Eigen::VectorXd w(static_cast<Eigen::Index>(items));
    for (Eigen::Index j = 0; j < w.size(); ++j) {
      w[j] = static_cast<double>(1 + rng.index(5));
    }
    out.tasks.push_back(
        std::make_shared<CoverageObjective>(std::move(covers), std::move(w)));
  }
  return out;
}

}  // namespace metasub
