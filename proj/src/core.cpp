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

#include "metasub/core.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace metasub {

GroundSet::GroundSet(std::size_t n) : n_(n) {
  if (n == 0) throw std::domain_error("ground set must have n >= 1");
}

GroundSet::GroundSet(std::vector<std::string> labels)
    : n_(labels.size()), labels_(std::move(labels)) {
  if (n_ == 0) throw std::domain_error("ground set must have n >= 1");
}

std::string GroundSet::label(ElementId e) const {
  check(e);
  return labels_.empty() ? std::to_string(e.index) : labels_[e.index];
}

void GroundSet::check(ElementId e) const {
  if (e.index >= n_) {
    throw std::domain_error(
        fmt::format("element {} outside ground set of size {}", e.index, n_));
  }
}

ElementSet::ElementSet(std::initializer_list<ElementId> ids) {
  for (ElementId e : ids) insert(e);
}

ElementSet ElementSet::from_indices(std::span<const std::size_t> indices) {
  ElementSet s;
  for (std::size_t i : indices) s.insert(ElementId{i});
  return s;
}

ElementSet ElementSet::all(std::size_t n) {
  ElementSet s;
  s.members_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) s.insert(ElementId{i});
  return s;
}

bool ElementSet::insert(ElementId e) {
  if (contains(e)) return false;
  if (e.index >= mask_.size()) mask_.resize(e.index + 1, false);
  mask_[e.index] = true;
  members_.push_back(e);
  return true;
}

bool ElementSet::erase(ElementId e) {
  if (!contains(e)) return false;
  mask_[e.index] = false;
  members_.erase(std::find(members_.begin(), members_.end(), e));
  return true;
}

std::vector<std::size_t> ElementSet::sorted_indices() const {
  std::vector<std::size_t> out;
  out.reserve(members_.size());
  for (ElementId e : members_) out.push_back(e.index);
  std::sort(out.begin(), out.end());
  return out;
}

bool ElementSet::same_members(const ElementSet& other) const {
  return size() == other.size() && sorted_indices() == other.sorted_indices();
}

ElementSet set_union(const ElementSet& a, const ElementSet& b) {
  ElementSet out = a;
  for (ElementId e : b) out.insert(e);
  return out;
}

void Budget::check(std::size_t n) const {
  if (l < 1 || l >= k || k > n) {
    throw std::domain_error(fmt::format(
        "invalid budget k={} l={} for n={} (need 1 <= l < k <= n)", k, l, n));
  }
}

// --- EvalContext -----------------------------------------------------------

double EvalContext::gain(ElementId e) {
  f_->ground().check(e);
  if (members_.contains(e)) return 0.0;
  f_->count(1);
  return compute_gain(e);
}

void EvalContext::add(ElementId e) {
  f_->ground().check(e);
  if (members_.contains(e)) return;
  bool counted = false;
  value_ = apply(e, counted);
  members_.insert(e);
  if (counted) f_->count(1);
}

void EvalContext::seed(const ElementSet& initial) {
  for (ElementId e : initial) {
    if (members_.contains(e)) continue;
    bool counted = false;
    value_ = apply(e, counted);
    members_.insert(e);
  }
}

SwapMove EvalContext::best_swap(ElementId e) {
  f_->ground().check(e);
  if (members_.empty() || members_.contains(e)) return {};
  f_->count(members_.size());
  return compute_best_swap(e);
}

SwapMove EvalContext::compute_best_swap(ElementId e) const {
  SwapMove best;
  std::vector<ElementId> trial(members_.begin(), members_.end());
  for (std::size_t pos = 0; pos < trial.size(); ++pos) {
    const ElementId removed = trial[pos];
    trial[pos] = e;
    const double g = f_->value_of(trial) - value_;
    trial[pos] = removed;
    if (!best.removed || g > best.gain ||
        (g == best.gain && removed < *best.removed)) {
      best = {g, removed};
    }
  }
  return best;
}

namespace {

// Re-evaluates f on every query; used when an objective has no incremental
// state of its own.
class GenericContext final : public EvalContext {
 public:
  GenericContext(const SetFunction& f, const ElementSet& initial)
      : EvalContext(f) {
    members_ = initial;
    set_initial_value(f.value_of(initial.members()));
  }

 protected:
  double compute_gain(ElementId e) const override {
    return with(e) - value();
  }

  double apply(ElementId e, bool& counted) override {
    counted = true;
    return with(e);
  }

 private:
  double with(ElementId e) const {
    scratch_.assign(members_.begin(), members_.end());
    scratch_.push_back(e);
    return function().value_of(scratch_);
  }

  mutable std::vector<ElementId> scratch_;
};

}  // namespace

// --- SetFunction -----------------------------------------------------------

void SetFunction::check_members(const ElementSet& s) const {
  for (ElementId e : s) ground_.check(e);
}

double SetFunction::evaluate(const ElementSet& s) const {
  check_members(s);
  count(1);
  return value_of(s.members());
}

std::unique_ptr<EvalContext> SetFunction::context(
    const ElementSet& initial) const {
  check_members(initial);
  count(1);
  std::unique_ptr<EvalContext> ctx = make_fast_context();
  if (!ctx) return std::make_unique<GenericContext>(*this, initial);
  ctx->seed(initial);
  return ctx;
}

double evaluate(const SetFunction& f, const ElementSet& s) {
  return f.evaluate(s);
}

double marginal(const SetFunction& f, ElementId e, const ElementSet& s) {
  f.ground().check(e);
  f.check_members(s);
  if (s.contains(e)) return 0.0;
  if (std::unique_ptr<EvalContext> ctx = f.make_fast_context()) {
    ctx->seed(s);
    f.count(1);
    return ctx->compute_gain(e);
  }
  f.count(2);
  std::vector<ElementId> with(s.begin(), s.end());
  const double base = f.value_of(with);
  with.push_back(e);
  return f.value_of(with) - base;
}

std::uint64_t total_calls(const TaskList& tasks) {
  std::uint64_t total = 0;
  for (const auto& f : tasks) total += f->calls();
  return total;
}

void reset_counters(const TaskList& tasks) {
  for (const auto& f : tasks) f->reset_calls();
}

std::size_t common_ground_size(const TaskList& tasks) {
  if (tasks.empty()) throw std::domain_error("task list is empty");
  const std::size_t n = tasks.front()->size();
  for (const auto& f : tasks) {
    if (f->size() != n) {
      throw std::domain_error("tasks disagree on the ground-set size");
    }
  }
  return n;
}

double meta_objective(const TaskList& tasks, const ElementSet& s_tr,
                      std::span<const ElementSet> per_task) {
  if (per_task.size() != tasks.size()) {
    throw std::domain_error("one completion set per task is required");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const ElementSet joint = set_union(s_tr, per_task[i]);
    total += tasks[i]->value_of(joint.members());
  }
  return total / static_cast<double>(tasks.size());
}

}  // namespace metasub
