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

// Ground sets, element sets and the set-function oracle contract.
//
// Every query against a SetFunction is an "oracle call" and is tallied on the
// function's counter:
//   evaluate(f, S)            1 call
//   f.context(S)              1 call (evaluates the starting set)
//   EvalContext::gain(e)      1 call, 0 if e is already a member
//   EvalContext::add(e)       0 calls on the incremental path, 1 otherwise
//   EvalContext::best_swap(e) |S| calls
//   marginal(f, e, S)         1 call with an incremental path, 2 otherwise,
//                             0 if e is already in S

#ifndef METASUB_CORE_HPP_
#define METASUB_CORE_HPP_

#include <atomic>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace metasub {

struct ElementId {
  std::size_t index = 0;

  friend constexpr auto operator<=>(ElementId, ElementId) = default;
};

constexpr ElementId operator""_e(unsigned long long i) {
  return ElementId{static_cast<std::size_t>(i)};
}

class GroundSet {
 public:
  explicit GroundSet(std::size_t n);
  explicit GroundSet(std::vector<std::string> labels);

  std::size_t size() const { return n_; }
  bool contains(ElementId e) const { return e.index < n_; }
  bool has_labels() const { return !labels_.empty(); }
  // Falls back to the decimal index when no labels were given.
  std::string label(ElementId e) const;
  // Throws std::domain_error when e is out of range.
  void check(ElementId e) const;

  friend bool operator==(const GroundSet&, const GroundSet&) = default;

 private:
  std::size_t n_;
  std::vector<std::string> labels_;
};

// Distinct elements in insertion order with O(1) membership.
class ElementSet {
 public:
  using const_iterator = std::vector<ElementId>::const_iterator;

  ElementSet() = default;
  ElementSet(std::initializer_list<ElementId> ids);
  static ElementSet from_indices(std::span<const std::size_t> indices);
  static ElementSet all(std::size_t n);

  // Returns false (and leaves the set unchanged) if e is already a member.
  bool insert(ElementId e);
  bool erase(ElementId e);
  bool contains(ElementId e) const {
    return e.index < mask_.size() && mask_[e.index];
  }

  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  std::span<const ElementId> members() const { return members_; }
  const_iterator begin() const { return members_.begin(); }
  const_iterator end() const { return members_.end(); }
  ElementId operator[](std::size_t i) const { return members_[i]; }

  // Members sorted by index; handy for order-insensitive comparison.
  std::vector<std::size_t> sorted_indices() const;
  bool same_members(const ElementSet& other) const;

  friend bool operator==(const ElementSet& a, const ElementSet& b) {
    return a.members_ == b.members_;
  }

 private:
  std::vector<ElementId> members_;
  std::vector<bool> mask_;
};

// a followed by the members of b that are not in a.
ElementSet set_union(const ElementSet& a, const ElementSet& b);

struct Budget {
  std::size_t k = 0;  // total cardinality
  std::size_t l = 0;  // trained part

  std::size_t per_task() const { return k - l; }
  // Throws std::domain_error unless 1 <= l < k <= n.
  void check(std::size_t n) const;
};

class SetFunction;

struct SwapMove {
  double gain = 0.0;
  std::optional<ElementId> removed;
};

// Incremental evaluation state for one growing set. Not thread-safe; each
// worker owns its contexts.
class EvalContext {
 public:
  virtual ~EvalContext() = default;

  double value() const { return value_; }
  const ElementSet& members() const { return members_; }
  const SetFunction& function() const { return *f_; }

  double gain(ElementId e);
  void add(ElementId e);
  // Best f(S + e - x) - f(S) over members x; ties go to the smallest id.
  // Returns an empty move when S is empty.
  SwapMove best_swap(ElementId e);

 protected:
  explicit EvalContext(const SetFunction& f) : f_(&f) {}

  // Implementations see e valid and not a member.
  virtual double compute_gain(ElementId e) const = 0;
  // Applies e and returns the new value; counted is set when the update
  // required a fresh oracle call.
  virtual double apply(ElementId e, bool& counted) = 0;
  virtual SwapMove compute_best_swap(ElementId e) const;

  void set_initial_value(double v) { value_ = v; }
  ElementSet members_;

 private:
  // Uncounted incremental insertion of an initial set.
  void seed(const ElementSet& initial);

  const SetFunction* f_;
  double value_ = 0.0;

  friend class SetFunction;
  friend double marginal(const SetFunction&, ElementId, const ElementSet&);
};

// Monotone non-negative set function over a fixed ground set.
class SetFunction {
 public:
  explicit SetFunction(GroundSet ground) : ground_(std::move(ground)) {}
  SetFunction(const SetFunction&) = delete;
  SetFunction& operator=(const SetFunction&) = delete;
  virtual ~SetFunction() = default;

  const GroundSet& ground() const { return ground_; }
  std::size_t size() const { return ground_.size(); }

  double evaluate(const ElementSet& s) const;
  std::unique_ptr<EvalContext> context(const ElementSet& initial = {}) const;
  virtual bool has_fast_path() const { return false; }

  std::uint64_t calls() const { return calls_.load(std::memory_order_relaxed); }
  void reset_calls() const { calls_.store(0, std::memory_order_relaxed); }

  // Uncounted evaluation; members are valid and distinct.
  virtual double value_of(std::span<const ElementId> s) const = 0;

 protected:
  // Incremental state seeded with the empty set, or nullptr to use the
  // generic re-evaluating context.
  virtual std::unique_ptr<EvalContext> make_fast_context() const {
    return nullptr;
  }

 private:
  void count(std::uint64_t n) const {
    calls_.fetch_add(n, std::memory_order_relaxed);
  }
  void check_members(const ElementSet& s) const;

  GroundSet ground_;
  mutable std::atomic<std::uint64_t> calls_{0};

  friend class EvalContext;
  friend double marginal(const SetFunction&, ElementId, const ElementSet&);
};

using SetFunctionPtr = std::shared_ptr<const SetFunction>;
using TaskList = std::vector<SetFunctionPtr>;

double evaluate(const SetFunction& f, const ElementSet& s);
double marginal(const SetFunction& f, ElementId e, const ElementSet& s);
inline std::uint64_t read_counter(const SetFunction& f) { return f.calls(); }
inline void reset_counter(const SetFunction& f) { f.reset_calls(); }
std::uint64_t total_calls(const TaskList& tasks);
void reset_counters(const TaskList& tasks);

// Shared ground-set size; throws std::domain_error on an empty list or a
// size mismatch.
std::size_t common_ground_size(const TaskList& tasks);

// Trained set plus per-task completions.
struct MetaSolution {
  ElementSet s_tr;
  std::vector<ElementSet> per_task;
  // (1/m) sum_i f_i(s_tr + per_task[i])
  double objective = 0.0;
  std::string origin;
  // Randomized training only: one entry per main-loop round, true when the
  // round updated s_tr.
  std::vector<bool> train_steps;
};

// Uncounted re-evaluation of (1/m) sum_i f_i(s_tr + per_task[i]).
double meta_objective(const TaskList& tasks, const ElementSet& s_tr,
                      std::span<const ElementSet> per_task);

}  // namespace metasub

#endif  // METASUB_CORE_HPP_
