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

#include "metasub/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "metasub/subsets.hpp"

namespace metasub {

namespace {

GroundSet make_ground(std::size_t n, std::vector<std::string> labels) {
  if (labels.empty()) return GroundSet(n);
  if (labels.size() != n) {
    throw std::domain_error(fmt::format(
        "expected {} labels, got {}", n, labels.size()));
  }
  return GroundSet(std::move(labels));
}

}  // namespace

// --- Modular ---------------------------------------------------------------

namespace {

class ModularContext final : public EvalContext {
 public:
  explicit ModularContext(const ModularObjective& f)
      : EvalContext(f), f_(f) {}

 protected:
  double compute_gain(ElementId e) const override {
    return f_.weights()[e.index];
  }
  double apply(ElementId e, bool&) override {
    sum_ += f_.weights()[e.index];
    return sum_;
  }

 private:
  const ModularObjective& f_;
  double sum_ = 0.0;
};

}  // namespace

ModularObjective::ModularObjective(Eigen::VectorXd weights,
                                   std::vector<std::string> labels)
    : SetFunction(make_ground(static_cast<std::size_t>(weights.size()),
                              std::move(labels))),
      weights_(std::move(weights)) {
  if ((weights_.array() < 0.0).any()) {
    throw std::domain_error("modular weights must be non-negative");
  }
}

double ModularObjective::value_of(std::span<const ElementId> s) const {
  double sum = 0.0;
  for (ElementId e : s) sum += weights_[e.index];
  return sum;
}

std::unique_ptr<EvalContext> ModularObjective::make_fast_context() const {
  return std::make_unique<ModularContext>(*this);
}

// --- Coverage --------------------------------------------------------------

namespace {

class CoverageContext final : public EvalContext {
 public:
  explicit CoverageContext(const CoverageObjective& f)
      : EvalContext(f), f_(f), covered_(f.item_count(), 0) {}

 protected:
  double compute_gain(ElementId e) const override {
    double g = 0.0;
    for (std::uint32_t item : f_.covers(e)) {
      if (!covered_[item]) g += f_.item_weight(item);
    }
    return g;
  }
  double apply(ElementId e, bool&) override {
    for (std::uint32_t item : f_.covers(e)) {
      if (!covered_[item]) {
        covered_[item] = 1;
        total_ += f_.item_weight(item);
      }
    }
    return total_;
  }

 private:
  const CoverageObjective& f_;
  std::vector<char> covered_;
  double total_ = 0.0;
};

}  // namespace

CoverageObjective::CoverageObjective(std::vector<ItemList> covers,
                                     std::optional<Eigen::VectorXd> item_weights)
    : SetFunction(GroundSet(covers.size())), covers_(std::move(covers)) {
  std::uint32_t max_item = 0;
  bool any = false;
  for (auto& items : covers_) {
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
    if (!items.empty()) {
      max_item = std::max(max_item, items.back());
      any = true;
    }
  }
  const Eigen::Index needed = any ? Eigen::Index{max_item} + 1 : 0;
  if (item_weights) {
    if (item_weights->size() < needed) {
      throw std::domain_error("item weight vector is shorter than the items");
    }
    if ((item_weights->array() < 0.0).any()) {
      throw std::domain_error("item weights must be non-negative");
    }
    item_weights_ = std::move(*item_weights);
  } else {
    item_weights_ = Eigen::VectorXd::Ones(needed);
  }
}

double CoverageObjective::value_of(std::span<const ElementId> s) const {
  std::vector<char> covered(item_count(), 0);
  double total = 0.0;
  for (ElementId e : s) {
    for (std::uint32_t item : covers_[e.index]) {
      if (!covered[item]) {
        covered[item] = 1;
        total += item_weights_[item];
      }
    }
  }
  return total;
}

std::unique_ptr<EvalContext> CoverageObjective::make_fast_context() const {
  return std::make_unique<CoverageContext>(*this);
}

// --- Facility location -----------------------------------------------------

double convenience_score(const Eigen::Vector2d& u, const Eigen::Vector2d& r) {
  const double d = (u - r).cwiseAbs().sum();
  return 2.0 - 2.0 / (1.0 + std::exp(-200.0 * d));
}

namespace {

// Tracks the best and second-best score per customer so that swap gains for
// every member can be read off in one pass.
class FacilityContext final : public EvalContext {
 public:
  explicit FacilityContext(const FacilityLocationObjective& f)
      : EvalContext(f),
        f_(f),
        best_(Eigen::VectorXd::Zero(f.customers().cols())),
        second_(Eigen::VectorXd::Zero(f.customers().cols())),
        owner_(static_cast<std::size_t>(f.customers().cols()), -1) {}

 protected:
  double compute_gain(ElementId e) const override {
    const Eigen::VectorXd col = f_.scores(e);
    return (col - best_).cwiseMax(0.0).sum();
  }

  double apply(ElementId e, bool&) override {
    const Eigen::VectorXd col = f_.scores(e);
    const int pos = static_cast<int>(members_.size());
    for (Eigen::Index u = 0; u < col.size(); ++u) {
      const double c = col[u];
      if (c > best_[u]) {
        second_[u] = best_[u];
        best_[u] = c;
        owner_[static_cast<std::size_t>(u)] = pos;
      } else if (c > second_[u]) {
        second_[u] = c;
      }
    }
    return best_.sum();
  }

  SwapMove compute_best_swap(ElementId e) const override {
    const Eigen::VectorXd col = f_.scores(e);
    const double add_gain = (col - best_).cwiseMax(0.0).sum();
    std::vector<double> delta(members_.size(), 0.0);
    for (Eigen::Index u = 0; u < col.size(); ++u) {
      const int pos = owner_[static_cast<std::size_t>(u)];
      if (pos < 0) continue;
      delta[static_cast<std::size_t>(pos)] +=
          std::max(col[u], second_[u]) - std::max(col[u], best_[u]);
    }
    SwapMove best;
    for (std::size_t pos = 0; pos < delta.size(); ++pos) {
      const double g = add_gain + delta[pos];
      const ElementId x = members_[pos];
      if (!best.removed || g > best.gain ||
          (g == best.gain && x < *best.removed)) {
        best = {g, x};
      }
    }
    return best;
  }

 private:
  const FacilityLocationObjective& f_;
  Eigen::VectorXd best_;
  Eigen::VectorXd second_;
  std::vector<int> owner_;  // member position holding best_, -1 if none
};

}  // namespace

FacilityLocationObjective::FacilityLocationObjective(Eigen::Matrix2Xd customers,
                                                     Eigen::Matrix2Xd sites,
                                                     std::size_t cache_limit)
    : SetFunction(GroundSet(static_cast<std::size_t>(sites.cols()))),
      customers_(std::move(customers)),
      sites_(std::move(sites)) {
  if (!customers_.allFinite() || !sites_.allFinite()) {
    throw std::domain_error("facility coordinates must be finite");
  }
  const auto entries =
      static_cast<std::size_t>(customers_.cols() * sites_.cols());
  if (entries <= cache_limit) {
    Eigen::MatrixXd cache(customers_.cols(), sites_.cols());
    for (Eigen::Index r = 0; r < sites_.cols(); ++r) {
      for (Eigen::Index u = 0; u < customers_.cols(); ++u) {
        cache(u, r) = convenience_score(customers_.col(u), sites_.col(r));
      }
    }
    cache_ = std::move(cache);
  }
}

Eigen::VectorXd FacilityLocationObjective::scores(ElementId e) const {
  const auto r = static_cast<Eigen::Index>(e.index);
  if (cache_) return cache_->col(r);
  Eigen::VectorXd col(customers_.cols());
  for (Eigen::Index u = 0; u < customers_.cols(); ++u) {
    col[u] = convenience_score(customers_.col(u), sites_.col(r));
  }
  return col;
}

double FacilityLocationObjective::value_of(
    std::span<const ElementId> s) const {
  Eigen::VectorXd best = Eigen::VectorXd::Zero(customers_.cols());
  for (ElementId e : s) best = best.cwiseMax(scores(e));
  return best.sum();
}

std::unique_ptr<EvalContext> FacilityLocationObjective::make_fast_context()
    const {
  return std::make_unique<FacilityContext>(*this);
}

// --- Recommendation --------------------------------------------------------

namespace {

class RecommendationContext final : public EvalContext {
 public:
  explicit RecommendationContext(const RecommendationObjective& f)
      : EvalContext(f),
        f_(f),
        top_(Eigen::VectorXd::Zero(f.genre_weights().size())) {}

 protected:
  double compute_gain(ElementId e) const override {
    const double r = f_.rating(e);
    if (r <= 0.0) return 0.0;
    double g = 0.0;
    for (std::uint16_t t : f_.catalog().genres[e.index]) {
      g += f_.genre_weights()[t] * std::max(0.0, r - top_[t]);
    }
    return g;
  }

  double apply(ElementId e, bool&) override {
    const double r = f_.rating(e);
    if (r > 0.0) {
      for (std::uint16_t t : f_.catalog().genres[e.index]) {
        top_[t] = std::max(top_[t], r);
      }
    }
    return f_.genre_weights().dot(top_);
  }

 private:
  const RecommendationObjective& f_;
  Eigen::VectorXd top_;  // best rating seen per genre
};

}  // namespace

RecommendationObjective::RecommendationObjective(
    std::shared_ptr<const GenreCatalog> catalog,
    std::span<const Rating> ratings)
    : SetFunction(GroundSet(catalog->size())),
      catalog_(std::move(catalog)),
      rating_(Eigen::VectorXd::Zero(
          static_cast<Eigen::Index>(catalog_->size()))),
      weights_(Eigen::VectorXd::Zero(
          static_cast<Eigen::Index>(catalog_->genre_names.size()))) {
  for (const Rating& r : ratings) {
    ground().check(r.movie);
    if (!(r.value > 0.0)) {
      throw std::domain_error("ratings must be positive");
    }
    if (rating_[r.movie.index] > 0.0) {
      throw std::domain_error(
          fmt::format("movie {} rated twice", r.movie.index));
    }
    rating_[r.movie.index] = r.value;
    for (std::uint16_t t : catalog_->genres[r.movie.index]) {
      if (t >= weights_.size()) throw std::domain_error("unknown genre id");
      weights_[t] += 1.0;
    }
  }
  if (!ratings.empty()) weights_ /= static_cast<double>(ratings.size());
}

double RecommendationObjective::value_of(std::span<const ElementId> s) const {
  Eigen::VectorXd top = Eigen::VectorXd::Zero(weights_.size());
  for (ElementId e : s) {
    const double r = rating_[e.index];
    if (r <= 0.0) continue;
    for (std::uint16_t t : catalog_->genres[e.index]) {
      top[t] = std::max(top[t], r);
    }
  }
  return weights_.dot(top);
}

std::unique_ptr<EvalContext> RecommendationObjective::make_fast_context()
    const {
  return std::make_unique<RecommendationContext>(*this);
}

// --- Task average ----------------------------------------------------------

namespace {

class AverageContext final : public EvalContext {
 public:
  explicit AverageContext(const TaskAverageObjective& f) : EvalContext(f) {
    for (const auto& c : f.components()) parts_.push_back(c->context());
  }

 protected:
  double compute_gain(ElementId e) const override {
    double g = 0.0;
    for (const auto& p : parts_) g += p->gain(e);
    return g / static_cast<double>(parts_.size());
  }

  double apply(ElementId e, bool&) override {
    double v = 0.0;
    for (const auto& p : parts_) {
      p->add(e);
      v += p->value();
    }
    return v / static_cast<double>(parts_.size());
  }

 private:
  std::vector<std::unique_ptr<EvalContext>> parts_;
};

}  // namespace

TaskAverageObjective::TaskAverageObjective(TaskList components)
    : SetFunction(GroundSet(common_ground_size(components))),
      components_(std::move(components)) {}

double TaskAverageObjective::value_of(std::span<const ElementId> s) const {
  double v = 0.0;
  for (const auto& c : components_) v += c->value_of(s);
  return v / static_cast<double>(components_.size());
}

std::unique_ptr<EvalContext> TaskAverageObjective::make_fast_context() const {
  return std::make_unique<AverageContext>(*this);
}

// --- Area coverage ---------------------------------------------------------

double union_area(std::span<const Rectangle> rects) {
  std::vector<double> xs, ys;
  for (const Rectangle& r : rects) {
    xs.insert(xs.end(), {r.x0, r.x1});
    ys.insert(ys.end(), {r.y0, r.y1});
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

  double area = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
      const bool covered = std::any_of(
          rects.begin(), rects.end(), [&](const Rectangle& r) {
            return r.x0 <= xs[i] && xs[i + 1] <= r.x1 && r.y0 <= ys[j] &&
                   ys[j + 1] <= r.y1;
          });
      if (covered) area += (xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j]);
    }
  }
  return area;
}

AreaCoverageObjective::AreaCoverageObjective(std::vector<Rectangle> rectangles,
                                             std::vector<std::string> labels)
    : SetFunction(make_ground(rectangles.size(), std::move(labels))),
      rectangles_(std::move(rectangles)) {
  for (const Rectangle& r : rectangles_) {
    if (!(r.x0 <= r.x1 && r.y0 <= r.y1)) {
      throw std::domain_error("rectangle corners are out of order");
    }
  }
}

std::optional<ElementId> AreaCoverageObjective::find(
    const std::string& label) const {
  // Rectangles are named by their corners, so HEFG and EFGH are the same.
  std::string key = label;
  std::sort(key.begin(), key.end());
  for (std::size_t i = 0; i < size(); ++i) {
    std::string name = ground().label(ElementId{i});
    std::sort(name.begin(), name.end());
    if (name == key) return ElementId{i};
  }
  return std::nullopt;
}

double AreaCoverageObjective::value_of(std::span<const ElementId> s) const {
  std::vector<Rectangle> rects;
  rects.reserve(s.size());
  for (ElementId e : s) rects.push_back(rectangles_[e.index]);
  return union_area(rects);
}

std::shared_ptr<AreaCoverageObjective> build_counterexample() {
  // A(0,0) B(.25,0) C(1,0) D(1,1) E(1,2) F(1,3) G(.25,3) H(.25,2) I(.25,1)
  // J(0,1)
  std::vector<Rectangle> rects = {
      {0.0, 0.0, 0.25, 1.0},   // ABIJ
      {0.25, 0.0, 1.0, 1.0},   // BCDI
      {0.0, 0.0, 1.0, 1.0},    // ACDJ
      {0.25, 1.0, 1.0, 2.0},   // IDEH
      {0.25, 2.0, 1.0, 3.0},   // HEFG
      {0.25, 0.0, 1.0, 2.0},   // BCEH
  };
  return std::make_shared<AreaCoverageObjective>(
      std::move(rects),
      std::vector<std::string>{"ABIJ", "BCDI", "ACDJ", "IDEH", "HEFG",
                               "BCEH"});
}

// --- Best augmentation -----------------------------------------------------

namespace {

// Pool of elements outside s.
std::vector<ElementId> complement(std::size_t n,
                                  std::span<const ElementId> s) {
  std::vector<bool> in(n, false);
  for (ElementId e : s) in[e.index] = true;
  std::vector<ElementId> pool;
  for (std::size_t i = 0; i < n; ++i) {
    if (!in[i]) pool.push_back(ElementId{i});
  }
  return pool;
}

template <typename Eval>
double augment_exact(std::size_t n, std::span<const ElementId> s,
                     std::size_t budget, Eval&& eval) {
  const std::vector<ElementId> pool = complement(n, s);
  std::vector<ElementId> joint(s.begin(), s.end());
  const std::size_t base = joint.size();
  double best = -std::numeric_limits<double>::infinity();
  for_each_subset_up_to(pool, budget, [&](std::span<const ElementId> t) {
    joint.resize(base);
    joint.insert(joint.end(), t.begin(), t.end());
    best = std::max(best, eval(std::span<const ElementId>(joint)));
  });
  return best;
}

}  // namespace

double best_augmentation_value(const SetFunction& f, const ElementSet& s,
                               std::size_t budget, Augmentation mode) {
  if (mode == Augmentation::kExact) {
    for (ElementId e : s) f.ground().check(e);
    return augment_exact(f.size(), s.members(), budget,
                         [&](std::span<const ElementId> t) {
                           ElementSet joint;
                           for (ElementId e : t) joint.insert(e);
                           return f.evaluate(joint);
                         });
  }
  std::unique_ptr<EvalContext> ctx = f.context(s);
  for (std::size_t round = 0; round < budget; ++round) {
    std::optional<ElementId> pick;
    double best = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const ElementId e{i};
      if (ctx->members().contains(e)) continue;
      const double g = ctx->gain(e);
      if (g > best) {
        best = g;
        pick = e;
      }
    }
    if (!pick) break;
    ctx->add(*pick);
  }
  return ctx->value();
}

BestAugmentationObjective::BestAugmentationObjective(SetFunctionPtr base,
                                                     std::size_t budget,
                                                     Augmentation mode)
    : SetFunction(base->ground()),
      base_(std::move(base)),
      budget_(budget),
      mode_(mode) {}

double BestAugmentationObjective::value_of(
    std::span<const ElementId> s) const {
  if (mode_ == Augmentation::kExact) {
    return augment_exact(size(), s, budget_,
                         [&](std::span<const ElementId> t) {
                           return base_->value_of(t);
                         });
  }
  std::vector<ElementId> current(s.begin(), s.end());
  std::vector<bool> in(size(), false);
  for (ElementId e : s) in[e.index] = true;
  double value = base_->value_of(current);
  for (std::size_t round = 0; round < budget_; ++round) {
    std::optional<ElementId> pick;
    double best = value;
    for (std::size_t i = 0; i < size(); ++i) {
      if (in[i]) continue;
      current.push_back(ElementId{i});
      const double v = base_->value_of(current);
      current.pop_back();
      if (v > best) {
        best = v;
        pick = ElementId{i};
      }
    }
    if (!pick) break;
    current.push_back(*pick);
    in[pick->index] = true;
    value = best;
  }
  return value;
}

}  // namespace metasub
