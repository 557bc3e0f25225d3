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

// Concrete monotone set functions. All of them are immutable after
// construction; incremental state lives in the EvalContext they hand out.

#ifndef METASUB_OBJECTIVES_HPP_
#define METASUB_OBJECTIVES_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "metasub/core.hpp"

namespace metasub {

// f(S) = sum of weights.
class ModularObjective final : public SetFunction {
 public:
  explicit ModularObjective(Eigen::VectorXd weights,
                            std::vector<std::string> labels = {});

  const Eigen::VectorXd& weights() const { return weights_; }
  bool has_fast_path() const override { return true; }
  double value_of(std::span<const ElementId> s) const override;

 protected:
  std::unique_ptr<EvalContext> make_fast_context() const override;

 private:
  Eigen::VectorXd weights_;
};

// f(S) = total weight of the items covered by S.
class CoverageObjective final : public SetFunction {
 public:
  using ItemList = std::vector<std::uint32_t>;

  // item_weights defaults to all ones over the referenced items.
  CoverageObjective(std::vector<ItemList> covers,
                    std::optional<Eigen::VectorXd> item_weights = {});

  std::size_t item_count() const {
    return static_cast<std::size_t>(item_weights_.size());
  }
  const ItemList& covers(ElementId e) const { return covers_[e.index]; }
  double item_weight(std::uint32_t item) const { return item_weights_[item]; }

  bool has_fast_path() const override { return true; }
  double value_of(std::span<const ElementId> s) const override;

 protected:
  std::unique_ptr<EvalContext> make_fast_context() const override;

 private:
  std::vector<ItemList> covers_;
  Eigen::VectorXd item_weights_;
};

// c(u, r) = 2 - 2 / (1 + exp(-200 d(u, r))) with d the Manhattan distance of
// the raw coordinates. Lies in [0, 1] and equals 1 at d = 0.
double convenience_score(const Eigen::Vector2d& u, const Eigen::Vector2d& r);

// f(S) = sum over customers u of max_{r in S} c(u, r); max over the empty
// set is 0.
class FacilityLocationObjective final : public SetFunction {
 public:
  // Columns are (x, y) points. Scores are cached as a dense
  // customers x sites matrix when it has at most cache_limit entries and
  // recomputed per query otherwise.
  FacilityLocationObjective(Eigen::Matrix2Xd customers, Eigen::Matrix2Xd sites,
                            std::size_t cache_limit = std::size_t{1} << 22);

  const Eigen::Matrix2Xd& customers() const { return customers_; }
  const Eigen::Matrix2Xd& sites() const { return sites_; }
  // Scores of every customer against site e.
  Eigen::VectorXd scores(ElementId e) const;

  bool has_fast_path() const override { return true; }
  double value_of(std::span<const ElementId> s) const override;

 protected:
  std::unique_ptr<EvalContext> make_fast_context() const override;

 private:
  Eigen::Matrix2Xd customers_;
  Eigen::Matrix2Xd sites_;
  std::optional<Eigen::MatrixXd> cache_;
};

// Genre tags for every element of a movie ground set.
struct GenreCatalog {
  std::vector<std::string> genre_names;
  // genres[e] lists genre ids in [0, genre_names.size()).
  std::vector<std::vector<std::uint16_t>> genres;
  std::vector<std::string> titles;

  std::size_t size() const { return genres.size(); }
};

struct Rating {
  ElementId movie;
  double value = 0.0;
};

// f(S) = sum_t w_t max_{v in R, genre t, v in S} r(v), with w_t the number of
// the user's ratings tagged t divided by the user's total rating count (a
// movie with several genres counts once per genre).
class RecommendationObjective final : public SetFunction {
 public:
  RecommendationObjective(std::shared_ptr<const GenreCatalog> catalog,
                          std::span<const Rating> ratings);

  const Eigen::VectorXd& genre_weights() const { return weights_; }
  // 0 for unrated movies.
  double rating(ElementId e) const { return rating_[e.index]; }
  const GenreCatalog& catalog() const { return *catalog_; }

  bool has_fast_path() const override { return true; }
  double value_of(std::span<const ElementId> s) const override;

 protected:
  std::unique_ptr<EvalContext> make_fast_context() const override;

 private:
  std::shared_ptr<const GenreCatalog> catalog_;
  Eigen::VectorXd rating_;
  Eigen::VectorXd weights_;
};

// f(S) = (1/c) sum_j f_j(S). Queries are forwarded to the components'
// contexts, so each component's counter moves as well as this one.
class TaskAverageObjective final : public SetFunction {
 public:
  explicit TaskAverageObjective(TaskList components);

  const TaskList& components() const { return components_; }
  bool has_fast_path() const override { return true; }
  double value_of(std::span<const ElementId> s) const override;

 protected:
  std::unique_ptr<EvalContext> make_fast_context() const override;

 private:
  TaskList components_;
};

struct Rectangle {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

  double area() const { return (x1 - x0) * (y1 - y0); }
};

// f(S) = area of the union of the rectangles in S, computed exactly by
// coordinate compression.
class AreaCoverageObjective final : public SetFunction {
 public:
  AreaCoverageObjective(std::vector<Rectangle> rectangles,
                        std::vector<std::string> labels = {});

  const Rectangle& rectangle(ElementId e) const {
    return rectangles_[e.index];
  }
  std::optional<ElementId> find(const std::string& label) const;
  double value_of(std::span<const ElementId> s) const override;

 private:
  std::vector<Rectangle> rectangles_;
};

// Union area of arbitrary rectangles.
double union_area(std::span<const Rectangle> rects);

// Six rectangles ABIJ, BCDI, ACDJ, IDEH, HEFG, BCEH with AC = CD = DE = EF = 1
// and BC = 0.75.
std::shared_ptr<AreaCoverageObjective> build_counterexample();

enum class Augmentation { kGreedy, kExact };

// max over |T| <= budget of f(s + T). kExact enumerates (small n only);
// kGreedy runs `budget` greedy additions. Budgets past n - |s| clamp.
double best_augmentation_value(const SetFunction& f, const ElementSet& s,
                               std::size_t budget,
                               Augmentation mode = Augmentation::kGreedy);

// f'(S) = best_augmentation_value(base, S, budget). Monotone but in general
// not submodular.
class BestAugmentationObjective final : public SetFunction {
 public:
  BestAugmentationObjective(SetFunctionPtr base, std::size_t budget,
                            Augmentation mode = Augmentation::kExact);

  double value_of(std::span<const ElementId> s) const override;

 private:
  SetFunctionPtr base_;
  std::size_t budget_;
  Augmentation mode_;
};

}  // namespace metasub

#endif  // METASUB_OBJECTIVES_HPP_
