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

// Experiment configuration, sweep runner and verification suites behind the
// command-line tool.

#ifndef METASUB_BENCH_HPP_
#define METASUB_BENCH_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "metasub/data.hpp"
#include "metasub/meta.hpp"

namespace metasub {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SweepKind { kVaryL, kVaryK };

struct ExperimentConfig {
  // rideshare-like | coverage (synthetic), pickups | movielens (files).
  std::string suite = "rideshare-like";
  std::size_t n = 500;
  std::size_t m_train = 50;
  std::size_t m_test = 50;

  SweepKind sweep = SweepKind::kVaryL;
  std::vector<std::size_t> k = {20};  // one value for vary-l
  std::vector<std::size_t> l = {16};  // ignored for vary-k
  double ratio = 0.8;                 // vary-k: l = floor(ratio * k)

  std::vector<Method> methods = all_methods();
  std::size_t q = 0;
  bool match_test_budget = false;  // q = floor(n (k - l) / k) per point
  std::vector<std::uint64_t> seeds = {0};

  std::string out;  // empty: standard output
  std::size_t threads = 1;
  bool timing = false;  // off keeps wall_ms at 0 so output is reproducible

  // File-backed suites.
  std::string pickups;
  PickupFormat pickup_format;
  RideshareParams rideshare;
  std::string ratings;
  std::string movies;
  RatingsFormat ratings_format;
  MovieLensParams movielens;
};

// key = value lines; '#' starts a comment. Lists are [a, b, c] and integer
// ranges a..b (inclusive). Throws ConfigError on unknown keys or bad values.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

struct SweepPoint {
  std::size_t k = 0;
  std::size_t l = 0;
  std::size_t q = 0;

  friend bool operator==(const SweepPoint&, const SweepPoint&) = default;
};

// Expands and validates the sweep; every point satisfies 1 <= l < k <= n
// and, when replacement-greedy is requested, k <= q <= n. Throws ConfigError.
std::vector<SweepPoint> sweep_points(const ExperimentConfig& config);

struct ResultRow {
  SweepPoint point;
  MethodOutcome outcome;
  std::uint64_t seed = 0;
};

// Runs every seed as an independent job (suites are built once per seed and
// reused across sweep points) and returns rows sorted by k, l, method order
// and seed. Config errors surface before any work starts.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

inline constexpr std::string_view kCsvHeader =
    "sweep_k,sweep_l,method,seed,avg_value,normalized,train_calls,"
    "test_calls_per_task,wall_ms";

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows,
               bool timing = false);

// One tab-separated file per method with seed means per sweep point.
void write_plot_data(const std::filesystem::path& dir,
                     const std::vector<ResultRow>& rows);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// scope: bounds | counterexample | oracle | all. Throws ConfigError on an
// unknown scope.
std::vector<CheckResult> run_verification(std::string_view scope,
                                          std::size_t instances = 100);

}  // namespace metasub

#endif  // METASUB_BENCH_HPP_
