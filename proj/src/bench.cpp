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

#include "metasub/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <thread>

#include <fmt/format.h>

#include "metasub/greedy.hpp"
#include "metasub/objectives.hpp"
#include "metasub/verify.hpp"

namespace metasub {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::string unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') &&
      s.back() == s.front()) {
    s = s.substr(1, s.size() - 2);
  }
  return std::string(s);
}

template <typename T>
T to_number(std::string_view key, std::string_view s) {
  s = trim(s);
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError(fmt::format("{}: '{}' is not a valid number", key, s));
  }
  return v;
}

// Items of "[a, b]", or the single value.
std::vector<std::string> list_items(std::string_view value) {
  value = trim(value);
  std::vector<std::string> items;
  if (value.size() >= 2 && value.front() == '[' && value.back() == ']') {
    value = value.substr(1, value.size() - 2);
    while (!trim(value).empty()) {
      const auto comma = value.find(',');
      items.push_back(unquote(value.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      value.remove_prefix(comma + 1);
    }
  } else {
    items.push_back(unquote(value));
  }
  return items;
}

// Lists of integers and ranges a..b.
template <typename T>
std::vector<T> integer_list(std::string_view key, std::string_view value) {
  std::vector<T> out;
  for (const std::string& item : list_items(value)) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_number<T>(key, item));
      continue;
    }
    const T lo = to_number<T>(key, std::string_view(item).substr(0, dots));
    const T hi = to_number<T>(key, std::string_view(item).substr(dots + 2));
    if (hi < lo) throw ConfigError(fmt::format("{}: empty range {}", key, item));
    for (T v = lo; v <= hi; ++v) out.push_back(v);
  }
  if (out.empty()) throw ConfigError(fmt::format("{}: empty list", key));
  return out;
}

bool to_bool(std::string_view key, std::string_view value) {
  const std::string v = unquote(value);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(fmt::format("{}: expected true or false", key));
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig c;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) {
      text = text.substr(0, hash);
    }
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("line {}: expected key = value", line_no));
    }
    const std::string key(trim(text.substr(0, eq)));
    const std::string_view value = trim(text.substr(eq + 1));
    auto size = [&] { return to_number<std::size_t>(key, value); };

    if (key == "suite") {
      c.suite = unquote(value);
    } else if (key == "n") {
      c.n = size();
    } else if (key == "m_train") {
      c.m_train = size();
    } else if (key == "m_test") {
      c.m_test = size();
    } else if (key == "sweep") {
      const std::string v = unquote(value);
      if (v == "vary-l") {
        c.sweep = SweepKind::kVaryL;
      } else if (v == "vary-k") {
        c.sweep = SweepKind::kVaryK;
      } else {
        throw ConfigError(fmt::format("sweep: unknown kind '{}'", v));
      }
    } else if (key == "k") {
      c.k = integer_list<std::size_t>(key, value);
    } else if (key == "l") {
      c.l = integer_list<std::size_t>(key, value);
    } else if (key == "ratio") {
      c.ratio = to_number<double>(key, value);
    } else if (key == "methods") {
      c.methods.clear();
      for (const std::string& name : list_items(value)) {
        const auto m = parse_method(name);
        if (!m) throw ConfigError(fmt::format("methods: unknown '{}'", name));
        c.methods.push_back(*m);
      }
    } else if (key == "q") {
      c.q = size();
    } else if (key == "match_test_budget") {
      c.match_test_budget = to_bool(key, value);
    } else if (key == "seeds") {
      c.seeds = integer_list<std::uint64_t>(key, value);
    } else if (key == "out") {
      c.out = unquote(value);
    } else if (key == "threads") {
      c.threads = size();
    } else if (key == "timing") {
      c.timing = to_bool(key, value);
    } else if (key == "pickups") {
      c.pickups = unquote(value);
    } else if (key == "delimiter") {
      c.pickup_format.delimiter = unquote(value);
      c.ratings_format.delimiter = c.pickup_format.delimiter;
    } else if (key == "lat_column") {
      c.pickup_format.lat_column = unquote(value);
    } else if (key == "lon_column") {
      c.pickup_format.lon_column = unquote(value);
    } else if (key == "time_column") {
      c.pickup_format.time_column = unquote(value);
    } else if (key == "radius") {
      c.rideshare.radius = to_number<double>(key, value);
    } else if (key == "window_seconds") {
      c.rideshare.window_seconds = to_number<std::int64_t>(key, value);
    } else if (key == "ratings") {
      c.ratings = unquote(value);
    } else if (key == "movies") {
      c.movies = unquote(value);
    } else if (key == "users_per_task") {
      c.movielens.users_per_task = size();
    } else if (key == "top_movies") {
      c.movielens.top_movies = size();
    } else if (key == "top_users") {
      c.movielens.top_users = size();
    } else if (key == "train_users") {
      c.movielens.n_train_users = size();
    } else if (key == "test_users") {
      c.movielens.n_test_users = size();
    } else {
      throw ConfigError(fmt::format("line {}: unknown key '{}'", line_no, key));
    }
  }
  if (c.methods.empty()) throw ConfigError("methods: empty list");
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read {}", path.string()));
  return parse_config(in);
}

std::vector<SweepPoint> sweep_points(const ExperimentConfig& c) {
  const bool file_suite = c.suite == "pickups" || c.suite == "movielens";
  if (!file_suite && !parse_suite_kind(c.suite)) {
    throw ConfigError(fmt::format("suite: unknown kind '{}'", c.suite));
  }
  if (c.m_train == 0 || c.m_test == 0) {
    throw ConfigError("m_train and m_test must be positive");
  }
  if (c.seeds.empty()) throw ConfigError("seeds: empty list");
  // For movielens n is the retained movie count, known only after loading;
  // the upper bound is rechecked by the library then.
  const std::size_t n = c.suite == "movielens" ? c.movielens.top_movies : c.n;
  const bool two_stage =
      std::find(c.methods.begin(), c.methods.end(),
                Method::kReplacementGreedy) != c.methods.end();

  std::vector<SweepPoint> points;
  auto add = [&](std::size_t k, std::size_t l) {
    if (!(l >= 1 && l < k && k <= n)) {
      throw ConfigError(fmt::format(
          "sweep point k={} l={} violates 1 <= l < k <= n={}", k, l, n));
    }
    const std::size_t q = c.match_test_budget ? n * (k - l) / k : c.q;
    if (two_stage && !(k <= q && q <= n)) {
      throw ConfigError(fmt::format(
          "sweep point k={} l={}: q={} violates k <= q <= n={}", k, l, q, n));
    }
    points.push_back({k, l, q});
  };
  if (c.sweep == SweepKind::kVaryL) {
    if (c.k.size() != 1) throw ConfigError("vary-l needs exactly one k");
    for (std::size_t l : c.l) add(c.k.front(), l);
  } else {
    if (!(c.ratio > 0.0 && c.ratio < 1.0)) {
      throw ConfigError("ratio must lie in (0, 1)");
    }
    for (std::size_t k : c.k) {
      add(k, static_cast<std::size_t>(
                 std::floor(c.ratio * static_cast<double>(k) + 1e-9)));
    }
  }
  return points;
}

namespace {

struct SharedData {
  std::vector<PickupRecord> pickups;
  RatingsTable ratings;
};

Suite build_suite(const ExperimentConfig& c, const SharedData& data,
                  std::uint64_t seed) {
  if (auto kind = parse_suite_kind(c.suite)) {
    return synthetic_suite(*kind, c.n, c.m_train, c.m_test, seed);
  }
  Rng rng(seed, 11);
  Suite suite;
  if (c.suite == "pickups") {
    const Eigen::Matrix2Xd ground = sample_ground(data.pickups, c.n, rng);
    auto task = [&]() -> SetFunctionPtr {
      // Slot ends at a random pickup time, so its window is never empty.
      const std::int64_t at =
          data.pickups[rng.index(data.pickups.size())].timestamp;
      RideshareTask t =
          make_rideshare_task(data.pickups, at, ground, rng, c.rideshare);
      for (const auto& w : t.warnings) fmt::print(stderr, "warning: {}\n", w);
      return t.objective;
    };
    suite.n = c.n;
    for (std::size_t i = 0; i < c.m_train; ++i) suite.train.push_back(task());
    for (std::size_t i = 0; i < c.m_test; ++i) suite.test.push_back(task());
  } else {
    MovieLensParams p = c.movielens;
    p.m_train = c.m_train;
    p.m_test = c.m_test;
    MovieLensSuite ml = make_movielens_tasks(data.ratings, rng, p);
    suite.n = ml.movie_ids.size();
    suite.train = std::move(ml.train);
    suite.test = std::move(ml.test);
  }
  return suite;
}

std::size_t method_rank(const std::vector<Method>& methods, Method m) {
  return static_cast<std::size_t>(
      std::find(methods.begin(), methods.end(), m) - methods.begin());
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& c) {
  const std::vector<SweepPoint> points = sweep_points(c);

  SharedData data;
  if (c.suite == "pickups") {
    if (c.pickups.empty()) throw ConfigError("pickups: path required");
    PickupLoad load = load_pickups(c.pickups, std::nullopt, c.pickup_format);
    if (load.skipped > 0) {
      fmt::print(stderr, "warning: {} pickup rows skipped\n", load.skipped);
    }
    data.pickups = std::move(load.records);
  } else if (c.suite == "movielens") {
    if (c.ratings.empty() || c.movies.empty()) {
      throw ConfigError("movielens: ratings and movies paths required");
    }
    data.ratings = load_ratings(c.ratings, c.movies, c.ratings_format);
    for (const auto& w : data.ratings.warnings) {
      fmt::print(stderr, "warning: {}\n", w);
    }
  }

  std::vector<std::vector<ResultRow>> per_job(c.seeds.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t job = next++; job < c.seeds.size(); job = next++) {
      try {
        const std::uint64_t seed = c.seeds[job];
        const Suite suite = build_suite(c, data, seed);
        for (const SweepPoint& p : points) {
          SuiteOptions options{Budget{p.k, p.l}, p.q, seed, c.methods};
          for (const MethodOutcome& o :
               run_method_suite(suite.train, suite.test, options)) {
            per_job[job].push_back({p, o, seed});
          }
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const std::size_t threads =
      std::clamp<std::size_t>(c.threads, 1, c.seeds.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (error) std::rethrow_exception(error);

  std::vector<ResultRow> rows;
  for (auto& job : per_job) {
    rows.insert(rows.end(), job.begin(), job.end());
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [&](const ResultRow& a, const ResultRow& b) {
                     auto key = [&](const ResultRow& r) {
                       return std::make_tuple(
                           r.point.k, r.point.l,
                           method_rank(c.methods, r.outcome.method), r.seed);
                     };
                     return key(a) < key(b);
                   });
  return rows;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows,
               bool timing) {
  out << kCsvHeader << '\n';
  for (const ResultRow& r : rows) {
    const MethodOutcome& o = r.outcome;
    out << fmt::format("{},{},{},{},{:.10g},{:.10g},{},{:.10g},{:.3f}\n",
                       r.point.k, r.point.l, method_name(o.method), r.seed,
                       o.avg_value, o.normalized, o.train_calls,
                       o.test_calls_per_task, timing ? o.wall_ms : 0.0);
  }
}

void write_plot_data(const std::filesystem::path& dir,
                     const std::vector<ResultRow>& rows) {
  std::filesystem::create_directories(dir);
  struct Acc {
    double value = 0.0;
    double normalized = 0.0;
    std::size_t count = 0;
  };
  std::map<std::string, std::map<std::pair<std::size_t, std::size_t>, Acc>>
      series;
  for (const ResultRow& r : rows) {
    Acc& a = series[std::string(method_name(r.outcome.method))]
                   [{r.point.k, r.point.l}];
    a.value += r.outcome.avg_value;
    a.normalized += r.outcome.normalized;
    ++a.count;
  }
  for (const auto& [method, points] : series) {
    std::ofstream out(dir / (method + ".tsv"));
    if (!out) throw InputError(fmt::format("cannot write to {}", dir.string()));
    out << "sweep_k\tsweep_l\tmean_avg_value\tmean_normalized\tseeds\n";
    for (const auto& [kl, a] : points) {
      const auto c = static_cast<double>(a.count);
      out << fmt::format("{}\t{}\t{:.10g}\t{:.10g}\t{}\n", kl.first, kl.second,
                         a.value / c, a.normalized / c, a.count);
    }
  }
}

// --- Verification suites ---------------------------------------------------

namespace {

constexpr double kOneMinusInvE = 1.0 - 1.0 / std::numbers::e;
constexpr double kSlack = 1e-9;

void counterexample_checks(std::vector<CheckResult>& out) {
  const auto base = build_counterexample();
  const auto f = std::make_shared<BestAugmentationObjective>(
      base, 1, Augmentation::kExact);
  const ElementId acdj = *base->find("ACDJ");
  const ElementId ideh = *base->find("IDEH");
  const double v0 = f->value_of({});
  const double v1 = f->evaluate({acdj});
  const double v2 = f->evaluate({ideh});
  const double v12 = f->evaluate({acdj, ideh});
  out.push_back({"counterexample values",
                 v0 == 1.5 && v1 == 1.75 && v2 == 1.75 && v12 == 2.5,
                 fmt::format("f'(empty)={} f'(ACDJ)={} f'(IDEH)={} "
                             "f'(ACDJ,IDEH)={}",
                             v0, v1, v2, v12)});
  const Witness w = diminishing_returns(*f, {}, {acdj}, ideh);
  const PropertyReport report = check_submodular(*f);
  out.push_back({"augmented objective is not submodular",
                 w.lhs == 0.25 && w.rhs == 0.75 && !report.passed,
                 fmt::format("gain of IDEH: {} at empty, {} at {{ACDJ}}; "
                             "random probe found a violation after {} trials",
                             w.lhs, w.rhs, report.trials)});
}

void bounds_checks(std::vector<CheckResult>& out) {
  const Certificate coarse = theorem1_certificate(100);
  const Certificate fine = theorem1_certificate(1000);
  out.push_back({"meta-greedy certificate >= 0.53",
                 fine.value >= 0.53 && fine.value <= kOneMinusInvE,
                 fmt::format("certificate {:.6f} at beta={:.3f} gamma={:.3f}; "
                             "ceiling {:.6f}",
                             fine.value, fine.beta, fine.gamma,
                             kOneMinusInvE)});
  out.push_back({"certificate stable under refinement",
                 std::abs(coarse.value - fine.value) < 1e-3 &&
                     fine.value <= coarse.value,
                 fmt::format("grid 100: {:.6f}, grid 1000: {:.6f}",
                             coarse.value, fine.value)});
  const double t2 = theorem2_bound(200, 100);
  out.push_back({"randomized bound at k=200 l=100",
                 std::abs(t2 - 0.2897) <= 1e-3,
                 fmt::format("bound {:.6f}", t2)});
}

void oracle_checks(std::vector<CheckResult>& out, std::size_t instances) {
  std::size_t greedy_bad = 0, prop1_bad = 0, prop2_bad = 0, meta_bad = 0,
              rand_bad = 0;
  double worst_meta = 1.0, worst_rand = 1.0;
  for (std::size_t i = 0; i < instances; ++i) {
    const SmallInstance inst = random_small_instance(i);
    const TaskList& tasks = inst.tasks;
    const Budget b = inst.budget;

    const BruteForceMax single = brute_force_max(*tasks.front(), b.k);
    const double g = greedy(*tasks.front(), {}, b.k).final_value;
    if (g < kOneMinusInvE * single.value - kSlack) ++greedy_bad;

    const double opt = brute_force_meta_opt(tasks, b).opt_value;
    const std::vector<ElementSet> none(tasks.size());
    const MetaSolution tf = train_first_greedy(tasks, b);
    const double beta = meta_objective(tasks, tf.s_tr, none);
    if (tf.objective < proposition_bound(BoundKind::kBeta, beta, opt) - kSlack) {
      ++prop1_bad;
    }
    const MetaSolution kf = task_first_greedy(tasks, b);
    const double gamma = meta_objective(tasks, ElementSet{}, kf.per_task);
    if (kf.objective <
        proposition_bound(BoundKind::kGamma, gamma, opt) - kSlack) {
      ++prop2_bad;
    }
    const double meta = std::max(tf.objective, kf.objective);
    if (opt > 0.0) {
      worst_meta = std::min(worst_meta, meta / opt);
      if (meta < 0.53 * opt - kSlack) ++meta_bad;
      double mean = 0.0;
      constexpr int kSeeds = 50;
      for (int s = 0; s < kSeeds; ++s) {
        mean += randomized_meta_greedy(tasks, b, mix_seed(i, s)).objective;
      }
      mean /= kSeeds;
      worst_rand = std::min(worst_rand, mean / opt);
      if (mean < 0.5 * opt - kSlack) ++rand_bad;
    }
  }
  auto count = [&](std::string name, std::size_t bad, std::string extra) {
    out.push_back({std::move(name), bad == 0,
                   fmt::format("{} violations over {} instances{}", bad,
                               instances, extra)});
  };
  count("greedy >= (1-1/e) OPT", greedy_bad, "");
  count("train-first bound", prop1_bad, "");
  count("task-first bound", prop2_bad, "");
  count("meta-greedy >= 0.53 OPT", meta_bad,
        fmt::format("; worst ratio {:.4f}", worst_meta));
  count("randomized mean >= 0.5 OPT", rand_bad,
        fmt::format("; worst ratio {:.4f}", worst_rand));
}

}  // namespace

std::vector<CheckResult> run_verification(std::string_view scope,
                                          std::size_t instances) {
  std::vector<CheckResult> out;
  const bool all = scope == "all";
  if (!all && scope != "bounds" && scope != "counterexample" &&
      scope != "oracle") {
    throw ConfigError(fmt::format("unknown verify scope '{}'", scope));
  }
  if (all || scope == "counterexample") counterexample_checks(out);
  if (all || scope == "bounds") bounds_checks(out);
  if (all || scope == "oracle") oracle_checks(out, instances);
  return out;
}

}  // namespace metasub
