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

#include "metasub/data.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include <fmt/format.h>

namespace metasub {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

bool getline_clean(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  // UTF-8 byte order mark
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  return true;
}

std::size_t column_index(const std::vector<std::string>& header,
                         const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (trim(header[i]) == name) return i;
  }
  throw InputError(fmt::format("missing column '{}'", name));
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot read {}", path.string()));
  return in;
}

}  // namespace

std::vector<std::string> split_fields(std::string_view line,
                                      std::string_view delimiter) {
  std::vector<std::string> out;
  std::string field;
  std::size_t i = 0;
  bool quoted = false;
  while (i < line.size()) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          i += 2;
          continue;
        }
        quoted = false;
      } else {
        field += c;
      }
      ++i;
    } else if (c == '"' && trim(field).empty()) {
      field.clear();
      quoted = true;
      ++i;
    } else if (!delimiter.empty() && line.substr(i, delimiter.size()) == delimiter) {
      out.push_back(std::move(field));
      field.clear();
      i += delimiter.size();
    } else {
      field += c;
      ++i;
    }
  }
  out.push_back(std::move(field));
  return out;
}

std::optional<std::int64_t> parse_datetime(std::string_view text) {
  const std::string s(trim(text));
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
  int used = 0;
  auto done = [&] { return static_cast<std::size_t>(used) == s.size(); };
  bool ok = false;
  if (std::sscanf(s.c_str(), "%d/%d/%d %d:%d:%d%n", &mo, &d, &y, &h, &mi, &sec,
                  &used) == 6 && done()) {
    ok = true;
  } else if (sec = 0, used = 0,
             std::sscanf(s.c_str(), "%d/%d/%d %d:%d%n", &mo, &d, &y, &h, &mi,
                         &used) == 5 && done()) {
    ok = true;
  } else {
    std::string iso = s;
    if (!iso.empty() && iso.back() == 'Z') iso.pop_back();
    if (iso.size() > 10 && iso[10] == 'T') iso[10] = ' ';
    used = 0;
    sec = 0;
    auto iso_done = [&] { return static_cast<std::size_t>(used) == iso.size(); };
    if (std::sscanf(iso.c_str(), "%d-%d-%d %d:%d:%d%n", &y, &mo, &d, &h, &mi,
                    &sec, &used) == 6 && iso_done()) {
      ok = true;
    } else if (sec = 0, used = 0,
               std::sscanf(iso.c_str(), "%d-%d-%d %d:%d%n", &y, &mo, &d, &h,
                           &mi, &used) == 5 && iso_done()) {
      ok = true;
    }
  }
  if (!ok) return std::nullopt;
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h < 0 || h > 23 || mi < 0 || mi > 59 || sec < 0 ||
      sec > 60) {
    return std::nullopt;
  }
  const auto days = sys_days{ymd}.time_since_epoch().count();
  return static_cast<std::int64_t>(days) * 86400 + h * 3600 + mi * 60 + sec;
}

std::string format_datetime(std::int64_t seconds) {
  using namespace std::chrono;
  std::int64_t days = seconds / 86400;
  std::int64_t rem = seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  return fmt::format("{:04}-{:02}-{:02} {:02}:{:02}:{:02}",
                     static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()),
                     static_cast<unsigned>(ymd.day()), rem / 3600,
                     rem / 60 % 60, rem % 60);
}

PickupLoad read_pickups(std::istream& in, std::optional<std::size_t> limit,
                        const PickupFormat& format) {
  std::string line;
  if (!getline_clean(in, line)) throw InputError("pickup file is empty");
  const auto header = split_fields(line, format.delimiter);
  const std::size_t lat = column_index(header, format.lat_column);
  const std::size_t lon = column_index(header, format.lon_column);
  const std::size_t time = column_index(header, format.time_column);
  const std::size_t needed = std::max({lat, lon, time}) + 1;

  PickupLoad load;
  while ((!limit || load.records.size() < *limit) && getline_clean(in, line)) {
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line, format.delimiter);
    if (fields.size() < needed) {
      ++load.skipped;
      continue;
    }
    const auto la = parse_number<double>(fields[lat]);
    const auto lo = parse_number<double>(fields[lon]);
    const auto ts = parse_datetime(fields[time]);
    if (!la || !lo || !ts || !std::isfinite(*la) || !std::isfinite(*lo)) {
      ++load.skipped;
      continue;
    }
    load.records.push_back({*la, *lo, *ts});
  }
  if (load.records.empty()) {
    throw InputError(fmt::format("no valid pickup rows ({} skipped)",
                                 load.skipped));
  }
  return load;
}

PickupLoad load_pickups(const std::filesystem::path& path,
                        std::optional<std::size_t> limit,
                        const PickupFormat& format) {
  std::ifstream in = open(path);
  return read_pickups(in, limit, format);
}

void write_pickups(std::ostream& out, std::span<const PickupRecord> records,
                   const PickupFormat& format) {
  const std::string& d = format.delimiter;
  out << format.time_column << d << format.lat_column << d
      << format.lon_column << '\n';
  for (const PickupRecord& r : records) {
    out << format_datetime(r.timestamp) << d << fmt::format("{}", r.latitude)
        << d << fmt::format("{}", r.longitude) << '\n';
  }
}

Eigen::Matrix2Xd to_points(std::span<const PickupRecord> records) {
  Eigen::Matrix2Xd pts(2, static_cast<Eigen::Index>(records.size()));
  for (std::size_t i = 0; i < records.size(); ++i) {
    pts.col(static_cast<Eigen::Index>(i)) << records[i].latitude,
        records[i].longitude;
  }
  return pts;
}

Eigen::Matrix2Xd sample_ground(std::span<const PickupRecord> records,
                               std::size_t n, Rng& rng) {
  if (n > records.size()) {
    throw InputError(fmt::format("ground set of {} from only {} records", n,
                                 records.size()));
  }
  const auto picks = rng.sample_without_replacement(records.size(), n);
  Eigen::Matrix2Xd ground(2, static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    ground.col(static_cast<Eigen::Index>(i)) << records[picks[i]].latitude,
        records[picks[i]].longitude;
  }
  return ground;
}

namespace {

// count draws from pool: without replacement when it is large enough,
// otherwise with replacement plus a warning.
std::vector<std::size_t> draw(const std::vector<std::size_t>& pool,
                              std::size_t count, Rng& rng,
                              std::vector<std::string>& warnings,
                              std::string_view what) {
  std::vector<std::size_t> out;
  out.reserve(count);
  if (pool.size() >= count) {
    for (std::size_t i : rng.sample_without_replacement(pool.size(), count)) {
      out.push_back(pool[i]);
    }
  } else {
    warnings.push_back(fmt::format(
        "only {} {} available for {}; sampling with replacement", pool.size(),
        what, count));
    for (std::size_t i = 0; i < count; ++i) {
      out.push_back(pool[rng.index(pool.size())]);
    }
  }
  return out;
}

}  // namespace

RideshareTask make_rideshare_task(std::span<const PickupRecord> records,
                                  std::int64_t at_time,
                                  const Eigen::Matrix2Xd& ground, Rng& rng,
                                  const RideshareParams& params) {
  RideshareTask task;
  std::vector<std::size_t> window;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::int64_t t = records[i].timestamp;
    if (t >= at_time - params.window_seconds && t <= at_time) {
      window.push_back(i);
    }
  }
  if (window.empty()) {
    throw InputError(fmt::format("no pickups in the window ending at {}",
                                 format_datetime(at_time)));
  }
  const auto anchors = draw(window, params.anchors, rng, task.warnings,
                            "anchors");

  Eigen::Matrix2Xd customers(
      2, static_cast<Eigen::Index>(params.anchors * params.neighbors));
  Eigen::Index col = 0;
  std::vector<std::size_t> near;
  for (std::size_t a : anchors) {
    near.clear();
    const PickupRecord& anchor = records[a];
    for (std::size_t j = 0; j < records.size(); ++j) {
      if (j == a) continue;
      const double d = std::abs(records[j].latitude - anchor.latitude) +
                       std::abs(records[j].longitude - anchor.longitude);
      if (d <= params.radius) near.push_back(j);
    }
    if (near.empty()) {
      throw InputError(fmt::format("anchor ({}, {}) has no neighbors",
                                   anchor.latitude, anchor.longitude));
    }
    for (std::size_t j :
         draw(near, params.neighbors, rng, task.warnings, "neighbors")) {
      customers.col(col++) << records[j].latitude, records[j].longitude;
    }
  }
  task.objective =
      std::make_shared<FacilityLocationObjective>(std::move(customers), ground);
  return task;
}

RatingsTable read_ratings(std::istream& ratings, std::istream& movies,
                          const RatingsFormat& format) {
  RatingsTable table;
  std::string line;
  std::size_t untagged = 0;
  std::size_t bad_movie_rows = 0;
  bool first = true;
  while (getline_clean(movies, line)) {
    if (trim(line).empty()) continue;
    const auto f = split_fields(line, format.delimiter);
    const auto id = f.empty() ? std::nullopt : parse_number<std::uint32_t>(f[0]);
    if (!id || f.size() < 3) {
      if (!first) ++bad_movie_rows;
      first = false;
      continue;
    }
    first = false;
    MovieInfo info;
    info.title = std::string(trim(f[1]));
    for (const auto& g : split_fields(f[2], "|")) {
      const std::string_view tag = trim(g);
      if (!tag.empty() && tag != format.untagged) info.genres.emplace_back(tag);
    }
    if (info.genres.empty()) {
      ++untagged;
      continue;
    }
    table.movies[*id] = std::move(info);
  }

  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> seen;
  std::size_t bad_rows = 0, out_of_range = 0, unknown = 0;
  first = true;
  while (getline_clean(ratings, line)) {
    if (trim(line).empty()) continue;
    const auto f = split_fields(line, format.delimiter);
    std::optional<std::uint32_t> user, movie;
    std::optional<double> value;
    if (f.size() >= 3) {
      user = parse_number<std::uint32_t>(f[0]);
      movie = parse_number<std::uint32_t>(f[1]);
      value = parse_number<double>(f[2]);
    }
    if (!user || !movie || !value) {
      if (!first) ++bad_rows;  // a bad first line is the header
      first = false;
      continue;
    }
    first = false;
    if (!(*value >= 1.0 && *value <= 5.0)) {
      ++out_of_range;
      continue;
    }
    if (!table.movies.contains(*movie)) {
      ++unknown;
      continue;
    }
    const auto key = std::make_pair(*user, *movie);
    if (auto it = seen.find(key); it != seen.end()) {
      table.ratings[it->second].rating = *value;
    } else {
      seen.emplace(key, table.ratings.size());
      table.ratings.push_back({*user, *movie, *value});
    }
  }
  auto warn = [&](std::size_t count, std::string_view what) {
    if (count > 0) table.warnings.push_back(fmt::format("{} {}", count, what));
  };
  warn(untagged, "untagged movies dropped");
  warn(bad_movie_rows, "unparseable movie rows skipped");
  warn(bad_rows, "unparseable rating rows skipped");
  warn(out_of_range, "ratings outside [1, 5] dropped");
  warn(unknown, "ratings of untagged or unknown movies dropped");
  return table;
}

RatingsTable load_ratings(const std::filesystem::path& ratings_path,
                          const std::filesystem::path& movies_path,
                          const RatingsFormat& format) {
  std::ifstream ratings = open(ratings_path);
  std::ifstream movies = open(movies_path);
  return read_ratings(ratings, movies, format);
}

namespace {

// Ids ordered by descending count, ties to the smaller id, cut to limit.
std::vector<std::uint32_t> top_by_count(
    const std::map<std::uint32_t, std::size_t>& counts, std::size_t limit) {
  std::vector<std::pair<std::size_t, std::uint32_t>> order;
  for (const auto& [id, c] : counts) order.emplace_back(c, id);
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  if (order.size() > limit) order.resize(limit);
  std::vector<std::uint32_t> ids;
  for (const auto& p : order) ids.push_back(p.second);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

MovieLensSuite make_movielens_tasks(const RatingsTable& table, Rng& rng,
                                    const MovieLensParams& params) {
  if (table.ratings.empty()) throw std::domain_error("ratings table is empty");
  if (params.users_per_task == 0) {
    throw std::domain_error("users_per_task must be positive");
  }
  std::map<std::uint32_t, std::size_t> movie_counts;
  for (const RatingRow& r : table.ratings) ++movie_counts[r.movie];
  MovieLensSuite suite;
  suite.movie_ids = top_by_count(movie_counts, params.top_movies);

  std::map<std::uint32_t, std::size_t> element_of;
  for (std::size_t i = 0; i < suite.movie_ids.size(); ++i) {
    element_of[suite.movie_ids[i]] = i;
  }
  std::map<std::uint32_t, std::size_t> user_counts;
  for (const RatingRow& r : table.ratings) {
    if (element_of.contains(r.movie)) ++user_counts[r.user];
  }
  const std::vector<std::uint32_t> users =
      top_by_count(user_counts, params.top_users);
  const std::size_t wanted = params.n_train_users + params.n_test_users;
  if (users.size() < wanted) {
    throw std::domain_error(fmt::format(
        "{} users requested but only {} available", wanted, users.size()));
  }
  if (params.users_per_task > params.n_train_users ||
      params.users_per_task > params.n_test_users) {
    throw std::domain_error("users_per_task exceeds a user pool");
  }
  suite.train_users.assign(users.begin(),
                           users.begin() + static_cast<std::ptrdiff_t>(
                                               params.n_train_users));
  suite.test_users.assign(
      users.begin() + static_cast<std::ptrdiff_t>(params.n_train_users),
      users.begin() + static_cast<std::ptrdiff_t>(wanted));

  // Genre vocabulary in name order.
  std::set<std::string> names;
  for (std::uint32_t id : suite.movie_ids) {
    for (const auto& g : table.movies.at(id).genres) names.insert(g);
  }
  auto catalog = std::make_shared<GenreCatalog>();
  catalog->genre_names.assign(names.begin(), names.end());
  for (std::uint32_t id : suite.movie_ids) {
    const MovieInfo& info = table.movies.at(id);
    std::vector<std::uint16_t> tags;
    for (const auto& g : info.genres) {
      const auto pos = std::lower_bound(catalog->genre_names.begin(),
                                        catalog->genre_names.end(), g);
      tags.push_back(
          static_cast<std::uint16_t>(pos - catalog->genre_names.begin()));
    }
    std::sort(tags.begin(), tags.end());
    tags.erase(std::unique(tags.begin(), tags.end()), tags.end());
    catalog->genres.push_back(std::move(tags));
    catalog->titles.push_back(info.title);
  }
  suite.catalog = catalog;

  std::map<std::uint32_t, std::vector<Rating>> by_user;
  for (const RatingRow& r : table.ratings) {
    auto it = element_of.find(r.movie);
    if (it != element_of.end()) {
      by_user[r.user].push_back({ElementId{it->second}, r.rating});
    }
  }
  auto objective_of = [&](std::uint32_t user) -> SetFunctionPtr {
    return std::make_shared<RecommendationObjective>(catalog, by_user[user]);
  };
  auto build = [&](const std::vector<std::uint32_t>& pool, std::size_t m) {
    std::vector<SetFunctionPtr> per_user;
    for (std::uint32_t u : pool) per_user.push_back(objective_of(u));
    TaskList tasks;
    for (std::size_t t = 0; t < m; ++t) {
      const auto picks =
          rng.sample_without_replacement(pool.size(), params.users_per_task);
      if (picks.size() == 1) {
        tasks.push_back(per_user[picks[0]]);
        continue;
      }
      TaskList members;
      for (std::size_t p : picks) members.push_back(per_user[p]);
      tasks.push_back(std::make_shared<TaskAverageObjective>(std::move(members)));
    }
    return tasks;
  };
  suite.train = build(suite.train_users, params.m_train);
  suite.test = build(suite.test_users, params.m_test);
  return suite;
}

std::optional<SuiteKind> parse_suite_kind(std::string_view name) {
  if (name == "rideshare-like") return SuiteKind::kRideshareLike;
  if (name == "coverage") return SuiteKind::kCoverage;
  return std::nullopt;
}

namespace {

constexpr std::size_t kHotspots = 8;
constexpr double kCity = 0.1;        // side of the square area, degrees
constexpr double kSiteSpread = 0.006;
constexpr double kAnchorSpread = 0.002;
constexpr double kNeighborSpread = 0.003;
// Share of anchors sitting on a random candidate, with point-like clouds.
constexpr double kTailShare = 0.2;
constexpr double kTailSpread = 0.001;
constexpr double kActivityJitter = 0.5;  // lognormal sigma

Suite rideshare_like(std::size_t n, std::size_t m_train, std::size_t m_test,
                     Rng& rng) {
  Eigen::Matrix2Xd hot(2, kHotspots);
  for (Eigen::Index h = 0; h < hot.cols(); ++h) {
    hot.col(h) << rng.uniform(0.0, kCity), rng.uniform(0.0, kCity);
  }
  // Candidates: mostly near hotspots, some scattered anywhere.
  Eigen::Matrix2Xd sites(2, static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < sites.cols(); ++i) {
    if (rng.bernoulli(0.2)) {
      sites.col(i) << rng.uniform(0.0, kCity), rng.uniform(0.0, kCity);
    } else {
      const auto h = static_cast<Eigen::Index>(rng.index(kHotspots));
      sites.col(i) << rng.normal(hot(0, h), kSiteSpread),
          rng.normal(hot(1, h), kSiteSpread);
    }
  }
  auto make_task = [&]() -> SetFunctionPtr {
    // Per-slot activity: stable popularity 1/(h+1) with lognormal jitter.
    std::vector<double> w(kHotspots);
    double total = 0.0;
    for (std::size_t h = 0; h < kHotspots; ++h) {
      w[h] = std::exp(rng.normal(0.0, kActivityJitter)) /
             static_cast<double>(h + 1);
      total += w[h];
    }
    Eigen::Matrix2Xd customers(2, 100);
    Eigen::Index col = 0;
    for (int a = 0; a < 10; ++a) {
      double ax = 0.0;
      double ay = 0.0;
      double spread = kNeighborSpread;
      if (rng.bernoulli(kTailShare)) {
        spread = kTailSpread;
        // Long tail: a pickup at some candidate location anywhere in town.
        const auto i = static_cast<Eigen::Index>(rng.index(n));
        ax = sites(0, i);
        ay = sites(1, i);
      } else {
        double u = rng.uniform() * total;
        std::size_t h = 0;
        while (h + 1 < kHotspots && u >= w[h]) u -= w[h++];
        ax = rng.normal(hot(0, static_cast<Eigen::Index>(h)), kAnchorSpread);
        ay = rng.normal(hot(1, static_cast<Eigen::Index>(h)), kAnchorSpread);
      }
      for (int j = 0; j < 10; ++j) {
        customers.col(col++) << rng.normal(ax, spread),
            rng.normal(ay, spread);
      }
    }
    return std::make_shared<FacilityLocationObjective>(std::move(customers),
                                                       sites);
  };
  Suite suite{n, {}, {}};
  for (std::size_t i = 0; i < m_train; ++i) suite.train.push_back(make_task());
  for (std::size_t i = 0; i < m_test; ++i) suite.test.push_back(make_task());
  return suite;
}

Suite coverage(std::size_t n, std::size_t m_train, std::size_t m_test,
               Rng& rng) {
  const std::size_t items = std::max<std::size_t>(20, n);
  std::vector<CoverageObjective::ItemList> shared(n);
  for (auto& list : shared) {
    const std::size_t c = 1 + rng.index(5);
    for (std::size_t j = 0; j < c; ++j) {
      list.push_back(static_cast<std::uint32_t>(rng.index(items)));
    }
  }
  auto make_task = [&]() -> SetFunctionPtr {
    auto covers = shared;
    for (auto& list : covers) {
      if (rng.bernoulli(0.3)) {
        list.push_back(static_cast<std::uint32_t>(rng.index(items)));
      }
    }
    Eigen::VectorXd w(static_cast<Eigen::Index>(items));
    for (Eigen::Index j = 0; j < w.size(); ++j) w[j] = rng.uniform(0.5, 2.0);
    return std::make_shared<CoverageObjective>(std::move(covers), std::move(w));
  };
  Suite suite{n, {}, {}};
  for (std::size_t i = 0; i < m_train; ++i) suite.train.push_back(make_task());
  for (std::size_t i = 0; i < m_test; ++i) suite.test.push_back(make_task());
  return suite;
}

}  // namespace

Suite synthetic_suite(SuiteKind kind, std::size_t n, std::size_t m_train,
                      std::size_t m_test, std::uint64_t seed) {
  if (n == 0) throw std::domain_error("synthetic suite needs n >= 1");
  Rng rng(seed, 7);
  return kind == SuiteKind::kRideshareLike
             ? rideshare_like(n, m_train, m_test, rng)
             : coverage(n, m_train, m_test, rng);
}

}  // namespace metasub
