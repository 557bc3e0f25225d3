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

// Dataset ingestion, task samplers and synthetic suites.

#ifndef METASUB_DATA_HPP_
#define METASUB_DATA_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "metasub/core.hpp"
#include "metasub/objectives.hpp"
#include "metasub/rng.hpp"

namespace metasub {

// Unreadable or unusable input files.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Splits one delimited line. Fields may be double-quoted, with "" as an
// escaped quote. A multi-character delimiter (e.g. "::") is matched
// literally.
std::vector<std::string> split_fields(std::string_view line,
                                      std::string_view delimiter);

// Seconds since the epoch (UTC) for "M/D/YYYY H:MM[:SS]" or
// "YYYY-MM-DD[ T]HH:MM[:SS][Z]".
std::optional<std::int64_t> parse_datetime(std::string_view text);
// "YYYY-MM-DD HH:MM:SS"; parse_datetime reads it back exactly.
std::string format_datetime(std::int64_t seconds);

struct PickupRecord {
  double latitude = 0.0;
  double longitude = 0.0;
  std::int64_t timestamp = 0;

  friend bool operator==(const PickupRecord&, const PickupRecord&) = default;
};

struct PickupFormat {
  std::string delimiter = ",";
  std::string lat_column = "Lat";
  std::string lon_column = "Lon";
  std::string time_column = "Date/Time";
};

struct PickupLoad {
  std::vector<PickupRecord> records;  // file order
  std::size_t skipped = 0;            // unparseable rows
};

// Throws InputError on a missing column, an unreadable file, or when no row
// parses. limit stops after that many valid rows.
PickupLoad read_pickups(std::istream& in, std::optional<std::size_t> limit = {},
                        const PickupFormat& format = {});
PickupLoad load_pickups(const std::filesystem::path& path,
                        std::optional<std::size_t> limit = {},
                        const PickupFormat& format = {});
// Header plus one row per record, coordinates printed to round-trip.
void write_pickups(std::ostream& out, std::span<const PickupRecord> records,
                   const PickupFormat& format = {});

// Points are stored as (latitude, longitude) columns.
Eigen::Matrix2Xd to_points(std::span<const PickupRecord> records);

// n distinct records drawn uniformly, as candidate locations.
Eigen::Matrix2Xd sample_ground(std::span<const PickupRecord> records,
                               std::size_t n, Rng& rng);

struct RideshareParams {
  std::int64_t window_seconds = 1800;
  std::size_t anchors = 10;
  std::size_t neighbors = 10;
  // Manhattan threshold in degrees; about 1 km at Manhattan's latitude.
  double radius = 0.009;
};

struct RideshareTask {
  std::shared_ptr<FacilityLocationObjective> objective;
  std::vector<std::string> warnings;  // replacement fallbacks taken
};

// Samples anchors among the records in [at_time - window, at_time] and, for
// each, neighbors within the radius among all other records. Short pools
// fall back to sampling with replacement; empty pools throw InputError.
RideshareTask make_rideshare_task(std::span<const PickupRecord> records,
                                  std::int64_t at_time,
                                  const Eigen::Matrix2Xd& ground, Rng& rng,
                                  const RideshareParams& params = {});

struct RatingRow {
  std::uint32_t user = 0;
  std::uint32_t movie = 0;
  double rating = 0.0;
};

struct MovieInfo {
  std::string title;
  std::vector<std::string> genres;
};

struct RatingsTable {
  std::vector<RatingRow> ratings;  // one row per (user, movie)
  std::map<std::uint32_t, MovieInfo> movies;  // tagged movies only
  std::vector<std::string> warnings;
};

struct RatingsFormat {
  std::string delimiter = ",";
  // "(no genres listed)" is treated as no tag.
  std::string untagged = "(no genres listed)";
};

// Two-file convention: ratings (user, movie, rating[, timestamp]) and
// movies (movie, title, genres separated by '|'). A non-numeric first line
// is taken as a header. Ratings outside [1, 5] and ratings of untagged or
// unknown movies are dropped with a warning; a repeated (user, movie) keeps
// the last rating.
RatingsTable read_ratings(std::istream& ratings, std::istream& movies,
                          const RatingsFormat& format = {});
RatingsTable load_ratings(const std::filesystem::path& ratings_path,
                          const std::filesystem::path& movies_path,
                          const RatingsFormat& format = {});

struct MovieLensParams {
  std::size_t users_per_task = 5;
  std::size_t top_movies = 2000;
  std::size_t top_users = 200;
  std::size_t n_train_users = 100;
  std::size_t n_test_users = 100;
  std::size_t m_train = 100;
  std::size_t m_test = 100;
};

struct MovieLensSuite {
  std::shared_ptr<const GenreCatalog> catalog;
  std::vector<std::uint32_t> movie_ids;  // ground-set element -> movie id
  std::vector<std::uint32_t> train_users;
  std::vector<std::uint32_t> test_users;
  TaskList train;
  TaskList test;
};

// Keeps the most rated movies and the most active users (ties to the
// smaller id), splits the users by id into train then test pools, and makes
// each task the average of users_per_task distinct users from one pool.
// Throws std::domain_error when the table has too few users.
MovieLensSuite make_movielens_tasks(const RatingsTable& table, Rng& rng,
                                    const MovieLensParams& params = {});

enum class SuiteKind { kRideshareLike, kCoverage };

std::optional<SuiteKind> parse_suite_kind(std::string_view name);

struct Suite {
  std::size_t n = 0;
  TaskList train;
  TaskList test;
};

// Desk-scale stand-ins for the real datasets. rideshare-like: a shared
// candidate set over Gaussian hotspots, each task a customer cloud of
// 10 anchors x 10 neighbors; anchors follow stable hotspot popularity with
// per-task jitter, plus a point-like tail at random candidate sites.
// coverage: shared random incidences with per-task perturbations and item
// weights.
Suite synthetic_suite(SuiteKind kind, std::size_t n, std::size_t m_train,
                      std::size_t m_test, std::uint64_t seed);

}  // namespace metasub

#endif  // METASUB_DATA_HPP_
