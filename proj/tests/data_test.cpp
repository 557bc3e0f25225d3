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

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "metasub/data.hpp"

namespace metasub {
namespace {

constexpr const char* kFixture =
    "Date/Time,Lat,Lon,Base\n"
    "4/1/2014 0:11:00,40.769,-73.9549,B02512\n"
    "4/1/2014 0:17:00,40.7267,-74.0345,B02512\n"
    "\"4/1/2014 0:21:00\",40.7316,-73.9873,\"B02512\"\n";

TEST(SplitTest, QuotesAndMultiCharDelimiters) {
  EXPECT_EQ(split_fields("a,\"b,c\",d", ","),
            (std::vector<std::string>{"a", "b,c", "d"}));
  EXPECT_EQ(split_fields("\"say \"\"hi\"\"\",x", ","),
            (std::vector<std::string>{"say \"hi\"", "x"}));
  EXPECT_EQ(split_fields("1::Toy Story (1995)::Animation|Comedy", "::"),
            (std::vector<std::string>{"1", "Toy Story (1995)",
                                      "Animation|Comedy"}));
  EXPECT_EQ(split_fields("", ","), (std::vector<std::string>{""}));
}

TEST(DatetimeTest, BothFormatsAgree) {
  const auto a = parse_datetime("4/1/2014 0:11:00");
  const auto b = parse_datetime("2014-04-01 00:11:00");
  const auto c = parse_datetime("2014-04-01T00:11:00Z");
  ASSERT_TRUE(a && b && c);
  EXPECT_EQ(*a, *b);
  EXPECT_EQ(*a, *c);
  EXPECT_EQ(*a, 1396310400 + 11 * 60);  // 2014-04-01 is day 16161
  EXPECT_EQ(parse_datetime("4/1/2014 0:11"), a);
  EXPECT_FALSE(parse_datetime("13/1/2014 0:11:00"));
  EXPECT_FALSE(parse_datetime("2/30/2014 0:11:00"));
  EXPECT_FALSE(parse_datetime("yesterday"));
  EXPECT_EQ(format_datetime(*a), "2014-04-01 00:11:00");
}

TEST(PickupTest, ParsesFixtureExactly) {
  std::istringstream in(kFixture);
  const PickupLoad load = read_pickups(in);
  ASSERT_EQ(load.records.size(), 3u);
  EXPECT_EQ(load.skipped, 0u);
  EXPECT_EQ(load.records[0].latitude, 40.769);
  EXPECT_EQ(load.records[1].longitude, -74.0345);
  EXPECT_EQ(load.records[2].timestamp, *parse_datetime("4/1/2014 0:21:00"));
}

TEST(PickupTest, SkipsMalformedRows) {
  std::istringstream in(
      "Date/Time,Lat,Lon\n"
      "4/1/2014 0:11:00,40.7,-73.9\n"
      "4/41/2014 0:11:00,40.7,-73.9\n"
      "4/1/2014 0:12:00,nan,-73.9\n"
      "4/1/2014 0:13:00,40.8\n");
  const PickupLoad load = read_pickups(in);
  EXPECT_EQ(load.records.size(), 1u);
  EXPECT_EQ(load.skipped, 3u);
}

TEST(PickupTest, ErrorsOnUnusableInput) {
  std::istringstream none("Date/Time,Lat,Lon\nbad,row,here\n");
  EXPECT_THROW(read_pickups(none), InputError);
  std::istringstream no_column("when,Lat,Lon\n4/1/2014 0:11:00,1,2\n");
  EXPECT_THROW(read_pickups(no_column), InputError);
  EXPECT_THROW(load_pickups("/nonexistent/file.csv"), InputError);
}

TEST(PickupTest, LimitAndCustomColumns) {
  std::ostringstream big;
  big << "when;y;x\n";
  for (int i = 0; i < 1000; ++i) {
    big << "2014-04-01 00:00:" << (i % 60 < 10 ? "0" : "") << i % 60 << ";"
        << 40.0 + i * 1e-4 << ";" << -73.0 << "\n";
  }
  std::istringstream in(big.str());
  PickupFormat f{";", "y", "x", "when"};
  const PickupLoad load = read_pickups(in, 100, f);
  EXPECT_EQ(load.records.size(), 100u);
}

TEST(PickupTest, WriteThenReadIsIdentity) {
  std::istringstream in(kFixture);
  const PickupLoad first = read_pickups(in);
  std::ostringstream out;
  write_pickups(out, first.records);
  std::istringstream back(out.str());
  EXPECT_EQ(read_pickups(back).records, first.records);
}

// Ten anchors in the window, each with exactly ten neighbors of its own.
std::vector<PickupRecord> clustered_fixture(std::size_t anchors) {
  std::vector<PickupRecord> recs;
  const std::int64_t t0 = 1'000'000;
  for (std::size_t a = 0; a < anchors; ++a) {
    const double lat = 40.0 + 0.1 * static_cast<double>(a);
    recs.push_back({lat, -73.0, t0 + 60});
    for (int j = 1; j <= 10; ++j) {
      // Outside the time window, inside the radius.
      recs.push_back({lat + j * 1e-4, -73.0, t0 - 7200});
    }
  }
  return recs;
}

TEST(RideshareTest, ForcedSelection) {
  const auto recs = clustered_fixture(10);
  Eigen::Matrix2Xd ground(2, 2);
  ground << 40.0, 40.5, -73.0, -73.0;
  Rng r1(5), r2(6);
  const std::int64_t at = 1'000'000 + 100;
  const RideshareTask a = make_rideshare_task(recs, at, ground, r1);
  const RideshareTask b = make_rideshare_task(recs, at, ground, r2);
  EXPECT_TRUE(a.warnings.empty());
  ASSERT_EQ(a.objective->customers().cols(), 100);
  // Every neighbor is used once regardless of the seed.
  auto sorted = [](const Eigen::Matrix2Xd& m) {
    std::vector<std::pair<double, double>> v;
    for (Eigen::Index i = 0; i < m.cols(); ++i) v.emplace_back(m(0, i), m(1, i));
    std::sort(v.begin(), v.end());
    return v;
  };
  EXPECT_EQ(sorted(a.objective->customers()), sorted(b.objective->customers()));

  // Full ground set: sum over customers of the best score.
  const auto& c = a.objective->customers();
  double expected = 0.0;
  for (Eigen::Index u = 0; u < c.cols(); ++u) {
    double best = 0.0;
    for (Eigen::Index r = 0; r < ground.cols(); ++r) {
      const double d = std::abs(c(0, u) - ground(0, r)) +
                       std::abs(c(1, u) - ground(1, r));
      best = std::max(best, 2.0 - 2.0 / (1.0 + std::exp(-200.0 * d)));
    }
    expected += best;
  }
  EXPECT_NEAR(a.objective->value_of(std::vector<ElementId>{0_e, 1_e}),
              expected, 1e-9);
}

TEST(RideshareTest, FallbacksAndErrors) {
  const auto recs = clustered_fixture(9);
  Eigen::Matrix2Xd ground(2, 1);
  ground << 40.0, -73.0;
  Rng rng(1);
  const RideshareTask t =
      make_rideshare_task(recs, 1'000'100, ground, rng);
  EXPECT_EQ(t.warnings.size(), 1u);
  EXPECT_EQ(t.objective->customers().cols(), 100);
  EXPECT_THROW(make_rideshare_task(recs, 0, ground, rng), InputError);

  const std::vector<PickupRecord> lonely{{40.0, -73.0, 10}, {41.0, -73.0, 10}};
  EXPECT_THROW(make_rideshare_task(lonely, 10, ground, rng), InputError);
}

TEST(RideshareTest, GroundSampleDistinct) {
  const auto recs = clustered_fixture(3);
  Rng rng(2);
  const Eigen::Matrix2Xd g = sample_ground(recs, 33, rng);
  EXPECT_EQ(g.cols(), 33);
  EXPECT_THROW(sample_ground(recs, 34, rng), InputError);
}

constexpr const char* kMovies =
    "movieId,title,genres\n"
    "1,Toy Story (1995),Animation|Comedy\n"
    "2,\"Heat, The (1995)\",Action\n"
    "3,Untitled,(no genres listed)\n"
    "4,Drama One,Drama\n";

TEST(RatingsTest, LoadsAndDropsWithWarnings) {
  std::istringstream movies(kMovies);
  std::istringstream ratings(
      "userId,movieId,rating,timestamp\n"
      "1,1,4.0,0\n"
      "1,3,5.0,0\n"   // untagged movie
      "1,2,7.0,0\n"   // out of range
      "2,2,3.0,0\n"
      "2,2,3.5,0\n");  // repeat keeps the last
  const RatingsTable t = read_ratings(ratings, movies);
  EXPECT_EQ(t.movies.size(), 3u);
  EXPECT_EQ(t.movies.at(2).title, "Heat, The (1995)");
  ASSERT_EQ(t.ratings.size(), 2u);
  EXPECT_DOUBLE_EQ(t.ratings[1].rating, 3.5);
  EXPECT_EQ(t.warnings.size(), 3u);
}

RatingsTable micro_table() {
  RatingsTable t;
  t.movies[10] = {"a", {"Drama"}};
  t.movies[20] = {"b", {"Comedy"}};
  t.ratings = {{1, 10, 5.0}, {2, 20, 3.0}, {2, 10, 1.0}};
  return t;
}

TEST(MovieLensTest, OneUserPerTaskIsThatUser) {
  MovieLensParams p;
  p.users_per_task = 1;
  p.top_users = 2;
  p.n_train_users = 1;
  p.n_test_users = 1;
  p.m_train = 3;
  p.m_test = 2;
  Rng rng(1);
  const MovieLensSuite s = make_movielens_tasks(micro_table(), rng, p);
  EXPECT_EQ(s.train_users, (std::vector<std::uint32_t>{1}));
  EXPECT_EQ(s.test_users, (std::vector<std::uint32_t>{2}));
  ASSERT_EQ(s.train.size(), 3u);
  // Movie 10 is element 0; user 1 rated it 5 and it is their only genre.
  EXPECT_DOUBLE_EQ(s.train[0]->value_of(std::vector<ElementId>{0_e}), 5.0);
  // User 2: Drama 1/2, Comedy 1/2.
  EXPECT_DOUBLE_EQ(s.test[0]->value_of(std::vector<ElementId>{0_e, 1_e}),
                   0.5 * 1.0 + 0.5 * 3.0);
}

TEST(MovieLensTest, TopMovieCutoffBreaksTiesBySmallerId) {
  RatingsTable t;
  for (std::uint32_t m = 1; m <= 5; ++m) t.movies[m] = {"m", {"Drama"}};
  // Counts: movie 5 -> 3, movies 2 and 4 -> 2, others 1.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs = {
      {1, 5}, {2, 5}, {3, 5}, {1, 2}, {2, 2}, {1, 4}, {3, 4}, {1, 1}, {2, 3}};
  for (auto [u, m] : pairs) t.ratings.push_back({u, m, 3.0});
  MovieLensParams p;
  p.top_movies = 3;
  p.top_users = 3;
  p.users_per_task = 1;
  p.n_train_users = 2;
  p.n_test_users = 1;
  p.m_train = 1;
  p.m_test = 1;
  Rng rng(0);
  const MovieLensSuite s = make_movielens_tasks(t, rng, p);
  EXPECT_EQ(s.movie_ids, (std::vector<std::uint32_t>{2, 4, 5}));
  EXPECT_EQ(s.train.front()->size(), 3u);
}

TEST(MovieLensTest, PartitionDisjointAndErrors) {
  Rng rng(0);
  MovieLensParams p;
  p.users_per_task = 1;
  p.n_train_users = 2;
  p.n_test_users = 1;
  EXPECT_THROW(make_movielens_tasks(micro_table(), rng, p), std::domain_error);
  EXPECT_THROW(make_movielens_tasks(RatingsTable{}, rng, p), std::domain_error);
}

TEST(SyntheticTest, SeedReproducible) {
  for (SuiteKind kind : {SuiteKind::kRideshareLike, SuiteKind::kCoverage}) {
    const Suite a = synthetic_suite(kind, 40, 3, 2, 9);
    const Suite b = synthetic_suite(kind, 40, 3, 2, 9);
    const Suite c = synthetic_suite(kind, 40, 3, 2, 10);
    const ElementSet s{0_e, 5_e, 7_e};
    EXPECT_EQ(a.train[1]->value_of(s.members()),
              b.train[1]->value_of(s.members()));
    EXPECT_NE(a.train[1]->value_of(s.members()),
              c.train[1]->value_of(s.members()));
    EXPECT_EQ(a.test.size(), 2u);
    EXPECT_EQ(a.n, 40u);
  }
  EXPECT_TRUE(synthetic_suite(SuiteKind::kCoverage, 10, 2, 0, 1).test.empty());
  EXPECT_EQ(parse_suite_kind("rideshare-like"), SuiteKind::kRideshareLike);
  EXPECT_FALSE(parse_suite_kind("other").has_value());
}

}  // namespace
}  // namespace metasub
