#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "avoidpoly/error.hpp"
#include "avoidpoly/generators.hpp"
#include "avoidpoly/geometry.hpp"
#include "oracles.hpp"

using namespace avoidpoly;

namespace {

SampledCompactSet random_set(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> flat(n * dim);
  for (auto& x : flat) x = g(rng);
  return SampledCompactSet(dim, std::move(flat), 0.0);
}

std::vector<std::vector<double>> sorted_rows(const SampledCompactSet& s) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < s.size(); ++i) rows.push_back(oracle::row(s, i));
  std::sort(rows.begin(), rows.end());
  return rows;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::internal;
}

}  // namespace

TEST_CASE("points reject non-finite coordinates and empty dimension") {
  CHECK(code_of([] { Point p{1.0, std::nan("")}; }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { Point p(std::vector<double>{}); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { Point p{1.0, INFINITY}; }) == ErrorCode::invalid_argument);
  CHECK(Point{3.0, 4.0}.norm() == 5.0);
  CHECK((Point{1.0, 2.0} + Point{3.0, 4.0}) == Point{4.0, 6.0});
  CHECK(code_of([] { return Point{1.0} + Point{1.0, 2.0}; }) == ErrorCode::dimension_mismatch);
}

TEST_CASE("sampled sets validate their invariants") {
  CHECK(code_of([] { SampledCompactSet s(2, {}, 0.0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { SampledCompactSet s(2, {1.0, 2.0, 3.0}, 0.0); }) ==
        ErrorCode::dimension_mismatch);
  CHECK(code_of([] { SampledCompactSet s(1, {1.0}, -1.0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { SampledCompactSet s(1, {1.0}, NAN); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { SampledCompactSet s(1, {1.0}, 0.0, "x", true); }) ==
        ErrorCode::invalid_argument);
  SampledCompactSet s(2, {0.0, 1.0, 2.0, -1.0}, 0.25, "pair");
  CHECK(s.size() == 2);
  CHECK(s.bounds().lo == std::vector<double>{0.0, -1.0});
  CHECK(s.bounds().hi == std::vector<double>{2.0, 1.0});
  CHECK(s.with_resolution(0.5).resolution_h() == 0.5);
}

TEST_CASE("dist_point_to_set examples") {
  SUBCASE("single point Pythagoras") {
    const auto s = SampledCompactSet::from_points({Point{3.0, 4.0}}, 0.0);
    CHECK(dist_point_to_set(Point{0.0, 0.0}, s) == 5.0);
  }
  SUBCASE("membership gives zero") {
    const auto s = random_set(50, 3, 1);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(dist_point_to_set(s.point_at(i), s) == 0.0);
  }
  SUBCASE("depth-3 Cantor on the real axis, brute force") {
    const auto s = gen_cantor(3, true);
    const double got = dist_point_to_set(Point{0.5, 0.0}, s);
    CHECK(got == doctest::Approx(oracle::brute_distance(s, {0.5, 0.0})).epsilon(1e-15));
    CHECK(got == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  }
  SUBCASE("dimension mismatch") {
    const auto s = random_set(5, 2, 2);
    CHECK(code_of([&] { return dist_point_to_set(Point{1.0}, s); }) ==
          ErrorCode::dimension_mismatch);
  }
}

TEST_CASE("distance is zero exactly on members") {
  const auto s = random_set(200, 2, 3);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<Point> queries;
  for (int t = 0; t < 100; ++t) queries.push_back(Point{u(rng), u(rng)});
  for (std::size_t i = 0; i < s.size(); i += 7) queries.push_back(s.point_at(i));
  for (const auto& p : queries) {
    bool member = false;
    for (std::size_t i = 0; i < s.size(); ++i) member = member || s.point_at(i) == p;
    CHECK((dist_point_to_set(p, s) == 0.0) == member);
  }
}

TEST_CASE("translate") {
  const auto s = random_set(30, 2, 5);
  const auto same = translate(s, Point::zeros(2));
  CHECK(sorted_rows(same) == sorted_rows(s));
  const auto one = translate(SampledCompactSet::from_points({Point{1.0, 1.0}}, 0.3), Point{2.0, 3.0});
  CHECK(one.point_at(0) == Point{3.0, 4.0});
  CHECK(one.resolution_h() == 0.3);
  CHECK(code_of([&] { return translate(s, Point{1.0}); }) == ErrorCode::dimension_mismatch);
}

TEST_CASE("translation invariance of distances") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (std::size_t dim : {1u, 2u, 3u}) {
    const auto s = random_set(100, dim, 7 + dim);
    for (int t = 0; t < 50; ++t) {
      std::vector<double> a(dim), xi(dim);
      for (auto& x : a) x = u(rng);
      for (auto& x : xi) x = 0.01 * u(rng);
      const double lhs = dist_point_to_set(Point(a), translate(s, Point(xi)));
      const double rhs = dist_point_to_set(Point(a) - Point(xi), s);
      CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::max(1.0, rhs));
    }
  }
}

TEST_CASE("minkowski_sum examples") {
  const auto zero = SampledCompactSet::from_points({Point{0.0}}, 0.0);
  const auto t = random_set(20, 1, 9);
  CHECK(sorted_rows(minkowski_sum(zero, t, SumSign::plus)) == sorted_rows(t));

  const auto a = SampledCompactSet::from_points({Point{0.0}, Point{1.0}}, 0.1);
  const auto b = SampledCompactSet::from_points({Point{0.0}, Point{10.0}}, 0.2);
  const auto sum = minkowski_sum(a, b, SumSign::plus);
  CHECK(sorted_rows(sum) ==
        std::vector<std::vector<double>>{{0.0}, {1.0}, {10.0}, {11.0}});
  CHECK(sum.resolution_h() == doctest::Approx(0.3));

  SUBCASE("difference with a singleton is a translation") {
    const auto s = random_set(40, 2, 10);
    const Point p{0.3, -0.7};
    const auto diff = minkowski_sum(s, SampledCompactSet::from_points({p}, 0.0), SumSign::minus);
    CHECK(sorted_rows(diff) == sorted_rows(translate(s, -1.0 * p)));
  }
  SUBCASE("cap") {
    const auto big = random_set(100, 1, 11);
    CHECK(code_of([&] { return minkowski_sum(big, big, SumSign::plus, 9999); }) ==
          ErrorCode::capacity);
    CHECK(minkowski_sum(big, big, SumSign::plus, 10000).size() == 10000);
  }
}

TEST_CASE("Cantor + Cantor: library box counts match the explicit pairwise-sum set") {
  const auto c = gen_cantor(8);
  const auto sum = minkowski_sum(c, c, SumSign::plus);
  // Independent construction of the sum set.
  std::vector<double> flat;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = 0; j < c.size(); ++j) flat.push_back(c.point(i)[0] + c.point(j)[0]);
  }
  const SampledCompactSet explicit_sum(1, flat, 2 * c.resolution_h());
  for (int k = 1; k <= 7; ++k) {
    const double scale = std::pow(3.0, -k);
    CHECK(oracle::box_count(explicit_sum, scale) == oracle::box_count(sum, scale));
  }
}

TEST_CASE("nearest index agrees bitwise with brute force") {
  for (std::size_t dim : {1u, 2u, 3u, 5u}) {
    const auto s = random_set(3000, dim, 20 + dim);
    const NearestIndex idx(s);
    std::mt19937_64 rng(30 + dim);
    std::normal_distribution<double> g(0.0, 1.5);
    for (int t = 0; t < 300; ++t) {
      std::vector<double> q(dim);
      for (auto& x : q) x = g(rng);
      double brute = INFINITY;
      for (std::size_t i = 0; i < s.size(); ++i) brute = std::min(brute, euclidean_distance(s.point(i), q));
      CHECK(idx.distance(q) == brute);
      const double cutoff = 0.5 * brute + 0.01;
      const double bounded = idx.distance_bounded(q, cutoff);
      CHECK((bounded == brute || bounded >= cutoff));
      CHECK(bounded >= brute);
    }
  }
}

TEST_CASE("countable enumerations") {
  const auto e = CountableEnumeration::from_points("three", 1, {Point{1.0}, Point{2.0}, Point{3.0}});
  CHECK(e.truncation() == 3);
  CHECK(e.at(2) == Point{2.0});
  CHECK(code_of([&] { return e.at(0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] { return e.at(4); }) == ErrorCode::invalid_argument);
  CHECK(e.with_truncation(1).truncated_points().size() == 1);
  CHECK(code_of([&] { return e.with_truncation(4); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] {
          return CountableEnumeration::from_points("bad", 2, {Point{1.0}});
        }) == ErrorCode::dimension_mismatch);
}
