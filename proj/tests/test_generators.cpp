#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "avoidpoly/dimension.hpp"
#include "avoidpoly/error.hpp"
#include "avoidpoly/generators.hpp"

using namespace avoidpoly;

namespace {

std::vector<double> sorted_coords(const SampledCompactSet& s) {
  std::vector<double> v(s.data().begin(), s.data().end());
  std::sort(v.begin(), v.end());
  return v;
}

/// Exact remaining length of the fat Cantor construction as a finite series.
long double fat_length_series(unsigned depth, long double lambda) {
  long double removed = 0;
  for (unsigned k = 0; k < depth; ++k) removed += std::pow(2.0L, k) * lambda * std::pow(4.0L, -static_cast<int>(k));
  return 1.0L - removed;
}

struct Frac {
  long long p, q;
};

/// Brute-force Gaussian rational order: all reduced p/q + i r/s with
/// components up to H, sorted by (height, |p|, p<0, q, |r|, r<0, s).
std::vector<std::pair<Frac, Frac>> brute_gaussian(long long max_h) {
  std::vector<Frac> fr;
  for (long long q = 1; q <= max_h; ++q) {
    for (long long p = -max_h; p <= max_h; ++p) {
      if (std::gcd(std::llabs(p), q) == 1) fr.push_back({p, q});
    }
  }
  auto h = [](const Frac& f) { return std::max(std::llabs(f.p), f.q); };
  std::vector<std::pair<Frac, Frac>> all;
  for (const auto& x : fr) {
    for (const auto& y : fr) all.emplace_back(x, y);
  }
  auto key = [&](const std::pair<Frac, Frac>& z) {
    return std::make_tuple(std::max(h(z.first), h(z.second)), std::llabs(z.first.p),
                           z.first.p < 0, z.first.q, std::llabs(z.second.p), z.second.p < 0,
                           z.second.q);
  };
  std::stable_sort(all.begin(), all.end(),
                   [&](const auto& a, const auto& b) { return key(a) < key(b); });
  return all;
}

}  // namespace

TEST_CASE("Cantor examples") {
  const auto c1 = gen_cantor(1);
  CHECK(sorted_coords(c1) == std::vector<double>{0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0});
  CHECK(c1.resolution_h() == doctest::Approx(1.0 / 3.0));
  for (unsigned d = 0; d <= 12; ++d) {
    const auto c = gen_cantor(d);
    CHECK(c.size() == (std::size_t{2} << d));
    CHECK(c.resolution_h() == doctest::Approx(std::pow(3.0, -static_cast<double>(d))));
  }
  CHECK_THROWS_AS(gen_cantor(21), Error);
  const auto cc = gen_cantor(3, true);
  CHECK(cc.dim() == 2);
  CHECK(cc.is_complex_plane());
  for (std::size_t i = 0; i < cc.size(); ++i) CHECK(cc.point(i)[1] == 0.0);
}

TEST_CASE("Cantor box counts are 2^(k+1) at scale 3^-k") {
  const auto c = gen_cantor(9);
  for (int k = 1; k <= 9; ++k) {
    CHECK(box_count(c, std::pow(3.0, -k)) == (std::uint64_t{2} << k));
  }
}

TEST_CASE("every depth-d Cantor point appears at depth d+1") {
  for (unsigned d = 0; d < 10; ++d) {
    const auto lo = sorted_coords(gen_cantor(d));
    const auto hi = sorted_coords(gen_cantor(d + 1));
    CHECK(std::includes(hi.begin(), hi.end(), lo.begin(), lo.end()));
  }
}

TEST_CASE("Cantor dust is the product") {
  const auto c = gen_cantor(3);
  const auto dust = gen_cantor_dust(3);
  REQUIRE(dust.size() == c.size() * c.size());
  std::set<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < dust.size(); ++i) pts.emplace(dust.point(i)[0], dust.point(i)[1]);
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = 0; j < c.size(); ++j) {
      CHECK(pts.count({c.point(i)[0], c.point(j)[0]}) == 1);
    }
  }
  CHECK(dust.resolution_h() == doctest::Approx(std::sqrt(2.0) / 27.0));
}

TEST_CASE("fat Cantor lengths match the finite series") {
  for (double lambda : {0.125, 0.25}) {
    for (unsigned depth : {1u, 4u, 8u, 12u}) {
      const auto iv = fat_cantor_intervals(depth, lambda);
      CHECK(iv.size() == (std::size_t{1} << depth));
      long double total = 0;
      for (const auto& [a, b] : iv) {
        CHECK(a < b);
        total += b - a;
      }
      CHECK(std::fabs(static_cast<double>(total - fat_length_series(depth, lambda))) <= 1e-9);
      // Intervals are ordered and disjoint.
      for (std::size_t i = 1; i < iv.size(); ++i) CHECK(iv[i - 1].second < iv[i].first);
    }
  }
  // The limit 1 - 2 lambda is approached at rate 2^-depth.
  const auto iv8 = fat_cantor_intervals(8, 0.25);
  double len = 0;
  for (const auto& [a, b] : iv8) len += b - a;
  CHECK(len == doctest::Approx(0.5 + 0.5 / 256.0).epsilon(1e-12));
}

TEST_CASE("fat Cantor sets and the strip") {
  const auto f0 = gen_fat_cantor(0, 0.25);
  CHECK(sorted_coords(f0) == std::vector<double>{0.0, 1.0});
  CHECK(f0.resolution_h() == 1.0);
  const auto f = gen_fat_cantor(6, 0.25);
  double longest = 0;
  for (const auto& [a, b] : fat_cantor_intervals(6, 0.25)) longest = std::max(longest, b - a);
  CHECK(f.resolution_h() == longest);
  CHECK_THROWS_AS(gen_fat_cantor(4, 0.34), Error);
  CHECK_THROWS_AS(gen_fat_cantor(4, 0.0), Error);

  const auto strip = gen_fat_cantor_strip(6, 0.25, 65);
  CHECK(strip.dim() == 2);
  CHECK(strip.is_complex_plane());
  CHECK(strip.size() == 65 * f.size());
  CHECK(strip.resolution_h() == doctest::Approx(std::hypot(0.5 / 64.0, longest)));

  // The strip has positive area, so coarse coverage stays high while the
  // sampled endpoints thin out once cells resolve the grid and the gaps.
  std::vector<double> scales;
  for (int k = 1; k <= 9; ++k) scales.push_back(std::ldexp(1.0, -k));
  const auto prof = coverage_profile(strip, scales);
  std::string line;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    line += " 2^-" + std::to_string(i + 1) + ":" + std::to_string(prof.fractions[i]);
  }
  MESSAGE("fat-cantor strip coverage:", line);
  CHECK(prof.fractions[0] == 1.0);
  CHECK(prof.fractions[2] >= 0.5);
  CHECK(prof.fractions.back() < prof.fractions[2]);
}

TEST_CASE("segment, grid and point generators") {
  const auto s = gen_segment(5);
  CHECK(sorted_coords(s) == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(s.resolution_h() == doctest::Approx(0.125));
  const auto s3 = gen_segment(3, 3, 2);
  CHECK(s3.dim() == 3);
  CHECK(s3.point(2)[2] == 1.0);
  CHECK(s3.point(2)[0] == 0.0);
  const auto g = gen_grid(4, 2);
  CHECK(g.size() == 16);
  CHECK(g.resolution_h() == doctest::Approx(std::sqrt(2.0) / 4.0));
  const auto p = gen_point(Point{0.25, 0.5});
  CHECK(p.size() == 1);
  CHECK(p.resolution_h() == 0.0);
}

TEST_CASE("rational grid order") {
  const auto a = rational_grid(1, 11);
  const std::vector<double> expect{0.0, 1.0, 0.5, 1.0 / 3.0, 2.0 / 3.0, 0.25, 0.75, 0.2, 0.4, 0.6, 0.8};
  for (std::size_t j = 1; j <= expect.size(); ++j) CHECK(a.at(j)[0] == expect[j - 1]);

  // Brute-force order for d = 2: lowest common denominator, then numerators.
  std::vector<std::pair<double, double>> brute;
  for (long long q = 1; brute.size() < 2000; ++q) {
    for (long long x = 0; x <= q; ++x) {
      for (long long y = 0; y <= q; ++y) {
        if (std::gcd(std::gcd(x, y), q) == 1) {
          brute.emplace_back(static_cast<double>(x) / q, static_cast<double>(y) / q);
        }
      }
    }
  }
  const auto a2 = rational_grid(2, 2000);
  for (std::size_t j = 1; j <= 2000; ++j) {
    CHECK(a2.at(j)[0] == brute[j - 1].first);
    CHECK(a2.at(j)[1] == brute[j - 1].second);
  }
}

TEST_CASE("Gaussian rationals order") {
  const auto a = gaussian_rationals(3000);
  CHECK(a.at(1) == Point{0.0, 0.0});
  CHECK(a.dim() == 2);
  const auto brute = brute_gaussian(6);
  // Height <= 6 is complete in the brute list; compare the prefix it covers.
  std::size_t complete = 0;
  for (const auto& [x, y] : brute) {
    if (std::max({std::llabs(x.p), x.q, std::llabs(y.p), y.q}) <= 5) ++complete;
  }
  REQUIRE(complete < 3000);
  for (std::size_t j = 1; j <= complete; ++j) {
    const auto& [x, y] = brute[j - 1];
    CHECK(a.at(j)[0] == static_cast<double>(x.p) / x.q);
    CHECK(a.at(j)[1] == static_cast<double>(y.p) / y.q);
  }
}

TEST_CASE("enumerations are injective over the first 10^4 indices") {
  const std::vector<CountableEnumeration> enums{gaussian_rationals(10000), rational_grid(1, 10000),
                                                rational_grid(2, 10000), rational_grid(3, 10000),
                                                lattice_scaled(2, 0.1, 10000)};
  for (const auto& e : enums) {
    std::set<std::vector<double>> seen;
    for (const auto& p : e.truncated_points()) seen.insert(p.vector());
    CHECK_MESSAGE(seen.size() == 10000, e.name());
  }
}

TEST_CASE("lattice enumeration by max-norm shell") {
  const auto a = lattice_scaled(2, 0.5, 25);
  CHECK(a.at(1) == Point{0.0, 0.0});
  double prev = 0.0;
  for (std::size_t j = 1; j <= 25; ++j) {
    const auto p = a.at(j);
    const double shell = std::max(std::fabs(p[0]), std::fabs(p[1]));
    CHECK(shell >= prev);
    prev = shell;
  }
  CHECK(prev == 1.0);  // shells 0 and 1 hold 1 + 8 points, shell 2 holds 16
}

TEST_CASE("generators are deterministic") {
  for (const char* spec : {"cantor:depth=9", "cantor-dust:depth=5", "fat-cantor:depth=7",
                           "fat-cantor-strip:depth=4,n=17", "segment:n=33", "grid:n=7,dim=3",
                           "gaussian-rationals:N=500", "rational-grid:d=2,N=500",
                           "lattice-scaled:d=3,N=500"}) {
    const auto a = make_compact_set(parse_generator_spec(spec));
    const auto b = make_compact_set(parse_generator_spec(spec));
    CHECK_MESSAGE(std::equal(a.data().begin(), a.data().end(), b.data().begin(), b.data().end()),
                  spec);
    CHECK(a.resolution_h() == b.resolution_h());
  }
  const auto e1 = gaussian_rationals(50000);
  const auto e2 = gaussian_rationals(50000);
  for (std::size_t j : {1u, 777u, 20000u, 49999u}) CHECK(e1.at(j) == e2.at(j));
}

TEST_CASE("target examples") {
  const auto id = gen_target("identity", 2, false);
  CHECK(id(Point{0.3, -0.7}) == Point{0.3, -0.7});
  const auto ez = gen_target("exp", 2, true);
  CHECK(ez(Point{0.0, 0.0}) == Point{1.0, 0.0});
  const auto epi = ez(Point{0.0, M_PI});
  CHECK(epi[0] == doctest::Approx(-1.0));
  CHECK(std::fabs(epi[1]) < 1e-15);
  const auto ab = gen_target("abs-offset", 1, false);
  CHECK(ab(Point{0.5}) == Point{0.0});
  CHECK(ab(Point{0.0}) == Point{0.5});
  const auto sq = gen_target("complex-square", 2, true);
  CHECK(sq(Point{1.0, 1.0}) == Point{0.0, 2.0});
  const auto rb = gen_target("rosenbrock-like", 2, false);
  CHECK(rb(Point{1.0, 1.0}) == Point{0.0, 0.0});
  const auto sp = gen_target("sin-product", 2, false);
  CHECK(sp(Point{0.0, 2.0}) == Point{2.0, 0.0});
  CHECK_THROWS_AS(gen_target("gamma", 1, false), Error);
}

TEST_CASE("generator spec parsing") {
  const auto s = parse_generator_spec("cantor:depth=5,complex=1");
  CHECK(s.name == "cantor");
  CHECK(s.kind == GeneratorKind::compact_set);
  CHECK(s.get("depth") == 5.0);
  CHECK(s.get("complex") == 1.0);
  CHECK(parse_generator_spec("fat-cantor").get("lambda") == 0.25);
  CHECK(parse_generator_spec("gaussian-rationals:N=7").kind == GeneratorKind::enumeration);
  CHECK(parse_generator_spec("exp").kind == GeneratorKind::target_function);
  CHECK(parse_generator_spec("segment:n=3,n=9").get("n") == 9.0);
  CHECK(parse_generator_spec(parse_generator_spec("grid:n=7,dim=3").to_string()).get("n") == 7.0);

  for (const char* bad : {"", "nosuch", "cantor:width=3", "cantor:depth", "cantor:depth=x",
                          "cantor:depth=5,", "cantor:", "cantor:,depth=2", ":depth=3"}) {
    try {
      parse_generator_spec(bad);
      const std::string msg = std::string("accepted '") + bad + "'";
      FAIL(msg);
    } catch (const Error& e) {
      CHECK_MESSAGE(e.code() == ErrorCode::parse, bad);
    }
  }
  CHECK_THROWS_AS(make_compact_set(parse_generator_spec("cantor:depth=2.5")), Error);
  CHECK_THROWS_AS(make_compact_set(parse_generator_spec("grid:n=100000,dim=3")), Error);
  const auto names = generator_names(GeneratorKind::enumeration);
  CHECK(names == std::vector<std::string>{"gaussian-rationals", "rational-grid", "lattice-scaled"});
}

TEST_CASE("enumeration specs as point sets") {
  const auto s = make_compact_set(parse_generator_spec("rational-grid:d=1,N=5"));
  CHECK(s.size() == 5);
  CHECK(s.resolution_h() == 0.0);
  const auto e = make_enumeration(parse_generator_spec("lattice-scaled:d=1,scale=0.5,N=3"));
  CHECK(e.truncation() == 3);
  CHECK(std::fabs(e.at(2)[0]) == 0.5);
}
