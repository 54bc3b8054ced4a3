#include "doctest.h"

#include "normproj/cantor.hpp"
#include "normproj/error.hpp"
#include "normproj/fractals.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace normproj;

TEST_CASE("first generation of the Cantor product") {
  PointCloud c = cantor_product(1.0 / 3.0, 1);
  REQUIRE(c.size() == 4);
  std::set<std::pair<double, double>> got;
  for (std::size_t i = 0; i < 4; ++i) got.insert({c.points(0, i), c.points(1, i)});
  for (double a : {1.0 / 6.0, 5.0 / 6.0})
    for (double b : {1.0 / 6.0, 5.0 / 6.0}) {
      bool found = false;
      for (auto [x, y] : got) found |= std::abs(x - a) < 1e-15 && std::abs(y - b) < 1e-15;
      CHECK(found);
    }
  CHECK(c.resolution == doctest::Approx(std::sqrt(2.0) / 3.0));
  CHECK(c.base == 3.0);
}

TEST_CASE("point counts and metadata") {
  for (int g = 0; g <= 6; ++g) {
    PointCloud c = cantor_product(1.0 / 3.0, g);
    CHECK(c.size() == static_cast<std::size_t>(std::pow(4, g)));
    CHECK(c.generation == g);
    CHECK(c.resolution == doctest::Approx(std::pow(1.0 / 3.0, g) * std::sqrt(2.0)));
    CHECK(c.points.minCoeff() >= 0.0);
    CHECK(c.points.maxCoeff() <= 1.0);
  }
  PointCloud f = four_corner(1);
  CHECK(f.size() == 4);
  CHECK(f.base == 4.0);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK((f.points(0, i) == 0.125 || f.points(0, i) == 0.875));
    CHECK((f.points(1, i) == 0.125 || f.points(1, i) == 0.875));
  }
}

TEST_CASE("size guards") {
  CHECK_THROWS_AS(cantor_product(1.0 / 3.0, 13), Error);
  CHECK_THROWS_AS(four_corner(11), Error);
  try {
    four_corner(11);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::TooLarge);
  }
  CHECK_THROWS_AS(cantor_product(0.6, 2), Error);
  try {
    ifs_attractor({Similarity::scaling(1.2, Eigen::Vector2d(0, 0))}, 2);
    FAIL("expected NotContracting");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotContracting);
  }
}

TEST_CASE("single map collapses to its fixed point") {
  Eigen::Vector2d p(0.2, -0.4);
  // x ↦ x/2 + p/2 fixes p.
  PointCloud c = ifs_attractor({Similarity::scaling(0.5, p / 2)}, 30);
  CHECK(c.size() == 1);
  CHECK((c.points.col(0) - p).norm() < 1e-8);
}

TEST_CASE("line IFS reproduces the Cantor covering") {
  PointCloud c = cantor_line(8);
  std::vector<Interval> cover = CantorSet().level_intervals(8);
  REQUIRE(c.size() == cover.size());
  std::vector<double> xs(c.points.data(), c.points.data() + c.size());
  std::sort(xs.begin(), xs.end());
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(std::abs(xs[i] - 0.5 * (cover[i].lo + cover[i].hi)) < 1e-12);
}

TEST_CASE("horizontal shadow of the product is the Cantor covering") {
  PointCloud c = cantor_product(1.0 / 3.0, 6);
  std::set<double> xs;
  for (std::size_t i = 0; i < c.size(); ++i) xs.insert(std::round(c.points(0, i) * 1e12) / 1e12);
  std::vector<Interval> cover = CantorSet().level_intervals(6);
  REQUIRE(xs.size() == cover.size());
  std::size_t i = 0;
  for (double x : xs) CHECK(std::abs(x - 0.5 * (cover[i].lo + cover[i++].hi)) < 1e-12);
}

TEST_CASE("square IFS matches the product construction") {
  std::vector<Similarity> maps;
  for (double a : {0.0, 2.0 / 3.0})
    for (double b : {0.0, 2.0 / 3.0}) maps.push_back(Similarity::scaling(1.0 / 3.0, Eigen::Vector2d(a, b)));
  PointCloud a = ifs_attractor(maps, 5), b = cantor_product(1.0 / 3.0, 5);
  CHECK((a.points - b.points).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("clouds stay inside the initial cell") {
  for (const PointCloud& c : {cantor_product(0.25, 5), four_corner(5), filled_square(5)}) {
    Eigen::Vector2d lo = c.points.rowwise().minCoeff(), hi = c.points.rowwise().maxCoeff();
    CHECK((hi - lo).norm() <= std::sqrt(2.0));
  }
  PointCloud circ = circle_cloud(100);
  CHECK(circ.points.colwise().norm().maxCoeff() == doctest::Approx(1.0));
}
