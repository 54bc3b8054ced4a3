#include "doctest.h"

#include "normproj/boxdim.hpp"
#include "normproj/counterexample.hpp"
#include "normproj/error.hpp"
#include "normproj/numeric.hpp"

#include <cmath>

using namespace normproj;

namespace {

PointCloud segment(int n) {
  PointCloud c;
  c.points.resize(2, n);
  for (int i = 0; i < n; ++i) {
    c.points(0, i) = (i + 0.5) / n;
    c.points(1, i) = 0.5;
  }
  c.resolution = 1.0 / n;
  c.label = "segment";
  return c;
}

PointCloud single_point() {
  PointCloud c;
  c.points = Eigen::MatrixXd::Constant(2, 1, 0.3);
  c.resolution = 0.0;
  return c;
}

}  // namespace

TEST_CASE("reference box counts") {
  std::size_t n = box_count(segment(4096), 1.0 / 64);
  CHECK((n == 64 || n == 65));
  for (double d : {1.0, 0.1, 1e-3}) CHECK(box_count(single_point(), d) == 1);
  CHECK(box_count(cantor_line(10), std::pow(3.0, -5)) == 32);
  CHECK_THROWS_AS(box_count(cantor_line(4), 0.01), Error);
  try {
    box_count(cantor_line(4), 0.01);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnderResolved);
  }
}

TEST_CASE("counts are monotone in the scale") {
  PointCloud c = cantor_product(1.0 / 3.0, 7);
  std::size_t prev = 0;
  for (int k = 1; k <= 6; ++k) {
    std::size_t n = box_count(c, std::pow(3.0, -k));
    CHECK(n >= prev);
    prev = n;
  }
  PointCloud s = filled_square(9);
  for (int k = 1; k <= 5; ++k)
    CHECK(box_count(s, std::pow(2.0, -k - 1)) <= 4 * box_count(s, std::pow(2.0, -k)) + 4 * (1 << k) + 1);
}

TEST_CASE("reference dimensions") {
  ScaleRange tri{3.0, 2, 8};
  DimensionEstimate e = estimate_dim(cantor_line(10), tri);
  CHECK(e.slope == doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-12));
  CHECK(e.r2 >= 0.999);
  DimensionEstimate p = estimate_dim(cantor_product(1.0 / 3.0, 10), default_scales(cantor_product(1.0 / 3.0, 10)));
  CHECK(std::abs(p.slope - 1.262) <= 0.05);
  DimensionEstimate f = estimate_dim(four_corner(8), default_scales(four_corner(8)));
  CHECK(std::abs(f.slope - 1.0) <= 0.05);
  DimensionEstimate s = estimate_dim(filled_square(10), default_scales(filled_square(10)));
  CHECK(std::abs(s.slope - 2.0) <= 0.02);
  ScaleRange d = default_scales(cantor_product(1.0 / 3.0, 10));
  CHECK(d.base == 3.0);
  CHECK(d.k_min == 2);
  CHECK(d.k_max == 9);
}

TEST_CASE("poor fits are refused") {
  // Two separated clusters: flat counts at coarse scales, growth at fine ones.
  PointCloud c;
  const int n = 2048;
  c.points.resize(2, 2 * n);
  for (int i = 0; i < n; ++i) {
    c.points.col(i) << 0.1 + 1e-3 * i / n, 0.1;
    c.points.col(n + i) << 0.9, 0.9 - 0.5 * i / n;
  }
  c.resolution = 1e-7;
  CHECK_THROWS_AS(estimate_dim(c, ScaleRange{2.0, 1, 20}), Error);
  DimensionEstimate e = fit_dimension({0.1, 0.01, 0.001}, {1, 1, 1});
  CHECK(e.slope == 0.0);
  CHECK(e.r2 == 1.0);
}

TEST_CASE("projected counts") {
  PointCloud c = cantor_product(1.0 / 3.0, 8);
  NormModel e = NormModel::euclidean();
  Eigen::Vector2d y(0, 1);
  CHECK(projected_counts(e, c, HyperplaneNormal(y), std::pow(3.0, -5)) == 32);
  // Along the diagonal the shadow is C + C, an interval of length 2/√2.
  HyperplaneNormal diag = HyperplaneNormal::from_angle(kPi / 4);
  for (int k = 3; k <= 6; ++k) {
    double d = std::pow(3.0, -k);
    double n = static_cast<double>(projected_counts(e, c, diag, d));
    CHECK(n * d == doctest::Approx(std::sqrt(2.0)).epsilon(0.1));
  }
  CHECK(projected_counts(NormModel::lp(3.0), single_point(), diag, 0.01) == 1);
}

TEST_CASE("orthogonal shadows inflate counts at most threefold") {
  PointCloud c = cantor_product(1.0 / 3.0, 7);
  ProjectionFamily e = family_from_norm(NormModel::euclidean());
  DirectionGrid grid{36};
  for (int k = 2; k <= 6; ++k) {
    double d = std::pow(3.0, -k);
    std::size_t full = box_count(c, d);
    for (int j = 0; j < grid.count; ++j) CHECK(projected_counts(e, c, grid.normal(j), d) <= 3 * full);
  }
}

TEST_CASE("covering numbers respect Lipschitz domination") {
  CounterexampleCurve curve(CantorSet(), 10);
  std::vector<double> normal_angles, w_angles;
  for (const CurveSample& s : curve.grid()) {
    if (s.gap_midpoint) continue;
    normal_angles.push_back(s.t + s.theta);
    w_angles.push_back(s.theta);
  }
  // |Δθ| ≤ |Δ(t + θ)|: M = 1.
  for (int k = 2; k <= 12; ++k) {
    double d = std::pow(2.0, -k);
    CHECK(interval_cover_count(w_angles, d) <= interval_cover_count(normal_angles, d / 2.0));
  }
  CHECK(interval_cover_count({0.0, 0.5, 1.0}, 0.5) == 2);
  CHECK(interval_cover_count({}, 0.5) == 0);
}

TEST_CASE("favard proxy") {
  DirectionGrid grid{90};
  PointCloud circle = circle_cloud(20000);
  for (double d : {1e-2, 1e-3}) CHECK(favard_proxy(NormModel::euclidean(), circle, grid, d) == doctest::Approx(2.0).epsilon(0.02));
  double prev = 1e9;
  for (int g = 3; g <= 7; ++g) {
    double v = favard_proxy(NormModel::euclidean(), four_corner(g), grid, std::pow(4.0, -g));
    CHECK(v < prev);
    prev = v;
  }
  CHECK(favard_proxy(NormModel::euclidean(), single_point(), grid, 1e-3) == doctest::Approx(1e-3));
}
