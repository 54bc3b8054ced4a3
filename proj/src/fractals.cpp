#include "normproj/fractals.hpp"

#include "normproj/error.hpp"
#include "normproj/numeric.hpp"

#include <cmath>

namespace normproj {

namespace {

constexpr double kMaxPoints = 16777216.0;  // 4^12

double natural_base(double max_ratio) {
  double b = 1.0 / max_ratio;
  double r = std::round(b);
  return std::abs(b - r) < 1e-9 ? r : b;
}

}  // namespace

Similarity Similarity::scaling(double ratio, const Eigen::VectorXd& offset) {
  return {ratio, Eigen::MatrixXd::Identity(offset.size(), offset.size()), offset};
}

PointCloud ifs_attractor(const std::vector<Similarity>& maps, int generation, const std::string& label) {
  if (maps.empty()) throw Error(Errc::InvalidArgument, "IFS needs at least one map");
  if (generation < 0) throw Error(Errc::InvalidArgument, "generation must be non-negative");
  const int n = static_cast<int>(maps.front().offset.size());
  double max_ratio = 0.0;
  for (const Similarity& s : maps) {
    if (s.offset.size() != n || s.orthogonal.rows() != n || s.orthogonal.cols() != n)
      throw Error(Errc::InvalidArgument, "IFS maps disagree in dimension");
    if (!(s.ratio > 0.0)) throw Error(Errc::InvalidArgument, "similarity ratio must be positive");
    if (s.ratio >= 1.0) throw Error(Errc::NotContracting, "similarity ratio must be below 1");
    max_ratio = std::max(max_ratio, s.ratio);
  }
  if (std::pow(static_cast<double>(maps.size()), generation) > kMaxPoints)
    throw Error(Errc::TooLarge, "cloud would exceed 4^12 points");

  Eigen::MatrixXd pts = Eigen::MatrixXd::Constant(n, 1, 0.5);
  for (int level = 0; level < generation; ++level) {
    Eigen::MatrixXd next(n, pts.cols() * static_cast<Eigen::Index>(maps.size()));
    for (std::size_t s = 0; s < maps.size(); ++s) {
      const Similarity& m = maps[s];
      next.middleCols(static_cast<Eigen::Index>(s) * pts.cols(), pts.cols()) =
          (m.ratio * m.orthogonal * pts).colwise() + m.offset;
    }
    pts.swap(next);
  }
  PointCloud c;
  c.points = std::move(pts);
  c.generation = generation;
  c.resolution = std::pow(max_ratio, generation) * std::sqrt(static_cast<double>(n));
  c.base = natural_base(max_ratio);
  c.label = label;
  return c;
}

PointCloud cantor_product(double ratio, int generation) {
  if (!(ratio > 0.0 && ratio < 0.5)) throw Error(Errc::InvalidArgument, "product ratio must lie in (0, 1/2)");
  if (generation > 12) throw Error(Errc::TooLarge, "cantor_product generation above 12");
  const double far = 1.0 - ratio;
  std::vector<Similarity> maps;
  for (double a : {0.0, far})
    for (double b : {0.0, far}) maps.push_back(Similarity::scaling(ratio, Eigen::Vector2d(a, b)));
  return ifs_attractor(maps, generation, "cantor-product");
}

PointCloud four_corner(int generation) {
  if (generation > 10) throw Error(Errc::TooLarge, "four_corner generation above 10");
  std::vector<Similarity> maps;
  for (double a : {0.0, 0.75})
    for (double b : {0.0, 0.75}) maps.push_back(Similarity::scaling(0.25, Eigen::Vector2d(a, b)));
  return ifs_attractor(maps, generation, "four-corner");
}

PointCloud cantor_line(int generation) {
  if (generation > 24) throw Error(Errc::TooLarge, "cantor_line generation above 24");
  Eigen::VectorXd zero(1), two_thirds(1);
  zero << 0.0;
  two_thirds << 2.0 / 3.0;
  return ifs_attractor({Similarity::scaling(1.0 / 3.0, zero), Similarity::scaling(1.0 / 3.0, two_thirds)},
                       generation, "cantor-line");
}

PointCloud filled_square(int generation) {
  if (generation > 12) throw Error(Errc::TooLarge, "square generation above 12");
  std::vector<Similarity> maps;
  for (double a : {0.0, 0.5})
    for (double b : {0.0, 0.5}) maps.push_back(Similarity::scaling(0.5, Eigen::Vector2d(a, b)));
  return ifs_attractor(maps, generation, "square");
}

PointCloud circle_cloud(int count, double radius) {
  if (count < 1) throw Error(Errc::InvalidArgument, "circle needs at least one point");
  if (!(radius > 0.0)) throw Error(Errc::InvalidArgument, "radius must be positive");
  PointCloud c;
  c.points.resize(2, count);
  for (int j = 0; j < count; ++j) {
    double a = kTwoPi * j / count;
    c.points(0, j) = radius * std::cos(a);
    c.points(1, j) = radius * std::sin(a);
  }
  c.generation = 0;
  c.resolution = 2.0 * radius * std::sin(kPi / count);
  c.base = 2.0;
  c.label = "circle";
  return c;
}

PointCloud map_cloud(const PointCloud& cloud, const Eigen::MatrixXd& linear, const std::string& label) {
  if (linear.cols() != cloud.dim()) throw Error(Errc::InvalidArgument, "linear map has wrong input dimension");
  PointCloud c;
  c.points = linear * cloud.points;
  c.generation = cloud.generation;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(linear);
  c.resolution = cloud.resolution * svd.singularValues()(0);
  c.base = cloud.base;
  c.label = label;
  return c;
}

}  // namespace normproj
