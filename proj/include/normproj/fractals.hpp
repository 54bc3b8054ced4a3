#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace normproj {

/// Cell midpoints of one generation of a self-similar construction, one point per column.
struct PointCloud {
  Eigen::MatrixXd points;
  int generation = 0;
  double resolution = 0.0;  // diameter of a generation-level cell
  double base = 2.0;        // natural scale base for box counting
  std::string label;

  int dim() const { return static_cast<int>(points.rows()); }
  std::size_t size() const { return static_cast<std::size_t>(points.cols()); }
};

/// x ↦ ratio · orthogonal · x + offset.
struct Similarity {
  double ratio = 0.5;
  Eigen::MatrixXd orthogonal;
  Eigen::VectorXd offset;

  static Similarity scaling(double ratio, const Eigen::VectorXd& offset);
};

/// Images of the unit cube's centre under all words of length `generation`, in lexicographic
/// order of the words. Open-set condition is not checked.
PointCloud ifs_attractor(const std::vector<Similarity>& maps, int generation, const std::string& label = "ifs");

/// C_r × C_r, 4^generation points.
PointCloud cantor_product(double ratio, int generation);
/// Ratio-¼ corner set, 4^generation points.
PointCloud four_corner(int generation);
/// Middle-thirds Cantor set on the line, 2^generation points.
PointCloud cantor_line(int generation);
/// Unit square subdivided into 4^generation cells.
PointCloud filled_square(int generation);
/// `count` equally spaced points on the circle of given radius.
PointCloud circle_cloud(int count, double radius = 1.0);
/// Image of a cloud under a linear map; resolution scales with the operator norm.
PointCloud map_cloud(const PointCloud& cloud, const Eigen::MatrixXd& linear, const std::string& label);

}  // namespace normproj
