#pragma once

#include "normproj/support_table.hpp"

#include <Eigen/Dense>

#include <memory>
#include <string>

namespace normproj {

enum class NormKind { euclidean, lp, inner_product, support_table };

const char* to_string(NormKind k) noexcept;

class TableGeometry;

/// A strictly convex norm. Immutable; cheap to copy.
class NormModel {
 public:
  static NormModel euclidean(int dim = 2);
  static NormModel lp(double p, int dim = 2);
  static NormModel inner_product(const Eigen::MatrixXd& q);
  /// A null table yields a model that throws ModelNotReady on use.
  static NormModel support_table(std::shared_ptr<const SupportTable> table);

  NormKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double p() const { return p_; }
  const Eigen::MatrixXd& q() const { return q_; }
  const Eigen::MatrixXd& q_inverse() const { return q_inv_; }
  const SupportTable& table() const;
  std::shared_ptr<const SupportTable> table_ptr() const { return table_; }
  const TableGeometry& geometry() const;
  std::string describe() const;

 private:
  NormModel() = default;

  NormKind kind_ = NormKind::euclidean;
  int dim_ = 2;
  double p_ = 2.0;
  Eigen::MatrixXd q_, q_inv_;
  std::shared_ptr<const SupportTable> table_;
  std::shared_ptr<const TableGeometry> geometry_;
};

/// Point of the unit sphere; `polar_angle` is filled for planar models.
struct SpherePoint {
  Eigen::VectorXd coords;
  double polar_angle = 0.0;
};

double eval_norm(const NormModel& norm, const Eigen::VectorXd& x);
/// Gradient of the norm at x ≠ 0.
Eigen::VectorXd norm_gradient(const NormModel& norm, const Eigen::VectorXd& x);
/// Euclidean unit outward normal at x/‖x‖; any nonzero x is accepted.
Eigen::VectorXd gauss_map(const NormModel& norm, const Eigen::VectorXd& x);
/// Support point: the maximizer of ⟨x, w⟩ over the unit ball.
SpherePoint inverse_gauss(const NormModel& norm, const Eigen::VectorXd& w);
/// Planar sphere point in the direction of polar angle `angle`.
SpherePoint sphere_point(const NormModel& norm, double angle);

struct GaussReport {
  int grid_size = 0;
  double antipodality_defect = 0.0;
  bool monotone = false;
  double min_inner_product = 0.0;
  double total_turn = 0.0;  // winding of the Gauss angle over one sweep, ideally 2π
};

GaussReport check_gauss_properties(const NormModel& norm, int grid_size);

struct FixedPoints {
  SpherePoint farthest;  // v0
  SpherePoint closest;   // w0
  double farthest_defect = 0.0;
  double closest_defect = 0.0;
};

FixedPoints find_gauss_fixed_points(const NormModel& norm);

/// Polar lookup on the boundary of a tabulated body. Built once per table.
class TableGeometry {
 public:
  explicit TableGeometry(std::shared_ptr<const SupportTable> table);

  /// Normal angle φ whose boundary point h u + h' u' has polar angle `polar`.
  /// Throws NotSmoothHere when the enclosing cell has collapsed to a corner.
  double normal_angle_at(double polar) const;

 private:
  std::shared_ptr<const SupportTable> table_;
  std::vector<double> polar_;  // unwrapped polar angles of the node boundary points
};

}  // namespace normproj
