#pragma once

#include "normproj/cantor.hpp"
#include "normproj/norms.hpp"
#include "normproj/support_table.hpp"

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace normproj {

struct CurveSample {
  double t = 0.0;
  double f = 0.0;
  double F = 0.0;
  double psi = 0.0;
  double theta = 0.0;
  Eigen::Vector2d gamma = Eigen::Vector2d::Zero();
  Eigen::Vector2d beta = Eigen::Vector2d::Zero();
  bool gap_midpoint = false;
};

/// The convex arc γ(t) = (1 − F(t))(cos t, sin t), t ∈ [0,1], built on a Cantor set K.
/// Its outward normal has angle t + θ(t) with θ = arctan(f / (4(1 − F))).
class CounterexampleCurve {
 public:
  CounterexampleCurve(CantorSet k, int level);

  const CantorSet& cantor() const { return k_; }
  int level() const { return level_; }
  /// Level-k breakpoints and gap midpoints in increasing t.
  const std::vector<CurveSample>& grid() const { return grid_; }

  CurveSample sample(double t) const;
  double theta(double t) const { return sample(t).theta; }
  double normal_angle(double t) const;
  Eigen::Vector2d gamma(double t) const { return sample(t).gamma; }
  Eigen::Vector2d beta(double t) const { return sample(t).beta; }

  double F1() const { return end_.F; }
  double theta1() const { return end_.theta; }
  /// Angle of the normal at γ(1), 1 + θ(1).
  double end_normal_angle() const { return 1.0 + end_.theta; }
  /// Polar angle of β(1), 1 + π/2 + θ(1).
  double beta_end_angle() const;
  /// +1 if rotating β by +π/2 gives the outward normal, −1 if −π/2 does.
  int orientation() const { return orientation_; }
  /// t ↦ t + π/2 + θ(t) strictly increasing along the grid.
  bool beta_monotone() const;

 private:
  CantorSet k_;
  int level_;
  std::vector<CurveSample> grid_;
  CurveSample end_;
  int orientation_ = -1;
};

CounterexampleCurve curve_samples(const CantorSet& k, int level);

/// Outward unit normal of the tabulated norm at γ(t): β(t) rotated by a quarter turn.
Eigen::Vector2d gauss_on_gamma(const CounterexampleCurve& curve, double t);

struct MeasureBounds {
  double lower = 0.0;
  double upper = 0.0;
  int level = 0;
};

/// Bracket for the Lebesgue measure of fn(K ∩ [a, b]) where fn is continuous and strictly
/// increasing with slope at most `gap_lipschitz` on every gap. Gaps of levels ≤ k are removed
/// exactly; whatever is left of the level-k covering contributes at most gap_lipschitz times its length.
MeasureBounds increasing_image_bounds(const CantorSet& k, int level, const std::function<double(double)>& fn,
                                      double gap_lipschitz, double a = 0.0, double b = 1.0);

/// Bracket for the angular measure of β(K) (equivalently of the normals G(γ(K))).
MeasureBounds image_measure_bounds(const CounterexampleCurve& curve, int level);
/// Bracket for Leb(f(K)).
MeasureBounds f_image_measure_bounds(const CantorSet& k, int level);
/// Upper bound of the slope of θ on gaps.
double theta_gap_lipschitz(const CounterexampleCurve& curve);

struct GlueOptions {
  std::size_t rows = 4096;
  /// Scales the curvature radius requested at the ends of the glue arcs. Non-positive values
  /// cannot produce a convex arc.
  double curvature_slack = 1.0;
};

struct GlueReport {
  std::string strategy;
  double radius_scale = 0.0;
  double symmetry_defect = 0.0;
  double min_discrete_radius = 0.0;
  double joint_mismatch = 0.0;
};

struct CounterexampleNorm {
  NormModel norm;
  std::shared_ptr<const SupportTable> table;
  GlueReport glue;
};

/// Closes Γ ∪ −Γ with two antipodal glue arcs and tabulates the support function.
CounterexampleNorm build_norm(const CounterexampleCurve& curve, const GlueOptions& options = {});

}  // namespace normproj
