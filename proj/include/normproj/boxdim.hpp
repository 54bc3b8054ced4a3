#pragma once

#include "normproj/fractals.hpp"
#include "normproj/norms.hpp"
#include "normproj/projections.hpp"

#include <string>
#include <vector>

namespace normproj {

inline constexpr const char* kBoxDimCaveat =
    "box-counting dimension upper-bounds Hausdorff dimension; they agree on self-similar sets with open-set condition";

/// Uniform grid of hyperplane normals (cos a, sin a), a = πj/count, over the antipodal quotient.
struct DirectionGrid {
  int count = 720;

  double angle(int j) const;
  HyperplaneNormal normal(int j) const;
  double weight() const { return 1.0 / count; }
};

/// Scales base^{-k} for k = k_min..k_max, coarse to fine.
struct ScaleRange {
  double base = 2.0;
  int k_min = 2;
  int k_max = 8;

  std::vector<double> deltas() const;
};

/// Largest admissible range for the cloud: k_min = 2, finest scale ≥ 2 × resolution.
ScaleRange default_scales(const PointCloud& cloud);

struct DimensionEstimate {
  std::vector<double> scales;
  std::vector<std::size_t> counts;
  double slope = 0.0;
  double r2 = 0.0;
};

/// Occupied cells of the grid δ·Zⁿ anchored at the origin.
std::size_t box_count(const PointCloud& cloud, double delta);
/// Occupied bins of δ·Z for scalar values.
std::size_t count_bins(const std::vector<double>& values, double delta);
/// Fewest closed intervals of length δ covering the values (greedy, exact in 1-D).
std::size_t interval_cover_count(std::vector<double> values, double delta);

/// Least-squares fit of log N against log δ; never throws.
DimensionEstimate fit_dimension(const std::vector<double>& scales, const std::vector<std::size_t>& counts);
/// Throws UnderResolved for scales below the guard, LowQualityFit when r² < 0.98.
DimensionEstimate estimate_dim(const PointCloud& cloud, const ScaleRange& scales);

/// Arc-length coordinate along the target line of every projected point.
std::vector<double> shadow_coordinates(const LinearProjector& projector, const PointCloud& cloud);

std::size_t projected_counts(const NormModel& norm, const PointCloud& cloud, const HyperplaneNormal& w, double delta);
std::size_t projected_counts(const ProjectionFamily& family, const PointCloud& cloud, const HyperplaneNormal& w,
                             double delta);

/// Mean over the grid of (occupied bins × δ). δ may go down to the cloud's cell side.
double favard_proxy(const NormModel& norm, const PointCloud& cloud, const DirectionGrid& grid, double delta);
double favard_proxy(const ProjectionFamily& family, const PointCloud& cloud, const DirectionGrid& grid, double delta);

}  // namespace normproj
