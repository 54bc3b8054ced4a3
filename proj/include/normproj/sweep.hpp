#pragma once

#include "normproj/boxdim.hpp"
#include "normproj/cantor.hpp"
#include "normproj/counterexample.hpp"
#include "normproj/norms.hpp"
#include "normproj/projections.hpp"

#include <optional>
#include <string>
#include <vector>

namespace normproj {

struct DirectionRecord {
  double angle = 0.0;
  DimensionEstimate estimate;
  bool flagged = false;
  std::string error;  // set when the estimator refused; such directions are not flagged
};

struct ExceptionalProfile {
  std::vector<DirectionRecord> records;
  double threshold = 0.0;

  std::vector<double> flagged_angles() const;
  /// Flagged fraction of the grid.
  double flagged_measure() const;
  double mean_slope() const;
};

struct SweepOptions {
  std::optional<double> threshold;  // default min(1, dim of the cloud) − 0.1
  int threads = 1;
};

ExceptionalProfile dim_profile(const ProjectionFamily& family, const PointCloud& cloud, const DirectionGrid& grid,
                               const ScaleRange& scales, const SweepOptions& options = {});
ExceptionalProfile dim_profile(const NormModel& norm, const PointCloud& cloud, const DirectionGrid& grid,
                               const ScaleRange& scales, const SweepOptions& options = {});

/// Bracket for the angular measure of the normals G({γ(t) : t ∈ K}).
/// Counterexample tables must have been built from `k`. The Euclidean norm is accepted as the
/// control case, where the Gauss map is the identity and the bracket shrinks to zero.
MeasureBounds gauss_pushforward_measure(const NormModel& norm, const CantorSet& k, int level);

}  // namespace normproj
