#include "normproj/sweep.hpp"

#include "normproj/error.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace normproj {

std::vector<double> ExceptionalProfile::flagged_angles() const {
  std::vector<double> out;
  for (const DirectionRecord& r : records)
    if (r.flagged) out.push_back(r.angle);
  return out;
}

double ExceptionalProfile::flagged_measure() const {
  if (records.empty()) return 0.0;
  return static_cast<double>(flagged_angles().size()) / static_cast<double>(records.size());
}

double ExceptionalProfile::mean_slope() const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const DirectionRecord& r : records) {
    if (!r.error.empty()) continue;
    sum += r.estimate.slope;
    ++n;
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

ExceptionalProfile dim_profile(const ProjectionFamily& family, const PointCloud& cloud, const DirectionGrid& grid,
                               const ScaleRange& scales, const SweepOptions& options) {
  if (cloud.dim() != 2 || family.dim() != 2) throw Error(Errc::InvalidArgument, "sweeps need planar inputs");
  if (grid.count < 36) throw Error(Errc::InvalidArgument, "direction grid needs at least 36 directions");
  std::vector<double> deltas = scales.deltas();
  if (deltas.size() < 4) throw Error(Errc::UnderResolved, "need at least four admissible scales");
  for (double d : deltas)
    if (d < 2.0 * cloud.resolution * (1.0 - 1e-12)) throw Error(Errc::UnderResolved, "scale below the cloud guard");

  ExceptionalProfile prof;
  if (options.threshold) {
    prof.threshold = *options.threshold;
  } else {
    prof.threshold = std::min(1.0, estimate_dim(cloud, scales).slope) - 0.1;
  }
  prof.records.resize(grid.count);

  auto work = [&](int begin, int end) {
    for (int j = begin; j < end; ++j) {
      DirectionRecord& rec = prof.records[j];
      rec.angle = grid.angle(j);
      try {
        std::vector<double> s = shadow_coordinates(family.projector(grid.normal(j)), cloud);
        std::vector<std::size_t> counts;
        for (double d : deltas) counts.push_back(count_bins(s, d));
        rec.estimate = fit_dimension(deltas, counts);
        if (rec.estimate.r2 < 0.98) {
          rec.error = "LowQualityFit";
        } else {
          rec.flagged = rec.estimate.slope < prof.threshold;
        }
      } catch (const Error& e) {
        rec.error = to_string(e.code());
      }
    }
  };
  int threads = std::clamp(options.threads, 1, grid.count);
  if (threads == 1) {
    work(0, grid.count);
  } else {
    std::vector<std::thread> pool;
    int chunk = (grid.count + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t * chunk, std::min(grid.count, (t + 1) * chunk));
    for (std::thread& th : pool) th.join();
  }
  return prof;
}

ExceptionalProfile dim_profile(const NormModel& norm, const PointCloud& cloud, const DirectionGrid& grid,
                               const ScaleRange& scales, const SweepOptions& options) {
  return dim_profile(family_from_norm(norm), cloud, grid, scales, options);
}

MeasureBounds gauss_pushforward_measure(const NormModel& norm, const CantorSet& k, int level) {
  if (norm.kind() == NormKind::support_table) {
    const auto& origin = norm.table().origin();
    if (!origin || origin->branches != k.branches() || origin->ratio != k.ratio())
      throw Error(Errc::InvalidArgument, "support table was not built from this Cantor set");
    return image_measure_bounds(CounterexampleCurve(k, 0), level);
  }
  if (norm.kind() != NormKind::euclidean)
    throw Error(Errc::InvalidArgument, "pushforward bounds need the counterexample table or the Euclidean norm");
  return increasing_image_bounds(k, level, [](double t) { return t; }, 1.0);
}

}  // namespace normproj
