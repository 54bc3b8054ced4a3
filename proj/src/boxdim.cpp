#include "normproj/boxdim.hpp"

#include "normproj/error.hpp"
#include "normproj/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>

namespace normproj {

double DirectionGrid::angle(int j) const { return kPi * j / count; }

HyperplaneNormal DirectionGrid::normal(int j) const { return HyperplaneNormal::from_angle(angle(j)); }

std::vector<double> ScaleRange::deltas() const {
  std::vector<double> out;
  for (int k = k_min; k <= k_max; ++k) out.push_back(std::pow(base, -k));
  return out;
}

namespace {

void guard(double delta, double resolution) {
  if (!(delta > 0.0)) throw Error(Errc::InvalidArgument, "scale must be positive");
  if (delta < 2.0 * resolution * (1.0 - 1e-12))
    throw Error(Errc::UnderResolved, "scale below twice the cloud resolution");
}

std::int64_t cell(double x, double delta) { return static_cast<std::int64_t>(std::floor(x / delta)); }

}  // namespace

ScaleRange default_scales(const PointCloud& cloud) {
  ScaleRange s;
  s.base = cloud.base;
  s.k_min = 2;
  int k = 2;
  while (std::pow(s.base, -(k + 1)) >= 2.0 * cloud.resolution * (1.0 - 1e-12) && k < 60) ++k;
  s.k_max = k;
  return s;
}

std::size_t count_bins(const std::vector<double>& values, double delta) {
  if (values.empty()) return 0;
  std::vector<std::int64_t> bins(values.size());
  std::int64_t lo = INT64_MAX, hi = INT64_MIN;
  for (std::size_t i = 0; i < values.size(); ++i) {
    bins[i] = cell(values[i], delta);
    lo = std::min(lo, bins[i]);
    hi = std::max(hi, bins[i]);
  }
  if (hi - lo < 100000000) {
    std::vector<char> seen(static_cast<std::size_t>(hi - lo + 1), 0);
    std::size_t n = 0;
    for (std::int64_t b : bins) {
      char& s = seen[static_cast<std::size_t>(b - lo)];
      if (!s) {
        s = 1;
        ++n;
      }
    }
    return n;
  }
  std::sort(bins.begin(), bins.end());
  return static_cast<std::size_t>(std::unique(bins.begin(), bins.end()) - bins.begin());
}

std::size_t interval_cover_count(std::vector<double> values, double delta) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  std::size_t n = 1;
  double start = values.front();
  for (double v : values) {
    if (v > start + delta) {
      ++n;
      start = v;
    }
  }
  return n;
}

std::size_t box_count(const PointCloud& cloud, double delta) {
  guard(delta, cloud.resolution);
  const Eigen::Index n = cloud.points.cols();
  if (n == 0) return 0;
  if (cloud.dim() == 1) {
    std::vector<double> v(cloud.points.data(), cloud.points.data() + n);
    return count_bins(v, delta);
  }
  if (cloud.dim() == 2) {
    std::vector<std::uint64_t> keys(static_cast<std::size_t>(n));
    bool packed = true;
    for (Eigen::Index i = 0; i < n && packed; ++i) {
      std::int64_t a = cell(cloud.points(0, i), delta), b = cell(cloud.points(1, i), delta);
      if (std::abs(a) >= (std::int64_t{1} << 31) || std::abs(b) >= (std::int64_t{1} << 31)) packed = false;
      keys[static_cast<std::size_t>(i)] =
          (static_cast<std::uint64_t>(a + (std::int64_t{1} << 31)) << 32) |
          static_cast<std::uint64_t>(b + (std::int64_t{1} << 31));
    }
    if (packed) {
      std::sort(keys.begin(), keys.end());
      return static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
    }
  }
  std::set<std::vector<std::int64_t>> cells;
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<std::int64_t> key(cloud.dim());
    for (int d = 0; d < cloud.dim(); ++d) key[d] = cell(cloud.points(d, i), delta);
    cells.insert(std::move(key));
  }
  return cells.size();
}

DimensionEstimate fit_dimension(const std::vector<double>& scales, const std::vector<std::size_t>& counts) {
  DimensionEstimate e;
  e.scales = scales;
  e.counts = counts;
  const std::size_t n = std::min(scales.size(), counts.size());
  if (n < 2) return e;
  double sx = 0, sy = 0;
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::log(scales[i]);
    y[i] = std::log(static_cast<double>(std::max<std::size_t>(counts[i], 1)));
    sx += x[i];
    sy += y[i];
  }
  double mx = sx / n, my = sy / n, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) return e;
  double b = sxy / sxx;
  e.slope = -b;
  if (syy <= 1e-300) {
    e.r2 = 1.0;
  } else {
    double ssres = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = y[i] - (my + b * (x[i] - mx));
      ssres += r * r;
    }
    e.r2 = std::clamp(1.0 - ssres / syy, 0.0, 1.0);
  }
  return e;
}

DimensionEstimate estimate_dim(const PointCloud& cloud, const ScaleRange& scales) {
  std::vector<double> deltas = scales.deltas();
  if (deltas.size() < 4) throw Error(Errc::UnderResolved, "need at least four admissible scales");
  std::vector<std::size_t> counts;
  for (double d : deltas) counts.push_back(box_count(cloud, d));
  DimensionEstimate e = fit_dimension(deltas, counts);
  if (e.r2 < 0.98) throw Error(Errc::LowQualityFit, "box-count fit has r2 = " + std::to_string(e.r2));
  return e;
}

std::vector<double> shadow_coordinates(const LinearProjector& projector, const PointCloud& cloud) {
  if (cloud.dim() != 2 || projector.target.dim() != 2) throw Error(Errc::InvalidArgument, "shadows need a planar cloud");
  Eigen::Vector2d d = projector.target.line_direction();
  Eigen::Vector2d a = projector.matrix.transpose() * d;
  Eigen::VectorXd s = cloud.points.transpose() * a;
  return std::vector<double>(s.data(), s.data() + s.size());
}

std::size_t projected_counts(const ProjectionFamily& family, const PointCloud& cloud, const HyperplaneNormal& w,
                             double delta) {
  guard(delta, cloud.resolution);
  return count_bins(shadow_coordinates(family.projector(w), cloud), delta);
}

std::size_t projected_counts(const NormModel& norm, const PointCloud& cloud, const HyperplaneNormal& w, double delta) {
  return projected_counts(family_from_norm(norm), cloud, w, delta);
}

double favard_proxy(const ProjectionFamily& family, const PointCloud& cloud, const DirectionGrid& grid, double delta) {
  if (cloud.dim() != 2) throw Error(Errc::InvalidArgument, "favard proxy needs a planar cloud");
  if (grid.count < 1) throw Error(Errc::InvalidArgument, "direction grid is empty");
  if (!(delta > 0.0)) throw Error(Errc::InvalidArgument, "scale must be positive");
  if (delta < cloud.resolution / std::sqrt(2.0) * (1.0 - 1e-12))
    throw Error(Errc::UnderResolved, "scale below the cloud's cell side");
  double sum = 0.0;
  for (int j = 0; j < grid.count; ++j)
    sum += static_cast<double>(count_bins(shadow_coordinates(family.projector(grid.normal(j)), cloud), delta)) * delta;
  return sum / grid.count;
}

double favard_proxy(const NormModel& norm, const PointCloud& cloud, const DirectionGrid& grid, double delta) {
  return favard_proxy(family_from_norm(norm), cloud, grid, delta);
}

}  // namespace normproj
