#include "normproj/report_io.hpp"

#include "normproj/error.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>

namespace normproj {

std::string generator() { return std::string("normproj ") + NORMPROJ_VERSION; }

std::string version_header() { return "# " + generator(); }

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::strtod(fmt(x).c_str(), nullptr);
}

Json to_json(const CheckReport& r) {
  return Json{{"name", r.name},           {"passed", r.passed}, {"worst_defect", num(r.worst_defect)},
              {"tolerance", num(r.tolerance)}, {"samples", r.samples}, {"seed", r.seed},
              {"detail", r.detail}};
}

Json to_json(const DimensionEstimate& e) {
  Json scales = Json::array(), counts = Json::array();
  for (double s : e.scales) scales.push_back(num(s));
  for (std::size_t c : e.counts) counts.push_back(c);
  return Json{{"slope", num(e.slope)}, {"r2", num(e.r2)}, {"scales", scales}, {"counts", counts}};
}

Json to_json(const GaussReport& g) {
  return Json{{"grid_size", g.grid_size},
              {"antipodality_defect", num(g.antipodality_defect)},
              {"monotone", g.monotone},
              {"min_inner_product", num(g.min_inner_product)},
              {"total_turn", num(g.total_turn)}};
}

Json to_json(const MeasureBounds& b) {
  return Json{{"lower", num(b.lower)}, {"upper", num(b.upper)}, {"level", b.level}};
}

Json profile_summary(const ExceptionalProfile& p) {
  Json flagged = Json::array();
  for (double a : p.flagged_angles()) flagged.push_back(num(a));
  int failed = 0;
  for (const DirectionRecord& r : p.records) failed += r.error.empty() ? 0 : 1;
  return Json{{"generator", generator()},
              {"mean_slope", num(p.mean_slope())},
              {"flagged_measure", num(p.flagged_measure())},
              {"thresholds", Json::array({num(p.threshold)})},
              {"directions", p.records.size()},
              {"failed_directions", failed},
              {"flagged_angles", flagged}};
}

void write_dimension_csv(std::ostream& os, const DimensionEstimate& e) {
  os << version_header() << "\ndelta,count\n";
  for (std::size_t i = 0; i < e.scales.size() && i < e.counts.size(); ++i)
    os << fmt(e.scales[i]) << ',' << e.counts[i] << '\n';
}

void write_profile_csv(std::ostream& os, const ExceptionalProfile& p) {
  os << version_header() << "\nangle,slope,r2,flagged\n";
  for (const DirectionRecord& r : p.records) {
    os << fmt(r.angle) << ',';
    if (r.error.empty()) {
      os << fmt(r.estimate.slope) << ',' << fmt(r.estimate.r2);
    } else {
      os << ',';
    }
    os << ',' << (r.flagged ? 1 : 0) << '\n';
  }
}

void write_cloud_csv(std::ostream& os, const PointCloud& cloud) {
  Json meta{{"label", cloud.label},
            {"points", cloud.size()},
            {"generation", cloud.generation},
            {"resolution", num(cloud.resolution)},
            {"base", num(cloud.base)}};
  os << version_header() << "\n# " << meta.dump() << "\nx,y\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) os << fmt(cloud.points(0, i)) << ',' << fmt(cloud.points(1, i)) << '\n';
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::InvalidArgument, "cannot write " + path);
  out << content;
  if (!out.flush()) throw Error(Errc::InvalidArgument, "cannot write " + path);
}

}  // namespace normproj
