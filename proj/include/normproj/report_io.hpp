#pragma once

#include "normproj/boxdim.hpp"
#include "normproj/checks.hpp"
#include "normproj/counterexample.hpp"
#include "normproj/sweep.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace normproj {

using Json = nlohmann::ordered_json;

/// "normproj <semver>".
std::string generator();
/// First line of every CSV artifact.
std::string version_header();

/// Rounds to 12 significant digits; non-finite values become null.
Json num(double x);
/// "%.12g".
std::string fmt(double x);

Json to_json(const CheckReport& r);
Json to_json(const DimensionEstimate& e);
Json to_json(const GaussReport& g);
Json to_json(const MeasureBounds& b);
/// {mean_slope, flagged_measure, thresholds, directions, flagged_angles, failed_directions}.
Json profile_summary(const ExceptionalProfile& p);

void write_dimension_csv(std::ostream& os, const DimensionEstimate& e);
void write_profile_csv(std::ostream& os, const ExceptionalProfile& p);
/// Version line, one JSON metadata line, then `x,y` rows.
void write_cloud_csv(std::ostream& os, const PointCloud& cloud);

/// Pretty-printed with a trailing newline.
std::string dump(const Json& j);
/// Throws InvalidArgument when the path cannot be written.
void write_file(const std::string& path, const std::string& content);

}  // namespace normproj
