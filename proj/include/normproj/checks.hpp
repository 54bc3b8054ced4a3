#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace normproj {

struct CheckReport {
  std::string name;
  bool passed = false;
  double worst_defect = 0.0;
  double tolerance = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
  std::string detail;
};

struct CheckConfig {
  std::uint64_t seed = 0x5EED;
  /// Forwarded to the glue of the counterexample norm; negate it to exercise the failure path.
  double glue_slack = 1.0;
  int threads = 1;
};

/// Number of reports returned by run_all.
inline constexpr int kCheckCount = 22;

std::vector<std::string> check_names();

/// Runs every check. Failures are reported, never thrown.
std::vector<CheckReport> run_all(const CheckConfig& config = {});

}  // namespace normproj
