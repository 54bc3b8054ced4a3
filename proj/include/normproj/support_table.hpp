#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace normproj {

/// Which part of the closed curve a table row was taken from.
enum class ArcSource : std::uint8_t { unknown, gamma, glue, neg_gamma, neg_glue };

const char* to_string(ArcSource s) noexcept;

/// Cantor parameters a table was built from, kept so sweeps can check they match.
struct TableOrigin {
  int branches = 2;
  double ratio = 1.0 / 3.0;
  int level = 0;
};

struct TableDiagnostics {
  double symmetry_defect = 0.0;   // max |h(φ+π) − h(φ)|, also for dh with sign flip
  double min_support = 0.0;       // min h_i
  double min_discrete_radius = 0.0;  // min h_i + second difference
  bool valid() const { return min_support > 0.0 && min_discrete_radius > 0.0 && symmetry_defect <= 1e-10; }
};

/// Support function h(φ) of a planar convex body and its derivative, sampled at φ_i = 2πi/N.
/// Between samples the pair (h, h') is interpolated by cubic Hermite polynomials.
class SupportTable {
 public:
  SupportTable(std::vector<double> h, std::vector<double> dh, std::vector<ArcSource> source = {},
               std::optional<TableOrigin> origin = std::nullopt);

  std::size_t size() const { return h_.size(); }
  double spacing() const { return spacing_; }
  double angle(std::size_t i) const { return spacing_ * static_cast<double>(i); }
  double h(std::size_t i) const { return h_[i]; }
  double dh(std::size_t i) const { return dh_[i]; }
  ArcSource source(std::size_t i) const { return source_[i]; }
  const std::optional<TableOrigin>& origin() const { return origin_; }

  double support(double phi) const;
  double support_derivative(double phi) const;
  /// Point of the boundary whose outward normal has angle φ: h u + h' u'.
  Eigen::Vector2d boundary_point(double phi) const;

  TableDiagnostics diagnose() const;

 private:
  void cell(double phi, std::size_t& i, double& s) const;

  std::vector<double> h_, dh_;
  std::vector<ArcSource> source_;
  std::optional<TableOrigin> origin_;
  double spacing_;
};

/// CSV with header `phi,h,dh`; lines starting with '#' are skipped on read.
void write_support_table_csv(std::ostream& os, const SupportTable& table);
SupportTable read_support_table_csv(std::istream& is);
SupportTable load_support_table(const std::string& path);

}  // namespace normproj
