#include "normproj/support_table.hpp"

#include "normproj/error.hpp"
#include "normproj/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace normproj {

const char* to_string(ArcSource s) noexcept {
  switch (s) {
    case ArcSource::unknown: return "unknown";
    case ArcSource::gamma: return "gamma";
    case ArcSource::glue: return "glue";
    case ArcSource::neg_gamma: return "neg_gamma";
    case ArcSource::neg_glue: return "neg_glue";
  }
  return "unknown";
}

SupportTable::SupportTable(std::vector<double> h, std::vector<double> dh, std::vector<ArcSource> source,
                           std::optional<TableOrigin> origin)
    : h_(std::move(h)), dh_(std::move(dh)), source_(std::move(source)), origin_(origin) {
  if (h_.size() < 16 || h_.size() % 2 != 0)
    throw Error(Errc::InvalidArgument, "support table needs an even number of rows, at least 16");
  if (dh_.size() != h_.size()) throw Error(Errc::InvalidArgument, "h and dh differ in length");
  if (source_.empty()) source_.assign(h_.size(), ArcSource::unknown);
  if (source_.size() != h_.size()) throw Error(Errc::InvalidArgument, "provenance flags differ in length");
  for (std::size_t i = 0; i < h_.size(); ++i)
    if (!std::isfinite(h_[i]) || !std::isfinite(dh_[i]))
      throw Error(Errc::InvalidArgument, "non-finite support value");
  spacing_ = kTwoPi / static_cast<double>(h_.size());
}

void SupportTable::cell(double phi, std::size_t& i, double& s) const {
  double a = wrap_two_pi(phi) / spacing_;
  double fl = std::floor(a);
  i = static_cast<std::size_t>(fl);
  s = a - fl;
  if (i >= h_.size()) {
    i = h_.size() - 1;
    s = 1.0;
  }
}

double SupportTable::support(double phi) const {
  std::size_t i;
  double s;
  cell(phi, i, s);
  std::size_t j = (i + 1) % h_.size();
  double s2 = s * s, s3 = s2 * s;
  double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s, h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  return h00 * h_[i] + h10 * spacing_ * dh_[i] + h01 * h_[j] + h11 * spacing_ * dh_[j];
}

double SupportTable::support_derivative(double phi) const {
  std::size_t i;
  double s;
  cell(phi, i, s);
  std::size_t j = (i + 1) % h_.size();
  double s2 = s * s;
  double d00 = 6 * s2 - 6 * s, d10 = 3 * s2 - 4 * s + 1, d01 = -6 * s2 + 6 * s, d11 = 3 * s2 - 2 * s;
  return (d00 * h_[i] + d01 * h_[j]) / spacing_ + d10 * dh_[i] + d11 * dh_[j];
}

Eigen::Vector2d SupportTable::boundary_point(double phi) const {
  double c = std::cos(phi), s = std::sin(phi);
  double hv = support(phi), dv = support_derivative(phi);
  return {hv * c - dv * s, hv * s + dv * c};
}

TableDiagnostics SupportTable::diagnose() const {
  TableDiagnostics d;
  const std::size_t n = h_.size(), half = n / 2;
  d.min_support = *std::min_element(h_.begin(), h_.end());
  d.min_discrete_radius = std::numeric_limits<double>::infinity();
  const double inv_sq = 1.0 / (spacing_ * spacing_);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t k = (i + half) % n;
    d.symmetry_defect = std::max({d.symmetry_defect, std::abs(h_[k] - h_[i]), std::abs(dh_[k] - dh_[i])});
    double second = (h_[(i + 1) % n] - 2.0 * h_[i] + h_[(i + n - 1) % n]) * inv_sq;
    d.min_discrete_radius = std::min(d.min_discrete_radius, h_[i] + second);
  }
  return d;
}

void write_support_table_csv(std::ostream& os, const SupportTable& table) {
  os << "# normproj " NORMPROJ_VERSION "\nphi,h,dh\n";
  char buf[128];
  for (std::size_t i = 0; i < table.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", table.angle(i), table.h(i), table.dh(i));
    os << buf;
  }
}

SupportTable read_support_table_csv(std::istream& is) {
  std::string line;
  bool header = false;
  std::vector<double> phi, h, dh;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "phi,h,dh") throw Error(Errc::InvalidArgument, "support table header must be phi,h,dh");
      header = true;
      continue;
    }
    std::istringstream ls(line);
    double a, b, c;
    char c1, c2;
    if (!(ls >> a >> c1 >> b >> c2 >> c) || c1 != ',' || c2 != ',')
      throw Error(Errc::InvalidArgument, "malformed support table row: " + line);
    phi.push_back(a);
    h.push_back(b);
    dh.push_back(c);
  }
  if (!header) throw Error(Errc::InvalidArgument, "support table has no header");
  const double step = kTwoPi / static_cast<double>(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i)
    if (std::abs(phi[i] - step * static_cast<double>(i)) > 1e-9)
      throw Error(Errc::InvalidArgument, "support table angles must be uniform on [0, 2pi)");
  return SupportTable(std::move(h), std::move(dh));
}

SupportTable load_support_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidArgument, "cannot open support table " + path);
  return read_support_table_csv(in);
}

}  // namespace normproj
