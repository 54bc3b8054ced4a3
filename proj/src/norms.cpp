#include "normproj/norms.hpp"

#include "normproj/error.hpp"
#include "normproj/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace normproj {

namespace {

void require_dim(const NormModel& norm, const Eigen::VectorXd& x) {
  if (x.size() != norm.dim())
    throw Error(Errc::InvalidArgument, "vector has dimension " + std::to_string(x.size()) + ", norm expects " +
                                           std::to_string(norm.dim()));
}

double polar(const Eigen::VectorXd& x) { return std::atan2(x(1), x(0)); }

Eigen::Vector2d unit(double a) { return {std::cos(a), std::sin(a)}; }

}  // namespace

const char* to_string(NormKind k) noexcept {
  switch (k) {
    case NormKind::euclidean: return "euclidean";
    case NormKind::lp: return "lp";
    case NormKind::inner_product: return "inner_product";
    case NormKind::support_table: return "support_table";
  }
  return "unknown";
}

NormModel NormModel::euclidean(int dim) {
  if (dim < 2) throw Error(Errc::InvalidArgument, "ambient dimension must be at least 2");
  NormModel n;
  n.kind_ = NormKind::euclidean;
  n.dim_ = dim;
  return n;
}

NormModel NormModel::lp(double p, int dim) {
  if (dim < 2) throw Error(Errc::InvalidArgument, "ambient dimension must be at least 2");
  if (!std::isfinite(p) || p <= 1.0)
    throw Error(Errc::NotStrictlyConvex, "lp norm needs 1 < p < infinity");
  NormModel n;
  n.kind_ = NormKind::lp;
  n.dim_ = dim;
  n.p_ = p;
  return n;
}

NormModel NormModel::inner_product(const Eigen::MatrixXd& q) {
  if (q.rows() != q.cols() || q.rows() < 2)
    throw Error(Errc::InvalidArgument, "inner-product matrix must be square, at least 2x2");
  if (!q.allFinite()) throw Error(Errc::InvalidArgument, "inner-product matrix has non-finite entries");
  if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + q.cwiseAbs().maxCoeff()))
    throw Error(Errc::InvalidArgument, "inner-product matrix must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(q);
  if (llt.info() != Eigen::Success) throw Error(Errc::NotStrictlyConvex, "inner-product matrix is not positive-definite");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
  if (es.eigenvalues().minCoeff() <= 1e-12 * es.eigenvalues().maxCoeff())
    throw Error(Errc::NotStrictlyConvex, "inner-product matrix is numerically degenerate");
  NormModel n;
  n.kind_ = NormKind::inner_product;
  n.dim_ = static_cast<int>(q.rows());
  n.q_ = q;
  n.q_inv_ = llt.solve(Eigen::MatrixXd::Identity(q.rows(), q.cols()));
  return n;
}

NormModel NormModel::support_table(std::shared_ptr<const SupportTable> table) {
  NormModel n;
  n.kind_ = NormKind::support_table;
  n.dim_ = 2;
  if (table) {
    TableDiagnostics d = table->diagnose();
    if (d.symmetry_defect > 1e-10)
      throw Error(Errc::NotStrictlyConvex, "support table is not antipodally symmetric");
    if (d.min_support <= 0.0) throw Error(Errc::NotStrictlyConvex, "support table must be positive");
    if (d.min_discrete_radius <= 0.0)
      throw Error(Errc::NotStrictlyConvex, "support table fails h + h'' > 0");
    n.table_ = table;
    n.geometry_ = std::make_shared<TableGeometry>(table);
  }
  return n;
}

const SupportTable& NormModel::table() const {
  if (kind_ != NormKind::support_table) throw Error(Errc::InvalidArgument, "norm has no support table");
  if (!table_) throw Error(Errc::ModelNotReady, "support table not loaded");
  return *table_;
}

const TableGeometry& NormModel::geometry() const {
  table();
  return *geometry_;
}

std::string NormModel::describe() const {
  std::ostringstream os;
  os << to_string(kind_) << " dim=" << dim_;
  if (kind_ == NormKind::lp) os << " p=" << p_;
  if (kind_ == NormKind::support_table) os << " rows=" << (table_ ? table_->size() : 0);
  return os.str();
}

TableGeometry::TableGeometry(std::shared_ptr<const SupportTable> table) : table_(std::move(table)) {
  const std::size_t n = table_->size();
  polar_.resize(n + 1);
  double prev = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    Eigen::Vector2d b = table_->boundary_point(table_->angle(i % n));
    double a = std::atan2(b.y(), b.x());
    if (i == 0) {
      polar_[0] = a;
    } else {
      double step = wrap_pi(a - prev);
      if (step <= 0.0) throw Error(Errc::NotStrictlyConvex, "support table boundary does not turn monotonically");
      polar_[i] = polar_[i - 1] + step;
    }
    prev = a;
  }
  if (std::abs(polar_[n] - polar_[0] - kTwoPi) > 1e-9)
    throw Error(Errc::NotStrictlyConvex, "support table boundary does not wind once");
  polar_[n] = polar_[0] + kTwoPi;
}

double TableGeometry::normal_angle_at(double polar_angle) const {
  const std::size_t n = table_->size();
  double a = polar_[0] + wrap_two_pi(polar_angle - polar_[0]);
  auto it = std::upper_bound(polar_.begin(), polar_.end(), a);
  std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - polar_.begin() - 1));
  if (i >= n) i = n - 1;
  if (polar_[i + 1] - polar_[i] < 1e-15) throw Error(Errc::NotSmoothHere, "support table corner");
  const double lo = table_->angle(i), hi = lo + table_->spacing();
  auto offset = [&](double phi) {
    Eigen::Vector2d b = table_->boundary_point(phi);
    return wrap_pi(std::atan2(b.y(), b.x()) - a);
  };
  return bisect_root(offset, lo, hi);
}

double eval_norm(const NormModel& norm, const Eigen::VectorXd& x) {
  require_dim(norm, x);
  switch (norm.kind()) {
    case NormKind::euclidean: return x.norm();
    case NormKind::lp: {
      double m = x.cwiseAbs().maxCoeff();
      if (m == 0.0) return 0.0;
      double s = 0.0;
      for (int i = 0; i < x.size(); ++i) s += std::pow(std::abs(x(i)) / m, norm.p());
      return m * std::pow(s, 1.0 / norm.p());
    }
    case NormKind::inner_product: return std::sqrt(std::max(0.0, x.dot(norm.q() * x)));
    case NormKind::support_table: {
      const TableGeometry& g = norm.geometry();
      double r = x.norm();
      if (r == 0.0) return 0.0;
      double phi = g.normal_angle_at(polar(x));
      return r / norm.table().boundary_point(phi).norm();
    }
  }
  return 0.0;
}

Eigen::VectorXd norm_gradient(const NormModel& norm, const Eigen::VectorXd& x) {
  require_dim(norm, x);
  if (x.isZero(0.0)) throw Error(Errc::NotSmoothHere, "norm is not differentiable at the origin");
  switch (norm.kind()) {
    case NormKind::euclidean: return x / x.norm();
    case NormKind::lp: {
      const double p = norm.p();
      double m = x.cwiseAbs().maxCoeff();
      Eigen::VectorXd y(x.size());
      double s = 0.0;
      for (int i = 0; i < x.size(); ++i) {
        double a = std::abs(x(i)) / m;
        s += std::pow(a, p);
        y(i) = std::copysign(std::pow(a, p - 1.0), x(i));
        if (x(i) == 0.0) y(i) = 0.0;
      }
      return y / std::pow(s, (p - 1.0) / p);
    }
    case NormKind::inner_product: {
      Eigen::VectorXd qx = norm.q() * x;
      return qx / std::sqrt(x.dot(qx));
    }
    case NormKind::support_table: {
      const SupportTable& t = norm.table();
      double phi = norm.geometry().normal_angle_at(polar(x));
      Eigen::VectorXd g = unit(phi);
      return g / t.support(phi);
    }
  }
  return x;
}

Eigen::VectorXd gauss_map(const NormModel& norm, const Eigen::VectorXd& x) {
  if (norm.kind() == NormKind::support_table) {
    require_dim(norm, x);
    if (x.isZero(0.0)) throw Error(Errc::NotSmoothHere, "Gauss map undefined at the origin");
    Eigen::VectorXd u = unit(norm.geometry().normal_angle_at(polar(x)));
    return u;
  }
  Eigen::VectorXd g = norm_gradient(norm, x);
  return g / g.norm();
}

SpherePoint inverse_gauss(const NormModel& norm, const Eigen::VectorXd& w_in) {
  require_dim(norm, w_in);
  double len = w_in.norm();
  if (!(len > 0.0) || !std::isfinite(len)) throw Error(Errc::InvalidArgument, "normal must be nonzero");
  Eigen::VectorXd w = w_in / len;
  SpherePoint out;
  switch (norm.kind()) {
    case NormKind::euclidean: out.coords = w; break;
    case NormKind::lp: {
      const double q = norm.p() / (norm.p() - 1.0);
      double m = w.cwiseAbs().maxCoeff();
      Eigen::VectorXd x(w.size());
      double s = 0.0;
      for (int i = 0; i < w.size(); ++i) {
        double a = std::abs(w(i)) / m;
        s += std::pow(a, q);
        x(i) = w(i) == 0.0 ? 0.0 : std::copysign(std::pow(a, q - 1.0), w(i));
      }
      out.coords = x / std::pow(s, (q - 1.0) / q);
      break;
    }
    case NormKind::inner_product: {
      Eigen::VectorXd y = norm.q_inverse() * w;
      out.coords = y / std::sqrt(w.dot(y));
      break;
    }
    case NormKind::support_table: {
      const SupportTable& t = norm.table();
      out.coords = t.boundary_point(std::atan2(w(1), w(0)));
      break;
    }
  }
  if (norm.dim() == 2) out.polar_angle = wrap_two_pi(polar(out.coords));
  return out;
}

SpherePoint sphere_point(const NormModel& norm, double angle) {
  if (norm.dim() != 2) throw Error(Errc::InvalidArgument, "sphere_point needs a planar norm");
  Eigen::VectorXd u = unit(angle);
  SpherePoint out;
  out.coords = u / eval_norm(norm, u);
  out.polar_angle = wrap_two_pi(angle);
  return out;
}

GaussReport check_gauss_properties(const NormModel& norm, int grid_size) {
  if (norm.dim() != 2) throw Error(Errc::InvalidArgument, "Gauss-property check needs a planar norm");
  if (grid_size < 16) throw Error(Errc::InvalidArgument, "grid size must be at least 16");
  GaussReport rep;
  rep.grid_size = grid_size;
  rep.min_inner_product = std::numeric_limits<double>::infinity();
  std::vector<Eigen::Vector2d> normals(grid_size);
  for (int j = 0; j < grid_size; ++j) {
    SpherePoint v = sphere_point(norm, kTwoPi * j / grid_size);
    Eigen::VectorXd g = gauss_map(norm, v.coords);
    Eigen::VectorXd gm = gauss_map(norm, (-v.coords).eval());
    rep.antipodality_defect = std::max(rep.antipodality_defect, (gm + g).norm());
    rep.min_inner_product = std::min(rep.min_inner_product, v.coords.dot(g));
    normals[j] = Eigen::Vector2d(g(0), g(1));
  }
  rep.monotone = true;
  for (int j = 0; j < grid_size; ++j) {
    // Signed turn between consecutive normals, accurate even for very small steps.
    const Eigen::Vector2d& a = normals[j];
    const Eigen::Vector2d& b = normals[(j + 1) % grid_size];
    double step = std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
    if (!(step > 0.0)) rep.monotone = false;
    rep.total_turn += step;
  }
  if (std::abs(rep.total_turn - kTwoPi) > 1e-6) rep.monotone = false;
  return rep;
}

namespace {

double fixed_point_defect(const NormModel& norm, const Eigen::VectorXd& v) {
  return (gauss_map(norm, v) - v / v.norm()).norm();
}

// Polishes an extremum of the radius by locating the sign change of cross(x, G(x)).
double polish_fixed_angle(const NormModel& norm, double guess, double halfwidth) {
  auto cross = [&](double a) {
    SpherePoint s = sphere_point(norm, a);
    Eigen::VectorXd g = gauss_map(norm, s.coords);
    return s.coords(0) * g(1) - s.coords(1) * g(0);
  };
  double lo = guess - halfwidth, hi = guess + halfwidth;
  double clo = cross(lo), chi = cross(hi);
  if ((clo < 0.0) == (chi < 0.0) || clo == 0.0 || chi == 0.0) return guess;
  return bisect_root(cross, lo, hi);
}

}  // namespace

FixedPoints find_gauss_fixed_points(const NormModel& norm) {
  if (norm.dim() != 2) throw Error(Errc::InvalidArgument, "fixed points need a planar norm");
  FixedPoints fp;
  if (norm.kind() == NormKind::euclidean) {
    fp.farthest = sphere_point(norm, 0.0);
    fp.closest = sphere_point(norm, kPi / 2);
    return fp;
  }
  const int scan = 4096;
  const double step = kPi / scan;
  int jmax = 0, jmin = 0;
  double rmax = -1.0, rmin = std::numeric_limits<double>::infinity();
  for (int j = 0; j < scan; ++j) {
    double r = sphere_point(norm, step * j).coords.norm();
    if (r > rmax) rmax = r, jmax = j;
    if (r < rmin) rmin = r, jmin = j;
  }
  auto radius = [&](double a) { return sphere_point(norm, a).coords.norm(); };
  double amax = golden_section_max(radius, step * (jmax - 1), step * (jmax + 1), 1e-13);
  double amin = golden_section_min(radius, step * (jmin - 1), step * (jmin + 1), 1e-13);
  amax = polish_fixed_angle(norm, amax, 1e-6);
  amin = polish_fixed_angle(norm, amin, 1e-6);
  auto canonical = [&](double a) {
    a = std::fmod(a, kPi);
    if (a < 0.0) a += kPi;
    if (kPi - a < 1e-12) a -= kPi;
    if (std::abs(a) < 1e-12) a = 0.0;
    return sphere_point(norm, a);
  };
  fp.farthest = canonical(amax);
  fp.closest = canonical(amin);
  fp.farthest_defect = fixed_point_defect(norm, fp.farthest.coords);
  fp.closest_defect = fixed_point_defect(norm, fp.closest.coords);
  return fp;
}

}  // namespace normproj
