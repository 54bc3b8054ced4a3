#include "normproj/projections.hpp"

#include "normproj/error.hpp"
#include "normproj/numeric.hpp"

#include <cfloat>
#include <cmath>
#include <random>

namespace normproj {

HyperplaneNormal::HyperplaneNormal(const Eigen::VectorXd& w) {
  if (w.size() < 2) throw Error(Errc::InvalidArgument, "hyperplane normal needs dimension at least 2");
  double len2 = w.squaredNorm();
  if (!(len2 > 0.0) || !std::isfinite(len2)) throw Error(Errc::InvalidArgument, "hyperplane normal must be nonzero");
  w_ = std::abs(len2 - 1.0) <= 4 * DBL_EPSILON ? w : Eigen::VectorXd(w / std::sqrt(len2));
  for (int i = 0; i < w_.size(); ++i) {
    if (std::abs(w_(i)) > 1e-14) {
      if (w_(i) < 0.0) w_ = -w_;
      break;
    }
  }
}

HyperplaneNormal HyperplaneNormal::from_angle(double a) {
  Eigen::VectorXd w(2);
  w << std::cos(a), std::sin(a);
  return HyperplaneNormal(w);
}

double HyperplaneNormal::angle() const {
  if (dim() != 2) throw Error(Errc::InvalidArgument, "angle needs a planar normal");
  return std::atan2(w_(1), w_(0));
}

Eigen::Vector2d HyperplaneNormal::line_direction() const {
  if (dim() != 2) throw Error(Errc::InvalidArgument, "line direction needs a planar normal");
  return {-w_(1), w_(0)};
}

LinearProjector make_projector(const HyperplaneNormal& target, const Eigen::VectorXd& kernel_dir) {
  const Eigen::VectorXd& w = target.vector();
  if (kernel_dir.size() != w.size()) throw Error(Errc::InvalidArgument, "kernel direction has wrong dimension");
  double uw = kernel_dir.dot(w);
  if (!(std::abs(uw) > 1e-12 * kernel_dir.norm()))
    throw Error(Errc::DegenerateSplitting, "kernel direction lies in the target hyperplane");
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(w.size(), w.size()) - kernel_dir * w.transpose() / uw;
  return {target, kernel_dir, m};
}

const char* to_string(FamilyProvenance p) noexcept {
  switch (p) {
    case FamilyProvenance::from_norm: return "from_norm";
    case FamilyProvenance::from_gmap: return "from_gmap";
    case FamilyProvenance::angle_family: return "angle_family";
  }
  return "unknown";
}

ProjectionFamily::ProjectionFamily(int dim, FamilyProvenance provenance, Maker make)
    : dim_(dim), provenance_(provenance), make_(std::move(make)) {}

ProjectionFamily family_from_norm(const NormModel& norm) {
  return ProjectionFamily(norm.dim(), FamilyProvenance::from_norm, [norm](const HyperplaneNormal& v) {
    return make_projector(v, inverse_gauss(norm, v.vector()).coords);
  });
}

ProjectionFamily family_from_gmap(GMap gmap, int dim) {
  return ProjectionFamily(dim, FamilyProvenance::from_gmap, [gmap = std::move(gmap)](const HyperplaneNormal& v) {
    HyperplaneNormal g = gmap(v);
    return make_projector(g, g.vector());
  });
}

namespace {

double line_angle(const HyperplaneNormal& v) {
  Eigen::Vector2d d = v.line_direction();
  double a = std::atan2(d.y(), d.x());
  if (a < 0.0) a += kPi;
  if (a >= kPi) a -= kPi;
  return a;
}

double checked_alpha(const std::function<double(double)>& alpha, double a) {
  double v = alpha(a);
  if (!(v > 1e-9 && v < kPi - 1e-9))
    throw Error(Errc::DegenerateSplitting, "splitting angle must lie strictly inside (0, pi)");
  return v;
}

}  // namespace

ProjectionFamily angle_family(std::function<double(double)> alpha) {
  for (int j = 0; j < 720; ++j) checked_alpha(alpha, kPi * j / 720.0);
  return ProjectionFamily(2, FamilyProvenance::angle_family, [alpha = std::move(alpha)](const HyperplaneNormal& v) {
    double a = line_angle(v);
    double k = a + checked_alpha(alpha, a);
    Eigen::VectorXd u(2);
    u << std::cos(k), std::sin(k);
    return make_projector(v, u);
  });
}

HyperplaneNormal associated_g(const ProjectionFamily& family, const HyperplaneNormal& v) {
  return HyperplaneNormal(family.projector(v).kernel_dir);
}

Eigen::VectorXd project_hyperplane(const NormModel& norm, const HyperplaneNormal& w, const Eigen::VectorXd& x) {
  if (x.size() != w.dim() || norm.dim() != w.dim()) throw Error(Errc::InvalidArgument, "dimension mismatch");
  Eigen::VectorXd u = inverse_gauss(norm, w.vector()).coords;
  return x - (x.dot(w.vector()) / u.dot(w.vector())) * u;
}

namespace {

// Orthonormal basis of w^⊥.
Eigen::MatrixXd complement_basis(const Eigen::VectorXd& w) {
  const int n = static_cast<int>(w.size());
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(w);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  return q.rightCols(n - 1);
}

double line_minimize(const NormModel& norm, const Eigen::VectorXd& base, const Eigen::VectorXd& dir, double scale) {
  auto value = [&](double s) { return eval_norm(norm, (base + s * dir).eval()); };
  auto slope = [&](double s) {
    Eigen::VectorXd r = base + s * dir;
    if (r.isZero(0.0)) return 0.0;
    return norm_gradient(norm, r).dot(dir);
  };
  return minimize_convex_1d(value, slope, 0.0, scale);
}

}  // namespace

Eigen::VectorXd project_subspace_direct(const NormModel& norm, const Eigen::MatrixXd& basis,
                                        const Eigen::VectorXd& x) {
  if (basis.rows() != x.size() || norm.dim() != x.size()) throw Error(Errc::InvalidArgument, "dimension mismatch");
  Eigen::VectorXd z = basis.transpose() * x;
  const double scale = x.norm() + 1e-300;
  for (int sweep = 0; sweep < 2000; ++sweep) {
    double moved = 0.0;
    for (int j = 0; j < basis.cols(); ++j) {
      Eigen::VectorXd base = basis * z - x;
      double s = line_minimize(norm, base, basis.col(j), scale);
      z(j) += s;
      moved = std::max(moved, std::abs(s));
    }
    if (moved <= 1e-15 * scale || basis.cols() == 1) break;
  }
  return basis * z;
}

Eigen::VectorXd project_hyperplane_direct(const NormModel& norm, const HyperplaneNormal& w,
                                          const Eigen::VectorXd& x) {
  if (x.size() != w.dim() || norm.dim() != w.dim()) throw Error(Errc::InvalidArgument, "dimension mismatch");
  return project_subspace_direct(norm, complement_basis(w.vector()), x);
}

Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& q) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(1e-12).cwiseSqrt();
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

Eigen::VectorXd conjugate_projection(const Eigen::MatrixXd& q, const Eigen::MatrixXd& basis,
                                     const Eigen::VectorXd& x) {
  const int n = static_cast<int>(q.rows());
  if (q.cols() != n || basis.rows() != n || x.size() != n) throw Error(Errc::InvalidArgument, "dimension mismatch");
  if (basis.cols() < 1 || basis.cols() >= n) throw Error(Errc::InvalidArgument, "subspace dimension must be in [1, n)");
  NormModel::inner_product(q);  // validates positive-definiteness
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(1e-12).cwiseSqrt();
  Eigen::MatrixXd psi = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
  Eigen::MatrixXd psi_inv = es.eigenvectors() * lam.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
  Eigen::MatrixXd y = psi * basis;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
  Eigen::MatrixXd qy = qr.householderQ() * Eigen::MatrixXd::Identity(n, basis.cols());
  Eigen::VectorXd px = psi * x;
  return psi_inv * (qy * (qy.transpose() * px));
}

Eigen::VectorXd project_line_lp(double p, const Eigen::VectorXd& v, const Eigen::VectorXd& x) {
  if (v.size() != x.size()) throw Error(Errc::InvalidArgument, "dimension mismatch");
  if (!(v.norm() > 0.0)) throw Error(Errc::InvalidArgument, "line direction must be nonzero");
  NormModel norm = NormModel::lp(p, static_cast<int>(x.size()));
  Eigen::VectorXd base = -x;
  double t0 = x.dot(v) / v.squaredNorm();
  double s = line_minimize(norm, (base + t0 * v).eval(), v, x.norm() / v.norm() + 1e-300);
  return (t0 + s) * v;
}

double linearity_defect(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& projector, int dim,
                        int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    Eigen::VectorXd x(dim), y(dim);
    for (int j = 0; j < dim; ++j) x(j) = uniform(rng, -1.0, 1.0);
    for (int j = 0; j < dim; ++j) y(j) = uniform(rng, -1.0, 1.0);
    double c = uniform(rng, -2.0, 2.0);
    Eigen::VectorXd d = projector(x + c * y) - projector(x) - c * projector(y);
    worst = std::max(worst, d.norm() / (1.0 + x.norm() + std::abs(c) * y.norm()));
  }
  return worst;
}

namespace {

struct Split {
  int rank;
  Eigen::MatrixXd row_space, null_space;
};

Split split(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  double tol = 1e-10 * std::max(1.0, s.size() ? s(0) : 0.0);
  int rank = 0;
  while (rank < s.size() && s(rank) > tol) ++rank;
  const Eigen::MatrixXd& v = svd.matrixV();
  return {rank, v.leftCols(rank), v.rightCols(v.cols() - rank)};
}

}  // namespace

Intertwiner construct_intertwiner(const Eigen::MatrixXd& f, const Eigen::MatrixXd& g) {
  if (f.cols() != g.cols()) throw Error(Errc::InvalidArgument, "maps must share their domain");
  Split sf = split(f), sg = split(g);
  auto contained = [](const Eigen::MatrixXd& map, const Eigen::MatrixXd& null_basis) {
    if (null_basis.cols() == 0) return true;
    return (map * null_basis).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, map.norm());
  };
  if (sf.rank != sg.rank || !contained(g, sf.null_space) || !contained(f, sg.null_space))
    throw Error(Errc::KernelMismatch, "maps have different kernels");
  Eigen::MatrixXd fw = f * sf.row_space, gw = g * sf.row_space;
  Eigen::MatrixXd forward = gw * fw.completeOrthogonalDecomposition().pseudoInverse();
  Eigen::MatrixXd backward = fw * gw.completeOrthogonalDecomposition().pseudoInverse();
  return Intertwiner(forward, backward, sf.rank);
}

}  // namespace normproj
