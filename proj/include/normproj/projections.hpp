#pragma once

#include "normproj/norms.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>

namespace normproj {

/// Euclidean unit normal of a hyperplane, with first nonzero coordinate positive.
class HyperplaneNormal {
 public:
  explicit HyperplaneNormal(const Eigen::VectorXd& w);
  /// Planar normal (cos a, sin a).
  static HyperplaneNormal from_angle(double a);

  const Eigen::VectorXd& vector() const { return w_; }
  int dim() const { return static_cast<int>(w_.size()); }
  /// Planar only: polar angle of the canonical normal, in (−π/2, π/2].
  double angle() const;
  /// Planar only: unit direction spanning the line w^⊥, (−w_y, w_x).
  Eigen::Vector2d line_direction() const;

  bool operator==(const HyperplaneNormal& o) const { return w_ == o.w_; }

 private:
  Eigen::VectorXd w_;
};

/// Linear projection onto w^⊥ along span(u).
struct LinearProjector {
  HyperplaneNormal target;
  Eigen::VectorXd kernel_dir;
  Eigen::MatrixXd matrix;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return matrix * x; }
};

/// x ↦ x − (⟨x,w⟩/⟨u,w⟩)u. Throws DegenerateSplitting when u is (nearly) inside w^⊥.
LinearProjector make_projector(const HyperplaneNormal& target, const Eigen::VectorXd& kernel_dir);

enum class FamilyProvenance { from_norm, from_gmap, angle_family };

const char* to_string(FamilyProvenance p) noexcept;

/// A projector for every hyperplane.
class ProjectionFamily {
 public:
  using Maker = std::function<LinearProjector(const HyperplaneNormal&)>;

  ProjectionFamily(int dim, FamilyProvenance provenance, Maker make);

  LinearProjector projector(const HyperplaneNormal& v) const { return make_(v); }
  FamilyProvenance provenance() const { return provenance_; }
  int dim() const { return dim_; }

 private:
  int dim_;
  FamilyProvenance provenance_;
  Maker make_;
};

using GMap = std::function<HyperplaneNormal(const HyperplaneNormal&)>;

/// Closest-point projections of a norm: kernel direction G⁻¹(w).
ProjectionFamily family_from_norm(const NormModel& norm);
/// P_V = orthogonal projection onto g(V).
ProjectionFamily family_from_gmap(GMap gmap, int dim = 2);
/// Planar family: for the line L with angle a ∈ [0,π), project onto L along the line
/// at counterclockwise angle alpha(a) from L. Throws DegenerateSplitting if alpha leaves (0,π).
ProjectionFamily angle_family(std::function<double(double)> alpha);

/// The hyperplane (ker P_V)^⊥.
HyperplaneNormal associated_g(const ProjectionFamily& family, const HyperplaneNormal& v);

/// Closest point of w^⊥ to x, through the support point of w.
Eigen::VectorXd project_hyperplane(const NormModel& norm, const HyperplaneNormal& w, const Eigen::VectorXd& x);
/// Same, by minimizing ‖x − q‖ over q ∈ w^⊥ numerically.
Eigen::VectorXd project_hyperplane_direct(const NormModel& norm, const HyperplaneNormal& w,
                                          const Eigen::VectorXd& x);
/// Minimizes ‖x − Bz‖ over z by coordinate descent; B has orthonormal columns.
Eigen::VectorXd project_subspace_direct(const NormModel& norm, const Eigen::MatrixXd& basis,
                                        const Eigen::VectorXd& x);

/// Closest point of span(basis) in the norm √(xᵀQx), through Ψ = Q^{1/2}.
Eigen::VectorXd conjugate_projection(const Eigen::MatrixXd& q, const Eigen::MatrixXd& basis, const Eigen::VectorXd& x);
/// Symmetric square root with eigenvalues floored at 1e−12.
Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& q);

/// Closest point t·v of the line span(v) to x in the ℓ^p norm.
Eigen::VectorXd project_line_lp(double p, const Eigen::VectorXd& v, const Eigen::VectorXd& x);

/// max |P(x + c y) − P(x) − c P(y)| / (1 + |x| + |c||y|) over random x, y ∈ [−1,1]^n, c ∈ [−2,2].
double linearity_defect(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& projector, int dim,
                        int samples, std::uint64_t seed);

/// Linear bijection h: range(f) → range(g) with h∘f = g, for maps with a common kernel.
class Intertwiner {
 public:
  Intertwiner(Eigen::MatrixXd forward, Eigen::MatrixXd backward, int rank)
      : forward_(std::move(forward)), backward_(std::move(backward)), rank_(rank) {}

  Eigen::VectorXd apply(const Eigen::VectorXd& y) const { return forward_ * y; }
  Eigen::VectorXd apply_inverse(const Eigen::VectorXd& z) const { return backward_ * z; }
  const Eigen::MatrixXd& matrix() const { return forward_; }
  const Eigen::MatrixXd& inverse_matrix() const { return backward_; }
  int rank() const { return rank_; }

 private:
  Eigen::MatrixXd forward_, backward_;
  int rank_;
};

Intertwiner construct_intertwiner(const Eigen::MatrixXd& f, const Eigen::MatrixXd& g);

}  // namespace normproj
