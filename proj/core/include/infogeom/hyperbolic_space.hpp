#pragma once

// Real hyperbolic space in the Poincaré ball model: metric, distance,
// geodesics, Busemann functions normalized at the origin, and isometries of
// the form rotation ∘ translation together with their boundary maps.
//
// Tangent vectors are given by their Euclidean components in R^d. The metric
// at x is 4 |dx|^2 / (1 - |x|^2)^2.

#include <Eigen/Core>

#include "infogeom/measure_space.hpp"

namespace infogeom {

/// A point of the open unit ball, |x| < 1 - 1e-9.
class BallPoint {
 public:
  /// Throws DomainError outside the ball, std::invalid_argument for d < 2.
  explicit BallPoint(Eigen::VectorXd coords);

  static BallPoint origin(int dim);

  const Eigen::VectorXd& coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  double squared_norm() const { return coords_.squaredNorm(); }

 private:
  Eigen::VectorXd coords_;
};

/// A point of the boundary sphere, |theta| = 1 within 1e-12.
class IdealPoint {
 public:
  /// Throws DomainError when the vector is not a unit vector.
  explicit IdealPoint(Eigen::VectorXd direction);

  const Eigen::VectorXd& direction() const { return direction_; }
  int dim() const { return static_cast<int>(direction_.size()); }

 private:
  Eigen::VectorXd direction_;
};

/// Möbius translation T_a(x), the isometry taking the origin to a. Also valid
/// on the boundary sphere.
Eigen::VectorXd mobius_translate(const Eigen::VectorXd& a, const Eigen::VectorXd& x);

/// g_x(u, v) = 4 <u, v> / (1 - |x|^2)^2.
double metric_inner(const BallPoint& x, const Eigen::VectorXd& u, const Eigen::VectorXd& v);
double g_norm(const BallPoint& x, const Eigen::VectorXd& u);

/// Euclidean length of a g-unit vector at x: (1 - |x|^2) / 2.
double unit_scale(const BallPoint& x);

/// 2 artanh |T_{-x}(y)|.
double hyp_distance(const BallPoint& x, const BallPoint& y);

/// Unit-speed geodesic through x with g-unit initial velocity u, at time t.
/// Throws std::invalid_argument if |u|_g differs from 1 by more than 1e-8.
BallPoint hyp_geodesic(const BallPoint& x, const Eigen::VectorXd& u, double t);

/// Riemannian exponential map exp_x(v) for any tangent vector v.
BallPoint ball_exp(const BallPoint& x, const Eigen::VectorXd& v);

/// B_theta(x) = log(|x - theta|^2 / (1 - |x|^2)). Throws DomainError when x
/// is within 1e-9 of theta.
double busemann(const IdealPoint& theta, const BallPoint& x);

/// Riemannian gradient of B_theta at x (Euclidean components); g-norm 1.
Eigen::VectorXd busemann_gradient(const IdealPoint& theta, const BallPoint& x);

/// Euclidean gradient 2(x - theta)/|x - theta|^2 + 2x/(1 - |x|^2).
Eigen::VectorXd busemann_euclidean_gradient(const IdealPoint& theta, const BallPoint& x);

/// (∇dB_theta)_x(u, v) = g(u, v) - g(u, ∇B_theta) g(v, ∇B_theta).
double busemann_hessian(const IdealPoint& theta, const BallPoint& x, const Eigen::VectorXd& u,
                        const Eigen::VectorXd& v);

/// The isometry x ↦ R T_a(x) with R orthogonal and |a| < 1.
class MoebiusIsometry {
 public:
  /// Throws std::invalid_argument for non-orthogonal R (1e-12), mismatched
  /// sizes, or |a| >= 1.
  MoebiusIsometry(Eigen::MatrixXd rotation, Eigen::VectorXd translation);

  static MoebiusIsometry identity(int dim);
  static MoebiusIsometry rotation(Eigen::MatrixXd r);
  static MoebiusIsometry translation(Eigen::VectorXd a);
  /// Rotation of the plane by `angle` (d = 2).
  static MoebiusIsometry rotation2d(double angle);
  /// Rotation of R^3 about `axis` by `angle`.
  static MoebiusIsometry rotation3d(const Eigen::Vector3d& axis, double angle);

  const Eigen::MatrixXd& rotation_matrix() const { return rotation_; }
  const Eigen::VectorXd& translation_vector() const { return translation_; }
  int dim() const { return static_cast<int>(translation_.size()); }

  BallPoint apply(const BallPoint& x) const;
  Eigen::VectorXd apply_raw(const Eigen::VectorXd& x) const;

  /// The boundary extension phi-hat.
  IdealPoint boundary(const IdealPoint& theta) const;

  MoebiusIsometry inverse() const;

  /// this ∘ other, recovered numerically: the image b of the origin fixes the
  /// translation part and T_{-b} ∘ this ∘ other is linear.
  MoebiusIsometry compose(const MoebiusIsometry& other) const;

 private:
  Eigen::MatrixXd rotation_;
  Eigen::VectorXd translation_;
};

inline BallPoint apply_isometry(const MoebiusIsometry& phi, const BallPoint& x) { return phi.apply(x); }
inline IdealPoint boundary_map(const MoebiusIsometry& phi, const IdealPoint& theta) {
  return phi.boundary(theta);
}

/// Intrinsic Jacobian of phi-hat on S^{d-1} at theta by central differences
/// (step 1e-6) in an orthonormal tangent frame.
double boundary_jacobian(const MoebiusIsometry& phi, const IdealPoint& theta);

/// Closed-form Jacobian of phi-hat: ((1 - |a|^2) / |theta + a|^2)^{d-1}.
double boundary_jacobian_exact(const MoebiusIsometry& phi, const IdealPoint& theta);

/// phi-hat as a BoundaryMap for push-forwards, with the closed-form Jacobian
/// of its inverse.
BoundaryMap to_boundary_map(const MoebiusIsometry& phi);

/// |B_theta(phi x) - B_{phi-hat^{-1} theta}(x) - B_theta(phi 0)|.
double cocycle_defect(const MoebiusIsometry& phi, const IdealPoint& theta, const BallPoint& x);

}  // namespace infogeom
