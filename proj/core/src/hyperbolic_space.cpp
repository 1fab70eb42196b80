#include "infogeom/hyperbolic_space.hpp"

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>
#include <string>

#include "infogeom/constants.hpp"
#include "infogeom/errors.hpp"

namespace infogeom {

BallPoint::BallPoint(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw std::invalid_argument("BallPoint: dimension must be at least 2");
  if (!coords_.allFinite()) throw DomainError("BallPoint: non-finite coordinates");
  const double norm = coords_.norm();
  if (!(norm < 1.0 - constants::kBallMargin)) {
    throw DomainError("BallPoint: norm " + std::to_string(norm) + " is not inside the ball");
  }
}

BallPoint BallPoint::origin(int dim) { return BallPoint(Eigen::VectorXd::Zero(dim)); }

IdealPoint::IdealPoint(Eigen::VectorXd direction) : direction_(std::move(direction)) {
  if (direction_.size() < 2) throw std::invalid_argument("IdealPoint: dimension must be at least 2");
  const double norm = direction_.norm();
  if (!(std::abs(norm - 1.0) <= constants::kSphereTolerance)) {
    throw DomainError("IdealPoint: norm " + std::to_string(norm) + " is not 1");
  }
}

Eigen::VectorXd mobius_translate(const Eigen::VectorXd& a, const Eigen::VectorXd& x) {
  const double ax = a.dot(x);
  const double aa = a.squaredNorm();
  const double xx = x.squaredNorm();
  return ((1.0 + 2.0 * ax + xx) * a + (1.0 - aa) * x) / (1.0 + 2.0 * ax + aa * xx);
}

namespace {

void require_dim(int a, int b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                                " vs " + std::to_string(b) + ")");
  }
}

void require_vector(const BallPoint& x, const Eigen::VectorXd& u, const char* what) {
  require_dim(x.dim(), static_cast<int>(u.size()), what);
}

// Keeps a computed point inside the validity margin of BallPoint.
BallPoint clamp_to_ball(Eigen::VectorXd y) {
  const double limit = 1.0 - 2.0 * constants::kBallMargin;
  const double norm = y.norm();
  if (norm > limit) y *= limit / norm;
  return BallPoint(std::move(y));
}

}  // namespace

double unit_scale(const BallPoint& x) { return (1.0 - x.squared_norm()) / 2.0; }

double metric_inner(const BallPoint& x, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  require_vector(x, u, "metric_inner");
  require_vector(x, v, "metric_inner");
  const double s = unit_scale(x);
  return u.dot(v) / (s * s);
}

double g_norm(const BallPoint& x, const Eigen::VectorXd& u) { return std::sqrt(metric_inner(x, u, u)); }

double hyp_distance(const BallPoint& x, const BallPoint& y) {
  require_dim(x.dim(), y.dim(), "hyp_distance");
  const double r = mobius_translate(-x.coords(), y.coords()).norm();
  return 2.0 * std::atanh(std::min(r, 1.0));
}

BallPoint ball_exp(const BallPoint& x, const Eigen::VectorXd& v) {
  require_vector(x, v, "ball_exp");
  const double length = g_norm(x, v);
  if (length == 0.0) return x;
  // T_x is an isometry with differential (1 - |x|^2) I at the origin, so the
  // direction of v carries over unchanged.
  const Eigen::VectorXd at_origin = std::tanh(length / 2.0) * v.normalized();
  return clamp_to_ball(mobius_translate(x.coords(), at_origin));
}

BallPoint hyp_geodesic(const BallPoint& x, const Eigen::VectorXd& u, double t) {
  const double speed = g_norm(x, u);
  if (std::abs(speed - 1.0) > constants::kUnitSpeedTolerance) {
    throw std::invalid_argument("hyp_geodesic: velocity has g-norm " + std::to_string(speed) +
                                ", expected 1");
  }
  if (t == 0.0) return x;
  const Eigen::VectorXd direction = (t > 0.0 ? 1.0 : -1.0) * u.normalized();
  const Eigen::VectorXd at_origin = std::tanh(std::abs(t) / 2.0) * direction;
  return clamp_to_ball(mobius_translate(x.coords(), at_origin));
}

namespace {

constexpr double kBusemannGuard = 1e-9;

double checked_gap(const IdealPoint& theta, const BallPoint& x) {
  require_dim(theta.dim(), x.dim(), "busemann");
  const double gap = (x.coords() - theta.direction()).squaredNorm();
  if (!(gap >= kBusemannGuard * kBusemannGuard)) {
    throw DomainError("busemann: point within 1e-9 of the ideal point");
  }
  return gap;
}

}  // namespace

double busemann(const IdealPoint& theta, const BallPoint& x) {
  const double gap = checked_gap(theta, x);
  // Normalized at the base point; |theta|^2 is 1 only up to rounding.
  if (x.squared_norm() == 0.0) return 0.0;
  return std::log(gap / (1.0 - x.squared_norm()));
}

Eigen::VectorXd busemann_euclidean_gradient(const IdealPoint& theta, const BallPoint& x) {
  const double gap = checked_gap(theta, x);
  const Eigen::VectorXd& p = x.coords();
  return 2.0 * (p - theta.direction()) / gap + 2.0 * p / (1.0 - x.squared_norm());
}

Eigen::VectorXd busemann_gradient(const IdealPoint& theta, const BallPoint& x) {
  const double s = unit_scale(x);
  return busemann_euclidean_gradient(theta, x) * (s * s);
}

double busemann_hessian(const IdealPoint& theta, const BallPoint& x, const Eigen::VectorXd& u,
                        const Eigen::VectorXd& v) {
  const Eigen::VectorXd grad = busemann_gradient(theta, x);
  return metric_inner(x, u, v) - metric_inner(x, u, grad) * metric_inner(x, v, grad);
}

MoebiusIsometry::MoebiusIsometry(Eigen::MatrixXd rotation, Eigen::VectorXd translation)
    : rotation_(std::move(rotation)), translation_(std::move(translation)) {
  const Eigen::Index d = translation_.size();
  if (d < 2) throw std::invalid_argument("MoebiusIsometry: dimension must be at least 2");
  if (rotation_.rows() != d || rotation_.cols() != d) {
    throw std::invalid_argument("MoebiusIsometry: rotation must be " + std::to_string(d) + "x" +
                                std::to_string(d));
  }
  const double defect =
      (rotation_.transpose() * rotation_ - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
  if (!(defect <= constants::kOrthogonalityTolerance)) {
    throw std::invalid_argument("MoebiusIsometry: rotation is not orthogonal (defect " +
                                std::to_string(defect) + ")");
  }
  if (!(translation_.norm() < 1.0)) {
    throw std::invalid_argument("MoebiusIsometry: translation must lie inside the unit ball");
  }
}

MoebiusIsometry MoebiusIsometry::identity(int dim) {
  return MoebiusIsometry(Eigen::MatrixXd::Identity(dim, dim), Eigen::VectorXd::Zero(dim));
}

MoebiusIsometry MoebiusIsometry::rotation(Eigen::MatrixXd r) {
  const Eigen::Index d = r.rows();
  return MoebiusIsometry(std::move(r), Eigen::VectorXd::Zero(d));
}

MoebiusIsometry MoebiusIsometry::translation(Eigen::VectorXd a) {
  const Eigen::Index d = a.size();
  return MoebiusIsometry(Eigen::MatrixXd::Identity(d, d), std::move(a));
}

MoebiusIsometry MoebiusIsometry::rotation2d(double angle) {
  Eigen::MatrixXd r(2, 2);
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return rotation(std::move(r));
}

MoebiusIsometry MoebiusIsometry::rotation3d(const Eigen::Vector3d& axis, double angle) {
  const Eigen::Matrix3d r = Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
  return rotation(Eigen::MatrixXd(r));
}

Eigen::VectorXd MoebiusIsometry::apply_raw(const Eigen::VectorXd& x) const {
  require_dim(dim(), static_cast<int>(x.size()), "MoebiusIsometry::apply");
  return rotation_ * mobius_translate(translation_, x);
}

BallPoint MoebiusIsometry::apply(const BallPoint& x) const { return clamp_to_ball(apply_raw(x.coords())); }

IdealPoint MoebiusIsometry::boundary(const IdealPoint& theta) const {
  // Pure rotations keep unit length; renormalizing would only add rounding.
  if (translation_.isZero(0.0)) return IdealPoint(rotation_ * theta.direction());
  return IdealPoint(apply_raw(theta.direction()).normalized());
}

MoebiusIsometry MoebiusIsometry::inverse() const {
  // (R T_a)^{-1} = T_{-a} R^T = R^T T_{-Ra}.
  return MoebiusIsometry(rotation_.transpose(), -(rotation_ * translation_));
}

MoebiusIsometry MoebiusIsometry::compose(const MoebiusIsometry& other) const {
  require_dim(dim(), other.dim(), "MoebiusIsometry::compose");
  const Eigen::Index d = dim();
  auto both = [&](const Eigen::VectorXd& x) { return apply_raw(other.apply_raw(x)); };
  const Eigen::VectorXd b = both(Eigen::VectorXd::Zero(d));
  // psi = T_{-b} ∘ this ∘ other fixes the origin, hence is orthogonal and linear.
  Eigen::MatrixXd psi(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const Eigen::VectorXd e = 0.5 * Eigen::VectorXd::Unit(d, i);
    psi.col(i) = 2.0 * mobius_translate(-b, both(e));
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(psi, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXd r = svd.matrixU() * svd.matrixV().transpose();
  // T_b ∘ psi = psi ∘ T_{psi^T b}.
  return MoebiusIsometry(r, r.transpose() * b);
}

double boundary_jacobian(const MoebiusIsometry& phi, const IdealPoint& theta) {
  require_dim(phi.dim(), theta.dim(), "boundary_jacobian");
  auto map = [&phi](const Eigen::VectorXd& p) -> Eigen::VectorXd { return phi.apply_raw(p).normalized(); };
  const double jacobian = intrinsic_jacobian(map, theta.direction(), constants::kJacobianStep);
  if (!(jacobian > 0.0) || !std::isfinite(jacobian)) {
    throw DomainError("boundary_jacobian: degenerate finite-difference Jacobian");
  }
  return jacobian;
}

namespace {

// Jacobian of T_{-a} on the sphere at p: ((1 - |a|^2) / |p - a|^2)^{d-1}.
double translation_inverse_jacobian(const Eigen::VectorXd& a, const Eigen::VectorXd& p) {
  const double aa = a.squaredNorm();
  if (aa == 0.0) return 1.0;
  const int exponent = static_cast<int>(a.size()) - 1;
  return std::pow((1.0 - aa) / (p - a).squaredNorm(), exponent);
}

}  // namespace

double boundary_jacobian_exact(const MoebiusIsometry& phi, const IdealPoint& theta) {
  require_dim(phi.dim(), theta.dim(), "boundary_jacobian_exact");
  return translation_inverse_jacobian(-phi.translation_vector(), theta.direction());
}

BoundaryMap to_boundary_map(const MoebiusIsometry& phi) {
  const MoebiusIsometry inv = phi.inverse();
  BoundaryMap map;
  map.forward = [phi](const Eigen::VectorXd& p) -> Eigen::VectorXd { return phi.apply_raw(p).normalized(); };
  map.inverse = [inv](const Eigen::VectorXd& p) -> Eigen::VectorXd { return inv.apply_raw(p).normalized(); };
  // phi^{-1} = T_{-a} R^T, and R^T has unit Jacobian.
  map.inverse_jacobian = [phi](const Eigen::VectorXd& p) {
    return translation_inverse_jacobian(phi.translation_vector(), phi.rotation_matrix().transpose() * p);
  };
  return map;
}

double cocycle_defect(const MoebiusIsometry& phi, const IdealPoint& theta, const BallPoint& x) {
  const IdealPoint pulled = phi.inverse().boundary(theta);
  const BallPoint origin = BallPoint::origin(phi.dim());
  return std::abs(busemann(theta, phi.apply(x)) - busemann(pulled, x) - busemann(theta, phi.apply(origin)));
}

}  // namespace infogeom
