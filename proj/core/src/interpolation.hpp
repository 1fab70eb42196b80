#pragma once

#include <Eigen/Core>

namespace infogeom::detail {

/// Periodic cubic spline through y_0..y_{n-1} at unit-spaced abscissae 0..n-1.
class PeriodicSpline {
 public:
  PeriodicSpline() = default;
  explicit PeriodicSpline(const Eigen::VectorXd& values);

  /// Evaluates at position s (any real; wrapped modulo n). Positions within
  /// kSnap of a knot return the knot value exactly.
  double operator()(double s) const;

  static constexpr double kSnap = 1e-10;

 private:
  Eigen::VectorXd y_;
  Eigen::VectorXd second_;  // spline second derivatives at the knots
};

}  // namespace infogeom::detail
