#include "infogeom/fisher_geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "infogeom/constants.hpp"
#include "infogeom/errors.hpp"
#include "infogeom/parallel.hpp"

namespace infogeom {

double fisher_inner(const Measure& mu, const TangentMeasure& tau, const TangentMeasure& tau1) {
  require_same_grid(mu.grid(), tau.grid());
  require_same_grid(mu.grid(), tau1.grid());
  const Eigen::VectorXd& w = mu.grid().weights();
  const Eigen::VectorXd& f = mu.density();
  const Eigen::VectorXd& h = tau.density();
  const Eigen::VectorXd& h1 = tau1.density();
  return deterministic_sum(mu.size(), [&](std::size_t k) {
    const auto i = static_cast<Eigen::Index>(k);
    return w(i) * h(i) * h1(i) / f(i);
  });
}

double fisher_norm(const Measure& mu, const TangentMeasure& tau) {
  return std::sqrt(fisher_inner(mu, tau, tau));
}

TangentMeasure levi_civita(const Measure& mu, const TangentMeasure& tau, const TangentMeasure& tau1) {
  const double g = fisher_inner(mu, tau, tau1);
  const Eigen::ArrayXd f = mu.density().array();
  const Eigen::ArrayXd product = tau.density().array() * tau1.density().array() / f;
  return TangentMeasure(mu.grid_ptr(), (-0.5 * (product - g * f)).matrix());
}

TangentMeasure curvature(const Measure& mu, const TangentMeasure& tau1, const TangentMeasure& tau2,
                         const TangentMeasure& tau) {
  const double g2 = fisher_inner(mu, tau, tau2);
  const double g1 = fisher_inner(mu, tau, tau1);
  return TangentMeasure(mu.grid_ptr(), 0.25 * (g2 * tau1.density() - g1 * tau2.density()));
}

Measure geodesic_point(const Measure& mu, const TangentMeasure& tau, double t) {
  const double speed = fisher_norm(mu, tau);
  if (std::abs(speed - 1.0) > constants::kUnitSpeedTolerance) {
    throw std::invalid_argument("geodesic_point: velocity has G-norm " + std::to_string(speed) +
                                ", expected 1");
  }
  const double c = std::cos(t / 2.0);
  const double s = std::sin(t / 2.0);
  const Eigen::ArrayXd f = mu.density().array();
  const Eigen::ArrayXd factor = c + s * tau.density().array() / f;
  const Eigen::VectorXd density = (factor.square() * f).matrix();
  if (!(density.minCoeff() > constants::kPositivityFloor)) {
    throw DomainError("geodesic_point: density vanishes at t = " + std::to_string(t) +
                      "; the geodesic has left the space of positive measures");
  }
  // Mass is c^2 + s^2 |tau|^2; dividing absorbs the unit-speed tolerance.
  return Measure(mu.grid_ptr(), density / integrate(mu.grid(), density));
}

double bhattacharyya(const Measure& mu, const Measure& mu1) {
  require_same_grid(mu.grid(), mu1.grid());
  const Eigen::VectorXd& w = mu.grid().weights();
  const Eigen::VectorXd& f = mu.density();
  const Eigen::VectorXd& f1 = mu1.density();
  return deterministic_sum(mu.size(), [&](std::size_t k) {
    const auto i = static_cast<Eigen::Index>(k);
    return w(i) * std::sqrt(f(i) * f1(i));
  });
}

double ell_distance(const Measure& mu, const Measure& mu1) {
  require_same_grid(mu.grid(), mu1.grid());
  const Eigen::VectorXd& w = mu.grid().weights();
  const Eigen::VectorXd& f = mu.density();
  const Eigen::VectorXd& f1 = mu1.density();
  const double squared = deterministic_sum(mu.size(), [&](std::size_t k) {
    const auto i = static_cast<Eigen::Index>(k);
    const double diff = std::sqrt(f(i)) - std::sqrt(f1(i));
    return w(i) * diff * diff;
  });
  // |sqrt f - sqrt f1|^2 = 2 - 2 cos(l/2) = 4 sin^2(l/4).
  const double half_chord = std::min(1.0, std::sqrt(squared) / 2.0);
  return 4.0 * std::asin(half_chord);
}

Measure geometric_mean(const Measure& mu, const Measure& mu1) {
  require_same_grid(mu.grid(), mu1.grid());
  const Eigen::VectorXd root = (mu.density().array() * mu1.density().array()).sqrt().matrix();
  return Measure(mu.grid_ptr(), root / integrate(mu.grid(), root));
}

GeodesicSegment connect(const Measure& mu, const Measure& mu1) {
  require_same_grid(mu.grid(), mu1.grid());
  const double length = ell_distance(mu, mu1);
  if (length == 0.0 || mu.density() == mu1.density()) {
    return GeodesicSegment{mu, mu1, TangentMeasure::zero(mu.grid_ptr()), 0.0};
  }
  if (!(length < std::numbers::pi)) {
    throw DomainError("connect: distance " + std::to_string(length) +
                      " is outside the totally normal range (< pi)");
  }
  const Measure sigma = geometric_mean(mu, mu1);
  const Eigen::VectorXd direction = (sigma.density() - mu.density()) / std::tan(length / 2.0);
  return GeodesicSegment{mu, mu1, tangent_from_samples(mu.grid_ptr(), direction), length};
}

Measure evaluate(const GeodesicSegment& seg, double t) {
  if (seg.degenerate()) return seg.start;
  return geodesic_point(seg.start, seg.initial_velocity, t);
}

SimplexWeights evaluate_simplex(const GeodesicSegment& seg, double t) {
  const double l = seg.length;
  if (t < 0.0 || t > l) {
    throw std::invalid_argument("evaluate_simplex: t = " + std::to_string(t) + " outside [0, " +
                                std::to_string(l) + "]");
  }
  if (seg.degenerate()) return SimplexWeights{1.0, 0.0, 0.0};
  const double denom = std::pow(std::sin(l / 2.0), 2);
  const double left = std::sin((l - t) / 2.0);
  const double right = std::sin(t / 2.0);
  return SimplexWeights{left * left / denom, right * right / denom,
                        2.0 * std::cos(l / 2.0) * left * right / denom};
}

Measure simplex_point(const GeodesicSegment& seg, double t) {
  const SimplexWeights abc = evaluate_simplex(seg, t);
  if (seg.degenerate()) return seg.start;
  const Measure sigma = geometric_mean(seg.start, seg.end);
  const Eigen::VectorXd density =
      abc.a * seg.start.density() + abc.b * seg.end.density() + abc.c * sigma.density();
  return Measure(seg.start.grid_ptr(), density / integrate(seg.start.grid(), density));
}

Measure exp_map(const Measure& mu, const TangentMeasure& tau) {
  const double norm = fisher_norm(mu, tau);
  if (norm == 0.0) return mu;
  if (!(norm < std::numbers::pi)) {
    throw DomainError("exp_map: |tau|_G = " + std::to_string(norm) + " is not below pi");
  }
  TangentMeasure unit = tau;
  unit *= 1.0 / norm;
  return geodesic_point(mu, unit, norm);
}

}  // namespace infogeom
