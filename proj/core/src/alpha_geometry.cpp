#include "infogeom/alpha_geometry.hpp"

#include <Eigen/QR>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "infogeom/constants.hpp"
#include "infogeom/errors.hpp"
#include "infogeom/fisher_geometry.hpp"
#include "infogeom/parallel.hpp"

namespace infogeom {

TangentMeasure alpha_connection(double alpha, const Measure& mu, const TangentMeasure& tau,
                                const TangentMeasure& tau1) {
  const double g = fisher_inner(mu, tau, tau1);
  const Eigen::ArrayXd f = mu.density().array();
  const Eigen::ArrayXd product = tau.density().array() * tau1.density().array() / f;
  return TangentMeasure(mu.grid_ptr(), (-((1.0 + alpha) / 2.0) * (product - g * f)).matrix());
}

double metric_derivative(const Measure& mu, const TangentMeasure& tau, const TangentMeasure& tau1,
                         const TangentMeasure& tau2) {
  require_same_grid(mu.grid(), tau.grid());
  require_same_grid(mu.grid(), tau1.grid());
  require_same_grid(mu.grid(), tau2.grid());
  const Eigen::VectorXd& w = mu.grid().weights();
  const Eigen::VectorXd& f = mu.density();
  const Eigen::VectorXd& h = tau.density();
  const Eigen::VectorXd& h1 = tau1.density();
  const Eigen::VectorXd& h2 = tau2.density();
  return -deterministic_sum(mu.size(), [&](std::size_t k) {
    const auto i = static_cast<Eigen::Index>(k);
    return w(i) * h(i) * h1(i) * h2(i) / (f(i) * f(i));
  });
}

double duality_defect(double alpha, const Measure& mu, const TangentMeasure& tau,
                      const TangentMeasure& tau1, const TangentMeasure& tau2) {
  const double lhs = metric_derivative(mu, tau, tau1, tau2);
  const double rhs = fisher_inner(mu, alpha_connection(alpha, mu, tau, tau1), tau2) +
                     fisher_inner(mu, tau1, alpha_connection(-alpha, mu, tau, tau2));
  return std::abs(lhs - rhs);
}

TangentMeasure alpha_curvature(double alpha, const Measure& mu, const TangentMeasure& tau1,
                               const TangentMeasure& tau2, const TangentMeasure& tau) {
  const double g2 = fisher_inner(mu, tau, tau2);
  const double g1 = fisher_inner(mu, tau, tau1);
  const double scale = (1.0 - alpha * alpha) / 4.0;
  return TangentMeasure(mu.grid_ptr(), scale * (g2 * tau1.density() - g1 * tau2.density()));
}

bool alpha_out_of_range(double alpha) { return alpha < -1.0 || alpha > 1.0; }

AlphaGeodesicState AlphaGeodesicState::make(const Measure& mu, const TangentMeasure& velocity,
                                            double alpha) {
  require_same_grid(mu.grid(), velocity.grid());
  return AlphaGeodesicState{mu.grid_ptr(), mu.density(), velocity.density(), alpha, 0.0};
}

Eigen::VectorXd alpha_geodesic_acceleration(const QuadratureGrid& grid, double alpha,
                                            const Eigen::VectorXd& f, const Eigen::VectorXd& fdot) {
  const Eigen::ArrayXd ratio_sq = fdot.array().square() / f.array();
  const double energy = integrate(grid, ratio_sq.matrix());
  return (((1.0 + alpha) / 2.0) * (ratio_sq - energy * f.array())).matrix();
}

namespace {

constexpr double kMeanDriftLimit = 1e-6;
constexpr double kStateMeanTolerance = 1e-8;

void check_positive(const Eigen::VectorXd& f, double t) {
  if (!(f.minCoeff() > constants::kPositivityFloor)) {
    throw DomainError("alpha geodesic: density underflow at t = " + std::to_string(t));
  }
}

}  // namespace

AlphaGeodesicState alpha_geodesic_step(const AlphaGeodesicState& state, double dt) {
  const QuadratureGrid& grid = *state.grid;
  check_positive(state.f, state.t);
  if (std::abs(integrate(grid, state.fdot)) > kStateMeanTolerance) {
    throw DomainError("alpha geodesic: velocity mean is not zero");
  }
  auto accel = [&](const Eigen::VectorXd& f, const Eigen::VectorXd& v) {
    return alpha_geodesic_acceleration(grid, state.alpha, f, v);
  };
  const Eigen::VectorXd& f0 = state.f;
  const Eigen::VectorXd& v0 = state.fdot;

  const Eigen::VectorXd k1f = v0;
  const Eigen::VectorXd k1v = accel(f0, v0);
  const Eigen::VectorXd f1 = f0 + 0.5 * dt * k1f;
  check_positive(f1, state.t + 0.5 * dt);
  const Eigen::VectorXd k2f = v0 + 0.5 * dt * k1v;
  const Eigen::VectorXd k2v = accel(f1, k2f);
  const Eigen::VectorXd f2 = f0 + 0.5 * dt * k2f;
  check_positive(f2, state.t + 0.5 * dt);
  const Eigen::VectorXd k3f = v0 + 0.5 * dt * k2v;
  const Eigen::VectorXd k3v = accel(f2, k3f);
  const Eigen::VectorXd f3 = f0 + dt * k3f;
  check_positive(f3, state.t + dt);
  const Eigen::VectorXd k4f = v0 + dt * k3v;
  const Eigen::VectorXd k4v = accel(f3, k4f);

  AlphaGeodesicState next = state;
  next.f = f0 + (dt / 6.0) * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
  next.fdot = v0 + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  next.t = state.t + dt;
  check_positive(next.f, next.t);

  const double drift = integrate(grid, next.fdot);
  if (std::abs(drift) > kMeanDriftLimit) {
    throw DomainError("alpha geodesic: velocity mean drifted by " + std::to_string(drift));
  }
  next.fdot.array() -= drift;
  return next;
}

AlphaGeodesicState alpha_geodesic_integrate(
    AlphaGeodesicState state, double dt, int steps,
    const std::function<void(const AlphaGeodesicState&)>& observer) {
  if (steps < 0) throw std::invalid_argument("alpha_geodesic_integrate: negative step count");
  if (observer) observer(state);
  for (int i = 0; i < steps; ++i) {
    state = alpha_geodesic_step(state, dt);
    if (observer) observer(state);
  }
  return state;
}

double alpha_geodesic_residual(const QuadratureGrid& grid, double alpha, const Eigen::VectorXd& f,
                               const Eigen::VectorXd& fdot, const Eigen::VectorXd& fddot) {
  const Eigen::ArrayXd ratio = fdot.array() / f.array();
  const Eigen::ArrayXd ratio_dot = fddot.array() / f.array() - ratio.square();
  const double energy = integrate(grid, (ratio.square() * f.array()).matrix());
  const Eigen::ArrayXd residual =
      ratio_dot + ((1.0 - alpha) / 2.0) * ratio.square() + ((1.0 + alpha) / 2.0) * energy;
  return residual.abs().maxCoeff();
}

AlphaShootingResult alpha_geodesic_shoot(const Measure& mu, const Measure& mu1, double alpha, int steps,
                                         double tolerance, int max_iterations) {
  require_same_grid(mu.grid(), mu1.grid());
  if (steps < 1) throw std::invalid_argument("alpha_geodesic_shoot: steps must be positive");
  const double dt = 1.0 / steps;
  // The m-geodesic velocity is exact for alpha = -1 and a good first guess otherwise.
  Eigen::VectorXd velocity = mu1.density() - mu.density();
  // Endpoint miss for a trial velocity; +inf when the trial leaves the domain.
  auto shoot = [&](const Eigen::VectorXd& v, AlphaGeodesicState& start, Eigen::VectorXd& miss) {
    try {
      start = AlphaGeodesicState::make(mu, tangent_from_samples(mu.grid_ptr(), v), alpha);
      miss = mu1.density() - alpha_geodesic_integrate(start, dt, steps).f;
      return miss.cwiseAbs().maxCoeff();
    } catch (const DomainError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  AlphaGeodesicState start;
  Eigen::VectorXd miss;
  double residual = shoot(velocity, start, miss);
  if (!std::isfinite(residual)) throw DomainError("alpha_geodesic_shoot: initial guess leaves the domain");
  // Anderson acceleration of the fixed-point map G(v) = v + miss(v), with a
  // damped plain step as fallback whenever the accelerated step does not
  // reduce the miss.
  constexpr int kDepth = 6;
  std::vector<Eigen::VectorXd> residual_history;
  std::vector<Eigen::VectorXd> image_history;
  Eigen::VectorXd previous_residual;
  Eigen::VectorXd previous_image;
  double weight = 1.0;
  for (int iter = 1; iter <= max_iterations; ++iter) {
    if (residual <= tolerance) return AlphaShootingResult{start, residual, iter};
    const Eigen::VectorXd image = velocity + miss;
    if (previous_residual.size() > 0) {
      residual_history.push_back(miss - previous_residual);
      image_history.push_back(image - previous_image);
      if (static_cast<int>(residual_history.size()) > kDepth) {
        residual_history.erase(residual_history.begin());
        image_history.erase(image_history.begin());
      }
    }
    previous_residual = miss;
    previous_image = image;

    Eigen::VectorXd candidate = image;
    if (!residual_history.empty()) {
      const auto m = static_cast<Eigen::Index>(residual_history.size());
      Eigen::MatrixXd dr(miss.size(), m);
      Eigen::MatrixXd dg(miss.size(), m);
      for (Eigen::Index j = 0; j < m; ++j) {
        dr.col(j) = residual_history[static_cast<std::size_t>(j)];
        dg.col(j) = image_history[static_cast<std::size_t>(j)];
      }
      const Eigen::VectorXd gamma = dr.colPivHouseholderQr().solve(miss);
      candidate = image - dg * gamma;
    }

    AlphaGeodesicState trial_start;
    Eigen::VectorXd trial_miss;
    double trial_residual = shoot(candidate, trial_start, trial_miss);
    if (!(trial_residual < residual)) {
      residual_history.clear();
      image_history.clear();
      previous_residual.resize(0);
      for (weight = std::min(1.0, 2.0 * weight); weight >= 1e-6; weight *= 0.5) {
        candidate = velocity + weight * miss;
        trial_residual = shoot(candidate, trial_start, trial_miss);
        if (trial_residual < residual) break;
      }
      if (!(trial_residual < residual)) break;
    }
    velocity = candidate;
    start = std::move(trial_start);
    miss = std::move(trial_miss);
    residual = trial_residual;
  }
  AlphaShootingResult result{start, residual, max_iterations};
  throw ConvergenceError("alpha_geodesic_shoot: endpoint miss " + std::to_string(result.endpoint_residual) +
                         " after " + std::to_string(max_iterations) + " iterations");
}

Measure m_geodesic(const Measure& mu, const Measure& mu1, double t) {
  require_same_grid(mu.grid(), mu1.grid());
  const Eigen::VectorXd density = (1.0 - t) * mu.density() + t * mu1.density();
  if (!(density.minCoeff() > constants::kPositivityFloor)) {
    throw DomainError("m_geodesic: density is not positive at t = " + std::to_string(t));
  }
  return Measure(mu.grid_ptr(), density);
}

Measure e_geodesic(const Measure& mu, const Measure& mu1, double t, double ell) {
  require_same_grid(mu.grid(), mu1.grid());
  if (!(ell > 0.0)) throw std::invalid_argument("e_geodesic: ell must be positive");
  const double exponent = t / ell;
  const Eigen::ArrayXd f = mu.density().array();
  const Eigen::VectorXd raw = ((mu1.density().array() / f).pow(exponent) * f).matrix();
  return Measure(mu.grid_ptr(), raw / integrate(mu.grid(), raw));
}

TangentMeasure e_geodesic_velocity(const Measure& mu, const Measure& mu1, double ell) {
  require_same_grid(mu.grid(), mu1.grid());
  if (!(ell > 0.0)) throw std::invalid_argument("e_geodesic_velocity: ell must be positive");
  const Eigen::ArrayXd f = mu.density().array();
  const Eigen::ArrayXd log_ratio = (mu1.density().array() / f).log();
  const double mean = integrate(mu.grid(), (log_ratio * f).matrix());
  return tangent_from_samples(mu.grid_ptr(), ((log_ratio - mean) * f / ell).matrix());
}

}  // namespace infogeom
