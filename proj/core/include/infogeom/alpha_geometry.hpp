#pragma once

// The alpha-connection family on positive densities: covariant derivatives,
// the duality defect, alpha-curvature, an RK4 integrator for alpha-geodesics,
// and the closed-form m- and e-geodesics.

#include <functional>

#include "infogeom/measure_space.hpp"

namespace infogeom {

/// ∇^(alpha)_tau tau1 = -((1+alpha)/2) ((dtau/dmu)(dtau1/dmu) - G_mu(tau, tau1)) mu.
TangentMeasure alpha_connection(double alpha, const Measure& mu, const TangentMeasure& tau,
                                const TangentMeasure& tau1);

/// tau G(tau1, tau2) = -∫ (dtau/dmu)(dtau1/dmu)(dtau2/dmu) dmu, the derivative of
/// the metric along the constant field tau.
double metric_derivative(const Measure& mu, const TangentMeasure& tau, const TangentMeasure& tau1,
                         const TangentMeasure& tau2);

/// |tau G(tau1, tau2) - G(∇^(alpha)_tau tau1, tau2) - G(tau1, ∇^(-alpha)_tau tau2)|.
double duality_defect(double alpha, const Measure& mu, const TangentMeasure& tau,
                      const TangentMeasure& tau1, const TangentMeasure& tau2);

/// R^(alpha)(tau1, tau2) tau = ((1 - alpha^2)/4) (G(tau, tau2) tau1 - G(tau, tau1) tau2).
TangentMeasure alpha_curvature(double alpha, const Measure& mu, const TangentMeasure& tau1,
                               const TangentMeasure& tau2, const TangentMeasure& tau);

/// True when alpha lies outside [-1, 1]; the formulas extend but such values
/// are outside the usual range of the family.
bool alpha_out_of_range(double alpha);

/// Density and density velocity of an alpha-geodesic at time t.
struct AlphaGeodesicState {
  GridPtr grid;
  Eigen::VectorXd f;
  Eigen::VectorXd fdot;
  double alpha = 0.0;
  double t = 0.0;

  /// Validates positivity of f and zero mean of fdot (within 1e-8).
  static AlphaGeodesicState make(const Measure& mu, const TangentMeasure& velocity, double alpha);
};

/// f'' = ((1+alpha)/2) (fdot^2/f - E f), E = ∫ fdot^2 / f dlambda.
///
/// This is the alpha-geodesic equation
///   d/dt(fdot/f) + ((1-alpha)/2)(fdot/f)^2 + ((1+alpha)/2) ∫ (fdot/f)^2 f dlambda = 0
/// rewritten with d/dt(fdot/f) = fddot/f - (fdot/f)^2.
Eigen::VectorXd alpha_geodesic_acceleration(const QuadratureGrid& grid, double alpha,
                                            const Eigen::VectorXd& f, const Eigen::VectorXd& fdot);

/// One classical RK4 step of size dt. fdot is re-projected to zero mean after
/// the step. Throws DomainError when f stops being positive or the mean of
/// fdot drifted by more than 1e-6 before projection.
AlphaGeodesicState alpha_geodesic_step(const AlphaGeodesicState& state, double dt);

/// `steps` RK4 steps. `observer`, when set, sees the initial state and the
/// state after every step.
AlphaGeodesicState alpha_geodesic_integrate(
    AlphaGeodesicState state, double dt, int steps,
    const std::function<void(const AlphaGeodesicState&)>& observer = {});

/// Sup over nodes of the alpha-geodesic equation residual, given samples of
/// f, its first and its second time derivative at one instant.
double alpha_geodesic_residual(const QuadratureGrid& grid, double alpha, const Eigen::VectorXd& f,
                               const Eigen::VectorXd& fdot, const Eigen::VectorXd& fddot);

/// Result of solving the two-point problem for an alpha-geodesic on t in [0, 1].
struct AlphaShootingResult {
  AlphaGeodesicState initial;  // at t = 0 with the solved velocity
  double endpoint_residual = 0.0;  // sup |f(1) - f1|
  int iterations = 0;
};

/// Finds the initial velocity whose alpha-geodesic reaches mu1 at t = 1 by
/// shooting: integrate with `steps` RK4 steps, correct the velocity by the
/// endpoint miss, repeat. Throws ConvergenceError if the miss does not drop
/// below `tolerance` within `max_iterations`.
AlphaShootingResult alpha_geodesic_shoot(const Measure& mu, const Measure& mu1, double alpha,
                                         int steps = 1000, double tolerance = 1e-11,
                                         int max_iterations = 200);

/// (1-t) mu + t mu1. Throws DomainError if the density is not positive at t.
Measure m_geodesic(const Measure& mu, const Measure& mu1, double t);

/// Z^{-1} (dmu1/dmu)^{t/ell} mu with Z the normalizer. ell > 0 (default 1).
Measure e_geodesic(const Measure& mu, const Measure& mu1, double t, double ell = 1.0);

/// Initial velocity of e_geodesic(mu, mu1, ., ell) at t = 0:
/// f (L - ∫ L f dlambda) / ell with L = log(f1/f).
TangentMeasure e_geodesic_velocity(const Measure& mu, const Measure& mu1, double ell = 1.0);

}  // namespace infogeom
