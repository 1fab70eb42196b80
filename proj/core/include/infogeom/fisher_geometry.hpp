#pragma once

// Riemannian structure of the space of positive probability densities under
// the Fisher metric: inner product, Levi-Civita connection on constant vector
// fields, curvature, closed-form geodesics and the distance function.

#include <optional>

#include "infogeom/measure_space.hpp"

namespace infogeom {

/// G_mu(tau, tau1) = Σ w h h1 / f.
double fisher_inner(const Measure& mu, const TangentMeasure& tau, const TangentMeasure& tau1);
double fisher_norm(const Measure& mu, const TangentMeasure& tau);

/// (∇_tau tau1)_mu = -1/2 ((dtau/dmu)(dtau1/dmu) - G_mu(tau, tau1)) mu.
TangentMeasure levi_civita(const Measure& mu, const TangentMeasure& tau, const TangentMeasure& tau1);

/// R_mu(tau1, tau2) tau = 1/4 (G(tau, tau2) tau1 - G(tau, tau1) tau2).
TangentMeasure curvature(const Measure& mu, const TangentMeasure& tau1, const TangentMeasure& tau2,
                         const TangentMeasure& tau);

/// Unit-speed geodesic (cos(t/2) + sin(t/2) dtau/dmu)^2 mu.
///
/// Requires |tau|_G = 1 within 1e-8. Throws DomainError when the density at
/// parameter t is not positive (the curve has left the space of positive
/// measures). The closed form is 2*pi periodic in t.
Measure geodesic_point(const Measure& mu, const TangentMeasure& tau, double t);

/// ∫ sqrt(dmu1/dmu) dmu, the cosine of half the Fisher distance.
double bhattacharyya(const Measure& mu, const Measure& mu1);

/// Fisher distance 2 arccos(bhattacharyya), evaluated as
/// 4 asin(|sqrt f - sqrt f1|_{L2} / 2) which is the same angle without the
/// cancellation of arccos near 1.
double ell_distance(const Measure& mu, const Measure& mu1);

/// Normalized geometric mean: density sqrt(f f1) / bhattacharyya(mu, mu1).
Measure geometric_mean(const Measure& mu, const Measure& mu1);

/// Unit-speed geodesic segment from `start` to `end` of length `length`.
/// A degenerate segment (start == end) has length 0 and zero velocity.
struct GeodesicSegment {
  Measure start;
  Measure end;
  TangentMeasure initial_velocity;
  double length = 0.0;

  bool degenerate() const { return length == 0.0; }
};

/// Weights of mu(t) = a mu + b mu1 + c sigma(mu, mu1).
struct SimplexWeights {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// The unique geodesic joining mu and mu1.
/// Throws DomainError if the pair is at distance >= pi.
GeodesicSegment connect(const Measure& mu, const Measure& mu1);

/// Point of the segment at parameter t (arc length).
Measure evaluate(const GeodesicSegment& seg, double t);

/// a(t), b(t), c(t) for t in [0, length]. Throws std::invalid_argument outside.
SimplexWeights evaluate_simplex(const GeodesicSegment& seg, double t);

/// a mu + b mu1 + c sigma(mu, mu1), the simplex representation of evaluate().
Measure simplex_point(const GeodesicSegment& seg, double t);

/// exp_mu(tau) = geodesic_point(mu, tau/|tau|, |tau|). Requires |tau|_G < pi.
Measure exp_map(const Measure& mu, const TangentMeasure& tau);

}  // namespace infogeom
