#pragma once

// Averaged Busemann functions of boundary measures, the barycenter map and
// its Newton solver, the Poisson kernel section Theta, the nu-map and the
// decomposition of tangent measures along the fibers of the barycenter map.

#include <Eigen/Core>

#include <vector>

#include "infogeom/fisher_geometry.hpp"
#include "infogeom/hyperbolic_space.hpp"
#include "infogeom/measure_space.hpp"

namespace infogeom {

/// Real hyperbolic space of dimension d with volume entropy Q = d - 1.
struct HyperbolicModel {
  int dim = 2;
  double entropy = 1.0;

  /// Throws std::invalid_argument for d < 2.
  static HyperbolicModel real_hyperbolic(int dim);
};

/// Σ w f B_theta(x) over the grid nodes.
double averaged_busemann(const Measure& mu, const BallPoint& x);

/// Σ w f ∇B_theta(x): Riemannian gradient, Euclidean components.
Eigen::VectorXd averaged_busemann_gradient(const Measure& mu, const BallPoint& x);

/// Hessian of the averaged Busemann function in the g-orthonormal frame
/// e_i (1 - |x|^2)/2 at x.
Eigen::MatrixXd averaged_busemann_hessian(const Measure& mu, const BallPoint& x);

struct BarycenterOptions {
  double gradient_tolerance = 1e-10;
  int max_iterations = 200;
  double min_hessian_eigenvalue = 1e-12;
  double armijo = 1e-4;
  double backtrack = 0.5;
};

struct BarycenterResult {
  BallPoint point;
  double gradient_norm = 0.0;
  int iterations = 0;
  double hessian_min_eigenvalue = 0.0;
};

/// The unique critical point of the averaged Busemann function, by Riemannian
/// Newton steps with exponential-map retraction and Armijo backtracking from
/// the origin. Throws ConvergenceError when the budget runs out or the
/// Hessian is numerically singular.
BarycenterResult barycenter(const Measure& mu, const HyperbolicModel& model,
                            const BarycenterOptions& options = {});

/// Theta(x): density exp(-Q B_theta(x)) = ((1 - |x|^2)/|x - theta|^2)^Q,
/// renormalized. Throws DomainError if the quadrature mass drifts from 1 by
/// more than `max_mass_drift`.
Measure poisson_kernel_measure(const BallPoint& x, const HyperbolicModel& model, const GridPtr& grid,
                               double max_mass_drift = 1e-8);

/// nu_x^mu(u): density (dB_theta)_x(u) f. Requires x to be critical for mu
/// (gradient g-norm <= `criticality_tolerance`), otherwise DomainError.
TangentMeasure nu_map(const Measure& mu, const BallPoint& x, const Eigen::VectorXd& u,
                      double criticality_tolerance = 1e-8);

/// nu(e_i) for the g-orthonormal frame e_i (1 - |x|^2)/2.
std::vector<TangentMeasure> nu_basis(const Measure& mu, const BallPoint& x,
                                     double criticality_tolerance = 1e-8);

struct FiberDecomposition {
  TangentMeasure vertical;    // tangent to bar^{-1}(x)
  TangentMeasure horizontal;  // in the image of nu
};

/// G-orthogonal splitting of tau into the fiber direction and the image of
/// the nu-map. Throws DomainError when the Gram matrix is degenerate.
FiberDecomposition fiber_decompose(const Measure& mu, const BallPoint& x, const TangentMeasure& tau,
                                   double criticality_tolerance = 1e-8);

/// Second fundamental form of the fiber through mu on vertical tau, tau1:
/// the horizontal part of the Levi-Civita derivative of the constant fields.
/// Fibers are affine subspaces, so constant extensions stay tangent to them.
TangentMeasure fiber_second_fundamental(const Measure& mu, const BallPoint& x, const TangentMeasure& tau,
                                        const TangentMeasure& tau1, double criticality_tolerance = 1e-8);

/// Theta^*G (u, v) = Q^2 ∫ (dB_theta)_x(u) (dB_theta)_x(v) dmu_x with mu_x = Theta(x).
double pullback_metric(const BallPoint& x, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                       const HyperbolicModel& model, const GridPtr& grid);

struct FiberGeodesicReport {
  bool sigma_in_fiber = false;    // bar(sigma(mu, mu1)) = x
  double sigma_distance = 0.0;    // hyperbolic distance from bar(sigma) to x
  double max_path_distance = 0.0; // max over samples of d(bar(mu(t)), x)
  bool path_in_fiber = false;
  bool consistent() const { return sigma_in_fiber == path_in_fiber; }
};

/// Compares the two sides of the fiber-geodesic criterion for mu, mu1 in
/// bar^{-1}(x): whether sigma(mu, mu1) lies in the fiber, and whether the
/// connecting Fisher geodesic does (sampled at `samples` interior times).
/// Throws std::invalid_argument if mu or mu1 is not critical at x.
FiberGeodesicReport fiber_geodesic_check(const Measure& mu, const Measure& mu1, const BallPoint& x,
                                         const HyperbolicModel& model, int samples = 9,
                                         double tolerance = 1e-6, double criticality_tolerance = 1e-8);

/// hyp_distance(bar(phi-hat_# mu), phi(bar mu)).
double equivariance_defect(const MoebiusIsometry& phi, const Measure& mu, const HyperbolicModel& model);

/// Sup-norm difference of the densities of Theta(phi x) and phi-hat_# Theta(x).
double theta_commutation_defect(const MoebiusIsometry& phi, const BallPoint& x, const HyperbolicModel& model,
                                const GridPtr& grid);

}  // namespace infogeom
