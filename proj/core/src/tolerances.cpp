#include "infogeom/tolerances.hpp"

#include <stdexcept>
#include <string>

namespace infogeom {

Tolerances::Tolerances()
    : values_{
          // barycenter solver
          {"grad_tol", 1e-10},
          {"max_newton_iters", 200},
          {"hessian_min_eig", 1e-12},
          {"newton_iter_budget", 30},
          // measure resampling
          {"pushforward_mass_drift", 1e-6},
          {"poisson_mass_drift", 1e-8},
          // fisher geometry
          {"arc_length_tol", 1e-8},
          {"rho_identity_tol", 1e-10},
          {"geodesic_residual_tol", 1e-6},
          {"curvature_rel_tol", 1e-4},
          {"kl_rel_tol", 1e-5},
          {"metric_compat_tol", 1e-10},
          {"isometry_tol", 1e-12},
          {"triangle_tol", 1e-10},
          {"simplex_tol", 1e-10},
          {"endpoint_tol", 1e-9},
          // alpha geometry
          {"duality_tol", 1e-10},
          {"flatness_tol", 1e-6},
          {"ode_m_tol", 1e-10},
          {"ode_lc_tol", 1e-6},
          {"ode_e_tol", 1e-6},
          {"e_midpoint_tol", 1e-10},
          {"e_affine_tol", 1e-10},
          {"e_residual_tol", 1e-8},
          {"rk4_order_min", 12},
          // hyperbolic space
          {"ray_tol", 1e-9},
          {"grad_unit_tol", 1e-12},
          {"cocycle_tol", 1e-9},
          {"hessian_tol", 1e-10},
          {"distance_preservation_tol", 1e-10},
          {"gradient_fd_tol", 1e-7},
          {"lipschitz_tol", 1e-10},
          {"jacobian_mass_tol", 1e-8},
          // barycenter map
          {"fixed_point_tol", 1e-8},
          {"fiber_tol", 1e-8},
          {"rotation_equivariance_tol", 1e-8},
          {"generic_equivariance_tol", 1e-4},
          {"theta_rotation_tol", 1e-12},
          {"theta_generic_tol", 1e-5},
          {"homothety_rel_tol", 1e-6},
          {"hessian_identity_rel_tol", 1e-6},
          {"fiber_path_tol", 1e-8},
          {"m_fiber_tol", 1e-7},
          {"fiber_orthogonality_tol", 1e-10},
          {"fiber_geodesic_tol", 1e-6},
          {"hessian_fd_tol", 1e-6},
      } {}

double Tolerances::get(std::string_view name) const {
  const auto it = values_.find(name);
  if (it == values_.end()) {
    throw std::invalid_argument("unknown tolerance '" + std::string(name) + "'");
  }
  return it->second;
}

bool Tolerances::contains(std::string_view name) const { return values_.find(name) != values_.end(); }

void Tolerances::set(std::string_view name, double value) {
  const auto it = values_.find(name);
  if (it == values_.end()) {
    throw std::invalid_argument("unknown tolerance '" + std::string(name) + "'");
  }
  if (!(value > 0.0)) {
    throw std::invalid_argument("tolerance '" + std::string(name) + "' must be positive");
  }
  it->second = value;
}

void Tolerances::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw std::invalid_argument("tolerance override must look like name=value, got '" +
                                std::string(assignment) + "'");
  }
  const std::string_view name = assignment.substr(0, eq);
  const std::string text(assignment.substr(eq + 1));
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &consumed);
  } catch (const std::exception&) {
    consumed = 0;
  }
  if (consumed == 0 || consumed != text.size()) {
    throw std::invalid_argument("tolerance override '" + std::string(assignment) +
                                "' has a non-numeric value");
  }
  set(name, value);
}

}  // namespace infogeom
