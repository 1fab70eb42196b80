#include "infogeom/barycenter.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>
#include <stdexcept>
#include <string>

#include "infogeom/constants.hpp"
#include "infogeom/errors.hpp"
#include "infogeom/parallel.hpp"

namespace infogeom {

HyperbolicModel HyperbolicModel::real_hyperbolic(int dim) {
  if (dim < 2) throw std::invalid_argument("HyperbolicModel: dimension must be at least 2");
  return HyperbolicModel{dim, static_cast<double>(dim - 1)};
}

namespace {

void require_model(const QuadratureGrid& grid, int dim, const char* what) {
  if (grid.dim() != dim) {
    throw std::invalid_argument(std::string(what) + ": measure lives on S^" + std::to_string(grid.dim() - 1) +
                                " but the point is in dimension " + std::to_string(dim));
  }
}

IdealPoint node_point(const QuadratureGrid& grid, Eigen::Index i) {
  return IdealPoint(grid.nodes().col(i));
}

// Σ w f v_i componentwise, each component through the fixed summation tree.
Eigen::VectorXd weighted_vector_sum(const Measure& mu, int dim,
                                    const std::function<Eigen::VectorXd(Eigen::Index)>& term) {
  const QuadratureGrid& grid = mu.grid();
  const Eigen::Index n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd terms(dim, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    terms.col(i) = grid.weights()(i) * mu.density()(i) * term(i);
  }
  Eigen::VectorXd out(dim);
  for (int k = 0; k < dim; ++k) {
    const Eigen::VectorXd row = terms.row(k).transpose();
    out(k) = deterministic_sum(std::span<const double>(row.data(), static_cast<std::size_t>(n)));
  }
  return out;
}

}  // namespace

double averaged_busemann(const Measure& mu, const BallPoint& x) {
  const QuadratureGrid& grid = mu.grid();
  require_model(grid, x.dim(), "averaged_busemann");
  const Eigen::VectorXd& w = grid.weights();
  const Eigen::VectorXd& f = mu.density();
  return deterministic_sum(mu.size(), [&](std::size_t k) {
    const auto i = static_cast<Eigen::Index>(k);
    return w(i) * f(i) * busemann(node_point(grid, i), x);
  });
}

Eigen::VectorXd averaged_busemann_gradient(const Measure& mu, const BallPoint& x) {
  require_model(mu.grid(), x.dim(), "averaged_busemann_gradient");
  return weighted_vector_sum(mu, x.dim(),
                             [&](Eigen::Index i) { return busemann_gradient(node_point(mu.grid(), i), x); });
}

namespace {

// Frame gradient of B_theta: coordinates of ∇B_theta in the g-orthonormal
// frame, a unit vector.
Eigen::VectorXd frame_gradient(const IdealPoint& theta, const BallPoint& x) {
  return busemann_euclidean_gradient(theta, x) * unit_scale(x);
}

}  // namespace

Eigen::MatrixXd averaged_busemann_hessian(const Measure& mu, const BallPoint& x) {
  const QuadratureGrid& grid = mu.grid();
  require_model(grid, x.dim(), "averaged_busemann_hessian");
  const int d = x.dim();
  const Eigen::Index n = static_cast<Eigen::Index>(grid.size());
  std::vector<Eigen::VectorXd> g(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = frame_gradient(node_point(grid, i), x);
  const Eigen::VectorXd& w = grid.weights();
  const Eigen::VectorXd& f = mu.density();
  Eigen::MatrixXd h(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = r; c < d; ++c) {
      const double delta = r == c ? 1.0 : 0.0;
      h(r, c) = deterministic_sum(grid.size(), [&](std::size_t k) {
        const auto i = static_cast<Eigen::Index>(k);
        return w(i) * f(i) * (delta - g[k](r) * g[k](c));
      });
      h(c, r) = h(r, c);
    }
  }
  return h;
}

namespace {

double min_eigenvalue(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace

BarycenterResult barycenter(const Measure& mu, const HyperbolicModel& model, const BarycenterOptions& options) {
  const int d = model.dim;
  require_model(mu.grid(), d, "barycenter");
  BallPoint x = BallPoint::origin(d);
  double value = averaged_busemann(mu, x);
  for (int iter = 0;; ++iter) {
    const double s = unit_scale(x);
    const Eigen::VectorXd gradient = averaged_busemann_gradient(mu, x) / s;  // frame coordinates
    const Eigen::MatrixXd hessian = averaged_busemann_hessian(mu, x);
    const double lambda_min = min_eigenvalue(hessian);
    const double gnorm = gradient.norm();
    if (gnorm <= options.gradient_tolerance) {
      if (!(lambda_min > options.min_hessian_eigenvalue)) {
        throw ConvergenceError("barycenter: Hessian is numerically singular at the critical point");
      }
      return BarycenterResult{x, gnorm, iter, lambda_min};
    }
    if (iter >= options.max_iterations) {
      throw ConvergenceError("barycenter: gradient norm " + std::to_string(gnorm) + " after " +
                             std::to_string(iter) + " iterations");
    }
    if (!(lambda_min > options.min_hessian_eigenvalue)) {
      throw ConvergenceError("barycenter: Hessian is numerically singular (min eigenvalue " +
                             std::to_string(lambda_min) + ")");
    }
    const Eigen::VectorXd step = -hessian.ldlt().solve(gradient);
    const double slope = gradient.dot(step);
    // Near the minimum the decrease is at round-off level; allow that much.
    const double slack = 1e-14 * (1.0 + std::abs(value));
    double t = 1.0;
    for (;;) {
      const BallPoint candidate = ball_exp(x, t * s * step);
      const double candidate_value = averaged_busemann(mu, candidate);
      if (candidate_value <= value + options.armijo * t * slope + slack) {
        x = candidate;
        value = candidate_value;
        break;
      }
      t *= options.backtrack;
      if (t < 1e-20) {
        throw ConvergenceError("barycenter: line search failed at gradient norm " + std::to_string(gnorm));
      }
    }
  }
}

Measure poisson_kernel_measure(const BallPoint& x, const HyperbolicModel& model, const GridPtr& grid,
                               double max_mass_drift) {
  require_model(*grid, x.dim(), "poisson_kernel_measure");
  if (model.dim != x.dim()) throw std::invalid_argument("poisson_kernel_measure: model dimension mismatch");
  const Eigen::Index n = static_cast<Eigen::Index>(grid->size());
  const double scale = 1.0 - x.squared_norm();
  Eigen::VectorXd density(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double gap = (x.coords() - grid->nodes().col(i)).squaredNorm();
    density(i) = std::pow(scale / gap, model.entropy);
  }
  const double mass = integrate(*grid, density);
  if (!(std::abs(mass - 1.0) <= max_mass_drift)) {
    throw DomainError("poisson_kernel_measure: mass " + std::to_string(mass) +
                      " differs from 1; the grid is too coarse for this point");
  }
  return Measure(grid, density / mass);
}

namespace {

void require_critical(const Measure& mu, const BallPoint& x, double tolerance, const char* what) {
  require_model(mu.grid(), x.dim(), what);
  const double gnorm = g_norm(x, averaged_busemann_gradient(mu, x));
  if (!(gnorm <= tolerance)) {
    throw DomainError(std::string(what) + ": point is not the barycenter (gradient norm " +
                      std::to_string(gnorm) + ")");
  }
}

// (dB_theta)_x(u) at every node.
Eigen::VectorXd busemann_differentials(const QuadratureGrid& grid, const BallPoint& x, const Eigen::VectorXd& u) {
  const Eigen::Index n = static_cast<Eigen::Index>(grid.size());
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out(i) = busemann_euclidean_gradient(node_point(grid, i), x).dot(u);
  }
  return out;
}

TangentMeasure nu_unchecked(const Measure& mu, const BallPoint& x, const Eigen::VectorXd& u) {
  const Eigen::VectorXd samples = busemann_differentials(mu.grid(), x, u).cwiseProduct(mu.density());
  return tangent_from_samples(mu.grid_ptr(), samples);
}

}  // namespace

TangentMeasure nu_map(const Measure& mu, const BallPoint& x, const Eigen::VectorXd& u,
                      double criticality_tolerance) {
  require_critical(mu, x, criticality_tolerance, "nu_map");
  if (u.size() != x.dim()) throw std::invalid_argument("nu_map: tangent vector dimension mismatch");
  return nu_unchecked(mu, x, u);
}

std::vector<TangentMeasure> nu_basis(const Measure& mu, const BallPoint& x, double criticality_tolerance) {
  require_critical(mu, x, criticality_tolerance, "nu_basis");
  const int d = x.dim();
  std::vector<TangentMeasure> basis;
  basis.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    basis.push_back(nu_unchecked(mu, x, unit_scale(x) * Eigen::VectorXd::Unit(d, i)));
  }
  return basis;
}

FiberDecomposition fiber_decompose(const Measure& mu, const BallPoint& x, const TangentMeasure& tau,
                                   double criticality_tolerance) {
  require_same_grid(mu.grid(), tau.grid());
  const std::vector<TangentMeasure> basis = nu_basis(mu, x, criticality_tolerance);
  const auto d = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd gram(d, d);
  Eigen::VectorXd rhs(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto si = static_cast<std::size_t>(i);
    rhs(i) = fisher_inner(mu, tau, basis[si]);
    for (Eigen::Index j = 0; j < d; ++j) {
      gram(i, j) = fisher_inner(mu, basis[si], basis[static_cast<std::size_t>(j)]);
    }
  }
  if (!(min_eigenvalue(gram) > 1e-12 * std::max(1.0, gram.norm()))) {
    throw DomainError("fiber_decompose: degenerate Gram matrix of the nu-map");
  }
  const Eigen::VectorXd coeff = gram.ldlt().solve(rhs);
  TangentMeasure horizontal = TangentMeasure::zero(mu.grid_ptr());
  for (Eigen::Index i = 0; i < d; ++i) horizontal += coeff(i) * basis[static_cast<std::size_t>(i)];
  TangentMeasure vertical = tau - horizontal;
  return FiberDecomposition{std::move(vertical), std::move(horizontal)};
}

TangentMeasure fiber_second_fundamental(const Measure& mu, const BallPoint& x, const TangentMeasure& tau,
                                        const TangentMeasure& tau1, double criticality_tolerance) {
  return fiber_decompose(mu, x, levi_civita(mu, tau, tau1), criticality_tolerance).horizontal;
}

double pullback_metric(const BallPoint& x, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                       const HyperbolicModel& model, const GridPtr& grid) {
  if (u.size() != x.dim() || v.size() != x.dim()) {
    throw std::invalid_argument("pullback_metric: tangent vector dimension mismatch");
  }
  const Measure mu = poisson_kernel_measure(x, model, grid);
  const Eigen::VectorXd du = busemann_differentials(*grid, x, u);
  const Eigen::VectorXd dv = busemann_differentials(*grid, x, v);
  const Eigen::VectorXd& w = grid->weights();
  const Eigen::VectorXd& f = mu.density();
  const double integral = deterministic_sum(grid->size(), [&](std::size_t k) {
    const auto i = static_cast<Eigen::Index>(k);
    return w(i) * du(i) * dv(i) * f(i);
  });
  return model.entropy * model.entropy * integral;
}

FiberGeodesicReport fiber_geodesic_check(const Measure& mu, const Measure& mu1, const BallPoint& x,
                                         const HyperbolicModel& model, int samples, double tolerance,
                                         double criticality_tolerance) {
  require_same_grid(mu.grid(), mu1.grid());
  auto critical = [&](const Measure& m) {
    return g_norm(x, averaged_busemann_gradient(m, x)) <= criticality_tolerance;
  };
  if (!critical(mu) || !critical(mu1)) {
    throw std::invalid_argument("fiber_geodesic_check: both measures must have barycenter x");
  }
  if (samples < 1) throw std::invalid_argument("fiber_geodesic_check: samples must be positive");
  FiberGeodesicReport report;
  const GeodesicSegment seg = connect(mu, mu1);
  if (seg.degenerate()) {
    report.sigma_in_fiber = true;
    report.path_in_fiber = true;
    return report;
  }
  report.sigma_distance = hyp_distance(barycenter(geometric_mean(mu, mu1), model).point, x);
  report.sigma_in_fiber = report.sigma_distance <= tolerance;
  for (int k = 1; k <= samples; ++k) {
    const double t = seg.length * k / (samples + 1);
    const double dist = hyp_distance(barycenter(evaluate(seg, t), model).point, x);
    report.max_path_distance = std::max(report.max_path_distance, dist);
  }
  report.path_in_fiber = report.max_path_distance <= tolerance;
  return report;
}

double equivariance_defect(const MoebiusIsometry& phi, const Measure& mu, const HyperbolicModel& model) {
  const Measure pushed = pushforward(to_boundary_map(phi), mu);
  const BallPoint lhs = barycenter(pushed, model).point;
  const BallPoint rhs = phi.apply(barycenter(mu, model).point);
  return hyp_distance(lhs, rhs);
}

double theta_commutation_defect(const MoebiusIsometry& phi, const BallPoint& x, const HyperbolicModel& model,
                                const GridPtr& grid) {
  const Measure direct = poisson_kernel_measure(phi.apply(x), model, grid);
  const Measure pushed = pushforward(to_boundary_map(phi), poisson_kernel_measure(x, model, grid));
  return (direct.density() - pushed.density()).cwiseAbs().maxCoeff();
}

}  // namespace infogeom
