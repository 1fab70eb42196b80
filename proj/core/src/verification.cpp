#include "infogeom/verification.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "infogeom/alpha_geometry.hpp"
#include "infogeom/barycenter.hpp"
#include "infogeom/fisher_geometry.hpp"

namespace infogeom {

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed || !c.gating; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"fisher", "alpha", "hyperbolic", "barycenter", "all"};
  return names;
}

Eigen::VectorXd random_unit_vector(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(dim);
  do {
    for (int i = 0; i < dim; ++i) v(i) = normal(rng);
  } while (v.norm() < 1e-3);
  return v.normalized();
}

BallPoint random_ball_point(int dim, std::mt19937_64& rng, double max_radius) {
  std::uniform_real_distribution<double> radius(0.0, max_radius);
  const Eigen::VectorXd direction = random_unit_vector(dim, rng);
  return BallPoint(radius(rng) * direction);
}

MoebiusIsometry random_isometry(int dim, std::mt19937_64& rng, double max_shift) {
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> radius(0.0, max_shift);
  Eigen::MatrixXd rotation;
  if (dim == 2) {
    rotation = MoebiusIsometry::rotation2d(angle(rng)).rotation_matrix();
  } else if (dim == 3) {
    const Eigen::Vector3d axis = random_unit_vector(3, rng);
    rotation = MoebiusIsometry::rotation3d(axis, angle(rng)).rotation_matrix();
  } else {
    throw std::invalid_argument("random_isometry: dimension must be 2 or 3");
  }
  const Eigen::VectorXd a = radius(rng) * random_unit_vector(dim, rng);
  return MoebiusIsometry(rotation, a);
}

namespace {

double node_angle(const QuadratureGrid& grid, Eigen::Index i) {
  return std::atan2(grid.nodes()(1, i), grid.nodes()(0, i));
}

Eigen::VectorXd trig_samples(const QuadratureGrid& grid, const std::vector<double>& a, const std::vector<double>& b) {
  const Eigen::Index n = static_cast<Eigen::Index>(grid.size());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double theta = node_angle(grid, i);
    for (std::size_t k = 0; k < a.size(); ++k) out(i) += a[k] * std::cos(static_cast<double>(k + 1) * theta);
    for (std::size_t k = 0; k < b.size(); ++k) out(i) += b[k] * std::sin(static_cast<double>(k + 1) * theta);
  }
  return out;
}

Eigen::VectorXd quadratic_samples(const QuadratureGrid& grid, const Eigen::Vector3d& linear, const Eigen::Matrix3d& quad) {
  const Eigen::Index n = static_cast<Eigen::Index>(grid.size());
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector3d p = grid.nodes().col(i);
    out(i) = linear.dot(p) + p.dot(quad * p);
  }
  return out;
}

Eigen::VectorXd random_smooth(const QuadratureGrid& grid, std::mt19937_64& rng, double amplitude, int degree) {
  std::uniform_real_distribution<double> coeff(-amplitude, amplitude);
  if (grid.dim() == 2) {
    std::vector<double> a(static_cast<std::size_t>(degree));
    std::vector<double> b(static_cast<std::size_t>(degree));
    for (int k = 0; k < degree; ++k) {
      a[static_cast<std::size_t>(k)] = coeff(rng);
      b[static_cast<std::size_t>(k)] = coeff(rng);
    }
    return trig_samples(grid, a, b);
  }
  Eigen::Vector3d linear;
  for (int i = 0; i < 3; ++i) linear(i) = coeff(rng);
  Eigen::Matrix3d quad;
  for (int r = 0; r < 3; ++r) {
    for (int c = r; c < 3; ++c) {
      quad(r, c) = coeff(rng) / 2.0;
      quad(c, r) = quad(r, c);
    }
  }
  return quadratic_samples(grid, linear, quad);
}

}  // namespace

Measure random_measure(const GridPtr& grid, std::mt19937_64& rng, double amplitude) {
  const Eigen::VectorXd samples = random_smooth(*grid, rng, amplitude, 3);
  return measure_from_samples(grid, (samples.array() + 1.0).matrix());
}

TangentMeasure random_tangent(const GridPtr& grid, std::mt19937_64& rng) {
  return tangent_from_samples(grid, random_smooth(*grid, rng, 1.0, 4));
}

namespace {

using Connection = std::function<TangentMeasure(const Measure&, const TangentMeasure&, const TangentMeasure&)>;

constexpr double kGeometricStep = 1e-4;
constexpr double kKlStep = 1e-3;

// D_{tau1} V2 + Γ(tau1, V2) - D_{tau2} V1 - Γ(tau2, V1), with Vj(nu) = Γ_nu(tau_j, tau)
// and D a central difference along nu = mu + s tau_k.
TangentMeasure fd_curvature(const Connection& gamma, const Measure& mu, const TangentMeasure& tau1,
                            const TangentMeasure& tau2, const TangentMeasure& tau) {
  auto directional = [&](const TangentMeasure& along, const TangentMeasure& field) {
    const Measure plus = mu + kGeometricStep * along;
    const Measure minus = mu + (-kGeometricStep) * along;
    return (1.0 / (2.0 * kGeometricStep)) * (gamma(plus, field, tau) - gamma(minus, field, tau));
  };
  const TangentMeasure v1 = gamma(mu, tau1, tau);
  const TangentMeasure v2 = gamma(mu, tau2, tau);
  return directional(tau1, tau2) + gamma(mu, tau1, v2) - directional(tau2, tau1) - gamma(mu, tau2, v1);
}

class SuiteBuilder {
 public:
  SuiteBuilder(Report& report, const Tolerances& tolerances) : report_(report), tol_(tolerances) {}

  double tol(const char* name) const { return tol_.get(name); }

  void add(std::string id, double value, double tolerance, Relation relation = Relation::AtMost,
           bool gating = true) {
    bool passed = false;
    if (std::isfinite(value)) {
      switch (relation) {
        case Relation::AtMost: passed = value <= tolerance; break;
        case Relation::AtLeast: passed = value >= tolerance; break;
        case Relation::Above: passed = value > tolerance; break;
      }
    }
    report_.checks.push_back(Check{std::move(id), value, tolerance, relation, passed, gating});
  }

  // Runs `body`; an exception becomes a failed check instead of aborting the suite.
  void guarded(const std::string& id, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception&) {
      report_.checks.push_back(Check{id + ".exception", std::numeric_limits<double>::quiet_NaN(), 0.0,
                                     Relation::AtMost, false, true});
    }
  }

 private:
  Report& report_;
  const Tolerances& tol_;
};

// ---------------------------------------------------------------- fisher

void fisher_suite(SuiteBuilder& s, std::mt19937_64& rng) {
  const GridPtr grid = make_grid(2, 256);

  s.guarded("fisher.distance", [&] {
    std::vector<double> gl_x;
    std::vector<double> gl_w;
    gauss_legendre(16, gl_x, gl_w);
    constexpr double h = 1e-5;
    double arc_err = 0.0;
    double rho_err = 0.0;
    double endpoint_err = 0.0;
    double simplex_err = 0.0;
    for (int k = 0; k < 20; ++k) {
      const Measure mu = random_measure(grid, rng);
      const Measure mu1 = random_measure(grid, rng);
      const double ell = 2.0 * std::acos(std::clamp(bhattacharyya(mu, mu1), -1.0, 1.0));
      const GeodesicSegment seg = connect(mu, mu1);
      double arc = 0.0;
      for (std::size_t q = 0; q < gl_x.size(); ++q) {
        const double t = seg.length * (gl_x[q] + 1.0) / 2.0;
        const Measure at = evaluate(seg, t);
        const Eigen::VectorXd v = (evaluate(seg, t + h).density() - evaluate(seg, t - h).density()) / (2.0 * h);
        arc += gl_w[q] * seg.length / 2.0 * fisher_norm(at, tangent_from_samples(grid, v));
      }
      arc_err = std::max(arc_err, std::abs(arc - ell));

      const Eigen::VectorXd drho = rho_alpha(mu, 0.0) - rho_alpha(mu1, 0.0);
      const double rhs = 1.0 - integrate(*grid, drho.cwiseProduct(drho)) / 8.0;
      rho_err = std::max(rho_err, std::abs(std::cos(ell_distance(mu, mu1) / 2.0) - rhs));

      endpoint_err = std::max(endpoint_err, (evaluate(seg, seg.length).density() - mu1.density()).cwiseAbs().maxCoeff());
      for (double frac : {0.25, 0.5, 0.8}) {
        const double t = frac * seg.length;
        simplex_err = std::max(simplex_err,
                               (simplex_point(seg, t).density() - evaluate(seg, t).density()).cwiseAbs().maxCoeff());
      }
    }
    s.add("fisher.arc_length", arc_err, s.tol("arc_length_tol"));
    s.add("fisher.rho_identity", rho_err, s.tol("rho_identity_tol"));
    s.add("fisher.connect_endpoint", endpoint_err, s.tol("endpoint_tol"));
    s.add("fisher.simplex", simplex_err, s.tol("simplex_tol"));
  });

  s.guarded("fisher.geodesic_residual", [&] {
    const Measure mu = random_measure(grid, rng);
    const Measure mu1 = random_measure(grid, rng);
    const GeodesicSegment seg = connect(mu, mu1);
    double worst = 0.0;
    for (int k = 1; k <= 10; ++k) {
      const double t = seg.length * k / 11.0;
      const double h = kGeometricStep;
      const Measure at = evaluate(seg, t);
      const Eigen::VectorXd plus = evaluate(seg, t + h).density();
      const Eigen::VectorXd minus = evaluate(seg, t - h).density();
      const TangentMeasure velocity = tangent_from_samples(grid, (plus - minus) / (2.0 * h));
      const TangentMeasure accel = tangent_from_samples(grid, (plus - 2.0 * at.density() + minus) / (h * h));
      worst = std::max(worst, fisher_norm(at, accel + levi_civita(at, velocity, velocity)));
    }
    s.add("fisher.geodesic_residual", worst, s.tol("geodesic_residual_tol"));
  });

  s.guarded("fisher.curvature_oracle", [&] {
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const Measure mu = random_measure(grid, rng);
      const TangentMeasure t1 = random_tangent(grid, rng);
      const TangentMeasure t2 = random_tangent(grid, rng);
      const TangentMeasure t = random_tangent(grid, rng);
      const TangentMeasure exact = curvature(mu, t1, t2, t);
      const TangentMeasure fd = fd_curvature(levi_civita, mu, t1, t2, t);
      worst = std::max(worst, fisher_norm(mu, fd - exact) / fisher_norm(mu, exact));
    }
    s.add("fisher.curvature_oracle", worst, s.tol("curvature_rel_tol"));
  });

  s.guarded("fisher.kl_hessian", [&] {
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
      const Measure mu = random_measure(grid, rng);
      TangentMeasure tau = random_tangent(grid, rng);
      tau *= 1.0 / fisher_norm(mu, tau);
      const double second = (kl_divergence(mu, mu + kKlStep * tau) - 2.0 * kl_divergence(mu, mu) +
                             kl_divergence(mu, mu + (-kKlStep) * tau)) /
                            (kKlStep * kKlStep);
      const double g = fisher_inner(mu, tau, tau);
      worst = std::max(worst, std::abs(second - g) / g);
    }
    s.add("fisher.kl_hessian", worst, s.tol("kl_rel_tol"));
  });

  s.guarded("fisher.metric_compatibility", [&] {
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const Measure mu = random_measure(grid, rng);
      const TangentMeasure t = random_tangent(grid, rng);
      const TangentMeasure t1 = random_tangent(grid, rng);
      const TangentMeasure t2 = random_tangent(grid, rng);
      const double lhs = metric_derivative(mu, t, t1, t2);
      const double rhs = fisher_inner(mu, levi_civita(mu, t, t1), t2) + fisher_inner(mu, t1, levi_civita(mu, t, t2));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    s.add("fisher.metric_compatibility", worst, s.tol("metric_compat_tol"));
  });

  s.guarded("fisher.isometry_invariance", [&] {
    double worst = 0.0;
    for (int shift : {1, 37, 128}) {
      const BoundaryMap rot = BoundaryMap::circle_rotation(2.0 * std::numbers::pi * shift / 256.0);
      const Measure mu = random_measure(grid, rng);
      const TangentMeasure t = random_tangent(grid, rng);
      const TangentMeasure t1 = random_tangent(grid, rng);
      const double moved = fisher_inner(pushforward(rot, mu), pushforward(rot, t), pushforward(rot, t1));
      worst = std::max(worst, std::abs(moved - fisher_inner(mu, t, t1)));
    }
    s.add("fisher.isometry_invariance", worst, s.tol("isometry_tol"));
  });

  s.guarded("fisher.triangle", [&] {
    double triangle = 0.0;
    double symmetry = 0.0;
    for (int k = 0; k < 20; ++k) {
      const Measure a = random_measure(grid, rng);
      const Measure b = random_measure(grid, rng);
      const Measure c = random_measure(grid, rng);
      triangle = std::max(triangle, ell_distance(a, c) - ell_distance(a, b) - ell_distance(b, c));
      symmetry = std::max(symmetry, std::abs(ell_distance(a, b) - ell_distance(b, a)));
    }
    s.add("fisher.triangle_inequality", std::max(triangle, 0.0), s.tol("triangle_tol"));
    s.add("fisher.distance_symmetry", symmetry, s.tol("triangle_tol"));
  });
}

// ---------------------------------------------------------------- alpha

double sup_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

void alpha_suite(SuiteBuilder& s, std::mt19937_64& rng) {
  const GridPtr grid = make_grid(2, 256);

  s.guarded("alpha.duality", [&] {
    std::uniform_real_distribution<double> alpha(-1.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const double a = alpha(rng);
      const Measure mu = random_measure(grid, rng);
      const TangentMeasure t = random_tangent(grid, rng);
      const TangentMeasure t1 = random_tangent(grid, rng);
      const TangentMeasure t2 = random_tangent(grid, rng);
      worst = std::max(worst, duality_defect(a, mu, t, t1, t2));
    }
    s.add("alpha.duality", worst, s.tol("duality_tol"));
  });

  s.guarded("alpha.flatness", [&] {
    for (double a : {1.0, -1.0}) {
      const Connection gamma = [a](const Measure& m, const TangentMeasure& x, const TangentMeasure& y) {
        return alpha_connection(a, m, x, y);
      };
      double worst = 0.0;
      for (int k = 0; k < 10; ++k) {
        const Measure mu = random_measure(grid, rng);
        const TangentMeasure t1 = random_tangent(grid, rng);
        const TangentMeasure t2 = random_tangent(grid, rng);
        const TangentMeasure t = random_tangent(grid, rng);
        worst = std::max(worst, fisher_norm(mu, fd_curvature(gamma, mu, t1, t2, t)));
      }
      s.add(a > 0 ? "alpha.flatness_e" : "alpha.flatness_m", worst, s.tol("flatness_tol"));
    }
  });

  s.guarded("alpha.curvature_oracle", [&] {
    constexpr double a = 0.5;
    const Connection gamma = [](const Measure& m, const TangentMeasure& x, const TangentMeasure& y) {
      return alpha_connection(a, m, x, y);
    };
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      const Measure mu = random_measure(grid, rng);
      const TangentMeasure t1 = random_tangent(grid, rng);
      const TangentMeasure t2 = random_tangent(grid, rng);
      const TangentMeasure t = random_tangent(grid, rng);
      const TangentMeasure exact = alpha_curvature(a, mu, t1, t2, t);
      worst = std::max(worst, fisher_norm(mu, fd_curvature(gamma, mu, t1, t2, t) - exact) / fisher_norm(mu, exact));
    }
    s.add("alpha.curvature_oracle", worst, s.tol("curvature_rel_tol"));
  });

  const Measure mu = random_measure(grid, rng);
  const Measure mu1 = random_measure(grid, rng);

  s.guarded("alpha.ode_m", [&] {
    const TangentMeasure h = mu1 - mu;
    const AlphaGeodesicState end = alpha_geodesic_integrate(AlphaGeodesicState::make(mu, h, -1.0), 1e-3, 1000);
    s.add("alpha.ode_m_line", sup_diff(end.f, mu1.density()), s.tol("ode_m_tol"));
  });

  s.guarded("alpha.ode_lc", [&] {
    // Unit speed with h/f > -1.5 keeps cos(t/2) + sin(t/2) h/f positive up to t = 1.
    TangentMeasure tau = TangentMeasure::zero(grid);
    do {
      tau = random_tangent(grid, rng);
      tau *= 1.0 / fisher_norm(mu, tau);
    } while ((tau.density().array() / mu.density().array()).minCoeff() < -1.5);
    auto mismatch = [&](double dt) {
      const int steps = static_cast<int>(std::lround(1.0 / dt));
      const AlphaGeodesicState end = alpha_geodesic_integrate(AlphaGeodesicState::make(mu, tau, 0.0), dt, steps);
      return sup_diff(end.f, geodesic_point(mu, tau, 1.0).density());
    };
    s.add("alpha.ode_levi_civita", mismatch(1e-3), s.tol("ode_lc_tol"));
    s.add("alpha.rk4_order", mismatch(0.1) / mismatch(0.05), s.tol("rk4_order_min"), Relation::AtLeast);
  });

  s.guarded("alpha.ode_e", [&] {
    const TangentMeasure h = e_geodesic_velocity(mu, mu1, 1.0);
    const AlphaGeodesicState end = alpha_geodesic_integrate(AlphaGeodesicState::make(mu, h, 1.0), 1e-3, 1000);
    s.add("alpha.ode_e_geodesic", sup_diff(end.f, mu1.density()), s.tol("ode_e_tol"));
  });

  s.guarded("alpha.closed_forms", [&] {
    const double ell = 1.7;
    s.add("alpha.e_midpoint", sup_diff(e_geodesic(mu, mu1, ell / 2.0, ell).density(), geometric_mean(mu, mu1).density()),
          s.tol("e_midpoint_tol"));

    double affine = 0.0;
    for (double t : {0.3, 0.9, 1.4}) {
      const Eigen::ArrayXd gap = e_geodesic(mu, mu1, t, ell).density().array().log() -
                                 (1.0 - t / ell) * mu.density().array().log() -
                                 (t / ell) * mu1.density().array().log();
      affine = std::max(affine, gap.maxCoeff() - gap.minCoeff());
    }
    s.add("alpha.e_log_affine", affine, s.tol("e_affine_tol"));

    double m_res = 0.0;
    const Eigen::VectorXd velocity = mu1.density() - mu.density();
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(velocity.size());
    for (double t : {0.2, 0.5, 0.8}) {
      m_res = std::max(m_res, alpha_geodesic_residual(*grid, -1.0, m_geodesic(mu, mu1, t).density(), velocity, zero));
    }
    s.add("alpha.m_residual", m_res, s.tol("ode_m_tol"));

    double e_res = 0.0;
    constexpr double h = 5e-3;
    for (double t : {0.3, 0.8, 1.2}) {
      auto f = [&](double u) { return e_geodesic(mu, mu1, u, ell).density(); };
      const Eigen::VectorXd d1 = (f(t - 2 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2 * h)) / (12.0 * h);
      const Eigen::VectorXd d2 =
          (-f(t - 2 * h) + 16.0 * f(t - h) - 30.0 * f(t) + 16.0 * f(t + h) - f(t + 2 * h)) / (12.0 * h * h);
      e_res = std::max(e_res, alpha_geodesic_residual(*grid, 1.0, f(t), d1, d2));
    }
    s.add("alpha.e_residual", e_res, s.tol("e_residual_tol"));
  });
}

// ---------------------------------------------------------------- hyperbolic

Eigen::VectorXd random_g_unit(const BallPoint& x, std::mt19937_64& rng) {
  return unit_scale(x) * random_unit_vector(x.dim(), rng);
}

void hyperbolic_suite(SuiteBuilder& s, std::mt19937_64& rng, int d) {
  const std::string p = "hyperbolic.d" + std::to_string(d) + ".";
  const BallPoint origin = BallPoint::origin(d);

  s.guarded(p + "busemann", [&] {
    double at_origin = 0.0;
    double ray = 0.0;
    double unit = 0.0;
    double fd = 0.0;
    double kernel = 0.0;
    double spectrum = 0.0;
    double lipschitz = 0.0;
    for (int k = 0; k < 100; ++k) {
      const IdealPoint theta(random_unit_vector(d, rng));
      at_origin = std::max(at_origin, std::abs(busemann(theta, origin)));
      const Eigen::VectorXd toward = unit_scale(origin) * theta.direction();
      for (double t = 0.5; t <= 8.0; t += 0.5) {
        ray = std::max(ray, std::abs(busemann(theta, hyp_geodesic(origin, toward, t)) + t));
      }

      const BallPoint x = random_ball_point(d, rng, 0.9);
      const Eigen::VectorXd grad = busemann_gradient(theta, x);
      unit = std::max(unit, std::abs(g_norm(x, grad) - 1.0));

      const Eigen::VectorXd v = random_g_unit(x, rng);
      constexpr double h = 1e-6;
      const double plus = busemann(theta, BallPoint(x.coords() + h * v));
      const double minus = busemann(theta, BallPoint(x.coords() - h * v));
      fd = std::max(fd, std::abs((plus - minus) / (2.0 * h) - metric_inner(x, grad, v)));

      kernel = std::max(kernel, std::abs(busemann_hessian(theta, x, v, grad)));
      Eigen::MatrixXd form(d, d);
      for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
          form(r, c) = busemann_hessian(theta, x, unit_scale(x) * Eigen::VectorXd::Unit(d, r),
                                        unit_scale(x) * Eigen::VectorXd::Unit(d, c));
        }
      }
      Eigen::VectorXd expected = Eigen::VectorXd::Ones(d);
      expected(0) = 0.0;
      const Eigen::VectorXd eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(form).eigenvalues();
      spectrum = std::max(spectrum, (eig - expected).cwiseAbs().maxCoeff());

      const BallPoint y = random_ball_point(d, rng, 0.9);
      lipschitz = std::max(lipschitz, std::abs(busemann(theta, x) - busemann(theta, y)) - hyp_distance(x, y));
    }
    s.add(p + "origin_zero", at_origin, 0.0);
    s.add(p + "ray", ray, s.tol("ray_tol"));
    s.add(p + "gradient_unit", unit, s.tol("grad_unit_tol"));
    s.add(p + "gradient_fd", fd, s.tol("gradient_fd_tol"));
    s.add(p + "hessian_kernel", kernel, s.tol("hessian_tol"));
    s.add(p + "hessian_spectrum", spectrum, s.tol("hessian_tol"));
    s.add(p + "lipschitz", std::max(lipschitz, 0.0), s.tol("lipschitz_tol"));
  });

  s.guarded(p + "visibility", [&] {
    int violations = 0;
    for (int k = 0; k < 20; ++k) {
      const IdealPoint theta(random_unit_vector(d, rng));
      Eigen::VectorXd e = random_unit_vector(d, rng);
      if ((e - theta.direction()).norm() < 1e-2) e = -e;
      const Eigen::VectorXd u = unit_scale(origin) * e;
      double previous = busemann(theta, hyp_geodesic(origin, u, 10.0));
      for (double t = 10.5; t <= 20.0; t += 0.5) {
        const double value = busemann(theta, hyp_geodesic(origin, u, t));
        if (value < previous) ++violations;
        previous = value;
      }
      if (!(previous > 10.0)) ++violations;
    }
    s.add(p + "visibility", violations, 0.0);
  });

  s.guarded(p + "isometries", [&] {
    double cocycle = 0.0;
    double distance = 0.0;
    double roundtrip = 0.0;
    double composition = 0.0;
    for (int k = 0; k < 100; ++k) {
      const MoebiusIsometry phi = random_isometry(d, rng, 0.7);
      const MoebiusIsometry psi = random_isometry(d, rng, 0.7);
      const IdealPoint theta(random_unit_vector(d, rng));
      const BallPoint x = random_ball_point(d, rng, 0.7);
      const BallPoint y = random_ball_point(d, rng, 0.7);
      cocycle = std::max(cocycle, cocycle_defect(phi, theta, x));
      distance = std::max(distance, std::abs(hyp_distance(phi.apply(x), phi.apply(y)) - hyp_distance(x, y)));
      roundtrip = std::max(roundtrip, (phi.inverse().boundary(phi.boundary(theta)).direction() - theta.direction()).norm());
      composition = std::max(composition, hyp_distance(phi.compose(psi).apply(x), phi.apply(psi.apply(x))));
    }
    s.add(p + "cocycle", cocycle, s.tol("cocycle_tol"));
    s.add(p + "distance_preservation", distance, s.tol("distance_preservation_tol"));
    s.add(p + "boundary_roundtrip", roundtrip, s.tol("distance_preservation_tol"));
    s.add(p + "composition", composition, s.tol("distance_preservation_tol"));
  });

  s.guarded(p + "boundary_jacobian", [&] {
    const GridPtr grid = d == 2 ? make_grid(2, 256) : make_grid(3, 24);
    double mass = 0.0;
    double exact = 0.0;
    for (int k = 0; k < 3; ++k) {
      const MoebiusIsometry phi = random_isometry(d, rng, 0.4);
      Eigen::VectorXd jac(static_cast<Eigen::Index>(grid->size()));
      for (Eigen::Index i = 0; i < jac.size(); ++i) {
        const IdealPoint theta(grid->nodes().col(i));
        jac(i) = boundary_jacobian(phi, theta);
        exact = std::max(exact, std::abs(jac(i) / boundary_jacobian_exact(phi, theta) - 1.0));
      }
      mass = std::max(mass, std::abs(integrate(*grid, jac) - 1.0));
    }
    s.add(p + "jacobian_mass", mass, s.tol("jacobian_mass_tol"));
    s.add(p + "jacobian_closed_form", exact, s.tol("jacobian_mass_tol"));
  });
}

// ---------------------------------------------------------------- barycenter

BarycenterOptions solver_options(const SuiteBuilder& s) {
  BarycenterOptions options;
  options.gradient_tolerance = s.tol("grad_tol");
  options.max_iterations = static_cast<int>(s.tol("max_newton_iters"));
  options.min_hessian_eigenvalue = s.tol("hessian_min_eig");
  return options;
}

Measure trig_measure(const GridPtr& grid, const std::vector<double>& a, const std::vector<double>& b) {
  return measure_from_samples(grid, (trig_samples(*grid, a, b).array() + 1.0).matrix());
}

void barycenter_suite(SuiteBuilder& s, std::mt19937_64& rng) {
  const GridPtr grid = make_grid(2, 256);
  const HyperbolicModel h2 = HyperbolicModel::real_hyperbolic(2);
  const HyperbolicModel h3 = HyperbolicModel::real_hyperbolic(3);
  const BarycenterOptions options = solver_options(s);
  const BallPoint origin = BallPoint::origin(2);

  s.guarded("barycenter.fixed_points", [&] {
    double uniform = hyp_distance(barycenter(Measure::uniform(grid), h2, options).point, origin);
    const GridPtr sphere = make_grid(3, 16);
    uniform = std::max(uniform, hyp_distance(barycenter(Measure::uniform(sphere), h3, options).point, BallPoint::origin(3)));
    s.add("barycenter.uniform_origin", uniform, s.tol("fixed_point_tol"));

    double fixed = 0.0;
    int iterations = 0;
    double min_eig = std::numeric_limits<double>::infinity();
    const double step = 0.56 / 2.0;
    for (int i = -2; i <= 2; ++i) {
      for (int j = -2; j <= 2; ++j) {
        const BallPoint x(Eigen::Vector2d(i * step, j * step));
        const BarycenterResult r = barycenter(poisson_kernel_measure(x, h2, grid, s.tol("poisson_mass_drift")), h2, options);
        fixed = std::max(fixed, hyp_distance(r.point, x));
        iterations = std::max(iterations, r.iterations);
        min_eig = std::min(min_eig, r.hessian_min_eigenvalue);
      }
    }
    s.add("barycenter.poisson_fixed_point", fixed, s.tol("fixed_point_tol"));
    s.add("barycenter.newton_iterations", iterations, s.tol("newton_iter_budget"));
    s.add("barycenter.solve_hessian_min_eig", min_eig, 0.0, Relation::Above);
  });

  s.guarded("barycenter.averaged_busemann", [&] {
    double norm_excess = 0.0;
    double grad_fd = 0.0;
    double hess_fd = 0.0;
    double min_eig = std::numeric_limits<double>::infinity();
    double lipschitz = 0.0;
    for (int k = 0; k < 100; ++k) {
      const Measure mu = random_measure(grid, rng, 0.3);
      const BallPoint x = random_ball_point(2, rng, 0.8);
      const Eigen::VectorXd grad = averaged_busemann_gradient(mu, x);
      norm_excess = std::max(norm_excess, g_norm(x, grad) - 1.0);
      const Eigen::MatrixXd hess = averaged_busemann_hessian(mu, x);
      min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(hess).eigenvalues().minCoeff());
      const BallPoint y = random_ball_point(2, rng, 0.8);
      lipschitz = std::max(lipschitz, std::abs(averaged_busemann(mu, x) - averaged_busemann(mu, y)) - hyp_distance(x, y));
      if (k < 10) {
        const Eigen::VectorXd e = random_unit_vector(2, rng);
        const Eigen::VectorXd u = unit_scale(x) * e;
        constexpr double h = 1e-4;
        const double plus = averaged_busemann(mu, hyp_geodesic(x, u, h));
        const double minus = averaged_busemann(mu, hyp_geodesic(x, u, -h));
        const double center = averaged_busemann(mu, x);
        grad_fd = std::max(grad_fd, std::abs((plus - minus) / (2.0 * h) - metric_inner(x, grad, u)));
        hess_fd = std::max(hess_fd, std::abs((plus - 2.0 * center + minus) / (h * h) - e.dot(hess * e)));
      }
    }
    s.add("barycenter.gradient_norm_bound", std::max(norm_excess, 0.0), s.tol("lipschitz_tol"));
    s.add("barycenter.gradient_fd", grad_fd, s.tol("gradient_fd_tol"));
    s.add("barycenter.hessian_fd", hess_fd, s.tol("hessian_fd_tol"));
    s.add("barycenter.hessian_positive", min_eig, 0.0, Relation::Above);
    s.add("barycenter.lipschitz", std::max(lipschitz, 0.0), s.tol("lipschitz_tol"));
  });

  s.guarded("barycenter.equivariance", [&] {
    const Measure mu = random_measure(grid, rng, 0.2);
    const MoebiusIsometry rotation = MoebiusIsometry::rotation2d(2.0 * std::numbers::pi * 7.0 / 256.0);
    Eigen::Vector2d a(0.3, 0.0);
    const MoebiusIsometry generic(MoebiusIsometry::rotation2d(0.4).rotation_matrix(), a);
    s.add("barycenter.equivariance_rotation", equivariance_defect(rotation, mu, h2), s.tol("rotation_equivariance_tol"));
    s.add("barycenter.equivariance_generic", equivariance_defect(generic, mu, h2), s.tol("generic_equivariance_tol"));
    const BallPoint x(Eigen::Vector2d(0.2, -0.1));
    s.add("barycenter.theta_rotation", theta_commutation_defect(rotation, x, h2, grid), s.tol("theta_rotation_tol"));
    s.add("barycenter.theta_generic", theta_commutation_defect(generic, x, h2, grid), s.tol("theta_generic_tol"));
  });

  s.guarded("barycenter.homothety", [&] {
    double worst = 0.0;
    double identity = 0.0;
    for (int k = 0; k < 5; ++k) {
      const BallPoint x = k == 0 ? origin : random_ball_point(2, rng, 0.6);
      const Eigen::VectorXd u = unit_scale(x) * random_unit_vector(2, rng) * 0.7;
      const double g = metric_inner(x, u, u);
      worst = std::max(worst, std::abs(pullback_metric(x, u, u, h2, grid) - 0.5 * g) / (0.5 * g));

      const Measure mux = poisson_kernel_measure(x, h2, grid);
      const Eigen::VectorXd frame = u / unit_scale(x);
      const double lhs = frame.dot(averaged_busemann_hessian(mux, x) * frame);
      const TangentMeasure nu = nu_map(mux, x, u);
      const double rhs = h2.entropy * fisher_inner(mux, nu, nu);
      identity = std::max(identity, std::abs(lhs - rhs) / std::abs(rhs));
    }
    s.add("barycenter.homothety_d2", worst, s.tol("homothety_rel_tol"));
    s.add("barycenter.hessian_identity", identity, s.tol("hessian_identity_rel_tol"));

    const GridPtr sphere = make_grid(3, 16);
    const BallPoint o3 = BallPoint::origin(3);
    const Eigen::VectorXd u = unit_scale(o3) * Eigen::Vector3d(0.0, 0.6, 0.8);
    const double constant = pullback_metric(o3, u, u, h3, sphere) / metric_inner(o3, u, u);
    const double q = h3.entropy;
    s.add("barycenter.homothety_d3_vs_Q_over_n", std::abs(constant - q / 3.0) / (q / 3.0), s.tol("homothety_rel_tol"),
          Relation::AtMost, false);
    s.add("barycenter.homothety_d3_vs_Q2_over_n", std::abs(constant - q * q / 3.0) / (q * q / 3.0),
          s.tol("homothety_rel_tol"), Relation::AtMost, false);
  });

  s.guarded("barycenter.fibers", [&] {
    const Measure uniform = Measure::uniform(grid);
    // q(v) = v^1 v^2 on the circle is sin(2 theta)/2; unit normalization.
    const TangentMeasure q = tangent_from_samples(grid, std::sqrt(2.0) * trig_samples(*grid, {0.0, 0.0}, {0.0, 1.0}));
    double path = 0.0;
    for (double t : {0.3, 0.6, 1.0}) {
      path = std::max(path, hyp_distance(barycenter(geodesic_point(uniform, q, t), h2, options).point, origin));
    }
    s.add("barycenter.fiber_q_geodesic", path, s.tol("fiber_path_tol"));

    const BallPoint x(Eigen::Vector2d(0.3, -0.2));
    const Measure base = poisson_kernel_measure(x, h2, grid);
    auto fiber_measure = [&]() {
      const TangentMeasure v = fiber_decompose(base, x, random_tangent(grid, rng)).vertical;
      const double scale = 0.5 * (base.density().array() / v.density().array().abs()).minCoeff();
      return base + std::min(scale, 1.0) * v;
    };
    double m_path = 0.0;
    for (int k = 0; k < 3; ++k) {
      const Measure m0 = fiber_measure();
      const Measure m1 = fiber_measure();
      for (double t : {0.25, 0.5, 0.75}) {
        m_path = std::max(m_path, hyp_distance(barycenter(m_geodesic(m0, m1, t), h2, options).point, x));
      }
    }
    s.add("barycenter.m_geodesic_fiber", m_path, s.tol("m_fiber_tol"));

    double ortho = 0.0;
    double idempotent = 0.0;
    for (int k = 0; k < 10; ++k) {
      const FiberDecomposition parts = fiber_decompose(base, x, random_tangent(grid, rng));
      ortho = std::max(ortho, std::abs(fisher_inner(base, parts.vertical, parts.horizontal)));
      const FiberDecomposition again = fiber_decompose(base, x, parts.vertical);
      idempotent = std::max(idempotent, fisher_norm(base, again.horizontal));
    }
    s.add("barycenter.fiber_orthogonality", ortho, s.tol("fiber_orthogonality_tol"));
    s.add("barycenter.fiber_idempotent", idempotent, s.tol("fiber_orthogonality_tol"));

    const TangentMeasure generic = tangent_from_samples(grid, trig_samples(*grid, {0.0, 1.0, 1.0}, {0.0, 0.0, 0.0}));
    s.add("barycenter.second_fundamental_q", fisher_norm(uniform, fiber_second_fundamental(uniform, origin, q, q)),
          s.tol("fiber_orthogonality_tol"));
    s.add("barycenter.second_fundamental_generic",
          fisher_norm(uniform, fiber_second_fundamental(uniform, origin, generic, generic)), s.tol("fiber_tol"),
          Relation::Above);
  });

  s.guarded("barycenter.fiber_geodesics", [&] {
    // Pairs with a common symmetry keep sigma in the fiber; mixing the second
    // and third harmonics puts a first harmonic into sqrt(f f1).
    struct Pair {
      std::vector<double> a0, b0, a1, b1;
      bool expect_in_fiber;
    };
    const std::vector<Pair> pairs{
        {{0, 0, 0}, {0, 0, 0}, {0, 0, 0.5}, {0, 0, 0}, true},
        {{0, 0.3, 0}, {0, 0, 0}, {0, 0, 0, 0.4}, {0, 0, 0, 0}, true},
        {{0, 0.2, 0}, {0, 0.1, 0}, {0, -0.3, 0}, {0, 0.2, 0}, true},
        {{0, 0, 0.3}, {0, 0, 0}, {0, 0, 0, 0, 0, 0.3}, {0, 0, 0, 0, 0, 0}, true},
        {{0, 0, 0}, {0, 0.4, 0}, {0, 0, 0, -0.3}, {0, 0, 0, 0.2}, true},
        {{0, 0, 0}, {0, 0, 0}, {0, 0.5, 0.4}, {0, 0, 0}, false},
        {{0, 0.3, 0}, {0, 0, 0}, {0, 0, 0.4}, {0, 0, 0}, false},
        {{0, 0, 0.3}, {0, 0, 0}, {0, 0.4, 0}, {0, 0.2, 0}, false},
        {{0, 0, 0}, {0, 0, 0}, {0, 0.3, 0}, {0, 0, 0.4}, false},
        {{0, 0.2, 0.2}, {0, 0, 0}, {0, 0, 0}, {0, 0, 0.3}, false},
    };
    int failures = 0;
    for (const Pair& pair : pairs) {
      const Measure m0 = trig_measure(grid, pair.a0, pair.b0);
      const Measure m1 = trig_measure(grid, pair.a1, pair.b1);
      const FiberGeodesicReport r = fiber_geodesic_check(m0, m1, origin, h2, 9, s.tol("fiber_geodesic_tol"));
      if (!r.consistent() || r.sigma_in_fiber != pair.expect_in_fiber) ++failures;
    }
    s.add("barycenter.fiber_geodesic_equivalence", failures, 0.0);
  });
}

void run_named(const std::string& name, SuiteBuilder& s, std::mt19937_64& rng) {
  if (name == "fisher") {
    fisher_suite(s, rng);
  } else if (name == "alpha") {
    alpha_suite(s, rng);
  } else if (name == "hyperbolic") {
    hyperbolic_suite(s, rng, 2);
    hyperbolic_suite(s, rng, 3);
  } else if (name == "barycenter") {
    barycenter_suite(s, rng);
  } else {
    throw std::invalid_argument("unknown suite '" + name + "'");
  }
}

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::AtMost: return "<=";
    case Relation::AtLeast: return ">=";
    case Relation::Above: return ">";
  }
  return "?";
}

}  // namespace

Report run_suite(const std::string& name, std::uint64_t seed, const Tolerances& tolerances) {
  if (std::find(suite_names().begin(), suite_names().end(), name) == suite_names().end()) {
    throw std::invalid_argument("unknown suite '" + name + "'");
  }
  Report report{name, seed, {}};
  SuiteBuilder builder(report, tolerances);
  // Each suite draws from its own stream, so `all` reproduces the individual
  // suites and adding checks to one suite does not reshuffle the others.
  auto stream = [seed](std::size_t index) { return std::mt19937_64(seed + 0x9e3779b97f4a7c15ULL * (index + 1)); };
  for (std::size_t i = 0; i + 1 < suite_names().size(); ++i) {
    const std::string& part = suite_names()[i];
    if (name != "all" && name != part) continue;
    std::mt19937_64 rng = stream(i);
    run_named(part, builder, rng);
  }
  return report;
}

nlohmann::json report_to_json(const Report& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const Check& c : report.checks) {
    nlohmann::json entry{{"id", c.id},
                         {"value", c.value},
                         {"tolerance", c.tolerance},
                         {"relation", relation_name(c.relation)},
                         {"passed", c.passed},
                         {"gating", c.gating}};
    checks.push_back(std::move(entry));
  }
  return nlohmann::json{{"suite", report.suite},
                        {"seed", report.seed},
                        {"passed", report.passed()},
                        {"checks", std::move(checks)}};
}

}  // namespace infogeom
