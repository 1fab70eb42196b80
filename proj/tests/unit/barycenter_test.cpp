#include <gtest/gtest.h>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>

#include "infogeom/alpha_geometry.hpp"
#include "infogeom/barycenter.hpp"
#include "infogeom/errors.hpp"
#include "infogeom/fisher_geometry.hpp"
#include "infogeom/hyperbolic_space.hpp"
#include "infogeom/verification.hpp"
#include "oracles.hpp"

using namespace infogeom;
using std::numbers::pi;

namespace {

Eigen::VectorXd vec2(double a, double b) { return Eigen::Vector2d(a, b); }

double sup(const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

const HyperbolicModel kPlane = HyperbolicModel::real_hyperbolic(2);
const HyperbolicModel kSpace = HyperbolicModel::real_hyperbolic(3);

// First trigonometric moments; both vanish exactly when the origin is critical.
Eigen::Vector2d first_moments(const Measure& mu) {
  const QuadratureGrid& grid = mu.grid();
  return grid.nodes() * grid.weights().cwiseProduct(mu.density());
}

}  // namespace

TEST(HyperbolicModel, EntropyIsVolumeGrowthRate) {
  for (int d : {2, 3}) {
    const double r = 30.0;
    const double slope = std::log(oracle::hyperbolic_ball_volume(d, r + 1)) - std::log(oracle::hyperbolic_ball_volume(d, r));
    EXPECT_NEAR(HyperbolicModel::real_hyperbolic(d).entropy, slope, 1e-9);
  }
  EXPECT_THROW(HyperbolicModel::real_hyperbolic(1), std::invalid_argument);
}

TEST(AveragedBusemann, VanishesAtOriginAndIsLipschitz) {
  const GridPtr grid = make_grid(2, 256);
  std::mt19937_64 rng(1);
  for (int k = 0; k < 20; ++k) {
    const Measure mu = random_measure(grid, rng, 0.3);
    EXPECT_EQ(averaged_busemann(mu, BallPoint::origin(2)), 0.0);
    const BallPoint x = random_ball_point(2, rng, 0.9);
    const BallPoint y = random_ball_point(2, rng, 0.9);
    EXPECT_LE(std::abs(averaged_busemann(mu, x) - averaged_busemann(mu, y)), hyp_distance(x, y) + 1e-10);
  }
}

TEST(AveragedBusemann, ConvexAlongGeodesics) {
  const GridPtr grid = make_grid(2, 128);
  std::mt19937_64 rng(2);
  const double h = 1e-3;
  for (int k = 0; k < 20; ++k) {
    const Measure mu = random_measure(grid, rng, 0.3);
    const BallPoint x = random_ball_point(2, rng, 0.8);
    Eigen::VectorXd u = random_unit_vector(2, rng);
    u /= g_norm(x, u);
    const double second = averaged_busemann(mu, hyp_geodesic(x, u, h)) - 2 * averaged_busemann(mu, x) +
                          averaged_busemann(mu, hyp_geodesic(x, u, -h));
    EXPECT_GE(second / (h * h), -1e-8);
  }
}

TEST(AveragedBusemannGradient, Examples) {
  const GridPtr grid = make_grid(2, 256);
  EXPECT_LT(averaged_busemann_gradient(Measure::uniform(grid), BallPoint::origin(2)).norm(), 1e-15);
  std::mt19937_64 rng(3);
  const double h = 1e-6;
  for (int k = 0; k < 20; ++k) {
    const Measure mu = random_measure(grid, rng, 0.3);
    const BallPoint x = random_ball_point(2, rng, 0.9);
    const Eigen::VectorXd grad = averaged_busemann_gradient(mu, x);
    EXPECT_LE(g_norm(x, grad), 1.0 + 1e-12);
    const Eigen::VectorXd v = 0.1 * random_unit_vector(2, rng);
    const double fd =
        (averaged_busemann(mu, BallPoint(x.coords() + h * v)) - averaged_busemann(mu, BallPoint(x.coords() - h * v))) /
        (2 * h);
    EXPECT_NEAR(metric_inner(x, grad, v), fd, 1e-7);
  }
}

TEST(AveragedBusemannHessian, UniformAtOriginIsHalfIdentity) {
  const Eigen::MatrixXd hess = averaged_busemann_hessian(Measure::uniform(make_grid(2, 256)), BallPoint::origin(2));
  EXPECT_LT((hess - 0.5 * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(AveragedBusemannHessian, PositiveAndMatchesSecondDifference) {
  std::mt19937_64 rng(4);
  const double h = 1e-4;
  for (const GridPtr& grid : {make_grid(2, 128), make_grid(3, 16)}) {
    const int d = grid->dim();
    for (int k = 0; k < 5; ++k) {
      const Measure mu = random_measure(grid, rng, 0.3);
      const BallPoint x = random_ball_point(d, rng, 0.8);
      const Eigen::MatrixXd hess = averaged_busemann_hessian(mu, x);
      EXPECT_LT((hess - hess.transpose()).cwiseAbs().maxCoeff(), 1e-14);
      EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(hess).eigenvalues().minCoeff(), 0.0);
      const Eigen::VectorXd dir = random_unit_vector(d, rng);
      // Frame coordinates of the g-unit vector dir * s.
      const Eigen::VectorXd u = dir * unit_scale(x);
      const double fd = (averaged_busemann(mu, hyp_geodesic(x, u, h)) - 2 * averaged_busemann(mu, x) +
                         averaged_busemann(mu, hyp_geodesic(x, u, -h))) /
                        (h * h);
      EXPECT_NEAR(dir.dot(hess * dir), fd, 1e-6);
    }
  }
}

TEST(Barycenter, UniformMeasureIsOrigin) {
  for (const GridPtr& grid : {make_grid(2, 256), make_grid(3, 24)}) {
    const HyperbolicModel model = HyperbolicModel::real_hyperbolic(grid->dim());
    const BarycenterResult r = barycenter(Measure::uniform(grid), model);
    EXPECT_LT(r.point.coords().norm(), 1e-12);
    EXPECT_LE(r.gradient_norm, 1e-10);
    EXPECT_GT(r.hessian_min_eigenvalue, 0.0);
  }
}

TEST(Barycenter, PoissonKernelFixedPoint) {
  const GridPtr grid = make_grid(2, 256);
  const BallPoint x(vec2(0.3, 0.0));
  const BarycenterResult r = barycenter(poisson_kernel_measure(x, kPlane, grid), kPlane);
  EXPECT_LT(hyp_distance(r.point, x), 1e-8);
  EXPECT_LE(r.iterations, 30);

  const GridPtr sphere = make_grid(3, 32);
  const BallPoint y(Eigen::Vector3d(0.2, -0.1, 0.3));
  const BarycenterResult r3 = barycenter(poisson_kernel_measure(y, kSpace, sphere), kSpace);
  EXPECT_LT(hyp_distance(r3.point, y), 1e-8);
}

TEST(Barycenter, RotationEquivariance) {
  const GridPtr grid = make_grid(2, 256);
  std::mt19937_64 rng(5);
  const Measure mu = random_measure(grid, rng, 0.3);
  const double angle = 2 * pi * 37 / 256;
  const BallPoint bar = barycenter(mu, kPlane).point;
  const BallPoint bar_rotated = barycenter(pushforward(BoundaryMap::circle_rotation(angle), mu), kPlane).point;
  EXPECT_LT(hyp_distance(bar_rotated, MoebiusIsometry::rotation2d(angle).apply(bar)), 1e-8);
}

TEST(Barycenter, BudgetExhaustionThrows) {
  const GridPtr grid = make_grid(2, 256);
  BarycenterOptions options;
  options.max_iterations = 1;
  const Measure mu = poisson_kernel_measure(BallPoint(vec2(0.5, 0.2)), kPlane, grid);
  EXPECT_THROW(barycenter(mu, kPlane, options), ConvergenceError);
  EXPECT_THROW(barycenter(mu, kSpace), std::invalid_argument);
}

TEST(PoissonKernel, Examples) {
  const GridPtr grid = make_grid(2, 256);
  EXPECT_LT(sup(poisson_kernel_measure(BallPoint::origin(2), kPlane, grid).density().array().matrix() -
                Eigen::VectorXd::Ones(256)),
            1e-15);
  const Measure p = poisson_kernel_measure(BallPoint(vec2(0.5, 0.0)), kPlane, grid);
  EXPECT_NEAR(p.density()(0), 3.0, 1e-8);
}

TEST(PoissonKernel, MeanValueProperty) {
  std::mt19937_64 rng(6);
  for (const GridPtr& grid : {make_grid(2, 256), make_grid(3, 64)}) {
    const int d = grid->dim();
    for (int k = 0; k < 10; ++k) {
      const BallPoint x = random_ball_point(d, rng, 0.8);
      // Raw kernel mass computed here, independently of the library.
      Eigen::VectorXd raw(grid->size());
      for (std::size_t i = 0; i < grid->size(); ++i) {
        raw(i) = std::pow((1 - x.squared_norm()) / (x.coords() - grid->node(i)).squaredNorm(), d - 1);
      }
      EXPECT_NEAR(integrate(*grid, raw), 1.0, 1e-8) << "dim " << d;
      EXPECT_LT(sup(poisson_kernel_measure(x, HyperbolicModel::real_hyperbolic(d), grid).density() - raw), 1e-8);
    }
  }
  EXPECT_THROW(poisson_kernel_measure(BallPoint(vec2(0.95, 0.0)), kPlane, make_grid(2, 8)), DomainError);
}

TEST(PoissonKernel, IsPushforwardOfUniform) {
  const GridPtr grid = make_grid(2, 256);
  const Eigen::VectorXd a = vec2(0.4, -0.2);
  const Measure pushed = pushforward(to_boundary_map(MoebiusIsometry::translation(a)), Measure::uniform(grid));
  EXPECT_LT(sup(pushed.density() - poisson_kernel_measure(BallPoint(a), kPlane, grid).density()), 1e-12);
}

TEST(NuMap, Examples) {
  const GridPtr grid = make_grid(2, 256);
  const Measure lambda = Measure::uniform(grid);
  const BallPoint o = BallPoint::origin(2);
  EXPECT_EQ(sup(nu_map(lambda, o, Eigen::VectorXd::Zero(2)).density()), 0.0);
  const TangentMeasure nu = nu_map(lambda, o, vec2(0.5, 0.0));
  EXPECT_LT(sup(nu.density() + oracle::sample_circle(*grid, [](double t) { return std::cos(t); })), 1e-14);
  EXPECT_THROW(nu_map(lambda, BallPoint(vec2(0.3, 0.0)), vec2(0.5, 0.0)), DomainError);
}

TEST(NuMap, Injective) {
  std::mt19937_64 rng(7);
  for (const GridPtr& grid : {make_grid(2, 256), make_grid(3, 24)}) {
    const int d = grid->dim();
    const BallPoint x = random_ball_point(d, rng, 0.6);
    const Measure mu = poisson_kernel_measure(x, HyperbolicModel::real_hyperbolic(d), grid);
    const BallPoint bar = barycenter(mu, HyperbolicModel::real_hyperbolic(d)).point;
    const std::vector<TangentMeasure> basis = nu_basis(mu, bar);
    Eigen::MatrixXd gram(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) gram(i, j) = fisher_inner(mu, basis[i], basis[j]);
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram).eigenvalues().minCoeff(), 0.0);
  }
}

TEST(FiberDecompose, Examples) {
  const GridPtr grid = make_grid(2, 256);
  const Measure lambda = Measure::uniform(grid);
  const BallPoint o = BallPoint::origin(2);
  const std::vector<TangentMeasure> basis = nu_basis(lambda, o);
  const TangentMeasure in_image = 0.3 * basis[0] + (-1.2) * basis[1];
  const FiberDecomposition a = fiber_decompose(lambda, o, in_image);
  EXPECT_LT(sup(a.vertical.density()), 1e-14);
  const TangentMeasure vertical = oracle::circle_tangent(grid, [](double t) { return std::cos(2 * t); });
  const FiberDecomposition b = fiber_decompose(lambda, o, vertical);
  EXPECT_LT(sup(b.horizontal.density()), 1e-14);

  std::mt19937_64 rng(8);
  const Measure mu = random_measure(grid, rng, 0.3);
  const BallPoint x = barycenter(mu, kPlane).point;
  const TangentMeasure tau = random_tangent(grid, rng);
  const FiberDecomposition c = fiber_decompose(mu, x, tau);
  EXPECT_LE(std::abs(fisher_inner(mu, c.vertical, c.horizontal)), 1e-10);
  EXPECT_LT(sup((c.vertical + c.horizontal).density() - tau.density()), 1e-14);
  // The vertical part does not move the barycenter to first order.
  EXPECT_LT(averaged_busemann_gradient(mu + 1e-3 * c.vertical, x).norm(), 1e-9);
}

TEST(FiberSecondFundamental, HorizontalAndSymmetric) {
  const GridPtr grid = make_grid(2, 256);
  const Measure lambda = Measure::uniform(grid);
  const BallPoint o = BallPoint::origin(2);
  const TangentMeasure a = oracle::circle_tangent(grid, [](double t) { return std::cos(2 * t); });
  const TangentMeasure b = oracle::circle_tangent(grid, [](double t) { return std::sin(3 * t); });
  const TangentMeasure h = fiber_second_fundamental(lambda, o, a, b);
  EXPECT_LT(sup(h.density() - fiber_second_fundamental(lambda, o, b, a).density()), 1e-15);
  EXPECT_LT(sup(fiber_decompose(lambda, o, h).vertical.density()), 1e-14);
  // cos 2t sin 3t has a sin t component, so the form does not vanish here.
  EXPECT_GT(fisher_norm(lambda, h), 0.1);
  EXPECT_LT(fisher_norm(lambda, fiber_second_fundamental(lambda, o, a, a)), 1e-14);
}

TEST(PullbackMetric, HomothetyInThePlane) {
  const GridPtr grid = make_grid(2, 256);
  const BallPoint o = BallPoint::origin(2);
  const Eigen::VectorXd u = vec2(0.5, 0.0);
  EXPECT_NEAR(pullback_metric(o, u, u, kPlane, grid), 0.5, 1e-12);
  std::mt19937_64 rng(9);
  for (int k = 0; k < 5; ++k) {
    const BallPoint x = random_ball_point(2, rng, 0.6);
    const Eigen::VectorXd v = random_unit_vector(2, rng), w = random_unit_vector(2, rng);
    EXPECT_NEAR(pullback_metric(x, v, w, kPlane, grid), pullback_metric(x, w, v, kPlane, grid), 1e-12);
    const double ratio = pullback_metric(x, v, v, kPlane, grid) / metric_inner(x, v, v);
    EXPECT_NEAR(ratio, 0.5, 0.5e-6);
  }
}

TEST(PullbackMetric, InvariantAlongIsometryOrbits) {
  const GridPtr grid = make_grid(2, 256);
  std::mt19937_64 rng(10);
  const double h = 1e-6;
  for (int k = 0; k < 5; ++k) {
    const MoebiusIsometry phi = random_isometry(2, rng, 0.4);
    const BallPoint x = random_ball_point(2, rng, 0.4);
    const Eigen::VectorXd u = 0.2 * random_unit_vector(2, rng);
    const Eigen::VectorXd pushed = (phi.apply_raw(x.coords() + h * u) - phi.apply_raw(x.coords() - h * u)) / (2 * h);
    const double here = pullback_metric(x, u, u, kPlane, grid);
    EXPECT_NEAR(pullback_metric(phi.apply(x), pushed, pushed, kPlane, grid) / here, 1.0, 1e-6);
  }
}

TEST(PullbackMetric, SphereConstantIsRecorded) {
  // Measured constant for d = 3: Q^2 / n = 4/3.
  const GridPtr grid = make_grid(3, 32);
  const BallPoint o = BallPoint::origin(3);
  const Eigen::VectorXd u = Eigen::Vector3d(0.5, 0.0, 0.0);
  EXPECT_NEAR(pullback_metric(o, u, u, kSpace, grid), 4.0 / 3.0, 1e-10);
}

TEST(FiberGeodesic, QuadraticModeStaysInFiber) {
  const GridPtr grid = make_grid(2, 256);
  const Measure lambda = Measure::uniform(grid);
  const TangentMeasure tau = oracle::circle_tangent(grid, [](double t) { return std::sqrt(2.0) * std::sin(2 * t); });
  EXPECT_NEAR(fisher_norm(lambda, tau), 1.0, 1e-14);
  for (double t : {0.3, 0.6, 1.0}) {
    const Measure mu = geodesic_point(lambda, tau, t);
    EXPECT_LT(first_moments(mu).norm(), 1e-15);
    EXPECT_LT(barycenter(mu, kPlane).point.coords().norm(), 1e-8);
  }
}

TEST(FiberGeodesic, MixtureSegmentsStayInFiber) {
  const GridPtr grid = make_grid(2, 256);
  const Measure a = oracle::circle_measure(grid, [](double t) { return 1.0 + 0.4 * std::cos(2 * t); });
  const Measure b = oracle::circle_measure(grid, [](double t) { return 1.0 + 0.3 * std::sin(3 * t) - 0.2 * std::cos(4 * t); });
  for (double s : {0.25, 0.5, 0.75}) {
    EXPECT_LT(barycenter(m_geodesic(a, b, s), kPlane).point.coords().norm(), 1e-7);
  }
}

TEST(FiberGeodesic, CriterionIsConsistent) {
  const GridPtr grid = make_grid(2, 256);
  const Measure lambda = Measure::uniform(grid);
  const BallPoint o = BallPoint::origin(2);
  const FiberGeodesicReport same = fiber_geodesic_check(lambda, lambda, o, kPlane);
  EXPECT_TRUE(same.sigma_in_fiber);
  EXPECT_TRUE(same.path_in_fiber);

  const Measure even = oracle::circle_measure(grid, [](double t) { return 1.0 + 0.4 * std::cos(2 * t); });
  const FiberGeodesicReport inside = fiber_geodesic_check(lambda, even, o, kPlane);
  EXPECT_TRUE(inside.sigma_in_fiber);
  EXPECT_TRUE(inside.path_in_fiber);
  EXPECT_TRUE(inside.consistent());

  const Measure mixed =
      oracle::circle_measure(grid, [](double t) { return 1.0 + 0.4 * std::cos(2 * t) + 0.4 * std::sin(3 * t); });
  const FiberGeodesicReport outside = fiber_geodesic_check(lambda, mixed, o, kPlane);
  EXPECT_FALSE(outside.sigma_in_fiber);
  EXPECT_FALSE(outside.path_in_fiber);
  EXPECT_TRUE(outside.consistent());

  const Measure off = oracle::circle_measure(grid, [](double t) { return 1.0 + 0.4 * std::cos(t); });
  EXPECT_THROW(fiber_geodesic_check(lambda, off, o, kPlane), std::invalid_argument);
}

TEST(Equivariance, Defects) {
  const GridPtr grid = make_grid(2, 256);
  std::mt19937_64 rng(11);
  const Measure mu = random_measure(grid, rng, 0.3);
  EXPECT_LE(equivariance_defect(MoebiusIsometry::identity(2), mu, kPlane), 1e-12);
  EXPECT_LE(equivariance_defect(MoebiusIsometry::rotation2d(2 * pi * 11 / 256), mu, kPlane), 1e-8);
  EXPECT_LE(equivariance_defect(MoebiusIsometry::translation(vec2(0.3, 0.0)), mu, kPlane), 1e-4);

  const BallPoint x(vec2(0.2, -0.3));
  EXPECT_EQ(theta_commutation_defect(MoebiusIsometry::identity(2), x, kPlane, grid), 0.0);
  EXPECT_LE(theta_commutation_defect(MoebiusIsometry::rotation2d(2 * pi * 11 / 256), x, kPlane, grid), 1e-12);
  EXPECT_LE(theta_commutation_defect(MoebiusIsometry::rotation2d(0.9), x, kPlane, grid), 1e-5);
  EXPECT_LE(theta_commutation_defect(MoebiusIsometry::translation(vec2(0.3, 0.1)), x, kPlane, grid), 1e-5);
}
