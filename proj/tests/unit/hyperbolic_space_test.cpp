#include <gtest/gtest.h>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <numbers>
#include <random>

#include "infogeom/errors.hpp"
#include "infogeom/hyperbolic_space.hpp"
#include "infogeom/measure_space.hpp"
#include "infogeom/verification.hpp"

using namespace infogeom;
using std::numbers::pi;

namespace {

Eigen::VectorXd vec2(double a, double b) { return Eigen::Vector2d(a, b); }

// Poincare distance from the textbook formula arcosh(1 + 2|x-y|^2 / ((1-|x|^2)(1-|y|^2))).
double distance_oracle(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return std::acosh(1.0 + 2.0 * (x - y).squaredNorm() / ((1.0 - x.squaredNorm()) * (1.0 - y.squaredNorm())));
}

// A g-unit vector at x in the Euclidean direction of `dir`.
Eigen::VectorXd g_unit(const BallPoint& x, const Eigen::VectorXd& dir) { return dir / g_norm(x, dir); }

}  // namespace

TEST(BallPoint, Validation) {
  EXPECT_NO_THROW(BallPoint(vec2(0.5, 0.5)));
  EXPECT_THROW(BallPoint(vec2(1.0, 0.0)), DomainError);
  EXPECT_THROW(BallPoint(vec2(0.8, 0.8)), DomainError);
  EXPECT_THROW(BallPoint(Eigen::VectorXd::Zero(1)), std::invalid_argument);
  EXPECT_THROW(IdealPoint(vec2(0.5, 0.0)), DomainError);
  EXPECT_EQ(BallPoint::origin(3).coords().norm(), 0.0);
}

TEST(HypDistance, Examples) {
  const BallPoint o = BallPoint::origin(2);
  const BallPoint x(vec2(0.5, 0.0));
  EXPECT_NEAR(hyp_distance(o, x), std::log(3.0), 1e-15);
  EXPECT_EQ(hyp_distance(x, x), 0.0);
  std::mt19937_64 rng(1);
  for (int k = 0; k < 20; ++k) {
    const BallPoint a = random_ball_point(3, rng, 0.95);
    const BallPoint b = random_ball_point(3, rng, 0.95);
    EXPECT_NEAR(hyp_distance(a, b), hyp_distance(b, a), 1e-14 * hyp_distance(a, b));
    EXPECT_NEAR(hyp_distance(a, b), distance_oracle(a.coords(), b.coords()), 1e-10);
  }
}

TEST(HypGeodesic, Examples) {
  const BallPoint o = BallPoint::origin(2);
  const Eigen::VectorXd e = g_unit(o, vec2(1.0, 0.0));
  EXPECT_LT((hyp_geodesic(o, e, std::log(3.0)).coords() - vec2(0.5, 0.0)).norm(), 1e-15);
  std::mt19937_64 rng(2);
  for (int k = 0; k < 20; ++k) {
    const BallPoint x = random_ball_point(2, rng, 0.9);
    const Eigen::VectorXd u = g_unit(x, random_unit_vector(2, rng));
    EXPECT_LT((hyp_geodesic(x, u, 0.0).coords() - x.coords()).norm(), 1e-15);
    const double t = 0.1 + 3.0 * k / 20.0;
    EXPECT_NEAR(hyp_distance(x, hyp_geodesic(x, u, t)), t, 1e-9);
  }
  EXPECT_THROW(hyp_geodesic(o, vec2(1.0, 0.0), 1.0), std::invalid_argument);
}

TEST(HypGeodesic, InitialVelocity) {
  std::mt19937_64 rng(3);
  const BallPoint x = random_ball_point(3, rng, 0.7);
  const Eigen::VectorXd u = g_unit(x, random_unit_vector(3, rng));
  const double h = 1e-6;
  const Eigen::VectorXd v = (hyp_geodesic(x, u, h).coords() - hyp_geodesic(x, u, -h).coords()) / (2 * h);
  EXPECT_LT((v - u).norm(), 1e-8);
}

TEST(Busemann, Examples) {
  const IdealPoint theta(vec2(1.0, 0.0));
  EXPECT_EQ(busemann(theta, BallPoint::origin(2)), 0.0);
  EXPECT_NEAR(busemann(theta, BallPoint(vec2(0.5, 0.0))), -std::log(3.0), 1e-15);
  EXPECT_THROW(busemann(theta, BallPoint(vec2(1.0 - 1e-10, 0.0))), DomainError);
}

TEST(Busemann, RayProperty) {
  std::mt19937_64 rng(4);
  for (int dim : {2, 3}) {
    for (int k = 0; k < 10; ++k) {
      const IdealPoint theta(random_unit_vector(dim, rng));
      const BallPoint o = BallPoint::origin(dim);
      for (double t : {0.5, 2.0, 8.0}) {
        EXPECT_NEAR(busemann(theta, hyp_geodesic(o, g_unit(o, theta.direction()), t)), -t, 1e-9);
      }
      // From any x the ray toward theta leaves along -grad B.
      const BallPoint x = random_ball_point(dim, rng, 0.8);
      const double b0 = busemann(theta, x);
      const Eigen::VectorXd u = -busemann_gradient(theta, x);
      for (double t : {0.5, 3.0}) EXPECT_NEAR(busemann(theta, hyp_geodesic(x, u, t)), b0 - t, 1e-9);
    }
  }
}

TEST(Busemann, LipschitzAndDivergence) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 50; ++k) {
    const IdealPoint theta(random_unit_vector(2, rng));
    const BallPoint x = random_ball_point(2, rng, 0.95);
    const BallPoint y = random_ball_point(2, rng, 0.95);
    EXPECT_LE(std::abs(busemann(theta, x) - busemann(theta, y)), hyp_distance(x, y) + 1e-10);
  }
  // Along the ray to a perpendicular ideal point B grows like t - log 2.
  const IdealPoint theta(vec2(1.0, 0.0));
  const BallPoint o = BallPoint::origin(2);
  const Eigen::VectorXd u = g_unit(o, vec2(0.0, 1.0));
  EXPECT_NEAR(busemann(theta, hyp_geodesic(o, u, 12.0)) - 12.0, -std::log(2.0), 1e-4);
}

TEST(BusemannGradient, Examples) {
  std::mt19937_64 rng(6);
  const BallPoint o = BallPoint::origin(2);
  const Eigen::VectorXd dir = random_unit_vector(2, rng);
  EXPECT_LT((busemann_gradient(IdealPoint(dir), o) + dir / 2.0).norm(), 1e-15);
  for (int dim : {2, 3}) {
    for (int k = 0; k < 50; ++k) {
      const IdealPoint theta(random_unit_vector(dim, rng));
      const BallPoint x = random_ball_point(dim, rng, 0.95);
      EXPECT_NEAR(g_norm(x, busemann_gradient(theta, x)), 1.0, 1e-12);
    }
  }
}

TEST(BusemannGradient, MatchesFiniteDifference) {
  std::mt19937_64 rng(7);
  const double h = 1e-6;
  for (int k = 0; k < 20; ++k) {
    const IdealPoint theta(random_unit_vector(3, rng));
    const BallPoint x = random_ball_point(3, rng, 0.8);
    const Eigen::VectorXd v = random_unit_vector(3, rng) * 0.1;
    const double fd =
        (busemann(theta, BallPoint(x.coords() + h * v)) - busemann(theta, BallPoint(x.coords() - h * v))) / (2 * h);
    EXPECT_NEAR(metric_inner(x, busemann_gradient(theta, x), v), fd, 1e-7);
    EXPECT_NEAR(busemann_euclidean_gradient(theta, x).dot(v), fd, 1e-7);
  }
}

TEST(BusemannHessian, KernelAndOrthogonalComplement) {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 20; ++k) {
    const IdealPoint theta(random_unit_vector(2, rng));
    const BallPoint x = random_ball_point(2, rng, 0.9);
    const Eigen::VectorXd grad = busemann_gradient(theta, x);
    const Eigen::VectorXd u = g_unit(x, random_unit_vector(2, rng));
    EXPECT_NEAR(busemann_hessian(theta, x, u, grad), 0.0, 1e-10);
    const Eigen::VectorXd perp = g_unit(x, vec2(-grad(1), grad(0)));
    EXPECT_NEAR(busemann_hessian(theta, x, perp, perp), 1.0, 1e-10);
    EXPECT_GE(busemann_hessian(theta, x, u, u), -1e-12);
  }
}

TEST(BusemannHessian, MatchesSecondDerivativeAlongGeodesics) {
  std::mt19937_64 rng(9);
  const double h = 1e-4;
  for (int k = 0; k < 10; ++k) {
    const IdealPoint theta(random_unit_vector(3, rng));
    const BallPoint x = random_ball_point(3, rng, 0.7);
    const Eigen::VectorXd u = g_unit(x, random_unit_vector(3, rng));
    const double fd = (busemann(theta, hyp_geodesic(x, u, h)) - 2 * busemann(theta, x) +
                       busemann(theta, hyp_geodesic(x, u, -h))) /
                      (h * h);
    EXPECT_NEAR(busemann_hessian(theta, x, u, u), fd, 1e-6);
  }
}

TEST(Isometry, ApplyExamples) {
  const BallPoint x(vec2(0.2, -0.4));
  EXPECT_LT((MoebiusIsometry::identity(2).apply(x).coords() - x.coords()).norm(), 1e-16);
  const Eigen::VectorXd a = vec2(0.3, 0.5);
  EXPECT_LT((MoebiusIsometry::translation(a).apply(BallPoint::origin(2)).coords() - a).norm(), 1e-15);
  EXPECT_LT((mobius_translate(a, Eigen::VectorXd::Zero(2)) - a).norm(), 1e-15);
}

TEST(Isometry, PreservesDistance) {
  std::mt19937_64 rng(10);
  for (int dim : {2, 3}) {
    for (int k = 0; k < 30; ++k) {
      const MoebiusIsometry phi = random_isometry(dim, rng, 0.8);
      const BallPoint x = random_ball_point(dim, rng, 0.9);
      const BallPoint y = random_ball_point(dim, rng, 0.9);
      EXPECT_NEAR(hyp_distance(phi.apply(x), phi.apply(y)), hyp_distance(x, y), 1e-10);
    }
  }
}

TEST(Isometry, InverseAndCompose) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20; ++k) {
    const MoebiusIsometry phi = random_isometry(3, rng, 0.7);
    const MoebiusIsometry psi = random_isometry(3, rng, 0.7);
    const BallPoint x = random_ball_point(3, rng, 0.8);
    EXPECT_LT((phi.inverse().apply(phi.apply(x)).coords() - x.coords()).norm(), 1e-12);
    EXPECT_LT((phi.compose(psi).apply(x).coords() - phi.apply(psi.apply(x)).coords()).norm(), 1e-12);
    const IdealPoint theta(random_unit_vector(3, rng));
    EXPECT_LT((phi.compose(psi).boundary(theta).direction() - phi.boundary(psi.boundary(theta)).direction()).norm(),
              1e-12);
  }
}

TEST(Isometry, RejectsInvalidParameters) {
  Eigen::Matrix2d shear;
  shear << 1, 0.1, 0, 1;
  EXPECT_THROW(MoebiusIsometry(shear, Eigen::VectorXd::Zero(2)), std::invalid_argument);
  EXPECT_THROW(MoebiusIsometry::translation(vec2(1.0, 0.0)), std::invalid_argument);
  EXPECT_THROW(MoebiusIsometry(Eigen::Matrix3d::Identity(), Eigen::VectorXd::Zero(2)), std::invalid_argument);
}

TEST(BoundaryMap, LimitOfInteriorMap) {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 10; ++k) {
    const MoebiusIsometry phi = random_isometry(3, rng, 0.6);
    const Eigen::VectorXd theta = random_unit_vector(3, rng);
    const Eigen::VectorXd near = phi.apply_raw((1.0 - 1e-8) * theta);
    EXPECT_LT((near - phi.boundary(IdealPoint(theta)).direction()).norm(), 1e-6);
  }
}

TEST(BoundaryMap, JacobianExamples) {
  const IdealPoint theta(vec2(std::cos(0.4), std::sin(0.4)));
  const MoebiusIsometry id = MoebiusIsometry::identity(2);
  EXPECT_LT((boundary_map(id, theta).direction() - theta.direction()).norm(), 1e-16);
  EXPECT_NEAR(boundary_jacobian(id, theta), 1.0, 1e-9);
  const MoebiusIsometry rot = MoebiusIsometry::rotation2d(0.7);
  EXPECT_LT((boundary_map(rot, theta).direction() - vec2(std::cos(1.1), std::sin(1.1))).norm(), 1e-15);
  EXPECT_NEAR(boundary_jacobian(rot, theta), 1.0, 1e-9);
  EXPECT_NEAR(boundary_jacobian_exact(rot, theta), 1.0, 1e-15);
}

TEST(BoundaryMap, JacobianIntegratesToOne) {
  std::mt19937_64 rng(13);
  const GridPtr circle = make_grid(2, 256);
  const GridPtr sphere = make_grid(3, 48);
  for (const GridPtr& grid : {circle, sphere}) {
    const MoebiusIsometry phi = random_isometry(grid->dim(), rng, 0.4);
    Eigen::VectorXd exact(grid->size()), fd(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) {
      const IdealPoint theta(grid->node(i));
      exact(i) = boundary_jacobian_exact(phi, theta);
      fd(i) = boundary_jacobian(phi, theta);
    }
    EXPECT_NEAR(integrate(*grid, exact), 1.0, 1e-8) << "dim " << grid->dim();
    EXPECT_LT((exact - fd).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(Cocycle, Examples) {
  std::mt19937_64 rng(14);
  const IdealPoint theta(random_unit_vector(2, rng));
  const BallPoint x = random_ball_point(2, rng, 0.8);
  EXPECT_EQ(cocycle_defect(MoebiusIsometry::identity(2), theta, x), 0.0);
  EXPECT_LE(cocycle_defect(MoebiusIsometry::rotation2d(1.3), theta, x), 1e-14);
  const MoebiusIsometry r3 = MoebiusIsometry::rotation3d(Eigen::Vector3d(0, 1, 1), 0.9);
  const Eigen::VectorXd y = random_ball_point(3, rng, 0.8).coords();
  const IdealPoint th3(random_unit_vector(3, rng));
  EXPECT_NEAR(busemann(th3, r3.apply(BallPoint(y))),
              busemann(IdealPoint(r3.rotation_matrix().transpose() * th3.direction()), BallPoint(y)), 1e-14);
  for (int dim : {2, 3}) {
    for (int k = 0; k < 100; ++k) {
      const MoebiusIsometry phi = random_isometry(dim, rng, 0.8);
      EXPECT_LE(cocycle_defect(phi, IdealPoint(random_unit_vector(dim, rng)), random_ball_point(dim, rng, 0.8)),
                1e-9);
    }
  }
}

TEST(BallExp, AgreesWithGeodesic) {
  std::mt19937_64 rng(15);
  const BallPoint x = random_ball_point(2, rng, 0.6);
  const Eigen::VectorXd u = g_unit(x, random_unit_vector(2, rng));
  EXPECT_LT((ball_exp(x, 1.7 * u).coords() - hyp_geodesic(x, u, 1.7).coords()).norm(), 1e-14);
  EXPECT_LT((ball_exp(x, Eigen::VectorXd::Zero(2)).coords() - x.coords()).norm(), 1e-16);
}
