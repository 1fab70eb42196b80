#include "infogeom/measure_space.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "infogeom/constants.hpp"
#include "infogeom/errors.hpp"
#include "infogeom/parallel.hpp"

namespace infogeom {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double derivative = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      derivative = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / derivative;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * derivative * derivative);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
}

GridPtr make_grid(int dim, int resolution) {
  if (dim != 2 && dim != 3) {
    throw std::invalid_argument("make_grid: unsupported dimension " + std::to_string(dim) +
                                " (expected 2 or 3)");
  }
  if (resolution < kMinGridResolution) {
    throw std::invalid_argument("make_grid: resolution " + std::to_string(resolution) +
                                " below minimum " + std::to_string(kMinGridResolution));
  }
  auto grid = std::shared_ptr<QuadratureGrid>(new QuadratureGrid());
  grid->dim_ = dim;
  grid->resolution_ = resolution;

  if (dim == 2) {
    grid->azimuths_ = resolution;
    grid->nodes_.resize(2, resolution);
    for (int i = 0; i < resolution; ++i) {
      const double angle = 2.0 * std::numbers::pi * i / resolution;
      grid->nodes_(0, i) = std::cos(angle);
      grid->nodes_(1, i) = std::sin(angle);
    }
    grid->weights_ = Eigen::VectorXd::Constant(resolution, 1.0 / resolution);
    return grid;
  }

  std::vector<double> x;
  std::vector<double> w;
  gauss_legendre(resolution, x, w);
  const int azimuths = 2 * resolution;
  grid->azimuths_ = azimuths;
  const Eigen::Index count = static_cast<Eigen::Index>(resolution) * azimuths;
  grid->nodes_.resize(3, count);
  grid->weights_.resize(count);
  grid->polar_.resize(static_cast<std::size_t>(resolution));
  for (int level = 0; level < resolution; ++level) {
    // Ascending polar angle means descending cos(polar).
    const auto src = static_cast<std::size_t>(resolution - 1 - level);
    const double z = x[src];
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    grid->polar_[static_cast<std::size_t>(level)] = std::acos(z);
    for (int a = 0; a < azimuths; ++a) {
      const double phi = 2.0 * std::numbers::pi * a / azimuths;
      const Eigen::Index idx = static_cast<Eigen::Index>(level) * azimuths + a;
      grid->nodes_(0, idx) = s * std::cos(phi);
      grid->nodes_(1, idx) = s * std::sin(phi);
      grid->nodes_(2, idx) = z;
      grid->weights_(idx) = w[src] / (2.0 * azimuths);
    }
  }
  grid->weights_ /= grid->weights_.sum();
  return grid;
}

double integrate(const QuadratureGrid& grid, std::span<const double> samples) {
  if (samples.size() != grid.size()) {
    throw std::invalid_argument("integrate: " + std::to_string(samples.size()) +
                                " samples for a grid of " + std::to_string(grid.size()) + " nodes");
  }
  const Eigen::VectorXd& w = grid.weights();
  return deterministic_sum(samples.size(), [&](std::size_t i) {
    return w(static_cast<Eigen::Index>(i)) * samples[i];
  });
}

double integrate(const QuadratureGrid& grid, const Eigen::VectorXd& samples) {
  return integrate(grid, std::span<const double>(samples.data(), static_cast<std::size_t>(samples.size())));
}

void require_same_grid(const QuadratureGrid& a, const QuadratureGrid& b) {
  if (!a.same_as(b)) {
    throw std::invalid_argument("grid mismatch: (" + std::to_string(a.dim()) + ", " +
                                std::to_string(a.resolution()) + ") vs (" + std::to_string(b.dim()) +
                                ", " + std::to_string(b.resolution()) + ")");
  }
}

namespace {

void require_length(const QuadratureGrid& grid, const Eigen::VectorXd& samples, const char* what) {
  if (static_cast<std::size_t>(samples.size()) != grid.size()) {
    throw std::invalid_argument(std::string(what) + ": " + std::to_string(samples.size()) +
                                " samples for a grid of " + std::to_string(grid.size()) + " nodes");
  }
}

}  // namespace

Measure::Measure(GridPtr grid, Eigen::VectorXd density) : grid_(std::move(grid)), density_(std::move(density)) {
  if (!grid_) throw std::invalid_argument("Measure: null grid");
  require_length(*grid_, density_, "Measure");
  for (Eigen::Index i = 0; i < density_.size(); ++i) {
    if (!(density_(i) > constants::kPositivityFloor)) {
      throw DomainError("Measure: density " + std::to_string(density_(i)) + " at node " +
                        std::to_string(i) + " is not positive");
    }
  }
  const double mass = integrate(*grid_, density_);
  if (std::abs(mass - 1.0) > constants::kMassTolerance) {
    throw DomainError("Measure: total mass " + std::to_string(mass) + " differs from 1");
  }
}

Measure Measure::uniform(GridPtr grid) {
  const auto n = static_cast<Eigen::Index>(grid->size());
  return Measure(std::move(grid), Eigen::VectorXd::Ones(n));
}

TangentMeasure::TangentMeasure(GridPtr grid, Eigen::VectorXd density)
    : grid_(std::move(grid)), density_(std::move(density)) {
  if (!grid_) throw std::invalid_argument("TangentMeasure: null grid");
  require_length(*grid_, density_, "TangentMeasure");
  const double mass = integrate(*grid_, density_);
  if (std::abs(mass) > constants::kMassTolerance) {
    throw DomainError("TangentMeasure: mean " + std::to_string(mass) + " is not zero");
  }
}

TangentMeasure TangentMeasure::zero(GridPtr grid) {
  const auto n = static_cast<Eigen::Index>(grid->size());
  return TangentMeasure(std::move(grid), Eigen::VectorXd::Zero(n));
}

TangentMeasure& TangentMeasure::operator+=(const TangentMeasure& other) {
  require_same_grid(*grid_, other.grid());
  density_ += other.density_;
  return *this;
}

TangentMeasure& TangentMeasure::operator-=(const TangentMeasure& other) {
  require_same_grid(*grid_, other.grid());
  density_ -= other.density_;
  return *this;
}

TangentMeasure& TangentMeasure::operator*=(double scale) {
  density_ *= scale;
  return *this;
}

TangentMeasure operator+(TangentMeasure a, const TangentMeasure& b) { return a += b; }
TangentMeasure operator-(TangentMeasure a, const TangentMeasure& b) { return a -= b; }
TangentMeasure operator*(double scale, TangentMeasure a) { return a *= scale; }

Measure operator+(const Measure& mu, const TangentMeasure& tau) {
  require_same_grid(mu.grid(), tau.grid());
  return Measure(mu.grid_ptr(), mu.density() + tau.density());
}

TangentMeasure operator-(const Measure& mu1, const Measure& mu) {
  require_same_grid(mu.grid(), mu1.grid());
  return tangent_from_samples(mu.grid_ptr(), mu1.density() - mu.density());
}

Measure measure_from_samples(GridPtr grid, const Eigen::VectorXd& samples) {
  require_length(*grid, samples, "measure_from_samples");
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    if (!(samples(i) > constants::kPositivityFloor)) {
      throw DomainError("measure_from_samples: sample " + std::to_string(samples(i)) + " at node " +
                        std::to_string(i) + " is not positive");
    }
  }
  const double mass = integrate(*grid, samples);
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw DomainError("measure_from_samples: total mass is not a positive finite number");
  }
  Eigen::VectorXd density = samples / mass;
  return Measure(std::move(grid), std::move(density));
}

TangentMeasure tangent_from_samples(GridPtr grid, const Eigen::VectorXd& samples) {
  require_length(*grid, samples, "tangent_from_samples");
  const double mean = integrate(*grid, samples);
  Eigen::VectorXd density = samples.array() - mean;
  return TangentMeasure(std::move(grid), std::move(density));
}

double kl_divergence(const Measure& mu, const Measure& mu1) {
  require_same_grid(mu.grid(), mu1.grid());
  const Eigen::VectorXd& f = mu.density();
  const Eigen::VectorXd& f1 = mu1.density();
  const Eigen::VectorXd& w = mu.grid().weights();
  return -deterministic_sum(mu.size(), [&](std::size_t k) {
    const auto i = static_cast<Eigen::Index>(k);
    return w(i) * f(i) * std::log(f1(i) / f(i));
  });
}

Eigen::VectorXd rho_alpha(const Measure& mu, double alpha) {
  const Eigen::ArrayXd f = mu.density().array();
  if (alpha == 1.0) return f.log().matrix();
  return ((2.0 / (1.0 - alpha)) * f.pow((1.0 - alpha) / 2.0)).matrix();
}

Eigen::VectorXd rho_alpha_differential(const Measure& mu, const TangentMeasure& tau, double alpha) {
  require_same_grid(mu.grid(), tau.grid());
  const Eigen::ArrayXd f = mu.density().array();
  return (f.pow(-(1.0 + alpha) / 2.0) * tau.density().array()).matrix();
}

BoundaryMap BoundaryMap::identity() {
  BoundaryMap map;
  map.forward = [](const Eigen::VectorXd& p) { return p; };
  map.inverse = [](const Eigen::VectorXd& p) { return p; };
  map.inverse_jacobian = [](const Eigen::VectorXd&) { return 1.0; };
  return map;
}

BoundaryMap BoundaryMap::circle_rotation(double angle) {
  Eigen::MatrixXd rotation(2, 2);
  rotation << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return orthogonal(rotation);
}

BoundaryMap BoundaryMap::orthogonal(const Eigen::MatrixXd& rotation) {
  BoundaryMap map;
  const Eigen::MatrixXd transpose = rotation.transpose();
  map.forward = [rotation](const Eigen::VectorXd& p) -> Eigen::VectorXd { return rotation * p; };
  map.inverse = [transpose](const Eigen::VectorXd& p) -> Eigen::VectorXd { return transpose * p; };
  map.inverse_jacobian = [](const Eigen::VectorXd&) { return 1.0; };
  return map;
}

BoundaryMap compose(const BoundaryMap& first, const BoundaryMap& second) {
  BoundaryMap map;
  map.forward = [first, second](const Eigen::VectorXd& p) { return first.forward(second.forward(p)); };
  map.inverse = [first, second](const Eigen::VectorXd& p) { return second.inverse(first.inverse(p)); };
  if (first.inverse_jacobian && second.inverse_jacobian) {
    // Jac((F∘S)^{-1})(p) = Jac(S^{-1})(F^{-1} p) · Jac(F^{-1})(p)
    map.inverse_jacobian = [first, second](const Eigen::VectorXd& p) {
      return second.inverse_jacobian(first.inverse(p)) * first.inverse_jacobian(p);
    };
  }
  return map;
}

Eigen::MatrixXd sphere_tangent_frame(const Eigen::VectorXd& point) {
  const Eigen::Index d = point.size();
  Eigen::MatrixXd frame(d, d - 1);
  if (d == 2) {
    frame(0, 0) = -point(1);
    frame(1, 0) = point(0);
    return frame;
  }
  if (d != 3) throw std::invalid_argument("sphere_tangent_frame: dimension must be 2 or 3");
  // Project the coordinate axis least aligned with the point, then complete
  // with the cross product.
  Eigen::Index axis = 0;
  point.cwiseAbs().minCoeff(&axis);
  Eigen::Vector3d e = Eigen::Vector3d::Zero();
  e(axis) = 1.0;
  const Eigen::Vector3d p = point.head<3>();
  const Eigen::Vector3d first = (e - p.dot(e) * p).normalized();
  frame.col(0) = first;
  frame.col(1) = p.cross(first).normalized();
  return frame;
}

double intrinsic_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& map,
                          const Eigen::VectorXd& point, double step) {
  const Eigen::MatrixXd frame = sphere_tangent_frame(point);
  Eigen::MatrixXd differential(point.size(), frame.cols());
  for (Eigen::Index k = 0; k < frame.cols(); ++k) {
    const Eigen::VectorXd plus = (point + step * frame.col(k)).normalized();
    const Eigen::VectorXd minus = (point - step * frame.col(k)).normalized();
    // Arc length between plus and minus is 2*atan(step).
    differential.col(k) = (map(plus) - map(minus)) / (2.0 * std::atan(step));
  }
  return std::sqrt((differential.transpose() * differential).determinant());
}

namespace {

Eigen::VectorXd resample(const BoundaryMap& map, const QuadratureGrid& grid, const Eigen::VectorXd& values) {
  if (!map.inverse) throw std::invalid_argument("pushforward: boundary map has no inverse");
  const GridInterpolant interpolant(grid, values);
  Eigen::VectorXd out(values.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const Eigen::VectorXd theta = grid.node(static_cast<std::size_t>(i));
    const double jacobian = map.inverse_jacobian
                                ? map.inverse_jacobian(theta)
                                : intrinsic_jacobian(map.inverse, theta, constants::kJacobianStep);
    if (!(jacobian > 0.0)) {
      throw DomainError("pushforward: Jacobian " + std::to_string(jacobian) + " at node " +
                        std::to_string(i) + " is not positive");
    }
    out(i) = interpolant(map.inverse(theta)) * jacobian;
  }
  return out;
}

}  // namespace

Measure pushforward(const BoundaryMap& map, const Measure& mu, double max_mass_drift) {
  const Eigen::VectorXd raw = resample(map, mu.grid(), mu.density());
  const double mass = integrate(mu.grid(), raw);
  if (!(std::abs(mass - 1.0) <= max_mass_drift)) {
    throw DomainError("pushforward: mass drift " + std::to_string(mass - 1.0) +
                      " exceeds resampling tolerance");
  }
  return measure_from_samples(mu.grid_ptr(), raw);
}

TangentMeasure pushforward(const BoundaryMap& map, const TangentMeasure& tau) {
  return tangent_from_samples(tau.grid_ptr(), resample(map, tau.grid(), tau.density()));
}

}  // namespace infogeom
