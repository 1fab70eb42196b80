#include "interpolation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "infogeom/measure_space.hpp"

namespace infogeom {
namespace detail {
namespace {

// Solves the cyclic tridiagonal system with constant diagonals (1, 4, 1) by
// Sherman-Morrison on top of the Thomas algorithm.
Eigen::VectorXd solve_cyclic_141(const Eigen::VectorXd& rhs) {
  const Eigen::Index n = rhs.size();
  const double alpha = 1.0;  // corner entries
  const double beta = 1.0;
  const double gamma = -4.0;

  auto thomas = [n](Eigen::VectorXd diag, const Eigen::VectorXd& r) {
    Eigen::VectorXd c(n), d(n), x(n);
    c(0) = 1.0 / diag(0);
    d(0) = r(0) / diag(0);
    for (Eigen::Index i = 1; i < n; ++i) {
      const double m = diag(i) - c(i - 1);
      c(i) = 1.0 / m;
      d(i) = (r(i) - d(i - 1)) / m;
    }
    x(n - 1) = d(n - 1);
    for (Eigen::Index i = n - 2; i >= 0; --i) x(i) = d(i) - c(i) * x(i + 1);
    return x;
  };

  Eigen::VectorXd diag = Eigen::VectorXd::Constant(n, 4.0);
  diag(0) -= gamma;
  diag(n - 1) -= alpha * beta / gamma;
  const Eigen::VectorXd x = thomas(diag, rhs);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  u(0) = gamma;
  u(n - 1) = alpha;
  const Eigen::VectorXd z = thomas(diag, u);
  const double fact = (x(0) + beta * x(n - 1) / gamma) / (1.0 + z(0) + beta * z(n - 1) / gamma);
  return x - fact * z;
}

}  // namespace

PeriodicSpline::PeriodicSpline(const Eigen::VectorXd& values) : y_(values) {
  const Eigen::Index n = values.size();
  if (n < 3) throw std::invalid_argument("periodic spline needs at least 3 knots");
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    rhs(i) = 6.0 * (y_((i + 1) % n) - 2.0 * y_(i) + y_((i + n - 1) % n));
  }
  second_ = solve_cyclic_141(rhs);
}

double PeriodicSpline::operator()(double s) const {
  const auto n = static_cast<double>(y_.size());
  double wrapped = std::fmod(s, n);
  if (wrapped < 0.0) wrapped += n;
  double base = std::floor(wrapped);
  double u = wrapped - base;
  auto i = static_cast<Eigen::Index>(base) % y_.size();
  if (u < kSnap) return y_(i);
  if (u > 1.0 - kSnap) return y_((i + 1) % y_.size());
  const Eigen::Index j = (i + 1) % y_.size();
  const double v = 1.0 - u;
  return v * y_(i) + u * y_(j) + ((v * v * v - v) * second_(i) + (u * u * u - u) * second_(j)) / 6.0;
}

}  // namespace detail

struct GridInterpolant::Impl {
  int dim = 0;
  int azimuths = 0;
  std::vector<double> polar;
  std::vector<detail::PeriodicSpline> rings;  // one per polar level (one ring for d = 2)

  double ring_value(int level, double azimuth) const {
    const double s = azimuth / (2.0 * std::numbers::pi) * azimuths;
    return rings[static_cast<std::size_t>(level)](s);
  }

  double circle(const Eigen::VectorXd& p) const { return ring_value(0, std::atan2(p(1), p(0))); }

  double sphere(const Eigen::VectorXd& p) const {
    const double z = std::clamp(p(2), -1.0, 1.0);
    const double theta = std::acos(z);
    const double phi = std::atan2(p(1), p(0));
    const int levels = static_cast<int>(polar.size());

    // Extended level k: k in [0, levels) is a real ring; k = -1, -2 reflect
    // over the north pole, k = levels, levels+1 over the south pole. Reflected
    // rings are read at azimuth phi + pi.
    auto level_angle = [&](int k) {
      if (k < 0) return -polar[static_cast<std::size_t>(-k - 1)];
      if (k >= levels) return 2.0 * std::numbers::pi - polar[static_cast<std::size_t>(2 * levels - 1 - k)];
      return polar[static_cast<std::size_t>(k)];
    };
    auto level_value = [&](int k) {
      if (k < 0) return ring_value(-k - 1, phi + std::numbers::pi);
      if (k >= levels) return ring_value(2 * levels - 1 - k, phi + std::numbers::pi);
      return ring_value(k, phi);
    };

    // Bracket: level_angle(k) <= theta < level_angle(k + 1).
    int k = static_cast<int>(std::upper_bound(polar.begin(), polar.end(), theta) - polar.begin()) - 1;
    for (int j = k; j <= k + 1; ++j) {
      if (std::abs(theta - level_angle(j)) < 1e-13) return level_value(j);
    }
    std::array<double, 4> xs{};
    std::array<double, 4> ys{};
    for (int m = 0; m < 4; ++m) {
      xs[static_cast<std::size_t>(m)] = level_angle(k - 1 + m);
      ys[static_cast<std::size_t>(m)] = level_value(k - 1 + m);
    }
    double result = 0.0;
    for (std::size_t a = 0; a < 4; ++a) {
      double basis = 1.0;
      for (std::size_t b = 0; b < 4; ++b) {
        if (a != b) basis *= (theta - xs[b]) / (xs[a] - xs[b]);
      }
      result += basis * ys[a];
    }
    return result;
  }
};

GridInterpolant::GridInterpolant(const QuadratureGrid& grid, const Eigen::VectorXd& samples)
    : impl_(std::make_unique<Impl>()) {
  if (static_cast<std::size_t>(samples.size()) != grid.size()) {
    throw std::invalid_argument("interpolant: sample count does not match grid");
  }
  impl_->dim = grid.dim();
  impl_->azimuths = grid.azimuth_count();
  impl_->polar = grid.polar_angles();
  if (grid.dim() == 2) {
    impl_->rings.emplace_back(samples);
  } else {
    const Eigen::Index per_ring = grid.azimuth_count();
    for (std::size_t level = 0; level < impl_->polar.size(); ++level) {
      impl_->rings.emplace_back(samples.segment(static_cast<Eigen::Index>(level) * per_ring, per_ring));
    }
  }
}

GridInterpolant::~GridInterpolant() = default;
GridInterpolant::GridInterpolant(GridInterpolant&&) noexcept = default;
GridInterpolant& GridInterpolant::operator=(GridInterpolant&&) noexcept = default;

double GridInterpolant::operator()(const Eigen::VectorXd& point) const {
  return impl_->dim == 2 ? impl_->circle(point) : impl_->sphere(point);
}

}  // namespace infogeom
