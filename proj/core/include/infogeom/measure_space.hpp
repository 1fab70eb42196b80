#pragma once

// Discretized boundary sphere S^{d-1}, positive probability densities on it,
// tangent (zero-mass) signed densities, integration and push-forwards.
//
// All densities are stored against the normalized uniform measure lambda on
// the sphere, never against Lebesgue measure of R^d.

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace infogeom {

/// Nodes and weights of a quadrature rule for the normalized measure on S^{d-1}.
///
/// d = 2: `resolution` equally spaced angles 2*pi*i/N, uniform weights.
/// d = 3: `resolution` Gauss-Legendre levels in the polar angle (ascending
///        polar angle) times 2*resolution uniform azimuths; node index is
///        level * (2*resolution) + azimuth.
class QuadratureGrid {
 public:
  int dim() const { return dim_; }
  int resolution() const { return resolution_; }
  std::size_t size() const { return static_cast<std::size_t>(weights_.size()); }

  /// Column i is the unit vector of node i.
  const Eigen::MatrixXd& nodes() const { return nodes_; }
  Eigen::VectorXd node(std::size_t i) const { return nodes_.col(static_cast<Eigen::Index>(i)); }
  const Eigen::VectorXd& weights() const { return weights_; }

  /// Polar angles of the Gauss-Legendre levels (d = 3 only; empty for d = 2).
  const std::vector<double>& polar_angles() const { return polar_; }
  /// Number of azimuths per polar level (d = 3), or nodes on the circle (d = 2).
  int azimuth_count() const { return azimuths_; }

  bool same_as(const QuadratureGrid& other) const {
    return dim_ == other.dim_ && resolution_ == other.resolution_;
  }

 private:
  friend std::shared_ptr<const QuadratureGrid> make_grid(int dim, int resolution);
  QuadratureGrid() = default;

  int dim_ = 0;
  int resolution_ = 0;
  int azimuths_ = 0;
  Eigen::MatrixXd nodes_;
  Eigen::VectorXd weights_;
  std::vector<double> polar_;
};

using GridPtr = std::shared_ptr<const QuadratureGrid>;

inline constexpr int kMinGridResolution = 4;

/// Builds the quadrature grid for S^{dim-1}. dim must be 2 or 3.
/// Throws std::invalid_argument for unsupported dim or resolution < 4.
GridPtr make_grid(int dim, int resolution);

/// Gauss-Legendre nodes (ascending) and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Σ w_i s_i. Throws std::invalid_argument on length mismatch.
double integrate(const QuadratureGrid& grid, std::span<const double> samples);
double integrate(const QuadratureGrid& grid, const Eigen::VectorXd& samples);

/// A point of the space of positive probability densities: density > 0 at
/// every node and unit total mass against lambda.
class Measure {
 public:
  /// Validates positivity and unit mass; throws DomainError otherwise.
  Measure(GridPtr grid, Eigen::VectorXd density);

  const QuadratureGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const Eigen::VectorXd& density() const { return density_; }
  std::size_t size() const { return static_cast<std::size_t>(density_.size()); }

  /// The reference measure lambda (density identically one).
  static Measure uniform(GridPtr grid);

 private:
  GridPtr grid_;
  Eigen::VectorXd density_;
};

/// A tangent vector: signed density with zero lambda-mean.
class TangentMeasure {
 public:
  /// Validates zero mass; throws DomainError otherwise.
  TangentMeasure(GridPtr grid, Eigen::VectorXd density);

  const QuadratureGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const Eigen::VectorXd& density() const { return density_; }
  std::size_t size() const { return static_cast<std::size_t>(density_.size()); }

  static TangentMeasure zero(GridPtr grid);

  TangentMeasure& operator+=(const TangentMeasure& other);
  TangentMeasure& operator-=(const TangentMeasure& other);
  TangentMeasure& operator*=(double scale);

 private:
  GridPtr grid_;
  Eigen::VectorXd density_;
};

TangentMeasure operator+(TangentMeasure a, const TangentMeasure& b);
TangentMeasure operator-(TangentMeasure a, const TangentMeasure& b);
TangentMeasure operator*(double scale, TangentMeasure a);

/// mu + tau in the affine structure. Throws DomainError if the result is not positive.
Measure operator+(const Measure& mu, const TangentMeasure& tau);
/// mu1 - mu as a tangent vector.
TangentMeasure operator-(const Measure& mu1, const Measure& mu);

/// Throws std::invalid_argument if the grids differ.
void require_same_grid(const QuadratureGrid& a, const QuadratureGrid& b);

/// Normalizes positive samples to a probability density.
Measure measure_from_samples(GridPtr grid, const Eigen::VectorXd& samples);

/// Projects arbitrary samples onto zero lambda-mean.
TangentMeasure tangent_from_samples(GridPtr grid, const Eigen::VectorXd& samples);

/// -∫ log(dmu1/dmu) dmu. Non-negative.
double kl_divergence(const Measure& mu, const Measure& mu1);

/// The embedding rho^(alpha): (2/(1-alpha)) f^{(1-alpha)/2}, or log f at alpha = 1.
Eigen::VectorXd rho_alpha(const Measure& mu, double alpha);

/// Differential of rho^(alpha) at mu applied to tau: f^{-(1+alpha)/2} h.
Eigen::VectorXd rho_alpha_differential(const Measure& mu, const TangentMeasure& tau, double alpha);

/// A bijection of the boundary sphere. Push-forwards only need the inverse and
/// the Jacobian of the inverse; when `inverse_jacobian` is empty it is computed
/// by central differences in an orthonormal tangent frame.
struct BoundaryMap {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> forward;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> inverse;
  std::function<double(const Eigen::VectorXd&)> inverse_jacobian;

  static BoundaryMap identity();
  /// Rotation of the circle (d = 2) by `angle`, with exact unit Jacobian.
  static BoundaryMap circle_rotation(double angle);
  /// Orthogonal map of R^d restricted to the sphere, with exact unit Jacobian.
  static BoundaryMap orthogonal(const Eigen::MatrixXd& rotation);
};

/// first ∘ second (apply `second`, then `first`).
BoundaryMap compose(const BoundaryMap& first, const BoundaryMap& second);

/// Intrinsic Jacobian determinant of `map` on S^{d-1} at `point`, by central
/// differences with step `step` in an orthonormal tangent frame.
double intrinsic_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& map,
                          const Eigen::VectorXd& point, double step);

/// Orthonormal basis (columns) of the tangent space of S^{d-1} at `point`.
Eigen::MatrixXd sphere_tangent_frame(const Eigen::VectorXd& point);

/// Push-forward Phi_# mu. The density at node theta is f(Phi^{-1} theta) times
/// the Jacobian of Phi^{-1} at theta, with f resampled by the grid interpolant,
/// then renormalized. Throws DomainError for a non-positive Jacobian or when
/// the mass before renormalization drifts from one by more than `max_mass_drift`.
Measure pushforward(const BoundaryMap& map, const Measure& mu, double max_mass_drift = 1e-6);

/// Differential of the push-forward applied to a tangent measure.
TangentMeasure pushforward(const BoundaryMap& map, const TangentMeasure& tau);

/// Smooth interpolant of node samples, evaluated at arbitrary unit vectors.
///
/// Circle: periodic cubic spline in the angle. Sphere: periodic cubic spline
/// along each polar level, cubic Lagrange across levels, continued over the
/// poles by reflection.
class GridInterpolant {
 public:
  GridInterpolant(const QuadratureGrid& grid, const Eigen::VectorXd& samples);
  ~GridInterpolant();
  GridInterpolant(GridInterpolant&&) noexcept;
  GridInterpolant& operator=(GridInterpolant&&) noexcept;

  double operator()(const Eigen::VectorXd& point) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace infogeom
