#pragma once

// Property batteries for every closed-form identity implemented by the
// library, run with a fixed seed and reported check by check.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "infogeom/hyperbolic_space.hpp"
#include "infogeom/measure_space.hpp"
#include "infogeom/tolerances.hpp"

namespace infogeom {

enum class Relation {
  AtMost,   // value <= tolerance
  AtLeast,  // value >= tolerance
  Above,    // value > tolerance
};

struct Check {
  std::string id;
  double value = 0.0;
  double tolerance = 0.0;
  Relation relation = Relation::AtMost;
  bool passed = false;
  bool gating = true;  // non-gating checks are recorded but never fail a run
};

struct Report {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<Check> checks;

  /// True when every gating check passed.
  bool passed() const;
};

inline constexpr std::uint64_t kDefaultSeed = 0x5eed0f15c3e5a7b1ULL;

/// "fisher", "alpha", "hyperbolic", "barycenter" and "all".
const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite name.
Report run_suite(const std::string& name, std::uint64_t seed = kDefaultSeed,
                 const Tolerances& tolerances = Tolerances());

nlohmann::json report_to_json(const Report& report);

/// Smooth positive density: on the circle a trigonometric polynomial of
/// degree 3 with small coefficients, on S^2 a quadratic polynomial.
Measure random_measure(const GridPtr& grid, std::mt19937_64& rng, double amplitude = 0.12);

/// Smooth zero-mean density of the same families (degree 4 on the circle).
TangentMeasure random_tangent(const GridPtr& grid, std::mt19937_64& rng);

/// Uniformly distributed unit vector of R^d.
Eigen::VectorXd random_unit_vector(int dim, std::mt19937_64& rng);

/// Point of the ball with norm uniform in [0, max_radius].
BallPoint random_ball_point(int dim, std::mt19937_64& rng, double max_radius);

/// Random rotation composed with a translation of norm uniform in [0, max_shift].
MoebiusIsometry random_isometry(int dim, std::mt19937_64& rng, double max_shift);

}  // namespace infogeom
