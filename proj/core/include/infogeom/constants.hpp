#pragma once

// Fixed numerical constants shared by every module. Values that callers may
// override at runtime live in Tolerances (tolerances.hpp) instead.

namespace infogeom::constants {

/// Densities at or below this value are treated as non-positive.
inline constexpr double kPositivityFloor = 1e-14;
/// Unit-mass check for Measure and zero-mass check for TangentMeasure.
inline constexpr double kMassTolerance = 1e-10;
/// Grid nodes must be unit vectors, grid weights must sum to one.
inline constexpr double kGridTolerance = 1e-12;
/// |tau|_G = 1 requirement of the closed-form geodesic.
inline constexpr double kUnitSpeedTolerance = 1e-8;

/// Central-difference step for boundary-map Jacobians (intrinsic coordinates).
inline constexpr double kJacobianStep = 1e-6;
/// Central-difference step for connection/curvature oracles and geodesic residuals.
inline constexpr double kGeometricStep = 1e-4;
/// Central-difference step for the second derivative of the KL divergence.
inline constexpr double kKlStep = 1e-3;

/// Ball points must satisfy |x| < 1 - kBallMargin.
inline constexpr double kBallMargin = 1e-9;
/// Ideal points must be unit vectors within this tolerance.
inline constexpr double kSphereTolerance = 1e-12;
/// Rotation matrices must satisfy R^T R = I within this tolerance.
inline constexpr double kOrthogonalityTolerance = 1e-12;

}  // namespace infogeom::constants
