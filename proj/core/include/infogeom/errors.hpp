#pragma once

#include <stdexcept>
#include <string>

namespace infogeom {

/// A value left the domain where a formula is defined (non-positive density,
/// curve leaving the space of positive measures, point outside the ball).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative solver ran out of budget or hit a degenerate linear system.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file or command-line value could not be parsed into a valid object.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace infogeom
