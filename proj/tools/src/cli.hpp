#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "infogeom/tolerances.hpp"
#include "infogeom/verification.hpp"

namespace infogeom::cli {

enum class Command { Distance, Geodesic, Barycenter, Poisson, Pushforward, Verify };

struct Connection {
  enum class Kind { LeviCivita, Exponential, Mixture, Alpha };
  Kind kind = Kind::LeviCivita;
  double alpha = 0.0;

  /// "lc", "e", "m" or "alpha:<v>" with v in [-2, 2]. Throws InputError.
  static Connection parse(const std::string& text);
};

inline constexpr int kMinResolution = 8;

struct RunConfig {
  Command command = Command::Verify;
  int dim = 2;
  int resolution = 256;
  Connection connection;
  Tolerances tolerances;
  std::vector<std::string> inputs;
  std::string output = "-";
  std::string report;  // ODE report path for alpha geodesics
  int samples = 11;
  std::optional<Eigen::VectorXd> point;
  std::string suite = "all";
  std::uint64_t seed = kDefaultSeed;
};

enum ExitCode : int { kSuccess = 0, kFailure = 1, kInputError = 2 };

/// Runs one command. Diagnostics go to `err`; results to the configured
/// output path or to `out` when that path is "-".
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses the command line and runs it.
int main_entry(int argc, char** argv);

}  // namespace infogeom::cli
