#pragma once

// JSON and CSV formats for measures, isometries, barycenter results and
// geodesic trajectories.

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

#include "infogeom/barycenter.hpp"
#include "infogeom/hyperbolic_space.hpp"
#include "infogeom/measure_space.hpp"

namespace infogeom {

/// {"dim": d, "resolution": r, "density": [...]}
nlohmann::json measure_to_json(const Measure& mu);
/// Throws InputError on a malformed object or an invalid density.
Measure measure_from_json(const nlohmann::json& j);

/// A pair file is a JSON array of two measure objects on the same grid.
std::pair<Measure, Measure> measure_pair_from_json(const nlohmann::json& j);

/// {"rotation": [[...], ...], "translation": [...]}
nlohmann::json isometry_to_json(const MoebiusIsometry& phi);
MoebiusIsometry isometry_from_json(const nlohmann::json& j);

/// {"point": [...], "grad_norm": ..., "iters": ..., "hess_min_eig": ...}
nlohmann::json barycenter_to_json(const BarycenterResult& result);

/// {"alpha": ..., "dt": ..., "steps": ..., "residual_sup": ...}
nlohmann::json ode_report_to_json(double alpha, double dt, int steps, double residual_sup);

/// Parses a comma-separated list of reals such as "0.3,0.1".
Eigen::VectorXd parse_point(const std::string& text);

/// Header `t,node_0,...,node_{N-1}`, then one row per sample, every value
/// with 17 significant digits.
void write_trajectory_csv(std::ostream& out, const std::vector<double>& times,
                          const std::vector<Eigen::VectorXd>& densities);

/// Reads and parses a JSON file. Throws InputError.
nlohmann::json read_json_file(const std::string& path);
/// Writes text to a file, or to stdout when path is "-". Throws InputError.
void write_text_file(const std::string& path, const std::string& text);

/// Serializes with a fixed layout (two-space indent, trailing newline).
std::string dump_json(const nlohmann::json& j);

}  // namespace infogeom
