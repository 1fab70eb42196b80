#include "infogeom/io.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include "infogeom/errors.hpp"

namespace infogeom {

namespace {

template <typename T>
T field(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("field '") + key + "': " + e.what());
  }
}

Eigen::VectorXd to_vector(const std::vector<double>& values) {
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

nlohmann::json measure_to_json(const Measure& mu) {
  return nlohmann::json{{"dim", mu.grid().dim()},
                        {"resolution", mu.grid().resolution()},
                        {"density", to_std(mu.density())}};
}

Measure measure_from_json(const nlohmann::json& j) {
  const int dim = field<int>(j, "dim");
  const int resolution = field<int>(j, "resolution");
  const std::vector<double> density = field<std::vector<double>>(j, "density");
  try {
    GridPtr grid = make_grid(dim, resolution);
    return Measure(std::move(grid), to_vector(density));
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("measure: ") + e.what());
  } catch (const DomainError& e) {
    throw InputError(std::string("measure: ") + e.what());
  }
}

std::pair<Measure, Measure> measure_pair_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw InputError("pair file must be a JSON array of two measures");
  Measure first = measure_from_json(j[0]);
  Measure second = measure_from_json(j[1]);
  if (!first.grid().same_as(second.grid())) throw InputError("pair file: measures live on different grids");
  // Share one grid object between the two measures.
  return {first, Measure(first.grid_ptr(), second.density())};
}

nlohmann::json isometry_to_json(const MoebiusIsometry& phi) {
  const Eigen::MatrixXd& r = phi.rotation_matrix();
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < r.rows(); ++i) rows.push_back(to_std(r.row(i).transpose()));
  return nlohmann::json{{"rotation", rows}, {"translation", to_std(phi.translation_vector())}};
}

MoebiusIsometry isometry_from_json(const nlohmann::json& j) {
  const auto rows = field<std::vector<std::vector<double>>>(j, "rotation");
  const auto translation = field<std::vector<double>>(j, "translation");
  const auto d = static_cast<Eigen::Index>(translation.size());
  if (static_cast<Eigen::Index>(rows.size()) != d) throw InputError("isometry: rotation has the wrong shape");
  Eigen::MatrixXd r(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != d) throw InputError("isometry: rotation has the wrong shape");
    for (Eigen::Index k = 0; k < d; ++k) r(i, k) = row[static_cast<std::size_t>(k)];
  }
  try {
    return MoebiusIsometry(r, to_vector(translation));
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("isometry: ") + e.what());
  }
}

nlohmann::json barycenter_to_json(const BarycenterResult& result) {
  return nlohmann::json{{"point", to_std(result.point.coords())},
                        {"grad_norm", result.gradient_norm},
                        {"iters", result.iterations},
                        {"hess_min_eig", result.hessian_min_eigenvalue}};
}

nlohmann::json ode_report_to_json(double alpha, double dt, int steps, double residual_sup) {
  return nlohmann::json{{"alpha", alpha}, {"dt", dt}, {"steps", steps}, {"residual_sup", residual_sup}};
}

Eigen::VectorXd parse_point(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("cannot parse coordinate '" + item + "'");
    }
  }
  if (values.empty()) throw InputError("empty point");
  return to_vector(values);
}

void write_trajectory_csv(std::ostream& out, const std::vector<double>& times,
                          const std::vector<Eigen::VectorXd>& densities) {
  if (times.size() != densities.size()) throw std::invalid_argument("write_trajectory_csv: size mismatch");
  const Eigen::Index n = densities.empty() ? 0 : densities.front().size();
  out << 't';
  for (Eigen::Index i = 0; i < n; ++i) out << ",node_" << i;
  out << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t k = 0; k < times.size(); ++k) {
    out << times[k];
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << densities[k](i);
    out << '\n';
  }
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
  if (!out) throw InputError("write to '" + path + "' failed");
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace infogeom
