#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include "infogeom/alpha_geometry.hpp"
#include "infogeom/barycenter.hpp"
#include "infogeom/errors.hpp"
#include "infogeom/fisher_geometry.hpp"
#include "infogeom/io.hpp"
#include "infogeom/parallel.hpp"

namespace infogeom::cli {

Connection Connection::parse(const std::string& text) {
  if (text == "lc") return {Kind::LeviCivita, 0.0};
  if (text == "e") return {Kind::Exponential, 1.0};
  if (text == "m") return {Kind::Mixture, -1.0};
  constexpr std::string_view prefix = "alpha:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string value = text.substr(prefix.size());
    double alpha = 0.0;
    try {
      std::size_t used = 0;
      alpha = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw InputError("connection: cannot parse alpha value '" + value + "'");
    }
    if (!(alpha >= -2.0 && alpha <= 2.0)) throw InputError("connection: alpha must lie in [-2, 2]");
    return {Kind::Alpha, alpha};
  }
  throw InputError("connection must be lc, e, m or alpha:<value>, got '" + text + "'");
}

namespace {

std::string format_real(double value) {
  std::ostringstream s;
  s << std::setprecision(std::numeric_limits<double>::max_digits10) << value;
  return s.str();
}

void require_resolution(int resolution) {
  if (resolution < kMinResolution) {
    throw InputError("resolution " + std::to_string(resolution) + " is below the minimum of " +
                     std::to_string(kMinResolution));
  }
}

const std::string& input(const RunConfig& config, std::size_t index, const char* what) {
  if (config.inputs.size() <= index || config.inputs[index].empty()) {
    throw InputError(std::string("missing ") + what + " path");
  }
  return config.inputs[index];
}

Measure load_measure(const std::string& path) {
  Measure mu = measure_from_json(read_json_file(path));
  require_resolution(mu.grid().resolution());
  return mu;
}

std::pair<Measure, Measure> load_pair(const std::string& path) {
  auto pair = measure_pair_from_json(read_json_file(path));
  require_resolution(pair.first.grid().resolution());
  return pair;
}

void emit(const RunConfig& config, std::ostream& out, const std::string& text) {
  if (config.output == "-") {
    out << text;
  } else {
    write_text_file(config.output, text);
  }
}

BarycenterOptions solver_options(const Tolerances& tol) {
  BarycenterOptions options;
  options.gradient_tolerance = tol.get("grad_tol");
  options.max_iterations = static_cast<int>(tol.get("max_newton_iters"));
  options.min_hessian_eigenvalue = tol.get("hessian_min_eig");
  return options;
}

int run_distance(const RunConfig& config, std::ostream& out) {
  const auto [mu, mu1] = load_pair(input(config, 0, "pair"));
  emit(config, out, format_real(ell_distance(mu, mu1)) + "\n");
  return kSuccess;
}

// Sup over interior stored states of the alpha-geodesic residual, with the
// second derivative from a five-point stencil over the stored densities.
double trajectory_residual(const QuadratureGrid& grid, double alpha, double dt,
                           const std::vector<AlphaGeodesicState>& states) {
  double worst = 0.0;
  for (std::size_t k = 2; k + 2 < states.size(); ++k) {
    const Eigen::VectorXd fddot = (-states[k - 2].f + 16.0 * states[k - 1].f - 30.0 * states[k].f +
                                   16.0 * states[k + 1].f - states[k + 2].f) /
                                  (12.0 * dt * dt);
    worst = std::max(worst, alpha_geodesic_residual(grid, alpha, states[k].f, states[k].fdot, fddot));
  }
  return worst;
}

int run_geodesic(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.samples < 2) throw InputError("--samples must be at least 2");
  const auto [mu, mu1] = load_pair(input(config, 0, "pair"));
  const int samples = config.samples;
  std::vector<double> times;
  std::vector<Eigen::VectorXd> rows;
  auto uniform_times = [&](double end) {
    for (int k = 0; k < samples; ++k) times.push_back(end * k / (samples - 1));
  };

  using Kind = Connection::Kind;
  if (config.connection.kind != Kind::Alpha && !config.report.empty()) {
    throw InputError("--report is only produced for alpha:<value> connections");
  }
  switch (config.connection.kind) {
    case Kind::LeviCivita: {
      const GeodesicSegment seg = connect(mu, mu1);
      uniform_times(seg.length);
      for (double t : times) rows.push_back(evaluate(seg, t).density());
      break;
    }
    case Kind::Exponential:
      uniform_times(1.0);
      for (double t : times) rows.push_back(e_geodesic(mu, mu1, t).density());
      break;
    case Kind::Mixture:
      uniform_times(1.0);
      for (double t : times) rows.push_back(m_geodesic(mu, mu1, t).density());
      break;
    case Kind::Alpha: {
      const double alpha = config.connection.alpha;
      if (alpha_out_of_range(alpha)) {
        err << "warning: alpha = " << alpha << " lies outside [-1, 1]\n";
      }
      const int per_sample = std::max(1, static_cast<int>(std::ceil(1000.0 / (samples - 1))));
      const int steps = per_sample * (samples - 1);
      const double dt = 1.0 / steps;
      const AlphaShootingResult shot = alpha_geodesic_shoot(mu, mu1, alpha, steps);
      std::vector<AlphaGeodesicState> states;
      states.reserve(static_cast<std::size_t>(steps) + 1);
      alpha_geodesic_integrate(shot.initial, dt, steps,
                               [&](const AlphaGeodesicState& s) { states.push_back(s); });
      for (int k = 0; k < samples; ++k) {
        const AlphaGeodesicState& s = states[static_cast<std::size_t>(k * per_sample)];
        times.push_back(static_cast<double>(k) / (samples - 1));
        rows.push_back(s.f);
      }
      if (!config.report.empty()) {
        const double residual = trajectory_residual(mu.grid(), alpha, dt, states);
        write_text_file(config.report, dump_json(ode_report_to_json(alpha, dt, steps, residual)));
      }
      break;
    }
  }
  std::ostringstream csv;
  write_trajectory_csv(csv, times, rows);
  emit(config, out, csv.str());
  return kSuccess;
}

int run_barycenter(const RunConfig& config, std::ostream& out) {
  const Measure mu = load_measure(input(config, 0, "measure"));
  if (mu.grid().dim() != config.dim) {
    throw InputError("measure has dim " + std::to_string(mu.grid().dim()) + " but --dim is " +
                     std::to_string(config.dim));
  }
  const BarycenterResult result =
      barycenter(mu, HyperbolicModel::real_hyperbolic(config.dim), solver_options(config.tolerances));
  emit(config, out, dump_json(barycenter_to_json(result)));
  return kSuccess;
}

int run_poisson(const RunConfig& config, std::ostream& out) {
  require_resolution(config.resolution);
  if (!config.point) throw InputError("--point is required");
  if (config.point->size() != config.dim) throw InputError("--point must have --dim coordinates");
  BallPoint x = [&] {
    try {
      return BallPoint(*config.point);
    } catch (const DomainError& e) {
      throw InputError(std::string("--point: ") + e.what());
    }
  }();
  const GridPtr grid = make_grid(config.dim, config.resolution);
  const Measure mu = poisson_kernel_measure(x, HyperbolicModel::real_hyperbolic(config.dim), grid,
                                            config.tolerances.get("poisson_mass_drift"));
  emit(config, out, dump_json(measure_to_json(mu)));
  return kSuccess;
}

int run_pushforward(const RunConfig& config, std::ostream& out) {
  const Measure mu = load_measure(input(config, 0, "measure"));
  const MoebiusIsometry phi = isometry_from_json(read_json_file(input(config, 1, "isometry")));
  if (phi.dim() != mu.grid().dim()) throw InputError("isometry and measure dimensions differ");
  const Measure pushed = pushforward(to_boundary_map(phi), mu, config.tolerances.get("pushforward_mass_drift"));
  emit(config, out, dump_json(measure_to_json(pushed)));
  return kSuccess;
}

int run_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), config.suite) == names.end()) {
    throw InputError("unknown suite '" + config.suite + "'");
  }
  const Report report = run_suite(config.suite, config.seed, config.tolerances);
  emit(config, out, dump_json(report_to_json(report)));
  std::size_t failed = 0;
  std::size_t passed = 0;
  for (const Check& c : report.checks) {
    if (c.passed) ++passed;
    if (c.gating && !c.passed) {
      ++failed;
      err << "FAIL " << c.id << ": " << format_real(c.value) << " vs " << format_real(c.tolerance) << "\n";
    }
  }
  err << passed << "/" << report.checks.size() << " checks passed, " << failed << " gating failures\n";
  return failed == 0 ? kSuccess : kFailure;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.command) {
      case Command::Distance: return run_distance(config, out);
      case Command::Geodesic: return run_geodesic(config, out, err);
      case Command::Barycenter: return run_barycenter(config, out);
      case Command::Poisson: return run_poisson(config, out);
      case Command::Pushforward: return run_pushforward(config, out);
      case Command::Verify: return run_verify(config, out, err);
    }
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const ConvergenceError& e) {
    err << "solver failed: " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Information geometry of positive densities and barycenters in hyperbolic space"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig config;
  std::vector<std::string> overrides;
  unsigned workers = 0;
  app.add_option("--tol", overrides, "Override a named tolerance, name=value (repeatable)");
  app.add_option("--workers", workers, "Worker threads for quadrature sums (default: INFOGEOM_WORKERS or 1)");

  std::string pair_path;
  std::string measure_path;
  std::string isometry_path;
  std::string connection = "lc";
  std::string point;

  auto* distance = app.add_subcommand("distance", "Fisher distance between the two measures of a pair file");
  distance->add_option("pair", pair_path, "JSON array of two measures")->required();
  distance->add_option("--out", config.output, "Output path (default stdout)");

  auto* geodesic = app.add_subcommand("geodesic", "Sample a geodesic between the two measures of a pair file");
  geodesic->add_option("pair", pair_path, "JSON array of two measures")->required();
  geodesic->add_option("--connection", connection, "lc, e, m or alpha:<value>");
  geodesic->add_option("--samples", config.samples, "Number of rows (>= 2)");
  geodesic->add_option("--out", config.output, "CSV output path (default stdout)");
  geodesic->add_option("--report", config.report, "JSON integrator report (alpha connections)");

  auto* bary = app.add_subcommand("barycenter", "Barycenter of a boundary measure");
  bary->add_option("measure", measure_path, "Measure JSON")->required();
  bary->add_option("--dim", config.dim, "Ball dimension");
  bary->add_option("--out", config.output, "Output path (default stdout)");

  auto* poisson = app.add_subcommand("poisson", "Poisson kernel measure of a ball point");
  poisson->add_option("--point", point, "Comma-separated coordinates")->required();
  poisson->add_option("--dim", config.dim, "Ball dimension");
  poisson->add_option("--resolution", config.resolution, "Grid resolution (>= 8)");
  poisson->add_option("--out", config.output, "Output path (default stdout)");

  auto* push = app.add_subcommand("pushforward", "Push a measure forward by the boundary map of an isometry");
  push->add_option("measure", measure_path, "Measure JSON")->required();
  push->add_option("isometry", isometry_path, "Isometry JSON")->required();
  push->add_option("--out", config.output, "Output path (default stdout)");

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("--suite", config.suite, "fisher, alpha, hyperbolic, barycenter or all");
  verify->add_option("--out", config.output, "Report path (default stdout)");
  verify->add_option("--seed", config.seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    configure_workers_from_environment();
    if (workers > 0) set_worker_count(workers);
    for (const std::string& o : overrides) config.tolerances.apply_override(o);
    if (config.dim != 2 && config.dim != 3) throw InputError("--dim must be 2 or 3");
    if (*distance) {
      config.command = Command::Distance;
      config.inputs = {pair_path};
    } else if (*geodesic) {
      config.command = Command::Geodesic;
      config.inputs = {pair_path};
      config.connection = Connection::parse(connection);
    } else if (*bary) {
      config.command = Command::Barycenter;
      config.inputs = {measure_path};
    } else if (*poisson) {
      config.command = Command::Poisson;
      config.point = parse_point(point);
    } else if (*push) {
      config.command = Command::Pushforward;
      config.inputs = {measure_path, isometry_path};
    } else {
      config.command = Command::Verify;
    }
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  }
  return run(config, std::cout, std::cerr);
}

}  // namespace infogeom::cli
