#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "infogeom/barycenter.hpp"
#include "infogeom/errors.hpp"
#include "infogeom/fisher_geometry.hpp"
#include "infogeom/io.hpp"
#include "oracles.hpp"

using namespace infogeom;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("infogeom_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const json& j) const {
    write_text_file(path(name), dump_json(j));
    return path(name);
  }

  static int invoke(std::initializer_list<std::string> args) {
    std::vector<std::string> storage{"infogeom"};
    storage.insert(storage.end(), args);
    std::vector<char*> argv;
    for (std::string& s : storage) argv.push_back(s.data());
    return cli::main_entry(static_cast<int>(argv.size()), argv.data());
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  // Rows of a trajectory CSV without the header.
  static std::vector<std::vector<double>> rows(const std::string& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> out;
    while (std::getline(in, line)) {
      std::vector<double> row;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
      out.push_back(row);
    }
    return out;
  }

  fs::path dir_;
};

json pair_json(const Measure& a, const Measure& b) { return json::array({measure_to_json(a), measure_to_json(b)}); }

}  // namespace

TEST_F(CliTest, DistanceOfIdenticalMeasuresIsZero) {
  const GridPtr grid = make_grid(2, 64);
  const Measure mu = oracle::circle_measure(grid, [](double t) { return 1.0 + 0.3 * std::cos(t); });
  const std::string pair = write("pair.json", pair_json(mu, mu));
  ASSERT_EQ(invoke({"distance", pair, "--out", path("d.json")}), 0);
  EXPECT_EQ(std::stod(slurp(path("d.json"))), 0.0);
}

TEST_F(CliTest, DistanceMatchesLibrary) {
  const GridPtr grid = make_grid(2, 64);
  const Measure a = oracle::circle_measure(grid, [](double t) { return 1.0 + 0.3 * std::cos(t); });
  const Measure b = oracle::circle_measure(grid, [](double t) { return 1.0 + 0.2 * std::sin(2 * t); });
  const std::string pair = write("pair.json", pair_json(a, b));
  ASSERT_EQ(invoke({"distance", pair, "--out", path("d.json")}), 0);
  EXPECT_EQ(std::stod(slurp(path("d.json"))), ell_distance(a, b));
}

TEST_F(CliTest, BarycenterOfUniformIsOrigin) {
  const std::string m = write("m.json", measure_to_json(Measure::uniform(make_grid(2, 64))));
  ASSERT_EQ(invoke({"barycenter", m, "--dim", "2", "--out", path("b.json")}), 0);
  const json b = json::parse(slurp(path("b.json")));
  EXPECT_LT(std::hypot(b["point"][0].get<double>(), b["point"][1].get<double>()), 1e-12);
  EXPECT_LE(b["grad_norm"].get<double>(), 1e-10);
  EXPECT_GT(b["hess_min_eig"].get<double>(), 0.0);
}

TEST_F(CliTest, PoissonThenBarycenterRecoversPoint) {
  ASSERT_EQ(invoke({"poisson", "--point", "0.3,-0.2", "--dim", "2", "--resolution", "128", "--out", path("p.json")}),
            0);
  ASSERT_EQ(invoke({"barycenter", path("p.json"), "--out", path("b.json")}), 0);
  const json b = json::parse(slurp(path("b.json")));
  EXPECT_NEAR(b["point"][0].get<double>(), 0.3, 1e-8);
  EXPECT_NEAR(b["point"][1].get<double>(), -0.2, 1e-8);
}

TEST_F(CliTest, PushforwardByTranslationIsPoissonKernel) {
  const GridPtr grid = make_grid(2, 128);
  const std::string m = write("m.json", measure_to_json(Measure::uniform(grid)));
  const std::string iso =
      write("iso.json", isometry_to_json(MoebiusIsometry::translation(Eigen::Vector2d(0.4, 0.1))));
  ASSERT_EQ(invoke({"pushforward", m, iso, "--out", path("out.json")}), 0);
  const Measure pushed = measure_from_json(json::parse(slurp(path("out.json"))));
  const Measure expected = poisson_kernel_measure(BallPoint(Eigen::Vector2d(0.4, 0.1)),
                                                  HyperbolicModel::real_hyperbolic(2), grid);
  EXPECT_LT((pushed.density() - expected.density()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST_F(CliTest, GeodesicEndpointsAndConnections) {
  const GridPtr grid = make_grid(2, 64);
  const Measure a = oracle::circle_measure(grid, [](double t) { return 1.0 + 0.3 * std::cos(t); });
  const Measure b = oracle::circle_measure(grid, [](double t) { return 1.0 + 0.3 * std::sin(2 * t); });
  const std::string pair = write("pair.json", pair_json(a, b));

  ASSERT_EQ(invoke({"geodesic", pair, "--samples", "2", "--out", path("two.csv")}), 0);
  const auto two = rows(path("two.csv"));
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0][0], 0.0);
  EXPECT_NEAR(two[1][0], ell_distance(a, b), 1e-15);
  for (int i = 0; i < 64; ++i) {
    EXPECT_NEAR(two[0][i + 1], a.density()(i), 1e-13);
    EXPECT_NEAR(two[1][i + 1], b.density()(i), 1e-12);
  }

  std::vector<std::vector<std::vector<double>>> runs;
  for (const std::string c : {"lc", "e", "m", "alpha:0.5"}) {
    const std::string out = path(c.substr(0, 2) + ".csv");
    ASSERT_EQ(invoke({"geodesic", pair, "--connection", c, "--samples", "5", "--out", out}), 0) << c;
    runs.push_back(rows(out));
    for (const auto& row : runs.back()) {
      const Eigen::Map<const Eigen::VectorXd> density(row.data() + 1, 64);
      EXPECT_NEAR(integrate(*grid, Eigen::VectorXd(density)), 1.0, 1e-9) << c;
    }
  }
  for (std::size_t i = 0; i < runs.size(); ++i) {
    for (std::size_t j = i + 1; j < runs.size(); ++j) {
      double interior = 0.0, ends = 0.0;
      for (int k = 1; k <= 64; ++k) {
        interior = std::max(interior, std::abs(runs[i][2][k] - runs[j][2][k]));
        ends = std::max({ends, std::abs(runs[i][0][k] - runs[j][0][k]), std::abs(runs[i][4][k] - runs[j][4][k])});
      }
      EXPECT_GT(interior, 1e-4) << i << " vs " << j;
      EXPECT_LT(ends, 1e-9) << i << " vs " << j;
    }
  }
}

TEST_F(CliTest, AlphaGeodesicReport) {
  const GridPtr grid = make_grid(2, 32);
  const Measure a = oracle::circle_measure(grid, [](double t) { return 1.0 + 0.3 * std::cos(t); });
  const Measure b = oracle::circle_measure(grid, [](double t) { return 1.0 + 0.3 * std::sin(2 * t); });
  const std::string pair = write("pair.json", pair_json(a, b));
  ASSERT_EQ(invoke({"geodesic", pair, "--connection", "alpha:0.3", "--samples", "6", "--out", path("g.csv"),
                    "--report", path("r.json")}),
            0);
  const json report = json::parse(slurp(path("r.json")));
  EXPECT_EQ(report["alpha"], 0.3);
  EXPECT_GE(report["steps"].get<int>(), 1000);
  EXPECT_LT(report["residual_sup"].get<double>(), 1e-4);
  EXPECT_EQ(invoke({"geodesic", pair, "--connection", "lc", "--report", path("r2.json")}), 2);
}

TEST_F(CliTest, InputErrorsExitWithTwo) {
  write_text_file(path("bad.json"), "{not json");
  EXPECT_EQ(invoke({"distance", path("bad.json")}), 2);
  EXPECT_EQ(invoke({"distance", path("missing.json")}), 2);
  EXPECT_EQ(invoke({"poisson", "--point", "0.1,0.1", "--resolution", "4"}), 2);
  EXPECT_EQ(invoke({"poisson", "--point", "0.1,0.1,0.1", "--dim", "2"}), 2);
  const GridPtr grid = make_grid(2, 16);
  const std::string pair = write("pair.json", pair_json(Measure::uniform(grid), Measure::uniform(grid)));
  EXPECT_EQ(invoke({"geodesic", pair, "--connection", "alpha:3"}), 2);
  EXPECT_EQ(invoke({"geodesic", pair, "--connection", "x"}), 2);
  EXPECT_EQ(invoke({"verify", "--suite", "nope"}), 2);
  EXPECT_EQ(invoke({"verify", "--suite", "fisher", "--tol", "nope=1"}), 2);
  EXPECT_EQ(invoke({}), 2);
}

TEST_F(CliTest, VerifyIsDeterministic) {
  ASSERT_EQ(invoke({"verify", "--suite", "hyperbolic", "--out", path("a.json")}), 0);
  ASSERT_EQ(invoke({"--workers", "3", "verify", "--suite", "hyperbolic", "--out", path("b.json")}), 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  const json report = json::parse(slurp(path("a.json")));
  EXPECT_FALSE(report.empty());
}

TEST_F(CliTest, VerifyFailsWhenToleranceIsTightened) {
  EXPECT_EQ(invoke({"verify", "--suite", "fisher", "--tol", "arc_length_tol=1e-30", "--out", path("a.json")}), 1);
}

TEST(Connection, Parse) {
  EXPECT_EQ(cli::Connection::parse("lc").kind, cli::Connection::Kind::LeviCivita);
  EXPECT_EQ(cli::Connection::parse("e").kind, cli::Connection::Kind::Exponential);
  EXPECT_EQ(cli::Connection::parse("m").kind, cli::Connection::Kind::Mixture);
  const cli::Connection a = cli::Connection::parse("alpha:-0.25");
  EXPECT_EQ(a.kind, cli::Connection::Kind::Alpha);
  EXPECT_EQ(a.alpha, -0.25);
  EXPECT_THROW(cli::Connection::parse("alpha:"), InputError);
  EXPECT_THROW(cli::Connection::parse("alpha:2.5"), InputError);
}
