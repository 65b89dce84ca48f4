#include <catch2/catch_amalgamated.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "oikf/result_io.hpp"
#include "oikf/trajectory_io.hpp"
#include "test_util.hpp"

using namespace oikf;
using Catch::Matchers::ContainsSubstring;
using testutil::exactly_equal;

namespace {

namespace fs = std::filesystem;

fs::path test_path(const std::string& name) {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "oikf_io_tests";
    fs::create_directories(d);
    return d;
  }();
  return dir / name;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ObservationSeries sample_series() {
  const SystemModel model = build_position_only_model(0.1, 1.0, 1.0);
  ObservationSeries series =
      simulate_trajectory(model, Eigen::VectorXd::Zero(2), 40, 77);
  OutlierSpec spec;
  spec.probability = 0.3;
  spec.rayleigh_scale = 10.0;
  spec.seed = 78;
  return inject_outliers(series, spec);
}

}  // namespace

TEST_CASE("full series round-trips exactly", "[io]") {
  const ObservationSeries series = sample_series();
  const fs::path path = test_path("round_trip.csv");
  write_trajectory(series, path.string());

  const LoadedTrajectory loaded = read_trajectory(path.string(), 1, 2);
  REQUIRE(exactly_equal(loaded.series.times, series.times));
  REQUIRE(exactly_equal(loaded.series.observations, series.observations));
  REQUIRE(loaded.series.truth_states.has_value());
  REQUIRE(exactly_equal(*loaded.series.truth_states, *series.truth_states));
  REQUIRE(loaded.series.outlier_mask.has_value());
  REQUIRE((*loaded.series.outlier_mask == *series.outlier_mask).all());
  REQUIRE(loaded.dt == 1.0);
}

TEST_CASE("awkward doubles survive the 17-digit format", "[io]") {
  ObservationSeries series;
  series.times.resize(4);
  series.times << 0.1, 0.2, 0.30000000000000004, 1e17;
  series.observations.resize(4, 1);
  series.observations << 1.0 / 3.0, -0.0, 4.9e-324, -2.2250738585072014e-308;
  const fs::path path = test_path("awkward.csv");
  write_trajectory(series, path.string());

  const LoadedTrajectory loaded = read_trajectory(path.string(), 1, 2);
  REQUIRE(exactly_equal(loaded.series.times, series.times));
  REQUIRE(exactly_equal(loaded.series.observations, series.observations));
  REQUIRE_FALSE(loaded.series.truth_states.has_value());
  REQUIRE_FALSE(loaded.series.outlier_mask.has_value());
}

TEST_CASE("writes are byte-stable with LF endings", "[io]") {
  const ObservationSeries series = sample_series();
  const fs::path a = test_path("stable_a.csv");
  const fs::path b = test_path("stable_b.csv");
  write_trajectory(series, a.string());
  write_trajectory(series, b.string());
  const std::string bytes = read_file(a);
  REQUIRE(bytes == read_file(b));
  REQUIRE(bytes.find('\r') == std::string::npos);
  REQUIRE(bytes.rfind("# t:", 0) == 0);  // leading comment line
  REQUIRE_THAT(bytes, ContainsSubstring("\nt,y_1,gt_1,gt_2,mask_1\n"));
}

TEST_CASE("median spacing becomes dt", "[io]") {
  const fs::path path = test_path("spacing.csv");
  write_file(path, "t,y_1\n0,1\n0.1,1\n0.2,1\n0.35,1\n");
  REQUIRE(read_trajectory(path.string(), 1, 2).dt == 0.1);

  write_file(path, "t,y_1\n5,1\n");
  const LoadedTrajectory single = read_trajectory(path.string(), 1, 2);
  REQUIRE(single.series.size() == 1);
  REQUIRE(single.dt == 0.0);
}

TEST_CASE("comments, blank lines and CRLF are tolerated", "[io]") {
  const fs::path path = test_path("comments.csv");
  write_file(path,
             "# produced elsewhere\r\n"
             "\r\n"
             "t,y_1,mask_1\r\n"
             "1,2.5,0\r\n"
             "# interleaved note\n"
             "\n"
             "2,3.5,1\r\n");
  const LoadedTrajectory loaded = read_trajectory(path.string(), 1, 2);
  REQUIRE(loaded.series.size() == 2);
  REQUIRE(loaded.series.observations(1, 0) == 3.5);
  REQUIRE_FALSE(loaded.series.truth_states.has_value());
  REQUIRE(loaded.series.outlier_mask.has_value());
  REQUIRE_FALSE((*loaded.series.outlier_mask)(0, 0));
  REQUIRE((*loaded.series.outlier_mask)(1, 0));
}

TEST_CASE("each failure mode has its own error kind", "[io]") {
  const fs::path path = test_path("broken.csv");

  SECTION("missing file") {
    try {
      read_trajectory(test_path("no_such_file.csv").string(), 1, 2);
      FAIL("expected TrajectoryIoError");
    } catch (const TrajectoryIoError& e) {
      REQUIRE(e.kind == IoErrorKind::OpenFailed);
      REQUIRE(e.line == 0);
    }
  }
  SECTION("wrong column name") {
    write_file(path, "t,obs\n1,2\n");
    try {
      read_trajectory(path.string(), 1, 2);
      FAIL("expected TrajectoryIoError");
    } catch (const TrajectoryIoError& e) {
      REQUIRE(e.kind == IoErrorKind::BadHeader);
      REQUIRE(e.line == 1);
      REQUIRE_THAT(e.what(), ContainsSubstring("y_1"));
    }
  }
  SECTION("stray trailing header column") {
    write_file(path, "t,y_1,extra\n1,2,3\n");
    try {
      read_trajectory(path.string(), 1, 2);
      FAIL("expected TrajectoryIoError");
    } catch (const TrajectoryIoError& e) {
      REQUIRE(e.kind == IoErrorKind::BadHeader);
      REQUIRE_THAT(e.what(), ContainsSubstring("extra"));
    }
  }
  SECTION("field count mismatch") {
    write_file(path, "t,y_1\n1,2\n2\n");
    try {
      read_trajectory(path.string(), 1, 2);
      FAIL("expected TrajectoryIoError");
    } catch (const TrajectoryIoError& e) {
      REQUIRE(e.kind == IoErrorKind::ColumnMismatch);
      REQUIRE(e.line == 3);
      REQUIRE_THAT(e.what(), ContainsSubstring("(line 3)"));
    }
  }
  SECTION("unparseable number") {
    write_file(path, "t,y_1\n1,2\n2,oops\n");
    try {
      read_trajectory(path.string(), 1, 2);
      FAIL("expected TrajectoryIoError");
    } catch (const TrajectoryIoError& e) {
      REQUIRE(e.kind == IoErrorKind::MalformedRow);
      REQUIRE(e.line == 3);
      REQUIRE_THAT(e.what(), ContainsSubstring("oops"));
    }
  }
  SECTION("overflowing number") {
    write_file(path, "t,y_1\n1,1e999\n");
    try {
      read_trajectory(path.string(), 1, 2);
      FAIL("expected TrajectoryIoError");
    } catch (const TrajectoryIoError& e) {
      REQUIRE(e.kind == IoErrorKind::MalformedRow);
    }
  }
  SECTION("mask that is not 0/1") {
    write_file(path, "t,y_1,mask_1\n1,2,yes\n");
    try {
      read_trajectory(path.string(), 1, 2);
      FAIL("expected TrajectoryIoError");
    } catch (const TrajectoryIoError& e) {
      REQUIRE(e.kind == IoErrorKind::MalformedRow);
      REQUIRE_THAT(e.what(), ContainsSubstring("mask"));
    }
  }
  SECTION("time stamps going backwards") {
    write_file(path, "t,y_1\n1,2\n1,3\n");
    try {
      read_trajectory(path.string(), 1, 2);
      FAIL("expected TrajectoryIoError");
    } catch (const TrajectoryIoError& e) {
      REQUIRE(e.kind == IoErrorKind::NonIncreasingTime);
      REQUIRE(e.line == 3);
    }
  }
}

TEST_CASE("write-side shape validation", "[io]") {
  ObservationSeries series;
  series.times.resize(2);
  series.times << 1.0, 2.0;
  series.observations.resize(3, 1);
  series.observations.setZero();
  REQUIRE_THROWS_AS(write_trajectory(series, test_path("bad.csv").string()),
                    std::invalid_argument);

  series.observations.resize(2, 1);
  series.observations.setZero();
  series.outlier_mask.emplace(BoolMask::Constant(2, 2, false));  // wrong width
  REQUIRE_THROWS_AS(write_trajectory(series, test_path("bad.csv").string()),
                    std::invalid_argument);
}

TEST_CASE("sweep tables carry one best marker per engine", "[io]") {
  const SystemModel model = build_position_only_model(0.1, 1.0, 1.0);
  ObservationSeries data = simulate_trajectory(model, Eigen::VectorXd::Zero(2), 200, 5);
  OutlierSpec spec;
  spec.probability = 0.2;
  spec.rayleigh_scale = 20.0;
  spec.seed = 6;
  data = inject_outliers(data, spec);

  const ModelBuilder builder = [](double q_var, double r_var) {
    return build_position_only_model(q_var, r_var, 1.0);
  };
  const std::vector<double> q_grid = {0.05, 0.2};
  const std::vector<double> r_grid = {0.5, 2.0};
  const std::vector<double> alpha_grid = {0.05, 0.1};

  std::vector<std::pair<Engine, SweepResult>> sweeps;
  sweeps.emplace_back(Engine::Kf,
                      grid_search(data, builder, Engine::Kf, {}, q_grid, r_grid));
  sweeps.emplace_back(Engine::Chi2, grid_search(data, builder, Engine::Chi2, {}, q_grid,
                                                r_grid, alpha_grid));

  std::ostringstream out;
  write_sweep_csv(out, sweeps);
  std::istringstream lines(out.str());
  std::string line;
  REQUIRE(std::getline(lines, line));
  REQUIRE(line == "engine,q_var,r_var,dim,rmse,mse_db,runtime_ms,alpha,best");

  int kf_rows = 0, chi2_rows = 0, kf_best = 0, chi2_best = 0;
  while (std::getline(lines, line)) {
    const std::vector<std::string> fields = detail::split_csv(line);
    REQUIRE(fields.size() == 9);
    if (fields[0] == "KF") {
      ++kf_rows;
      REQUIRE(fields[7].empty());  // no alpha column value
      if (fields[8] == "1") ++kf_best;
    } else {
      REQUIRE(fields[0] == "CHI2");
      ++chi2_rows;
      REQUIRE_FALSE(fields[7].empty());
      if (fields[8] == "1") ++chi2_best;
    }
  }
  REQUIRE(kf_rows == 4);
  REQUIRE(chi2_rows == 8);
  REQUIRE(kf_best == 1);
  REQUIRE(chi2_best == 1);
}

TEST_CASE("noise-sweep table uses the pinned three columns", "[io]") {
  Fig2Config cfg;
  cfg.r_sq_values = {1.0, 4.0};
  cfg.n_trials = 1;
  cfg.horizon = 100;
  cfg.engines = {Engine::Kf, Engine::Chi2};
  const std::vector<Fig2Row> rows = mse_vs_r_experiment(cfg);

  std::ostringstream out;
  write_fig2_csv(out, rows);
  std::istringstream lines(out.str());
  std::string line;
  REQUIRE(std::getline(lines, line));
  REQUIRE(line == "engine,r2_db,mse_db");
  int count = 0;
  while (std::getline(lines, line)) {
    const std::vector<std::string> fields = detail::split_csv(line);
    REQUIRE(fields.size() == 3);
    ++count;
  }
  REQUIRE(count == 4);

  // r^2 = 1 -> 0 dB, r^2 = 4 -> ~6.02 dB.
  REQUIRE_THAT(out.str(), ContainsSubstring("KF,0,"));
  REQUIRE_THAT(out.str(), ContainsSubstring("KF,6.02059991328,"));
}

TEST_CASE("convergence table is 1-based in iteration and dimension", "[io]") {
  ConvergenceResult result;
  TraceRecord record;
  record.step = 7;
  record.gamma_trace.resize(2, 1);
  record.gamma_trace << 3.0, 3.5;
  record.iters_used = 2;
  record.iters_to_stability = 2;
  result.traces.push_back(record);

  std::ostringstream out;
  write_convergence_csv(out, result);
  REQUIRE(out.str() == "step,iter,dim,gamma_sq\n7,1,1,3\n7,2,1,3.5\n");
}
