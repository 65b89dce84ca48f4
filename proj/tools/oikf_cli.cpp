// Command-line bench around the outlier-insensitive Kalman filter: synthetic
// trajectory generation, filtering with diagnostics, hyperparameter sweeps and the
// MSE / convergence experiments, emitted as plotting-friendly CSV (or JSON) tables.
// All randomness flows through explicit seed flags, so outputs are reproducible;
// only measured runtime fields vary between runs.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "oikf/oikf.hpp"

namespace {

using nlohmann::ordered_json;

std::string fmt17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  return out;
}

struct ModelFlags {
  std::string name = "wna";
  double q_var = 0.1;
  double r_var = 1.0;
  double dt = 0.0;  // 0 = infer from the input file (filter/sweep) or 1.0

  int obs_dim() const { return name == "wna" ? 2 : 1; }
  oikf::SystemModel build(double resolved_dt) const {
    return name == "wna" ? oikf::build_wna_model(q_var, r_var, resolved_dt)
                         : oikf::build_position_only_model(q_var, r_var, resolved_dt);
  }
};

double resolve_dt(double flag_dt, double inferred_dt) {
  if (flag_dt > 0.0) return flag_dt;
  return inferred_dt > 0.0 ? inferred_dt : 1.0;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOpts {
  ModelFlags model;
  std::string out_path;
  int horizon = 1000;
  std::vector<double> x0 = {0.0, 0.0};
  double p = 0.0;
  double scale = 3.0;
  std::string sign_mode = "symmetric";
  std::uint64_t data_seed = 1;
  std::uint64_t outlier_seed = 2;
};

void cmd_simulate(const SimulateOpts& opts) {
  const double dt = opts.model.dt > 0.0 ? opts.model.dt : 1.0;
  const oikf::SystemModel model = opts.model.build(dt);
  Eigen::VectorXd x0(2);
  x0 << opts.x0[0], opts.x0[1];

  oikf::ObservationSeries series =
      oikf::simulate_trajectory(model, x0, opts.horizon, opts.data_seed);
  oikf::OutlierSpec spec;
  spec.probability = opts.p;
  spec.rayleigh_scale = opts.scale;
  spec.sign_mode =
      opts.sign_mode == "positive" ? oikf::SignMode::Positive : oikf::SignMode::Symmetric;
  spec.seed = opts.outlier_seed;
  series = oikf::inject_outliers(series, spec);
  series.times *= dt;

  oikf::write_trajectory(series, opts.out_path);
  const long outliers = static_cast<long>(series.outlier_mask->count());
  std::cout << "T=" << opts.horizon << " outliers=" << outliers << "\n";
}

// ---------------------------------------------------------------------------
// filter

struct FilterOpts {
  ModelFlags model;
  std::string input_path;
  std::string estimates_path;
  std::string diagnostics_path;
  std::string engine = "oikf-am";
  int iters = oikf::OikfConfig{}.max_iters;
  double tol = 1e-6;
  bool record_trace = false;
  double alpha = 0.05;
  std::vector<int> eval_dims = {0};
};

void write_estimates_csv(const std::string& path, const oikf::ObservationSeries& series,
                         const oikf::FilterRun& run, int state_dim) {
  std::ofstream out = open_out(path);
  out << "t";
  for (int k = 0; k < state_dim; ++k) out << ",x_" << (k + 1);
  for (int k = 0; k < state_dim; ++k) out << ",var_" << (k + 1);
  out << "\n";
  for (std::size_t t = 0; t < run.beliefs.size(); ++t) {
    out << fmt17(series.times[static_cast<Eigen::Index>(t)]);
    for (int k = 0; k < state_dim; ++k) out << ',' << fmt17(run.beliefs[t].mean[k]);
    for (int k = 0; k < state_dim; ++k) out << ',' << fmt17(run.beliefs[t].cov(k, k));
    out << '\n';
  }
}

void write_diagnostics_csv(const std::string& path, const oikf::ObservationSeries& series,
                           const oikf::FilterRun& run, int obs_dim, bool with_trace,
                           int max_iters) {
  std::ofstream out = open_out(path);
  out << "t";
  for (int k = 0; k < obs_dim; ++k) out << ",gamma_sq_" << (k + 1);
  out << ",iters";
  for (int k = 0; k < obs_dim; ++k) out << ",detected_" << (k + 1);
  out << ",rejected";
  if (with_trace)
    for (int i = 0; i < max_iters; ++i)
      for (int k = 0; k < obs_dim; ++k) out << ",g_i" << (i + 1) << "_d" << (k + 1);
  out << "\n";
  for (std::size_t t = 0; t < run.diagnostics.size(); ++t) {
    const oikf::StepDiagnostics& diag = run.diagnostics[t];
    out << fmt17(series.times[static_cast<Eigen::Index>(t)]);
    for (int k = 0; k < obs_dim; ++k) out << ',' << fmt17(diag.gamma_sq[k]);
    out << ',' << diag.iters_used;
    for (int k = 0; k < obs_dim; ++k) out << ',' << (diag.detected[k] ? 1 : 0);
    out << ',' << (diag.rejected ? 1 : 0);
    if (with_trace) {
      for (int i = 0; i < max_iters; ++i)
        for (int k = 0; k < obs_dim; ++k)
          out << ',' << (i < diag.gamma_trace.rows() ? fmt17(diag.gamma_trace(i, k)) : "nan");
    }
    out << '\n';
  }
}

ordered_json metrics_json(const oikf::MetricsReport& report, double dt) {
  ordered_json j;
  j["engine"] = report.engine;
  j["params"] = ordered_json{{"q_var", report.params.q_var}, {"r_var", report.params.r_var},
                             {"dt", dt}};
  if (report.params.alpha) j["params"]["alpha"] = *report.params.alpha;
  j["eval_dims"] = report.eval_dims;
  j["mse"] = std::vector<double>(report.mse_per_dim.begin(), report.mse_per_dim.end());
  j["rmse"] = std::vector<double>(report.rmse_per_dim.begin(), report.rmse_per_dim.end());
  j["mse_db"] = std::vector<double>(report.mse_db_per_dim.begin(), report.mse_db_per_dim.end());
  j["mean_step_runtime_s"] = report.mean_step_runtime;
  j["n_steps"] = report.n_steps;
  return j;
}

void cmd_filter(const FilterOpts& opts) {
  const oikf::LoadedTrajectory loaded =
      oikf::read_trajectory(opts.input_path, opts.model.obs_dim(), 2);
  const double dt = resolve_dt(opts.model.dt, loaded.dt);
  std::cerr << "dt=" << dt << " (" << (opts.model.dt > 0.0 ? "flag" : "inferred") << ")\n";
  const oikf::SystemModel model = opts.model.build(dt);

  const oikf::Engine engine = oikf::engine_from_name(opts.engine);
  oikf::FilterOptions filter_opts;
  filter_opts.oikf.max_iters = opts.iters;
  filter_opts.oikf.tol = opts.tol;
  filter_opts.oikf.record_trace = opts.record_trace;
  filter_opts.chi2.alpha = opts.alpha;

  const oikf::FilterRun run = oikf::filter_series(loaded.series, model, engine, filter_opts);

  std::string estimates_path = opts.estimates_path;
  if (estimates_path.empty()) estimates_path = opts.input_path + ".estimates.csv";
  std::string diagnostics_path = opts.diagnostics_path;
  if (diagnostics_path.empty()) diagnostics_path = opts.input_path + ".diagnostics.csv";
  write_estimates_csv(estimates_path, loaded.series, run, model.state_dim);
  write_diagnostics_csv(diagnostics_path, loaded.series, run, model.obs_dim, opts.record_trace,
                        opts.iters);

  if (loaded.series.truth_states) {
    oikf::MetricsReport report = oikf::compute_metrics(run.beliefs, *loaded.series.truth_states,
                                                       opts.eval_dims, run.step_seconds);
    report.engine = oikf::engine_name(engine);
    report.params.q_var = opts.model.q_var;
    report.params.r_var = opts.model.r_var;
    if (engine == oikf::Engine::Chi2) report.params.alpha = opts.alpha;
    std::cout << metrics_json(report, dt).dump(2) << "\n";
  }
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOpts {
  ModelFlags model{.name = "position-only", .q_var = 0.1, .r_var = 1.0, .dt = 0.0};
  std::string input_path;
  std::string out_path;
  std::vector<std::string> engines = {"noisy", "kf", "chi2", "oikf-am", "oikf-em"};
  std::vector<double> q_grid_db = {-30, -25, -20, -15, -10, -5, 0};
  std::vector<double> r_grid_db = {-10, -8, -6, -4, -2, 0,  2,  4,  6,  8, 10,
                                   12,  14, 16, 18, 20, 22, 24, 26, 28, 30};
  std::vector<double> alpha_grid = {0.01, 0.05, 0.1};
  std::vector<int> eval_dims = {0};
  int iters = oikf::OikfConfig{}.max_iters;
  double tol = 1e-6;
  std::string format = "csv";
};

void cmd_sweep(const SweepOpts& opts) {
  const oikf::LoadedTrajectory loaded =
      oikf::read_trajectory(opts.input_path, opts.model.obs_dim(), 2);
  if (!loaded.series.truth_states)
    throw std::runtime_error("sweep: input file must carry ground-truth columns");
  const double dt = resolve_dt(opts.model.dt, loaded.dt);
  std::cerr << "dt=" << dt << " (" << (opts.model.dt > 0.0 ? "flag" : "inferred") << ")\n";

  const std::string model_name = opts.model.name;
  const oikf::ModelBuilder builder = [model_name, dt](double q_var, double r_var) {
    return model_name == "wna" ? oikf::build_wna_model(q_var, r_var, dt)
                               : oikf::build_position_only_model(q_var, r_var, dt);
  };

  std::vector<double> q_grid, r_grid;
  for (double db : opts.q_grid_db) q_grid.push_back(db_to_linear(db));
  for (double db : opts.r_grid_db) r_grid.push_back(db_to_linear(db));

  oikf::FilterOptions base_opts;
  base_opts.oikf.max_iters = opts.iters;
  base_opts.oikf.tol = opts.tol;

  std::vector<std::pair<oikf::Engine, oikf::SweepResult>> sweeps;
  for (const std::string& engine_name : opts.engines) {
    const oikf::Engine engine = oikf::engine_from_name(engine_name);
    oikf::SweepResult sweep =
        oikf::grid_search(loaded.series, builder, engine, base_opts, q_grid, r_grid,
                          opts.alpha_grid, opts.eval_dims);
    const oikf::MetricsReport& best = sweep.reports[sweep.best];
    std::cout << "best engine=" << best.engine << " q_var=" << best.params.q_var
              << " r_var=" << best.params.r_var;
    if (best.params.alpha) std::cout << " alpha=" << *best.params.alpha;
    std::cout << " mse_db=" << best.mse_db_per_dim[0] << "\n";
    sweeps.emplace_back(engine, std::move(sweep));
  }

  std::ofstream out = open_out(opts.out_path);
  if (opts.format == "json") {
    ordered_json rows = ordered_json::array();
    for (const auto& [engine, sweep] : sweeps) {
      for (std::size_t i = 0; i < sweep.reports.size(); ++i) {
        const oikf::MetricsReport& report = sweep.reports[i];
        for (std::size_t j = 0; j < report.eval_dims.size(); ++j) {
          ordered_json row;
          row["engine"] = report.engine;
          row["q_var"] = report.params.q_var;
          row["r_var"] = report.params.r_var;
          row["dim"] = report.eval_dims[j];
          row["rmse"] = report.rmse_per_dim[static_cast<Eigen::Index>(j)];
          row["mse_db"] = report.mse_db_per_dim[static_cast<Eigen::Index>(j)];
          row["runtime_ms"] = report.mean_step_runtime * 1e3;
          if (report.params.alpha) row["alpha"] = *report.params.alpha;
          row["best"] = (i == sweep.best);
          rows.push_back(std::move(row));
        }
      }
    }
    out << rows.dump(2) << "\n";
  } else {
    oikf::write_sweep_csv(out, sweeps);
  }
}

// ---------------------------------------------------------------------------
// fig2

struct Fig2Opts {
  std::string out_path;
  std::string panel = "clean";
  std::vector<double> r2_grid_db = {-20, -18, -16, -14, -12, -10, -8, -6};
  std::vector<double> alpha_grid = {0.01, 0.05, 0.1, 0.2};
  int trials = 20;
  int horizon = 2000;
  double q_var = 0.1;
  double dt = 1.0;
  std::uint64_t seed = 1234;
  int iters = oikf::OikfConfig{}.max_iters;
  double tol = 1e-6;
  std::string format = "csv";
};

void cmd_fig2(const Fig2Opts& opts) {
  oikf::Fig2Config cfg;
  cfg.r_sq_values.clear();
  for (double db : opts.r2_grid_db) cfg.r_sq_values.push_back(db_to_linear(db));
  cfg.q_var = opts.q_var;
  cfg.dt = opts.dt;
  cfg.horizon = opts.horizon;
  cfg.n_trials = opts.trials;
  cfg.base_seed = opts.seed;
  cfg.oikf.max_iters = opts.iters;
  cfg.oikf.tol = opts.tol;
  cfg.chi2_alpha_grid = opts.alpha_grid;
  if (opts.panel == "clean") {
    cfg.outlier_p = 0.0;
  } else if (opts.panel == "low") {
    cfg.outlier_p = 0.2;
    cfg.outlier_scale = 3.0;
  } else {  // high
    cfg.outlier_p = 0.2;
    cfg.outlier_scale = 30.0;
  }

  const std::vector<oikf::Fig2Row> rows = oikf::mse_vs_r_experiment(cfg);
  std::ofstream out = open_out(opts.out_path);
  if (opts.format == "json") {
    ordered_json jrows = ordered_json::array();
    for (const oikf::Fig2Row& row : rows) {
      ordered_json j;
      j["engine"] = oikf::engine_name(row.engine);
      j["r2_db"] = oikf::to_db(row.r_sq);
      j["mse_db"] = row.mse_db;
      if (row.alpha) j["alpha"] = *row.alpha;
      jrows.push_back(std::move(j));
    }
    out << jrows.dump(2) << "\n";
  } else {
    oikf::write_fig2_csv(out, rows);
  }
  std::cout << "panel=" << opts.panel << " rows=" << rows.size() << "\n";
}

// ---------------------------------------------------------------------------
// convergence

struct ConvergenceOpts {
  std::string out_path;
  double p = 0.2;
  double scale = 30.0;
  double q_var = oikf::ConvergenceConfig{}.q_var;
  double r_var = oikf::ConvergenceConfig{}.r_var;
  double dt = 1.0;
  int horizon = 2000;
  std::uint64_t seed = 99;
  std::string variant = "am";
  int iters = oikf::ConvergenceConfig{}.oikf.max_iters;
  double tol = 1e-6;
  double stability = 0.01;
  std::string format = "csv";
};

void cmd_convergence(const ConvergenceOpts& opts) {
  oikf::ConvergenceConfig cfg;
  cfg.q_var = opts.q_var;
  cfg.r_var = opts.r_var;
  cfg.dt = opts.dt;
  cfg.outlier_p = opts.p;
  cfg.outlier_scale = opts.scale;
  cfg.horizon = opts.horizon;
  cfg.seed = opts.seed;
  cfg.oikf.variant = (opts.variant == "em") ? oikf::NuvVariant::Em : oikf::NuvVariant::Am;
  cfg.oikf.max_iters = opts.iters;
  cfg.oikf.tol = opts.tol;
  cfg.oikf.record_trace = true;
  cfg.stability_rel = opts.stability;

  const oikf::ConvergenceResult result = oikf::convergence_trace_experiment(cfg);
  std::ofstream out = open_out(opts.out_path);
  if (opts.format == "json") {
    ordered_json jrows = ordered_json::array();
    for (const oikf::TraceRecord& record : result.traces) {
      ordered_json j;
      j["step"] = record.step;
      j["iters_used"] = record.iters_used;
      j["iters_to_stability"] = record.iters_to_stability;
      std::vector<std::vector<double>> trace;
      for (Eigen::Index i = 0; i < record.gamma_trace.rows(); ++i)
        trace.emplace_back(record.gamma_trace.row(i).begin(), record.gamma_trace.row(i).end());
      j["gamma_trace"] = trace;
      jrows.push_back(std::move(j));
    }
    out << jrows.dump(2) << "\n";
  } else {
    oikf::write_convergence_csv(out, result);
  }
  std::cout << "detected=" << result.traces.size()
            << " median_iters_to_stability=" << result.median_iters_to_stability << "\n";
}

void add_oikf_flags(CLI::App* cmd, int& iters, double& tol) {
  cmd->add_option("--iters", iters, "Max inner iterations per step")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", tol, "Relative gamma^2 change for early exit (0 = always run --iters)")
      ->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outlier-insensitive Kalman filtering bench"};
  app.require_subcommand(1);

  const auto model_flags = [](CLI::App* cmd, ModelFlags& model, bool with_dt_default) {
    cmd->add_option("--model", model.name, "State-space model")
        ->check(CLI::IsMember({"wna", "position-only"}));
    cmd->add_option("--q-var", model.q_var, "Process-noise variance")->check(CLI::PositiveNumber);
    cmd->add_option("--r-var", model.r_var, "Observation-noise variance")
        ->check(CLI::PositiveNumber);
    auto* dt_opt = cmd->add_option("--dt", model.dt, "Time-step length");
    if (with_dt_default)
      dt_opt->check(CLI::PositiveNumber);
    else
      dt_opt->check(CLI::NonNegativeNumber)
          ->description("Time-step length (0 = infer from the input file)");
  };

  SimulateOpts sim;
  sim.model.dt = 1.0;
  CLI::App* simulate = app.add_subcommand("simulate", "Generate a synthetic trajectory CSV");
  simulate->add_option("--out", sim.out_path, "Output trajectory CSV")->required();
  simulate->add_option("--T", sim.horizon, "Number of time steps")->check(CLI::PositiveNumber);
  model_flags(simulate, sim.model, true);
  simulate->add_option("--x0", sim.x0, "Initial state (position,velocity)")
      ->expected(2)
      ->delimiter(',');
  simulate->add_option("--p", sim.p, "Per-step, per-dimension outlier probability")
      ->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--scale", sim.scale, "Rayleigh scale of outlier magnitudes")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--sign-mode", sim.sign_mode, "Outlier sign convention")
      ->check(CLI::IsMember({"symmetric", "positive"}));
  simulate->add_option("--data-seed", sim.data_seed, "Seed for process/observation noise");
  simulate->add_option("--outlier-seed", sim.outlier_seed, "Seed for outlier injection");
  simulate->callback([&] { cmd_simulate(sim); });

  FilterOpts filt;
  CLI::App* filter = app.add_subcommand("filter", "Filter a trajectory CSV with one engine");
  filter->add_option("--input", filt.input_path, "Input trajectory CSV")->required();
  filter->add_option("--estimates-out", filt.estimates_path,
                     "Estimates CSV (default <input>.estimates.csv)");
  filter->add_option("--diagnostics-out", filt.diagnostics_path,
                     "Diagnostics CSV (default <input>.diagnostics.csv)");
  filter->add_option("--engine", filt.engine, "Filtering engine")
      ->check(CLI::IsMember({"noisy", "kf", "oikf-am", "oikf-em", "chi2"}));
  model_flags(filter, filt.model, false);
  add_oikf_flags(filter, filt.iters, filt.tol);
  filter->add_flag("--record-trace", filt.record_trace,
                   "Record per-iteration gamma^2 columns in the diagnostics CSV");
  filter->add_option("--alpha", filt.alpha, "Chi-squared gate significance level")
      ->check(CLI::Range(0.0, 1.0));
  filter->add_option("--eval-dims", filt.eval_dims, "State dimensions for the metrics report")
      ->delimiter(',');
  filter->callback([&] { cmd_filter(filt); });

  SweepOpts sweep;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Grid-search (q, r[, alpha]) per engine on a recorded series");
  sweep_cmd->add_option("--input", sweep.input_path, "Input trajectory CSV with ground truth")
      ->required();
  sweep_cmd->add_option("--out", sweep.out_path, "Output result table")->required();
  sweep_cmd->add_option("--engines", sweep.engines, "Engines to sweep")->delimiter(',');
  model_flags(sweep_cmd, sweep.model, false);
  sweep_cmd->add_option("--q-grid-db", sweep.q_grid_db, "q_var grid in dB")->delimiter(',');
  sweep_cmd->add_option("--r-grid-db", sweep.r_grid_db, "r_var grid in dB")->delimiter(',');
  sweep_cmd->add_option("--alpha-grid", sweep.alpha_grid, "Chi-squared gate alpha grid")
      ->delimiter(',');
  sweep_cmd->add_option("--eval-dims", sweep.eval_dims, "State dimensions to score")
      ->delimiter(',');
  add_oikf_flags(sweep_cmd, sweep.iters, sweep.tol);
  sweep_cmd->add_option("--format", sweep.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep_cmd->callback([&] { cmd_sweep(sweep); });

  Fig2Opts fig2;
  CLI::App* fig2_cmd = app.add_subcommand(
      "fig2", "MSE versus observation noise per engine (clean/low/high panels)");
  fig2_cmd->add_option("--out", fig2.out_path, "Output result table")->required();
  fig2_cmd->add_option("--panel", fig2.panel, "Contamination panel")
      ->check(CLI::IsMember({"clean", "low", "high"}));
  fig2_cmd->add_option("--r2-grid-db", fig2.r2_grid_db, "Observation-noise grid in dB")
      ->delimiter(',');
  fig2_cmd->add_option("--alpha-grid", fig2.alpha_grid, "Chi-squared gate alpha grid")
      ->delimiter(',');
  fig2_cmd->add_option("--trials", fig2.trials, "Trials per grid value")
      ->check(CLI::PositiveNumber);
  fig2_cmd->add_option("--T", fig2.horizon, "Steps per trial")->check(CLI::PositiveNumber);
  fig2_cmd->add_option("--q-var", fig2.q_var, "Process-noise variance")
      ->check(CLI::PositiveNumber);
  fig2_cmd->add_option("--dt", fig2.dt, "Time-step length")->check(CLI::PositiveNumber);
  fig2_cmd->add_option("--seed", fig2.seed, "Base seed");
  add_oikf_flags(fig2_cmd, fig2.iters, fig2.tol);
  fig2_cmd->add_option("--format", fig2.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  fig2_cmd->callback([&] { cmd_fig2(fig2); });

  ConvergenceOpts conv;
  CLI::App* conv_cmd =
      app.add_subcommand("convergence", "Per-outlier gamma^2 iteration traces and stability");
  conv_cmd->add_option("--out", conv.out_path, "Output trace table")->required();
  conv_cmd->add_option("--p", conv.p, "Outlier probability")->check(CLI::Range(0.0, 1.0));
  conv_cmd->add_option("--scale", conv.scale, "Rayleigh scale of outlier magnitudes")
      ->check(CLI::PositiveNumber);
  conv_cmd->add_option("--q-var", conv.q_var, "Process-noise variance")
      ->check(CLI::PositiveNumber);
  conv_cmd->add_option("--r-var", conv.r_var, "Observation-noise variance")
      ->check(CLI::PositiveNumber);
  conv_cmd->add_option("--dt", conv.dt, "Time-step length")->check(CLI::PositiveNumber);
  conv_cmd->add_option("--T", conv.horizon, "Number of time steps")->check(CLI::PositiveNumber);
  conv_cmd->add_option("--seed", conv.seed, "Base seed");
  conv_cmd->add_option("--variant", conv.variant, "NUV variant")
      ->check(CLI::IsMember({"am", "em"}));
  add_oikf_flags(conv_cmd, conv.iters, conv.tol);
  conv_cmd->add_option("--stability", conv.stability,
                       "Relative gamma^2 change counted as stable")
      ->check(CLI::PositiveNumber);
  conv_cmd->add_option("--format", conv.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  conv_cmd->callback([&] { cmd_convergence(conv); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
