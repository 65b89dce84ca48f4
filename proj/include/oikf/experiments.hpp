// Evaluation harness: hyperparameter grid search on a recorded series, the
// MSE-versus-observation-noise sweep (clean and contaminated panels), and the
// gamma^2 convergence-trace experiment.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "oikf/filter.hpp"
#include "oikf/metrics.hpp"

namespace oikf {

namespace detail {

// splitmix64-style mixing so that nested experiment loops get decorrelated streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace detail

struct GridPoint {
  double q_var = 0.0;
  double r_var = 0.0;
  std::optional<double> alpha;  // populated for the chi-squared gate
};

struct SweepResult {
  std::vector<GridPoint> grid;
  std::vector<MetricsReport> reports;  // aligned with grid
  std::size_t best = 0;                // index of the lowest mean MSE over eval_dims
};

using ModelBuilder = std::function<SystemModel(double q_var, double r_var)>;

// Exhaustive search over (q_var, r_var[, alpha]) for one engine on one recorded
// series with ground truth. Points are visited q-major, then r, then alpha, and ties
// keep the earliest point, so the winner has the lowest q, then r, then alpha among
// minimizers. A numerical failure at a grid point is recorded as +inf and the sweep
// continues.
inline SweepResult grid_search(const ObservationSeries& data, const ModelBuilder& builder,
                               Engine engine, const FilterOptions& base_opts,
                               std::span<const double> q_grid, std::span<const double> r_grid,
                               std::span<const double> alpha_grid = {},
                               const std::vector<int>& eval_dims = {0}) {
  if (!data.truth_states)
    throw std::invalid_argument("grid_search: data must carry ground truth");
  if (q_grid.empty() || r_grid.empty())
    throw std::invalid_argument("grid_search: q_grid and r_grid must be nonempty");

  std::vector<double> alphas(alpha_grid.begin(), alpha_grid.end());
  if (engine != Engine::Chi2)
    alphas.assign(1, base_opts.chi2.alpha);  // single pass; alpha is ignored
  else if (alphas.empty())
    alphas.assign(1, base_opts.chi2.alpha);

  SweepResult result;
  double best_objective = std::numeric_limits<double>::infinity();
  for (double q_var : q_grid) {
    for (double r_var : r_grid) {
      for (double alpha : alphas) {
        GridPoint point{q_var, r_var, std::nullopt};
        FilterOptions opts = base_opts;
        if (engine == Engine::Chi2) {
          point.alpha = alpha;
          opts.chi2.alpha = alpha;
        }

        MetricsReport report;
        try {
          const SystemModel model = builder(q_var, r_var);
          const FilterRun run = filter_series(data, model, engine, opts);
          report = compute_metrics(run.beliefs, *data.truth_states, eval_dims, run.step_seconds);
        } catch (const std::exception&) {
          report.eval_dims = eval_dims;
          const Eigen::Index n_dims = static_cast<Eigen::Index>(eval_dims.size());
          report.mse_per_dim =
              Eigen::VectorXd::Constant(n_dims, std::numeric_limits<double>::infinity());
          report.rmse_per_dim = report.mse_per_dim;
          report.mse_db_per_dim = report.mse_per_dim;
        }
        report.engine = engine_name(engine);
        report.params = MetricsParams{q_var, r_var, point.alpha};

        const double objective = report.mse_per_dim.mean();
        if (objective < best_objective) {
          best_objective = objective;
          result.best = result.grid.size();
        }
        result.grid.push_back(point);
        result.reports.push_back(std::move(report));
      }
    }
  }
  return result;
}

struct Fig2Config {
  // Linear observation-noise variances to sweep: 1/r^2 from +20 dB down to +6 dB in
  // 2 dB steps. The sweep targets the regime where outliers stand out against the
  // observation noise; past it every filter collapses onto the plain KF ordering.
  std::vector<double> r_sq_values = {0.01,     0.015849, 0.025119, 0.039811,
                                     0.063096, 0.1,      0.158489, 0.251189};
  double q_var = 0.1;
  double dt = 1.0;
  double outlier_p = 0.0;  // 0 disables injection (clean panel)
  double outlier_scale = 3.0;
  SignMode sign_mode = SignMode::Symmetric;
  int horizon = 2000;
  int n_trials = 20;
  std::uint64_t base_seed = 1234;
  std::vector<Engine> engines = {Engine::Kf, Engine::OikfAm, Engine::OikfEm, Engine::Chi2};
  OikfConfig oikf{};
  std::vector<double> chi2_alpha_grid = {0.01, 0.05, 0.1, 0.2};
};

struct Fig2Row {
  Engine engine = Engine::Kf;
  double r_sq = 0.0;
  double mse_db = 0.0;            // position MSE averaged over trials, then in dB
  std::optional<double> alpha;    // the winning alpha for the chi-squared gate
};

// Position MSE of each engine as a function of the observation-noise variance on the
// constant-velocity model, averaged over trials that share the same simulated data
// across engines. The chi-squared gate picks the best alpha from its own grid per
// r^2 value.
inline std::vector<Fig2Row> mse_vs_r_experiment(const Fig2Config& cfg) {
  if (cfg.r_sq_values.empty())
    throw std::invalid_argument("mse_vs_r_experiment: r_sq_values must be nonempty");
  if (cfg.n_trials < 1) throw std::invalid_argument("mse_vs_r_experiment: n_trials must be >= 1");
  std::vector<double> alphas = cfg.chi2_alpha_grid;
  if (alphas.empty()) alphas.push_back(0.05);

  std::vector<Fig2Row> rows;
  const std::vector<int> position_dim = {0};
  for (std::size_t ri = 0; ri < cfg.r_sq_values.size(); ++ri) {
    const double r_sq = cfg.r_sq_values[ri];
    const SystemModel model = build_wna_model(cfg.q_var, r_sq, cfg.dt);

    std::vector<double> engine_mse(cfg.engines.size(), 0.0);
    std::vector<double> alpha_mse(alphas.size(), 0.0);
    for (int trial = 0; trial < cfg.n_trials; ++trial) {
      const std::uint64_t data_seed =
          detail::mix_seed(cfg.base_seed, (static_cast<std::uint64_t>(ri) << 32) |
                                              (static_cast<std::uint64_t>(trial) << 1));
      ObservationSeries series =
          simulate_trajectory(model, Eigen::VectorXd::Zero(2), cfg.horizon, data_seed);
      if (cfg.outlier_p > 0.0) {
        OutlierSpec spec;
        spec.probability = cfg.outlier_p;
        spec.rayleigh_scale = cfg.outlier_scale;
        spec.sign_mode = cfg.sign_mode;
        spec.seed = detail::mix_seed(cfg.base_seed, (static_cast<std::uint64_t>(ri) << 32) |
                                                        (static_cast<std::uint64_t>(trial) << 1) |
                                                        1ULL);
        series = inject_outliers(series, spec);
      }

      for (std::size_t ei = 0; ei < cfg.engines.size(); ++ei) {
        FilterOptions opts;
        opts.oikf = cfg.oikf;
        if (cfg.engines[ei] == Engine::Chi2) {
          for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
            opts.chi2.alpha = alphas[ai];
            const FilterRun run = filter_series(series, model, Engine::Chi2, opts);
            alpha_mse[ai] += compute_metrics(run.beliefs, *series.truth_states, position_dim,
                                             run.step_seconds)
                                 .mse_per_dim[0];
          }
        } else {
          const FilterRun run = filter_series(series, model, cfg.engines[ei], opts);
          engine_mse[ei] += compute_metrics(run.beliefs, *series.truth_states, position_dim,
                                            run.step_seconds)
                                .mse_per_dim[0];
        }
      }
    }

    for (std::size_t ei = 0; ei < cfg.engines.size(); ++ei) {
      Fig2Row row;
      row.engine = cfg.engines[ei];
      row.r_sq = r_sq;
      if (cfg.engines[ei] == Engine::Chi2) {
        std::size_t best_alpha = 0;
        for (std::size_t ai = 1; ai < alphas.size(); ++ai)
          if (alpha_mse[ai] < alpha_mse[best_alpha]) best_alpha = ai;
        row.mse_db = to_db(alpha_mse[best_alpha] / cfg.n_trials);
        row.alpha = alphas[best_alpha];
      } else {
        row.mse_db = to_db(engine_mse[ei] / cfg.n_trials);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

struct ConvergenceConfig {
  // Smooth dynamics relative to the observation noise: with a large prior-to-noise
  // ratio, borderline detections contract slowly and need extra passes to settle.
  double q_var = 0.01;
  double r_var = 1.0;
  double dt = 1.0;
  double outlier_p = 0.2;
  double outlier_scale = 30.0;
  int horizon = 2000;
  std::uint64_t seed = 99;
  OikfConfig oikf{NuvVariant::Am, 10, 1e-6, true};
  double stability_rel = 0.01;  // "stable" when gamma^2 changes by less than this
};

struct TraceRecord {
  int step = 0;
  Eigen::MatrixXd gamma_trace;  // iters_used x n
  int iters_used = 0;
  int iters_to_stability = 0;
};

struct ConvergenceResult {
  std::vector<TraceRecord> traces;  // one per detected-outlier step
  double median_iters_to_stability = 0.0;
};

namespace detail {

// First iteration index k (1-based) after which the next iterate moves gamma^2 by
// less than `rel`; falls back to the trace length when that never happens.
inline int iters_to_stability(const Eigen::MatrixXd& trace, double rel) {
  const Eigen::Index rows = trace.rows();
  for (Eigen::Index k = 1; k < rows; ++k) {
    if (max_rel_change(trace.row(k - 1).transpose(), trace.row(k).transpose()) < rel)
      return static_cast<int>(k);
  }
  return static_cast<int>(rows);
}

}  // namespace detail

// Run the robust filter on one contaminated constant-velocity trajectory with trace
// recording on, and summarize how many inner iterations each detected-outlier step
// needed before gamma^2 stabilized.
inline ConvergenceResult convergence_trace_experiment(const ConvergenceConfig& cfg) {
  const SystemModel model = build_wna_model(cfg.q_var, cfg.r_var, cfg.dt);
  ObservationSeries series = simulate_trajectory(model, Eigen::VectorXd::Zero(2), cfg.horizon,
                                                 detail::mix_seed(cfg.seed, 0));
  if (cfg.outlier_p > 0.0) {
    OutlierSpec spec;
    spec.probability = cfg.outlier_p;
    spec.rayleigh_scale = cfg.outlier_scale;
    spec.seed = detail::mix_seed(cfg.seed, 1);
    series = inject_outliers(series, spec);
  }

  FilterOptions opts;
  opts.oikf = cfg.oikf;
  opts.oikf.record_trace = true;
  const Engine engine = (cfg.oikf.variant == NuvVariant::Em) ? Engine::OikfEm : Engine::OikfAm;
  const FilterRun run = filter_series(series, model, engine, opts);

  ConvergenceResult result;
  std::vector<double> stability;
  for (std::size_t t = 0; t < run.diagnostics.size(); ++t) {
    const StepDiagnostics& diag = run.diagnostics[t];
    if (!diag.detected.any()) continue;
    TraceRecord record;
    record.step = static_cast<int>(t);
    record.gamma_trace = diag.gamma_trace;
    record.iters_used = diag.iters_used;
    record.iters_to_stability = detail::iters_to_stability(diag.gamma_trace, cfg.stability_rel);
    stability.push_back(record.iters_to_stability);
    result.traces.push_back(std::move(record));
  }
  if (!stability.empty()) result.median_iters_to_stability = detail::median(stability);
  return result;
}

}  // namespace oikf
