// Accuracy metrics over filtered estimates versus ground truth: per-dimension MSE,
// RMSE and MSE in dB, plus mean per-step runtime.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "oikf/kalman.hpp"

namespace oikf {

// Stand-in for log10(0) when an estimate is exact.
inline constexpr double kMseDbFloor = -300.0;

inline double to_db(double mse) {
  if (!(mse > 0.0)) return mse == 0.0 ? kMseDbFloor : std::numeric_limits<double>::quiet_NaN();
  return std::max(kMseDbFloor, 10.0 * std::log10(mse));
}

struct MetricsParams {
  double q_var = 0.0;
  double r_var = 0.0;
  std::optional<double> alpha;  // chi-squared gate only
};

struct MetricsReport {
  std::string engine;
  MetricsParams params;
  std::vector<int> eval_dims;      // state dimensions the metrics cover
  Eigen::VectorXd mse_per_dim;     // linear, indexed like eval_dims
  Eigen::VectorXd rmse_per_dim;
  Eigen::VectorXd mse_db_per_dim;  // 10 log10(mse), floored at kMseDbFloor
  double mean_step_runtime = 0.0;  // seconds
  int n_steps = 0;
};

inline MetricsReport compute_metrics(const std::vector<GaussianBelief>& estimates,
                                     const Eigen::MatrixXd& truth,
                                     const std::vector<int>& eval_dims,
                                     const std::vector<double>& timings) {
  if (estimates.empty()) throw std::invalid_argument("compute_metrics: estimates are empty");
  if (static_cast<Eigen::Index>(estimates.size()) != truth.rows())
    throw std::invalid_argument("compute_metrics: estimates and truth length mismatch");
  if (!timings.empty() && timings.size() != estimates.size())
    throw std::invalid_argument("compute_metrics: timings length mismatch");
  if (eval_dims.empty()) throw std::invalid_argument("compute_metrics: eval_dims is empty");
  for (int dim : eval_dims)
    if (dim < 0 || dim >= truth.cols())
      throw std::invalid_argument("compute_metrics: eval_dims entry out of range");

  MetricsReport report;
  report.eval_dims = eval_dims;
  report.n_steps = static_cast<int>(estimates.size());
  const Eigen::Index n_dims = static_cast<Eigen::Index>(eval_dims.size());
  report.mse_per_dim = Eigen::VectorXd::Zero(n_dims);
  for (std::size_t t = 0; t < estimates.size(); ++t) {
    if (estimates[t].mean.size() != truth.cols())
      throw std::invalid_argument("compute_metrics: estimate dimension mismatch");
    for (Eigen::Index j = 0; j < n_dims; ++j) {
      const double err =
          estimates[t].mean[eval_dims[static_cast<std::size_t>(j)]] -
          truth(static_cast<Eigen::Index>(t), eval_dims[static_cast<std::size_t>(j)]);
      report.mse_per_dim[j] += err * err;
    }
  }
  report.mse_per_dim /= static_cast<double>(estimates.size());
  report.rmse_per_dim = report.mse_per_dim.cwiseSqrt();
  report.mse_db_per_dim.resize(n_dims);
  for (Eigen::Index j = 0; j < n_dims; ++j)
    report.mse_db_per_dim[j] = to_db(report.mse_per_dim[j]);

  if (!timings.empty()) {
    double total = 0.0;
    for (double s : timings) total += s;
    report.mean_step_runtime = total / static_cast<double>(timings.size());
  }
  return report;
}

}  // namespace oikf
