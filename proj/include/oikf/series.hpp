// Observation sequences: synthetic trajectory generation for the linear model and
// Bernoulli/Rayleigh outlier injection mimicking GNSS-style corruption.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>

#include "oikf/system_model.hpp"

namespace oikf {

using BoolMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct ObservationSeries {
  Eigen::VectorXd times;                        // strictly increasing, length T
  Eigen::MatrixXd observations;                 // T x n
  std::optional<Eigen::MatrixXd> truth_states;  // T x m, present for synthetic data
  std::optional<BoolMask> outlier_mask;         // T x n, present after inject_outliers

  Eigen::Index size() const { return observations.rows(); }
  Eigen::Index obs_dim() const { return observations.cols(); }
};

enum class SignMode { Symmetric, Positive };

struct OutlierSpec {
  double probability = 0.0;     // per time step AND per observation dimension
  double rayleigh_scale = 1.0;  // sigma of the Rayleigh magnitude distribution
  SignMode sign_mode = SignMode::Symmetric;
  std::uint64_t seed = 0;
};

// Roll the model forward `horizon` steps from x0 (x0 itself is not emitted).
// Time stamps are 1, 2, ..., horizon; callers can rescale to seconds.
inline ObservationSeries simulate_trajectory(const SystemModel& model, const Eigen::VectorXd& x0,
                                             int horizon, std::uint64_t seed) {
  detail::validate_model(model, /*require_positive_r=*/false);
  if (x0.size() != model.state_dim)
    throw std::invalid_argument("simulate_trajectory: x0 length must equal state_dim");
  if (horizon < 1) throw std::invalid_argument("simulate_trajectory: horizon must be >= 1");

  const int m = model.state_dim;
  const int n = model.obs_dim;
  const Eigen::MatrixXd q_sqrt = psd_sqrt(model.q_cov);
  const Eigen::VectorXd r_std = model.r_cov.diagonal().cwiseSqrt();

  std::mt19937_64 gen(seed);
  std::normal_distribution<double> unit;
  const auto randn = [&](int len) {
    Eigen::VectorXd v(len);
    for (int i = 0; i < len; ++i) v[i] = unit(gen);
    return v;
  };

  ObservationSeries series;
  series.times.resize(horizon);
  series.observations.resize(horizon, n);
  series.truth_states.emplace(horizon, m);

  Eigen::VectorXd x = x0;
  for (int t = 0; t < horizon; ++t) {
    x = model.f_mat * x + q_sqrt * randn(m);
    series.times[t] = t + 1;
    series.truth_states->row(t) = x.transpose();
    series.observations.row(t) = (model.h_mat * x + r_std.cwiseProduct(randn(n))).transpose();
  }
  return series;
}

// Add sparse additive outliers: each (t, k) entry independently fires with
// spec.probability; magnitude is Rayleigh(rayleigh_scale), sign per sign_mode.
// Always attaches an outlier mask (all false when nothing fired).
inline ObservationSeries inject_outliers(const ObservationSeries& series, const OutlierSpec& spec) {
  if (!(spec.probability >= 0.0 && spec.probability <= 1.0))
    throw std::invalid_argument("inject_outliers: probability must lie in [0, 1]");
  if (!(spec.rayleigh_scale > 0.0))
    throw std::invalid_argument("inject_outliers: rayleigh_scale must be positive");

  ObservationSeries out = series;
  out.outlier_mask.emplace(BoolMask::Constant(series.size(), series.obs_dim(), false));

  std::mt19937_64 gen(spec.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (Eigen::Index t = 0; t < series.size(); ++t) {
    for (Eigen::Index k = 0; k < series.obs_dim(); ++k) {
      if (unif(gen) >= spec.probability) continue;
      const double u = unif(gen);  // in [0, 1), so 1 - u is in (0, 1]
      const double magnitude = spec.rayleigh_scale * std::sqrt(-2.0 * std::log1p(-u));
      double sign = 1.0;
      if (spec.sign_mode == SignMode::Symmetric && unif(gen) < 0.5) sign = -1.0;
      out.observations(t, k) += sign * magnitude;
      (*out.outlier_mask)(t, k) = true;
    }
  }
  return out;
}

}  // namespace oikf
