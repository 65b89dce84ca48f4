// Chi-squared innovation gate: the classical robustness baseline. An observation
// whose normalized innovation d = dy^T S^{-1} dy exceeds the chi-squared upper
// quantile (dof = obs_dim) is rejected outright and the prediction is kept.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "oikf/nuv_update.hpp"

namespace oikf {

struct Chi2Config {
  double alpha = 0.05;  // significance level in (0, 1)
};

namespace detail {

// Acklam's rational approximation of the standard normal quantile, |rel err| < 1.2e-9.
inline double standard_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("standard_normal_quantile: p must lie in (0, 1)");
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace detail

// Upper-alpha quantile of chi-squared with `dof` degrees of freedom. Closed forms
// for dof 1 and 2; Wilson-Hilferty cube-root approximation above (relative error
// well under 1% there, while at dof = 1 it would be off by ~2.5%).
inline double chi2_threshold(int dof, double alpha) {
  if (dof < 1) throw std::invalid_argument("chi2_threshold: dof must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("chi2_threshold: alpha must lie in (0, 1)");
  if (dof == 1) {
    const double z = detail::standard_normal_quantile(1.0 - 0.5 * alpha);
    return z * z;
  }
  if (dof == 2) return -2.0 * std::log(alpha);
  const double z = detail::standard_normal_quantile(1.0 - alpha);
  const double c = 2.0 / (9.0 * dof);
  const double t = 1.0 - c + z * std::sqrt(c);
  return dof * t * t * t;
}

// Gated update: accepted observations go through the plain Kalman update bit for
// bit; rejected ones leave mean and covariance at the prediction and set
// diagnostics.rejected.
inline std::pair<GaussianBelief, StepDiagnostics> chi2_gated_update(const GaussianBelief& prior,
                                                                    const Eigen::VectorXd& y,
                                                                    const SystemModel& model,
                                                                    const Chi2Config& cfg = {}) {
  if (y.size() != model.obs_dim)
    throw std::invalid_argument("chi2_gated_update: observation length must equal obs_dim");
  const Eigen::VectorXd r_sq = model.r_diag();
  const ObsProjection proj = project_to_obs(prior, model, r_sq);
  const Eigen::VectorXd innovation = y - proj.predicted_obs;
  Eigen::LLT<Eigen::MatrixXd> llt(proj.innovation_cov);
  const double d = innovation.dot(llt.solve(innovation));

  StepDiagnostics diag;
  diag.gamma_sq = Eigen::VectorXd::Zero(model.obs_dim);
  diag.nu_sq = r_sq;
  diag.iters_used = 1;
  diag.detected = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(model.obs_dim, false);
  diag.rejected = d > chi2_threshold(model.obs_dim, cfg.alpha);

  if (diag.rejected) return {prior, diag};
  return {update(prior, y, model, r_sq).first, diag};
}

}  // namespace oikf
