// Linear-Gaussian state-space model
//   x_t = F x_{t-1} + e_t,   e ~ N(0, Q)
//   y_t = H x_t + z_t + u_t, z ~ N(0, R), u_t sparse outlier
// R is restricted to diagonal so each observation dimension can be reweighted
// independently by the robust update.
#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

#include "oikf/linalg.hpp"

namespace oikf {

struct SystemModel {
  Eigen::MatrixXd f_mat;  // m x m state transition
  Eigen::MatrixXd h_mat;  // n x m observation
  Eigen::MatrixXd q_cov;  // m x m process noise covariance, symmetric PSD
  Eigen::MatrixXd r_cov;  // n x n observation noise covariance, diagonal, positive
  int state_dim = 0;      // m
  int obs_dim = 0;        // n

  Eigen::VectorXd r_diag() const { return r_cov.diagonal(); }

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

namespace detail {

// Filtering needs strictly positive observation noise (the per-dimension variance
// rule divides by r^2); pure simulation only needs R to be PSD, so zero-noise
// trajectories stay constructible.
inline void validate_model(const SystemModel& model, bool require_positive_r) {
  if (model.state_dim < 1) throw std::invalid_argument("SystemModel: state_dim must be >= 1");
  if (model.obs_dim < 1) throw std::invalid_argument("SystemModel: obs_dim must be >= 1");
  if (model.f_mat.rows() != model.state_dim || model.f_mat.cols() != model.state_dim)
    throw std::invalid_argument("SystemModel: f_mat must be state_dim x state_dim");
  if (model.h_mat.rows() != model.obs_dim || model.h_mat.cols() != model.state_dim)
    throw std::invalid_argument("SystemModel: h_mat must be obs_dim x state_dim");
  if (model.q_cov.rows() != model.state_dim || model.q_cov.cols() != model.state_dim)
    throw std::invalid_argument("SystemModel: q_cov must be state_dim x state_dim");
  if (model.r_cov.rows() != model.obs_dim || model.r_cov.cols() != model.obs_dim)
    throw std::invalid_argument("SystemModel: r_cov must be obs_dim x obs_dim");

  const double q_scale = std::max(1.0, model.q_cov.cwiseAbs().maxCoeff());
  if ((model.q_cov - model.q_cov.transpose()).cwiseAbs().maxCoeff() > 1e-9 * q_scale)
    throw std::invalid_argument("SystemModel: q_cov must be symmetric");
  if (!is_psd(model.q_cov))
    throw std::invalid_argument("SystemModel: q_cov must be positive semidefinite");

  for (int i = 0; i < model.obs_dim; ++i) {
    for (int j = 0; j < model.obs_dim; ++j) {
      if (i != j && model.r_cov(i, j) != 0.0)
        throw std::invalid_argument("SystemModel: r_cov must be diagonal");
    }
    if (require_positive_r && !(model.r_cov(i, i) > 0.0))
      throw std::invalid_argument("SystemModel: r_cov diagonal must be strictly positive");
    if (!require_positive_r && model.r_cov(i, i) < 0.0)
      throw std::invalid_argument("SystemModel: r_cov diagonal must be nonnegative");
  }
}

}  // namespace detail

inline void SystemModel::validate() const { detail::validate_model(*this, true); }

// Constant-velocity ("white-noise acceleration") model in one spatial coordinate:
// state [position, velocity], both observed directly.
inline SystemModel build_wna_model(double q_var, double r_var, double dt) {
  if (!(q_var > 0.0)) throw std::invalid_argument("build_wna_model: q_var must be positive");
  if (!(r_var > 0.0)) throw std::invalid_argument("build_wna_model: r_var must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("build_wna_model: dt must be positive");
  SystemModel model;
  model.state_dim = 2;
  model.obs_dim = 2;
  model.f_mat.setIdentity(2, 2);
  model.f_mat(0, 1) = dt;
  model.h_mat.setIdentity(2, 2);
  model.q_cov = q_var * Eigen::MatrixXd::Identity(2, 2);
  model.r_cov = r_var * Eigen::MatrixXd::Identity(2, 2);
  return model;
}

// Same dynamics but only the position is observed (GNSS-style fix).
inline SystemModel build_position_only_model(double q_var, double r_var, double dt) {
  SystemModel model = build_wna_model(q_var, r_var, dt);
  model.obs_dim = 1;
  model.h_mat.setZero(1, 2);
  model.h_mat(0, 0) = 1.0;
  model.r_cov = r_var * Eigen::MatrixXd::Identity(1, 1);
  return model;
}

}  // namespace oikf
