// Standard linear Kalman predict/update over Gaussian beliefs. The update takes the
// diagonal of the effective observation covariance as a vector so callers can swap
// R for a per-dimension reweighted variance.
#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <utility>

#include "oikf/linalg.hpp"
#include "oikf/system_model.hpp"

namespace oikf {

struct GaussianBelief {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

struct ObsProjection {
  Eigen::VectorXd predicted_obs;   // H mean
  Eigen::MatrixXd innovation_cov;  // H cov H^T + diag(obs_var)
};

struct UpdateArtifacts {
  Eigen::VectorXd predicted_obs;
  Eigen::VectorXd innovation;
  Eigen::MatrixXd innovation_cov;
  Eigen::MatrixXd gain;
};

// Condition-number cutoff beyond which the innovation covariance counts as singular.
inline constexpr double kMaxConditionNumber = 1e12;

inline GaussianBelief predict(const GaussianBelief& belief, const SystemModel& model) {
  if (belief.mean.size() != model.state_dim)
    throw std::invalid_argument("predict: belief mean length must equal state_dim");
  GaussianBelief out;
  out.mean = model.f_mat * belief.mean;
  out.cov = symmetrized(model.f_mat * belief.cov * model.f_mat.transpose() + model.q_cov);
  return out;
}

// Push a belief through the observation map. Throws SingularMatrixError when the
// innovation covariance is not positive definite or its condition number exceeds
// kMaxConditionNumber.
inline ObsProjection project_to_obs(const GaussianBelief& prior, const SystemModel& model,
                                    const Eigen::VectorXd& obs_var) {
  if (prior.mean.size() != model.state_dim)
    throw std::invalid_argument("project_to_obs: belief mean length must equal state_dim");
  if (obs_var.size() != model.obs_dim)
    throw std::invalid_argument("project_to_obs: obs_var length must equal obs_dim");

  ObsProjection proj;
  proj.predicted_obs = model.h_mat * prior.mean;
  Eigen::MatrixXd s = model.h_mat * prior.cov * model.h_mat.transpose();
  s.diagonal() += obs_var;
  proj.innovation_cov = symmetrized(s);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(proj.innovation_cov, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxConditionNumber)
    throw SingularMatrixError("innovation covariance is singular or ill-conditioned");
  return proj;
}

inline std::pair<GaussianBelief, UpdateArtifacts> update(const GaussianBelief& prior,
                                                         const Eigen::VectorXd& y,
                                                         const SystemModel& model,
                                                         const Eigen::VectorXd& obs_var) {
  if (y.size() != model.obs_dim)
    throw std::invalid_argument("update: observation length must equal obs_dim");
  const ObsProjection proj = project_to_obs(prior, model, obs_var);

  UpdateArtifacts art;
  art.predicted_obs = proj.predicted_obs;
  art.innovation = y - proj.predicted_obs;
  art.innovation_cov = proj.innovation_cov;
  // K = cov H^T S^{-1}, via the Cholesky solve S K^T = H cov.
  Eigen::LLT<Eigen::MatrixXd> llt(proj.innovation_cov);
  art.gain = llt.solve(model.h_mat * prior.cov).transpose();

  GaussianBelief post;
  post.mean = prior.mean + art.gain * art.innovation;
  post.cov = symmetrized(prior.cov - art.gain * proj.innovation_cov * art.gain.transpose());
  return {post, art};
}

}  // namespace oikf
