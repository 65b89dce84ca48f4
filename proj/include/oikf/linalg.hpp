// Small dense linear-algebra helpers shared by the filter headers.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oikf {

// Thrown when an innovation covariance is singular or too ill-conditioned to invert.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 0.5 (A + A^T); keeps covariances symmetric against round-off drift.
inline Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& a) {
  return 0.5 * (a + a.transpose());
}

// Symmetric square root of a PSD matrix; tiny negative eigenvalues are clamped to zero.
inline Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrized(a));
  const Eigen::VectorXd d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

// PSD up to a relative eigenvalue tolerance scaled by the trace.
inline bool is_psd(const Eigen::MatrixXd& a, double eps_scale = 1e-9) {
  if (a.rows() != a.cols()) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrized(a), Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, std::abs(a.trace()));
  return es.eigenvalues().minCoeff() >= -eps_scale * scale;
}

}  // namespace oikf
