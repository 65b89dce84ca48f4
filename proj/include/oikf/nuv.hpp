// Scalar rules for an observation y = v + u with v ~ N(0, r^2) and u carrying a
// zero-mean normal prior of unknown variance gamma^2 (a NUV prior). Maximizing over
// gamma^2 gives a closed-form variance estimate, the induced MAP outlier estimate,
// and a redescending marginal loss. These are the per-dimension building blocks of
// the robust update.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oikf {

// argmax_{g >= 0} of the evidence: g = max(y^2 - r^2, 0).
inline double nuv_gamma_mle(double y, double r_sq) {
  if (!(r_sq > 0.0)) throw std::invalid_argument("nuv_gamma_mle: r_sq must be positive");
  return std::max(y * y - r_sq, 0.0);
}

// MAP estimate of the outlier component: u = y gamma^2 / (gamma^2 + r^2).
// Zero inside |y| <= r, approaches y for |y| >> r, odd in y.
inline double nuv_u_map(double y, double r_sq) {
  const double gamma_sq = nuv_gamma_mle(y, r_sq);
  return y * gamma_sq / (gamma_sq + r_sq);
}

// Negative log-likelihood of y after maximizing over gamma^2 (up to a constant):
// quadratic inside |y| < r, logarithmic outside, continuous at |y| = r. The
// logarithmic branch has influence 1/y, so the loss is redescending and nonconvex.
inline double nuv_loss(double y, double r_sq) {
  if (!(r_sq > 0.0)) throw std::invalid_argument("nuv_loss: r_sq must be positive");
  if (y * y < r_sq) return y * y / (2.0 * r_sq) + std::log(std::sqrt(r_sq));
  return std::log(std::abs(y)) + 0.5;
}

}  // namespace oikf
