// Causal filtering over an observation series: fold predict + one engine's update
// across time, collecting beliefs, per-step diagnostics and per-step wall time.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cctype>
#include <chrono>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "oikf/chi2_gate.hpp"
#include "oikf/nuv_update.hpp"
#include "oikf/series.hpp"

namespace oikf {

enum class Engine { Noisy, Kf, OikfAm, OikfEm, Chi2 };

inline const char* engine_name(Engine engine) {
  switch (engine) {
    case Engine::Noisy: return "NOISY";
    case Engine::Kf: return "KF";
    case Engine::OikfAm: return "OIKF-AM";
    case Engine::OikfEm: return "OIKF-EM";
    case Engine::Chi2: return "CHI2";
  }
  throw std::invalid_argument("engine_name: unknown engine");
}

inline Engine engine_from_name(std::string name) {
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (name == "noisy") return Engine::Noisy;
  if (name == "kf") return Engine::Kf;
  if (name == "oikf-am") return Engine::OikfAm;
  if (name == "oikf-em") return Engine::OikfEm;
  if (name == "chi2") return Engine::Chi2;
  throw std::invalid_argument("engine: expected one of noisy, kf, oikf-am, oikf-em, chi2");
}

struct FilterOptions {
  OikfConfig oikf{};
  Chi2Config chi2{};
};

struct FilterRun {
  std::vector<GaussianBelief> beliefs;
  std::vector<StepDiagnostics> diagnostics;
  std::vector<double> step_seconds;
};

// Carries the time index at which a numerical failure occurred.
class FilterStepError : public std::runtime_error {
 public:
  FilterStepError(std::size_t step, const std::string& what)
      : std::runtime_error("filter step " + std::to_string(step) + ": " + what),
        step_index(step) {}
  std::size_t step_index;
};

// Diffuse start: variance large enough that the first few updates dominate; the mean
// is back-projected from the first observation when H has full column rank, zero
// otherwise.
inline constexpr double kDiffusePriorVar = 1e3;

inline GaussianBelief initial_belief(const SystemModel& model, const Eigen::VectorXd& first_obs) {
  GaussianBelief belief;
  belief.cov = kDiffusePriorVar * Eigen::MatrixXd::Identity(model.state_dim, model.state_dim);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(model.h_mat);
  if (qr.rank() == model.state_dim)
    belief.mean = qr.solve(first_obs);
  else
    belief.mean = Eigen::VectorXd::Zero(model.state_dim);
  return belief;
}

inline FilterRun filter_series(const ObservationSeries& series, const SystemModel& model,
                               Engine engine, const FilterOptions& opts = {}) {
  model.validate();
  const Eigen::Index t_count = series.size();
  FilterRun run;
  if (t_count == 0) return run;
  if (series.obs_dim() != model.obs_dim)
    throw std::invalid_argument("filter_series: series obs_dim must match model obs_dim");
  run.beliefs.reserve(t_count);
  run.diagnostics.reserve(t_count);
  run.step_seconds.reserve(t_count);

  OikfConfig oikf_cfg = opts.oikf;
  oikf_cfg.variant = (engine == Engine::OikfEm) ? NuvVariant::Em : NuvVariant::Am;

  // Minimum-norm back-projection for the passthrough engine.
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> backproject;
  if (engine == Engine::Noisy) backproject.compute(model.h_mat);

  const auto passive_diag = [&](int iters) {
    StepDiagnostics diag;
    diag.gamma_sq = Eigen::VectorXd::Zero(model.obs_dim);
    diag.nu_sq = model.r_diag();
    diag.iters_used = iters;
    diag.detected = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(model.obs_dim, false);
    return diag;
  };

  GaussianBelief belief = initial_belief(model, series.observations.row(0).transpose());
  for (Eigen::Index t = 0; t < t_count; ++t) {
    const Eigen::VectorXd y = series.observations.row(t).transpose();
    const auto started = std::chrono::steady_clock::now();
    StepDiagnostics diag;
    try {
      switch (engine) {
        case Engine::Noisy:
          belief.mean = backproject.solve(y);
          belief.cov = Eigen::MatrixXd::Identity(model.state_dim, model.state_dim);
          diag = passive_diag(0);
          break;
        case Engine::Kf:
          belief = predict(belief, model);
          belief = update(belief, y, model, model.r_diag()).first;
          diag = passive_diag(1);
          break;
        case Engine::OikfAm:
        case Engine::OikfEm: {
          belief = predict(belief, model);
          auto [posterior, step_diag] = oikf_step(belief, y, model, oikf_cfg);
          belief = std::move(posterior);
          diag = std::move(step_diag);
          break;
        }
        case Engine::Chi2: {
          belief = predict(belief, model);
          auto [posterior, step_diag] = chi2_gated_update(belief, y, model, opts.chi2);
          belief = std::move(posterior);
          diag = std::move(step_diag);
          break;
        }
      }
    } catch (const SingularMatrixError& e) {
      throw FilterStepError(static_cast<std::size_t>(t), e.what());
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
    run.step_seconds.push_back(elapsed.count());
    run.beliefs.push_back(belief);
    run.diagnostics.push_back(std::move(diag));
  }
  return run;
}

}  // namespace oikf
