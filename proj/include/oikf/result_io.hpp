// Writers for the result tables produced by the evaluation harness. Sweep tables
// use the stable column prefix engine,q_var,r_var,dim,rmse,mse_db,runtime_ms; the
// trailing alpha (chi-squared gate only) and best-marker columns are extensions.
// All numeric fields except measured runtimes are deterministic for a fixed seed set.
#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "oikf/experiments.hpp"

namespace oikf {

namespace detail {

inline std::string format_result(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

}  // namespace detail

inline void write_sweep_csv(std::ostream& out,
                            const std::vector<std::pair<Engine, SweepResult>>& sweeps) {
  out << "engine,q_var,r_var,dim,rmse,mse_db,runtime_ms,alpha,best\n";
  for (const auto& [engine, sweep] : sweeps) {
    for (std::size_t i = 0; i < sweep.reports.size(); ++i) {
      const MetricsReport& report = sweep.reports[i];
      for (std::size_t j = 0; j < report.eval_dims.size(); ++j) {
        out << engine_name(engine) << ',' << detail::format_result(report.params.q_var) << ','
            << detail::format_result(report.params.r_var) << ',' << report.eval_dims[j] << ','
            << detail::format_result(report.rmse_per_dim[static_cast<Eigen::Index>(j)]) << ','
            << detail::format_result(report.mse_db_per_dim[static_cast<Eigen::Index>(j)]) << ','
            << detail::format_result(report.mean_step_runtime * 1e3) << ',';
        if (report.params.alpha) out << detail::format_result(*report.params.alpha);
        out << ',' << (i == sweep.best ? 1 : 0) << '\n';
      }
    }
  }
}

inline void write_fig2_csv(std::ostream& out, const std::vector<Fig2Row>& rows) {
  out << "engine,r2_db,mse_db\n";
  for (const Fig2Row& row : rows)
    out << engine_name(row.engine) << ',' << detail::format_result(to_db(row.r_sq)) << ','
        << detail::format_result(row.mse_db) << '\n';
}

inline void write_convergence_csv(std::ostream& out, const ConvergenceResult& result) {
  out << "step,iter,dim,gamma_sq\n";
  for (const TraceRecord& record : result.traces)
    for (Eigen::Index i = 0; i < record.gamma_trace.rows(); ++i)
      for (Eigen::Index k = 0; k < record.gamma_trace.cols(); ++k)
        out << record.step << ',' << (i + 1) << ',' << (k + 1) << ','
            << detail::format_result(record.gamma_trace(i, k)) << '\n';
}

}  // namespace oikf
