// CSV persistence for observation series. Layout (one header, comment lines start
// with '#'):
//   t,y_1..y_n[,gt_1..gt_m][,mask_1..mask_n]
// Ground-truth and mask blocks are all-or-none. Floats are written with 17
// significant digits and LF line endings so files are byte-stable and doubles
// round-trip exactly.
#pragma once

#include <Eigen/Dense>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "oikf/series.hpp"

namespace oikf {

enum class IoErrorKind { OpenFailed, BadHeader, ColumnMismatch, MalformedRow, NonIncreasingTime };

class TrajectoryIoError : public std::runtime_error {
 public:
  TrajectoryIoError(IoErrorKind kind, std::string message, std::size_t line = 0)
      : std::runtime_error(line > 0 ? message + " (line " + std::to_string(line) + ")"
                                    : std::move(message)),
        kind(kind),
        line(line) {}
  IoErrorKind kind;
  std::size_t line;  // 1-based file line, 0 when not applicable
};

struct LoadedTrajectory {
  ObservationSeries series;
  double dt = 0.0;  // median time-stamp spacing, 0 when fewer than two rows
};

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

inline bool parse_strict_double(const std::string& token, double& out) {
  if (token.empty()) return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size()) return false;
  if (errno == ERANGE && (out == HUGE_VAL || out == -HUGE_VAL)) return false;
  return true;
}

inline std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace detail

inline LoadedTrajectory read_trajectory(const std::string& path, int obs_dim, int state_dim) {
  if (obs_dim < 1) throw std::invalid_argument("read_trajectory: obs_dim must be >= 1");
  if (state_dim < 1) throw std::invalid_argument("read_trajectory: state_dim must be >= 1");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TrajectoryIoError(IoErrorKind::OpenFailed, "cannot open " + path);

  std::string line;
  std::size_t line_no = 0;

  // Header: first non-comment line.
  std::vector<std::string> header;
  std::size_t header_line = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    header = detail::split_csv(line);
    header_line = line_no;
    break;
  }
  if (header.empty())
    throw TrajectoryIoError(IoErrorKind::BadHeader, path + ": missing header row", line_no);

  const auto expect = [&](std::size_t index, const std::string& name) {
    if (index >= header.size() || header[index] != name)
      throw TrajectoryIoError(IoErrorKind::BadHeader,
                              path + ": header column " + std::to_string(index + 1) +
                                  " must be '" + name + "'",
                              header_line);
  };
  expect(0, "t");
  for (int k = 0; k < obs_dim; ++k) expect(1 + k, "y_" + std::to_string(k + 1));
  std::size_t cursor = 1 + static_cast<std::size_t>(obs_dim);
  const bool has_truth = cursor < header.size() && header[cursor] == "gt_1";
  if (has_truth) {
    for (int k = 0; k < state_dim; ++k) expect(cursor + k, "gt_" + std::to_string(k + 1));
    cursor += static_cast<std::size_t>(state_dim);
  }
  const bool has_mask = cursor < header.size() && header[cursor] == "mask_1";
  if (has_mask) {
    for (int k = 0; k < obs_dim; ++k) expect(cursor + k, "mask_" + std::to_string(k + 1));
    cursor += static_cast<std::size_t>(obs_dim);
  }
  if (cursor != header.size())
    throw TrajectoryIoError(IoErrorKind::BadHeader,
                            path + ": unexpected header column '" + header[cursor] + "'",
                            header_line);
  const std::size_t n_cols = cursor;

  std::vector<double> times;
  std::vector<std::vector<double>> rows;
  std::vector<std::vector<bool>> mask_rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> fields = detail::split_csv(line);
    if (fields.size() != n_cols)
      throw TrajectoryIoError(IoErrorKind::ColumnMismatch,
                              path + ": expected " + std::to_string(n_cols) + " fields, got " +
                                  std::to_string(fields.size()),
                              line_no);

    std::vector<double> row(n_cols);
    for (std::size_t i = 0; i < n_cols; ++i) {
      const bool is_mask = has_mask && i >= n_cols - static_cast<std::size_t>(obs_dim);
      if (is_mask) {
        if (fields[i] != "0" && fields[i] != "1")
          throw TrajectoryIoError(IoErrorKind::MalformedRow,
                                  path + ": mask field must be 0 or 1, got '" + fields[i] + "'",
                                  line_no);
        row[i] = (fields[i] == "1") ? 1.0 : 0.0;
      } else if (!detail::parse_strict_double(fields[i], row[i])) {
        throw TrajectoryIoError(IoErrorKind::MalformedRow,
                                path + ": cannot parse field '" + fields[i] + "'", line_no);
      }
    }
    if (!times.empty() && !(row[0] > times.back()))
      throw TrajectoryIoError(IoErrorKind::NonIncreasingTime,
                              path + ": time stamps must be strictly increasing", line_no);
    times.push_back(row[0]);
    if (has_mask) {
      std::vector<bool> mask(static_cast<std::size_t>(obs_dim));
      for (int k = 0; k < obs_dim; ++k)
        mask[static_cast<std::size_t>(k)] =
            row[n_cols - static_cast<std::size_t>(obs_dim) + static_cast<std::size_t>(k)] != 0.0;
      mask_rows.push_back(std::move(mask));
    }
    rows.push_back(std::move(row));
  }

  LoadedTrajectory loaded;
  const Eigen::Index t_count = static_cast<Eigen::Index>(rows.size());
  loaded.series.times.resize(t_count);
  loaded.series.observations.resize(t_count, obs_dim);
  if (has_truth) loaded.series.truth_states.emplace(t_count, state_dim);
  if (has_mask) loaded.series.outlier_mask.emplace(BoolMask::Constant(t_count, obs_dim, false));
  for (Eigen::Index t = 0; t < t_count; ++t) {
    const std::vector<double>& row = rows[static_cast<std::size_t>(t)];
    loaded.series.times[t] = row[0];
    for (int k = 0; k < obs_dim; ++k)
      loaded.series.observations(t, k) = row[1 + static_cast<std::size_t>(k)];
    if (has_truth)
      for (int k = 0; k < state_dim; ++k)
        (*loaded.series.truth_states)(t, k) =
            row[1 + static_cast<std::size_t>(obs_dim) + static_cast<std::size_t>(k)];
    if (has_mask)
      for (int k = 0; k < obs_dim; ++k)
        (*loaded.series.outlier_mask)(t, k) = mask_rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)];
  }

  if (t_count >= 2) {
    std::vector<double> gaps;
    gaps.reserve(static_cast<std::size_t>(t_count) - 1);
    for (Eigen::Index t = 1; t < t_count; ++t)
      gaps.push_back(loaded.series.times[t] - loaded.series.times[t - 1]);
    std::sort(gaps.begin(), gaps.end());
    const std::size_t mid = gaps.size() / 2;
    loaded.dt = (gaps.size() % 2 == 1) ? gaps[mid] : 0.5 * (gaps[mid - 1] + gaps[mid]);
  }
  return loaded;
}

inline void write_trajectory(const ObservationSeries& series, const std::string& path) {
  if (series.observations.cols() < 1)
    throw std::invalid_argument("write_trajectory: series must have at least one observation column");
  if (series.times.size() != series.observations.rows())
    throw std::invalid_argument("write_trajectory: times and observations length mismatch");
  if (series.truth_states && series.truth_states->rows() != series.size())
    throw std::invalid_argument("write_trajectory: truth_states length mismatch");
  if (series.outlier_mask && (series.outlier_mask->rows() != series.size() ||
                              series.outlier_mask->cols() != series.obs_dim()))
    throw std::invalid_argument("write_trajectory: outlier_mask shape mismatch");

  std::ofstream out(path, std::ios::binary);
  if (!out) throw TrajectoryIoError(IoErrorKind::OpenFailed, "cannot open " + path);

  out << "# t: time stamp; y: observation; gt: ground-truth state; mask: 1 = injected outlier\n";
  out << "t";
  for (Eigen::Index k = 0; k < series.obs_dim(); ++k) out << ",y_" << (k + 1);
  if (series.truth_states)
    for (Eigen::Index k = 0; k < series.truth_states->cols(); ++k) out << ",gt_" << (k + 1);
  if (series.outlier_mask)
    for (Eigen::Index k = 0; k < series.obs_dim(); ++k) out << ",mask_" << (k + 1);
  out << "\n";

  for (Eigen::Index t = 0; t < series.size(); ++t) {
    out << detail::format_double(series.times[t]);
    for (Eigen::Index k = 0; k < series.obs_dim(); ++k)
      out << ',' << detail::format_double(series.observations(t, k));
    if (series.truth_states)
      for (Eigen::Index k = 0; k < series.truth_states->cols(); ++k)
        out << ',' << detail::format_double((*series.truth_states)(t, k));
    if (series.outlier_mask)
      for (Eigen::Index k = 0; k < series.obs_dim(); ++k)
        out << ',' << ((*series.outlier_mask)(t, k) ? '1' : '0');
    out << '\n';
  }
  if (!out) throw TrajectoryIoError(IoErrorKind::OpenFailed, "cannot write " + path);
}

}  // namespace oikf
