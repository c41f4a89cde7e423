// Copyright 2026 The gpsys Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// =============================================================================

#include "gpsys/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "gpsys/errors.hpp"

namespace gpsys {
namespace {

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    out << fields[i];
  }
  out << '\n';
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& field) {
  if (field.empty()) return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const char* end = field.data() + field.size();
  const auto res = std::from_chars(field.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ContractError("not a number: '" + field + "'");
  }
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      out.push_back(std::move(current));
      current.clear();
    } else if (c != '\r') {
      current.push_back(c);
    }
  }
  out.push_back(std::move(current));
  return out;
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw ContractError("CSV input is empty");
  table.header = split_csv_line(line);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != table.header.size()) {
      throw ContractError("CSV line " + std::to_string(line_no) + " has " +
                          std::to_string(fields.size()) + " fields, header has " +
                          std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open " + path);
  try {
    return read_csv(in);
  } catch (const ContractError& e) {
    throw ContractError(path + ": " + e.what());
  }
}

std::vector<std::string> history_header(int dim) {
  std::vector<std::string> h{"iteration"};
  for (int d = 1; d <= dim; ++d) h.push_back("x_" + std::to_string(d));
  for (const char* c : {"y", "mse", "trace", "utility", "seconds"}) h.emplace_back(c);
  return h;
}

void write_history(std::ostream& out, const ExperimentHistory& history, int dim) {
  write_row(out, history_header(dim));
  for (const IterationRecord& r : history.records) {
    std::vector<std::string> fields{std::to_string(r.iteration)};
    for (int d = 0; d < dim; ++d) {
      fields.push_back(r.x.size() == dim ? format_double(r.x[d]) : "");
    }
    for (double v : {r.y, r.mse, r.trace, r.utility, r.seconds}) {
      fields.push_back(format_double(v));
    }
    write_row(out, fields);
  }
}

std::vector<SummaryRow> summarize(const std::vector<ExperimentHistory>& histories) {
  if (histories.empty()) throw ContractError("nothing to summarize");
  const std::size_t n = histories.front().records.size();
  for (const auto& h : histories) {
    if (h.records.size() != n) throw ContractError("histories differ in length");
  }
  std::vector<SummaryRow> rows;
  const double count = static_cast<double>(histories.size());
  for (std::size_t i = 0; i < n; ++i) {
    SummaryRow row;
    row.iteration = histories.front().records[i].iteration;
    double mse_sq = 0.0;
    double trace_sq = 0.0;
    for (const auto& h : histories) {
      const IterationRecord& r = h.records[i];
      if (r.iteration != row.iteration) throw ContractError("histories differ in iterations");
      row.mse_mean += r.mse;
      row.trace_mean += r.trace;
    }
    row.mse_mean /= count;
    row.trace_mean /= count;
    for (const auto& h : histories) {
      const IterationRecord& r = h.records[i];
      mse_sq += (r.mse - row.mse_mean) * (r.mse - row.mse_mean);
      trace_sq += (r.trace - row.trace_mean) * (r.trace - row.trace_mean);
    }
    row.mse_std = std::sqrt(mse_sq / count);
    row.trace_std = std::sqrt(trace_sq / count);
    rows.push_back(row);
  }
  return rows;
}

void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows) {
  write_row(out, {"iteration", "mse_mean", "mse_std", "trace_mean", "trace_std"});
  for (const SummaryRow& r : rows) {
    write_row(out, {std::to_string(r.iteration), format_double(r.mse_mean),
                    format_double(r.mse_std), format_double(r.trace_mean),
                    format_double(r.trace_std)});
  }
}

void write_grid_dump(std::ostream& out, const PointSet& points, const Eigen::VectorXd& prediction,
                     const Eigen::VectorXd& stddev, const Eigen::VectorXd& truth) {
  const Eigen::Index n = points.rows();
  if (prediction.size() != n || stddev.size() != n || truth.size() != n) {
    throw ContractError("grid dump columns differ in length");
  }
  std::vector<std::string> header;
  for (Eigen::Index d = 1; d <= points.cols(); ++d) header.push_back("x_" + std::to_string(d));
  for (const char* c : {"prediction", "std", "abs_error"}) header.emplace_back(c);
  write_row(out, header);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<std::string> fields;
    for (Eigen::Index d = 0; d < points.cols(); ++d) fields.push_back(format_double(points(i, d)));
    fields.push_back(format_double(prediction[i]));
    fields.push_back(format_double(stddev[i]));
    fields.push_back(format_double(std::abs(prediction[i] - truth[i])));
    write_row(out, fields);
  }
}

}  // namespace gpsys
