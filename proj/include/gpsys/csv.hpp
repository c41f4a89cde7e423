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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gpsys/geometry.hpp"
#include "gpsys/history.hpp"

namespace gpsys {

// Shortest representation that parses back to the same double; NaN is "".
std::string format_double(double v);
// Inverse of format_double.
double parse_double(const std::string& field);

std::vector<std::string> split_csv_line(const std::string& line);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column, or -1.
  int column(const std::string& name) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

// iteration, x_1..x_D, y, mse, trace, utility, seconds
std::vector<std::string> history_header(int dim);
void write_history(std::ostream& out, const ExperimentHistory& history, int dim);

struct SummaryRow {
  int iteration = 0;
  double mse_mean = 0.0;
  double mse_std = 0.0;
  double trace_mean = 0.0;
  double trace_std = 0.0;
};

// Mean and population std across seeds, per iteration. Histories must share
// their iteration sequence.
std::vector<SummaryRow> summarize(const std::vector<ExperimentHistory>& histories);
void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows);

// x_1..x_D, prediction, std, abs_error
void write_grid_dump(std::ostream& out, const PointSet& points, const Eigen::VectorXd& prediction,
                     const Eigen::VectorXd& stddev, const Eigen::VectorXd& truth);

}  // namespace gpsys
