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
#include <map>
#include <string>
#include <vector>

namespace gpsys {

// One history or summary CSV reduced to its per-iteration MSE and trace.
struct CurveFile {
  std::string label;
  std::string schema;  // "history" or "summary"
  std::map<int, std::pair<double, double>> points;  // iteration -> (mse, trace)
};

CurveFile load_curve(const std::string& path);

struct RankEntry {
  std::string label;
  int final_iteration = 0;
  double final_mse = 0.0;
  int mse_rank = 0;  // 1 is best; ties share a rank
  double final_trace = 0.0;
  int trace_rank = 0;
};

struct Comparison {
  std::vector<CurveFile> files;
  std::vector<RankEntry> ranking;  // input order
};

// Needs at least two files of one schema. Curves are aligned on iteration;
// iterations missing from a file are left empty.
Comparison compare_curves(std::vector<CurveFile> files);
Comparison compare_files(const std::vector<std::string>& paths);

// iteration, <label>_mse, <label>_trace, ...
void write_aligned(std::ostream& out, const Comparison& c);
// label, final_iteration, final_mse, mse_rank, final_trace, trace_rank
void write_ranking(std::ostream& out, const Comparison& c);

}  // namespace gpsys
