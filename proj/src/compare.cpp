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

#include "gpsys/compare.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <ostream>
#include <set>

#include "gpsys/csv.hpp"
#include "gpsys/errors.hpp"

namespace gpsys {
namespace {

// Competition ranking: equal values share the better rank.
std::vector<int> ranks(const std::vector<double>& values) {
  std::vector<int> out(values.size(), 1);
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (values[j] < values[i]) ++out[i];
    }
  }
  return out;
}

}  // namespace

CurveFile load_curve(const std::string& path) {
  const CsvTable table = read_csv_file(path);
  CurveFile c;
  c.label = std::filesystem::path(path).stem().string();
  int mse_col = table.column("mse");
  int trace_col = table.column("trace");
  c.schema = "history";
  if (mse_col < 0 && trace_col < 0) {
    mse_col = table.column("mse_mean");
    trace_col = table.column("trace_mean");
    c.schema = "summary";
  }
  const int it_col = table.column("iteration");
  if (it_col < 0 || mse_col < 0 || trace_col < 0) {
    throw ContractError(path + ": not a history or summary file");
  }
  for (const auto& row : table.rows) {
    int iteration = 0;
    try {
      iteration = std::stoi(row[it_col]);
    } catch (const std::exception&) {
      throw ContractError(path + ": bad iteration '" + row[it_col] + "'");
    }
    if (!c.points.emplace(iteration, std::make_pair(parse_double(row[mse_col]),
                                                    parse_double(row[trace_col])))
             .second) {
      throw ContractError(path + ": iteration " + std::to_string(iteration) + " repeated");
    }
  }
  if (c.points.empty()) throw ContractError(path + ": no rows");
  return c;
}

Comparison compare_curves(std::vector<CurveFile> files) {
  if (files.size() < 2) throw ContractError("compare needs at least two files");
  for (const CurveFile& f : files) {
    if (f.schema != files.front().schema) {
      throw ContractError("mismatched schemas: " + files.front().label + " is a " +
                          files.front().schema + ", " + f.label + " is a " + f.schema);
    }
    if (f.points.empty()) throw ContractError(f.label + ": no rows");
  }
  // Disambiguate repeated labels.
  std::map<std::string, int> seen;
  for (CurveFile& f : files) {
    const int n = seen[f.label]++;
    if (n > 0) f.label += "#" + std::to_string(n + 1);
  }

  Comparison c;
  std::vector<double> mses, traces;
  for (const CurveFile& f : files) {
    const auto& [iteration, values] = *f.points.rbegin();
    c.ranking.push_back({f.label, iteration, values.first, 0, values.second, 0});
    mses.push_back(values.first);
    traces.push_back(values.second);
  }
  const std::vector<int> mr = ranks(mses);
  const std::vector<int> tr = ranks(traces);
  for (std::size_t i = 0; i < c.ranking.size(); ++i) {
    c.ranking[i].mse_rank = mr[i];
    c.ranking[i].trace_rank = tr[i];
  }
  c.files = std::move(files);
  return c;
}

Comparison compare_files(const std::vector<std::string>& paths) {
  std::vector<CurveFile> files;
  for (const std::string& p : paths) files.push_back(load_curve(p));
  return compare_curves(std::move(files));
}

void write_aligned(std::ostream& out, const Comparison& c) {
  std::set<int> iterations;
  for (const CurveFile& f : c.files) {
    for (const auto& [it, v] : f.points) iterations.insert(it);
  }
  out << "iteration";
  for (const CurveFile& f : c.files) out << ',' << f.label << "_mse," << f.label << "_trace";
  out << '\n';
  for (int it : iterations) {
    out << it;
    for (const CurveFile& f : c.files) {
      const auto found = f.points.find(it);
      if (found == f.points.end()) {
        out << ",,";
      } else {
        out << ',' << format_double(found->second.first) << ','
            << format_double(found->second.second);
      }
    }
    out << '\n';
  }
}

void write_ranking(std::ostream& out, const Comparison& c) {
  out << "label,final_iteration,final_mse,mse_rank,final_trace,trace_rank\n";
  for (const RankEntry& r : c.ranking) {
    out << r.label << ',' << r.final_iteration << ',' << format_double(r.final_mse) << ','
        << r.mse_rank << ',' << format_double(r.final_trace) << ',' << r.trace_rank << '\n';
  }
}

}  // namespace gpsys
