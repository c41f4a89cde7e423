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

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "gpsys/geometry.hpp"
#include "gpsys/gp.hpp"
#include "gpsys/history.hpp"

namespace gpsys {

// Axis-aligned sample layout for the factorized (on-axis) regression. The
// center appears once; positions[d] lists the other samples along axis d.
struct AxisSamplePlan {
  Point center;
  std::vector<std::vector<double>> positions;

  // Along each axis: the n-point linspace over the box minus the center
  // coordinate (when it falls on the linspace).
  static AxisSamplePlan from_linspace(const Box& box, ConstPointRef center, int n);

  int dim() const { return static_cast<int>(center.size()); }
  int sample_count() const;
  PointSet sample_points() const;
  void validate(const Box& box) const;
};

using ScalarOracle = std::function<double(ConstPointRef)>;

// Product over axes of piecewise-linear interpolants through the on-axis
// oracle values. Expects the oracle normalized to 1 at the center.
class OnAxisRegression {
 public:
  OnAxisRegression(const ScalarOracle& oracle, AxisSamplePlan plan);

  double predict(ConstPointRef x) const;
  Eigen::VectorXd predict_many(const PointSet& points) const;
  const AxisSamplePlan& plan() const { return plan_; }
  // 1D interpolant along axis d.
  double axis_value(int d, double coordinate) const;

 private:
  AxisSamplePlan plan_;
  std::vector<std::vector<double>> nodes_;
  std::vector<std::vector<double>> values_;
};

Eigen::VectorXd on_axis_regress(const ScalarOracle& oracle, const AxisSamplePlan& plan,
                                const PointSet& points);

// Sequentially augments with uniform in-box samples.
RunResult random_sampling_run(GpModel model, const Oracle& oracle, int n_iterations, const Box& box,
                              std::uint64_t seed, const PointSet& test_points,
                              const Eigen::VectorXd& truth, bool record_timing = false);

struct GridRunResult {
  ExperimentHistory history;
  std::vector<GpModel> models;  // one per grid size
};

// For each n: a fresh model on the initial samples plus the n^D linspace grid
// over the box. Grid points colliding with an initial sample are dropped and
// noted in the history. Record iteration = number of grid samples added.
GridRunResult grid_sampling_run(const GpModel& initial, const Oracle& oracle,
                                const std::vector<int>& grid_sizes, const Box& box,
                                const PointSet& test_points, const Eigen::VectorXd& truth,
                                bool record_timing = false);

}  // namespace gpsys
