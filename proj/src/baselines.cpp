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

#include "gpsys/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "gpsys/errors.hpp"

namespace gpsys {
namespace {

constexpr std::uint64_t kRandomStream = 0x726e;
constexpr double kAxisTolerance = 1e-12;

}  // namespace

AxisSamplePlan AxisSamplePlan::from_linspace(const Box& box, ConstPointRef center, int n) {
  box.validate();
  if (center.size() != box.dim()) throw ContractError("center does not match the box");
  AxisSamplePlan plan;
  plan.center = center;
  for (int d = 0; d < box.dim(); ++d) {
    std::vector<double> axis;
    for (double v : linspace(box.lo[d], box.hi[d], n)) {
      if (std::abs(v - center[d]) > kAxisTolerance) axis.push_back(v);
    }
    plan.positions.push_back(std::move(axis));
  }
  plan.validate(box);
  return plan;
}

int AxisSamplePlan::sample_count() const {
  int count = 1;
  for (const auto& axis : positions) count += static_cast<int>(axis.size());
  return count;
}

PointSet AxisSamplePlan::sample_points() const {
  PointSet out(sample_count(), dim());
  out.row(0) = center.transpose();
  Eigen::Index row = 1;
  for (int d = 0; d < dim(); ++d) {
    for (double v : positions[d]) {
      out.row(row) = center.transpose();
      out(row, d) = v;
      ++row;
    }
  }
  return out;
}

void AxisSamplePlan::validate(const Box& box) const {
  if (center.size() != box.dim() || static_cast<int>(positions.size()) != box.dim()) {
    throw ContractError("axis plan does not match the box dimension");
  }
  if (!box.contains(center)) throw ContractError("axis plan center lies outside the box");
  for (int d = 0; d < dim(); ++d) {
    for (double v : positions[d]) {
      if (v < box.lo[d] || v > box.hi[d]) throw ContractError("axis sample outside the box");
      if (std::abs(v - center[d]) <= kAxisTolerance) {
        throw ContractError("center listed twice on axis " + std::to_string(d));
      }
    }
  }
}

OnAxisRegression::OnAxisRegression(const ScalarOracle& oracle, AxisSamplePlan plan)
    : plan_(std::move(plan)) {
  const double center_value = oracle(plan_.center);
  for (int d = 0; d < plan_.dim(); ++d) {
    std::vector<std::pair<double, double>> samples{{plan_.center[d], center_value}};
    for (double v : plan_.positions[d]) {
      Point p = plan_.center;
      p[d] = v;
      samples.emplace_back(v, oracle(p));
    }
    std::sort(samples.begin(), samples.end());
    std::vector<double> nodes, values;
    for (const auto& [x, y] : samples) {
      nodes.push_back(x);
      values.push_back(y);
    }
    nodes_.push_back(std::move(nodes));
    values_.push_back(std::move(values));
  }
}

double OnAxisRegression::axis_value(int d, double coordinate) const {
  const auto& nodes = nodes_.at(d);
  const auto& values = values_.at(d);
  if (coordinate < nodes.front() - kAxisTolerance || coordinate > nodes.back() + kAxisTolerance) {
    throw ExtrapolationError("coordinate " + std::to_string(coordinate) +
                             " outside the sampled range of axis " + std::to_string(d));
  }
  if (nodes.size() == 1) return values.front();
  auto it = std::upper_bound(nodes.begin(), nodes.end(), coordinate);
  std::size_t hi = std::clamp<std::size_t>(static_cast<std::size_t>(it - nodes.begin()), 1,
                                           nodes.size() - 1);
  const std::size_t lo = hi - 1;
  const double t = std::clamp((coordinate - nodes[lo]) / (nodes[hi] - nodes[lo]), 0.0, 1.0);
  if (t == 1.0) return values[hi];
  return values[lo] + t * (values[hi] - values[lo]);
}

double OnAxisRegression::predict(ConstPointRef x) const {
  if (x.size() != plan_.dim()) throw ContractError("test point has the wrong dimension");
  double product = 1.0;
  for (int d = 0; d < plan_.dim(); ++d) product *= axis_value(d, x[d]);
  return product;
}

Eigen::VectorXd OnAxisRegression::predict_many(const PointSet& points) const {
  Eigen::VectorXd out(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) out[i] = predict(points.row(i).transpose());
  return out;
}

Eigen::VectorXd on_axis_regress(const ScalarOracle& oracle, const AxisSamplePlan& plan,
                                const PointSet& points) {
  return OnAxisRegression(oracle, plan).predict_many(points);
}

RunResult random_sampling_run(GpModel model, const Oracle& oracle, int n_iterations, const Box& box,
                              std::uint64_t seed, const PointSet& test_points,
                              const Eigen::VectorXd& truth, bool record_timing) {
  if (n_iterations < 1) throw ContractError("n_iterations must be >= 1");
  box.validate();
  TestSetMonitor monitor(model, test_points, truth);
  ExperimentHistory history;
  history.initial_mse = monitor.mse();
  history.initial_trace = monitor.trace();
  history.initial_samples = model.training().size();

  auto rng = make_rng(seed, kRandomStream);
  for (int it = 1; it <= n_iterations; ++it) {
    try {
      const auto start = std::chrono::steady_clock::now();
      const Point x = uniform_points(box, 1, rng).row(0).transpose();
      const Observation obs = oracle(x);
      model = model.augment(x, obs.value, gradient_for(model, obs));
      monitor.update(model);
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      history.records.push_back({it, x, obs.value, monitor.mse(), monitor.trace(),
                                 std::numeric_limits<double>::quiet_NaN(),
                                 record_timing ? elapsed.count() : 0.0});
    } catch (const std::exception& e) {
      throw RunAborted("random iteration " + std::to_string(it) + ": " + e.what(), history);
    }
  }
  return {std::move(model), std::move(history)};
}

GridRunResult grid_sampling_run(const GpModel& initial, const Oracle& oracle,
                                const std::vector<int>& grid_sizes, const Box& box,
                                const PointSet& test_points, const Eigen::VectorXd& truth,
                                bool record_timing) {
  box.validate();
  GridRunResult result;
  ExperimentHistory& history = result.history;
  {
    TestSetMonitor monitor(initial, test_points, truth);
    history.initial_mse = monitor.mse();
    history.initial_trace = monitor.trace();
    history.initial_samples = initial.training().size();
  }

  const TrainingSet& base = initial.training();
  int last_added = -1;
  for (int n : grid_sizes) {
    if (n < 2) throw ContractError("grid sizes must be >= 2");
    const auto start = std::chrono::steady_clock::now();
    TrainingSet train = base;
    int added = 0;
    const PointSet grid = uniform_grid(box, n);
    for (Eigen::Index g = 0; g < grid.rows(); ++g) {
      const Point x = grid.row(g).transpose();
      bool duplicate = false;
      for (Eigen::Index i = 0; i < base.inputs.rows(); ++i) {
        if ((base.inputs.row(i).transpose() - x).norm() < 1e-9) duplicate = true;
      }
      if (duplicate) {
        history.notes.push_back("grid n=" + std::to_string(n) + ": dropped point " +
                                std::to_string(g) + " duplicating an initial sample");
        continue;
      }
      const Observation obs = oracle(x);
      std::optional<Eigen::VectorXd> w;
      if (train.has_gradients()) {
        if (!obs.gradient) throw ContractError("derivative model needs oracle gradients");
        w = obs.gradient;
      }
      train = train.with_point(x, obs.value, w);
      ++added;
    }
    if (added <= last_added) throw ContractError("grid sizes must be increasing");
    last_added = added;

    GpModel model = condition(train, initial.kernel_ptr());
    TestSetMonitor monitor(model, test_points, truth);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    history.records.push_back({added, Point(), std::numeric_limits<double>::quiet_NaN(),
                               monitor.mse(), monitor.trace(),
                               std::numeric_limits<double>::quiet_NaN(),
                               record_timing ? elapsed.count() : 0.0});
    result.models.push_back(std::move(model));
  }
  return result;
}

}  // namespace gpsys
