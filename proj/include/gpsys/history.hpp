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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gpsys/errors.hpp"
#include "gpsys/geometry.hpp"
#include "gpsys/gp.hpp"

namespace gpsys {

// What an oracle returns for one input: the observable and, when the oracle
// can provide it, its gradient.
struct Observation {
  double value = 0.0;
  std::optional<Eigen::VectorXd> gradient;
};

using Oracle = std::function<Observation(ConstPointRef)>;

struct IterationRecord {
  int iteration = 0;  // samples added so far
  Point x;            // empty for non-sequential strategies
  double y = 0.0;
  double mse = 0.0;
  double trace = 0.0;
  double utility = 0.0;  // NaN when the strategy has no utility
  double seconds = 0.0;
};

// Shared by BED, random and grid runs so the results can be overlaid.
struct ExperimentHistory {
  double initial_mse = 0.0;
  double initial_trace = 0.0;
  int initial_samples = 0;
  std::vector<IterationRecord> records;
  std::vector<std::string> notes;
};

struct RunResult {
  GpModel model;
  ExperimentHistory history;
};

// Thrown when a sequential run stops early; carries what was recorded.
class RunAborted : public Error {
 public:
  RunAborted(const std::string& what, ExperimentHistory partial)
      : Error(what), partial_(std::move(partial)) {}

  const ExperimentHistory& partial() const { return partial_; }

 private:
  ExperimentHistory partial_;
};

// Test-set bookkeeping for sequential runs: MSE against the truth and the
// trace of the posterior covariance, kept current by incremental updates.
class TestSetMonitor {
 public:
  TestSetMonitor(const GpModel& model, const PointSet& test_points, Eigen::VectorXd truth);

  void update(const GpModel& model) { tracked_.update(model); }
  double mse() const;
  double trace() const { return tracked_.trace(); }
  Eigen::VectorXd mean() const { return tracked_.mean(); }
  Eigen::VectorXd var_diag() const { return tracked_.var_diag(); }

 private:
  TrackedPoints tracked_;
  Eigen::VectorXd truth_;
};

double mean_squared_error(const Eigen::VectorXd& prediction, const Eigen::VectorXd& truth);

// Drops the oracle gradient for regular models and insists on one for
// derivative models.
std::optional<Eigen::VectorXd> gradient_for(const GpModel& model, const Observation& obs);

}  // namespace gpsys
