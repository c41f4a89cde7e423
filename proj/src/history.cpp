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

#include "gpsys/history.hpp"

namespace gpsys {

TestSetMonitor::TestSetMonitor(const GpModel& model, const PointSet& test_points,
                               Eigen::VectorXd truth)
    : tracked_(model, test_points), truth_(std::move(truth)) {
  if (truth_.size() != test_points.rows()) {
    throw ContractError("truth vector must align with the test points");
  }
}

double TestSetMonitor::mse() const {
  return mean_squared_error(tracked_.mean(), truth_);
}

double mean_squared_error(const Eigen::VectorXd& prediction, const Eigen::VectorXd& truth) {
  if (prediction.size() != truth.size() || truth.size() == 0) {
    throw ContractError("MSE needs non-empty vectors of equal length");
  }
  return (prediction - truth).squaredNorm() / static_cast<double>(truth.size());
}

std::optional<Eigen::VectorXd> gradient_for(const GpModel& model, const Observation& obs) {
  if (!model.training().has_gradients()) return std::nullopt;
  if (!obs.gradient) throw ContractError("derivative model needs an oracle that returns gradients");
  return obs.gradient;
}

}  // namespace gpsys
