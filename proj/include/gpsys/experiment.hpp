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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gpsys/baselines.hpp"
#include "gpsys/bed.hpp"
#include "gpsys/config.hpp"
#include "gpsys/csv.hpp"
#include "gpsys/gp.hpp"
#include "gpsys/hepsim.hpp"

namespace gpsys {

// Everything about a scenario that does not depend on the arm: domain,
// oracle, test grid and its ground truth. Targets seen by the GPs are shifted
// by -offset; truth is stored shifted the same way.
struct Problem {
  Scenario scenario = Scenario::Toy1d;
  Box box;
  Point center;
  double offset = 0.0;
  Oracle oracle;            // shifted value plus gradient
  ScalarOracle raw_value;   // unshifted value
  PointSet test_points;
  Eigen::VectorXd truth;    // shifted
  std::shared_ptr<const hep::NormalizedEfficiency> efficiency;  // physics scenarios only

  int dim() const { return box.dim(); }
};

Problem make_problem(const ExperimentConfig& cfg);

// Fixed cross around the center for the physics scenarios; seeded uniform
// points for toy1d.
PointSet initial_inputs(const ExperimentConfig& cfg, const Problem& problem, std::uint64_t seed);
TrainingSet initial_training(const ExperimentConfig& cfg, const Problem& problem, ModelKind model,
                             std::uint64_t seed);
KernelHyper kernel_hyper(const ExperimentConfig& cfg);
BedConfig bed_config(const ExperimentConfig& cfg, const Problem& problem, std::uint64_t seed);

std::string arm_name(ModelKind model, Strategy strategy);

struct SeedRun {
  std::uint64_t seed = 0;
  ExperimentHistory history;
};

struct ArmResult {
  std::string name;
  ModelKind model = ModelKind::Regular;
  Strategy strategy = Strategy::Bed;
  std::vector<SeedRun> runs;
  std::vector<SummaryRow> summary;
  std::optional<GpModel> first_model;  // final model of the first seed
};

// Runs one GP arm (bed, random or grid) over every configured seed.
ArmResult run_arm(const ExperimentConfig& cfg, const Problem& problem, ModelKind model,
                  Strategy strategy);

struct OnAxisResult {
  int samples = 0;
  double mse = 0.0;
  Eigen::VectorXd prediction;  // unshifted, on the test points
};

OnAxisResult run_on_axis(const ExperimentConfig& cfg, const Problem& problem);

struct ExperimentResult {
  std::vector<ArmResult> arms;
  std::optional<OnAxisResult> on_axis;
};

using ProgressLog = std::function<void(const std::string&)>;

ExperimentResult run_experiment(const ExperimentConfig& cfg, const Problem& problem,
                                const ProgressLog& log = {});

// config.ini, runs.csv, history_<arm>_seed<s>.csv, summary_<arm>.csv,
// grid_<arm>.csv (D <= 2), on_axis.csv, notes.txt.
void write_artifacts(const std::string& dir, const ExperimentConfig& cfg, const Problem& problem,
                     const ExperimentResult& result);

}  // namespace gpsys
