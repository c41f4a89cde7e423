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
#include <iosfwd>
#include <string>
#include <vector>

#include "gpsys/hepsim.hpp"

namespace gpsys {

enum class Scenario { Toy1d, Hep2d, Hep4d };
enum class ModelKind { Regular, Derivative };
enum class Strategy { Bed, Random, Grid, OnAxis };

std::string to_string(Scenario s);
std::string to_string(ModelKind m);
std::string to_string(Strategy s);

// One experiment: every (model, strategy) arm over every seed. Keys in the
// INI file are "section.key"; see default_config for the per-scenario values.
struct ExperimentConfig {
  Scenario scenario = Scenario::Toy1d;
  std::vector<ModelKind> models;
  std::vector<Strategy> strategies;
  int iterations = 20;
  std::vector<std::uint64_t> seeds;
  int test_grid = 100;       // points per axis
  int initial_points = 4;    // toy1d only; the physics scenarios use a fixed cross
  bool record_timing = false;
  std::string out_dir = "out";

  double amplitude = 1.0;
  double length_scale = 1.0;
  double noise_var = 0.0;
  double grad_noise_var = 0.0;

  int utility_grid = 100;    // points per axis of the utility input
  double gamma2 = 0.0;       // perturbation variance of the utility input
  int n_uniform = 256;       // extra uniform candidates per iteration
  bool utility_candidates = true;

  std::vector<int> grid_sizes;
  int on_axis_points = 25;   // linspace size per axis, center counted once

  int events = 30000;
  std::uint64_t event_seed = 1;
  bool offset_targets = true;
  hep::GeneratorParams generator;
  hep::CutSpec cuts;

  int dim() const;
  // Throws ConfigError naming the first offending key.
  void validate() const;
};

ExperimentConfig default_config(Scenario scenario);

// Reads INI text, then applies "section.key=value" overrides in order. The
// scenario key selects the defaults every other key starts from.
ExperimentConfig parse_config(std::istream& in, const std::vector<std::string>& overrides = {});
ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides = {});

// Fully resolved config as INI text; parse_config(to_ini(c)) reproduces c.
std::string to_ini(const ExperimentConfig& cfg);

}  // namespace gpsys
