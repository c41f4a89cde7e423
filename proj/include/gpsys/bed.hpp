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
#include <memory>

#include <Eigen/Core>

#include "gpsys/geometry.hpp"
#include "gpsys/gp.hpp"
#include "gpsys/history.hpp"

namespace gpsys {

// Points on which the utility measures predictive variance. With
// regularization_var > 0 every point is jittered by N(0, regularization_var)
// per coordinate before each selection, then clipped to the box.
struct UtilityInput {
  PointSet base_points;
  double regularization_var = 0.0;
  std::uint64_t perturb_seed = 0;
  Box box;

  void validate() const;
};

PointSet perturb(const UtilityInput& input, int iteration);

// Scalar summary of the posterior covariance on the utility points.
class UncertaintySummary {
 public:
  virtual ~UncertaintySummary() = default;
  virtual double operator()(const GpModel& model, const PointSet& points) const = 0;
};

class TraceSummary final : public UncertaintySummary {
 public:
  double operator()(const GpModel& model, const PointSet& points) const override;
};

class MaxVarianceSummary final : public UncertaintySummary {
 public:
  double operator()(const GpModel& model, const PointSet& points) const override;
};

class DeterminantSummary final : public UncertaintySummary {
 public:
  double operator()(const GpModel& model, const PointSet& points) const override;
};

// 1 - summary(augmented) / summary(current), where the model is temporarily
// augmented with the fictitious observation (x, mu(x)) plus, for derivative
// models, the posterior mean gradient at x. A fictitious observation the
// model cannot absorb (zero conditional variance) carries no information and
// scores 0.
double utility(const GpModel& model, ConstPointRef x, const PointSet& utility_points,
               const UncertaintySummary& summary);
double utility(const GpModel& model, ConstPointRef x, const PointSet& utility_points);

// Trace utility for many candidates at once. Uses the block Schur complement
// of the fictitious observation instead of materializing augmented models:
// Tr(S_u) - Tr(S_u^aug) = sum_u c_u^T S^{-1} c_u with c_u the posterior
// covariance between f(u) and the observation block at x.
class UtilityEvaluator {
 public:
  UtilityEvaluator(const GpModel& model, PointSet utility_points);

  double trace() const { return trace_; }
  Eigen::VectorXd evaluate(const PointSet& candidates) const;

 private:
  double evaluate_one(const Eigen::MatrixXd& cand_whitened, const Eigen::MatrixXd& cand_prior,
                      const Eigen::MatrixXd& cand_cross) const;

  const GpModel* model_;
  PointSet points_;
  Eigen::MatrixXd whitened_;  // L^{-1} K(joint, f(u))
  double trace_ = 0.0;
};

struct CandidateSource {
  bool include_utility_points = true;
  int n_uniform = 256;
};

struct BedConfig {
  int n_iterations = 1;
  CandidateSource candidates;
  UtilityInput utility_input;
  Box box;
  std::uint64_t rng_seed = 0;
  bool record_timing = false;

  void validate() const;
};

struct Selection {
  Point x;
  double utility = 0.0;
};

// Candidate set for one iteration: the (perturbed) utility points followed by
// fresh uniform draws.
PointSet candidate_points(const BedConfig& cfg, const PointSet& utility_points, int iteration);

// argmax of the utility over `candidates`, skipping those within 1e-9 of a
// training input; ties go to the lowest index.
Selection select_from(const GpModel& model, const PointSet& candidates,
                      const PointSet& utility_points);
Selection select_next(const GpModel& model, const BedConfig& cfg, int iteration);

RunResult run_bed(GpModel model, const Oracle& oracle, const BedConfig& cfg,
                  const PointSet& test_points, const Eigen::VectorXd& truth);

}  // namespace gpsys
