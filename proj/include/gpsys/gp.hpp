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
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "gpsys/geometry.hpp"
#include "gpsys/kernel.hpp"

namespace gpsys {

// Observations a GP is conditioned on. Either every point carries a gradient
// row or none does. Noise terms are variances added to the covariance diagonal.
struct TrainingSet {
  PointSet inputs;
  Eigen::VectorXd outputs;
  std::optional<PointSet> gradients;
  double noise_var = 0.0;
  double grad_noise_var = 0.0;

  int size() const { return static_cast<int>(inputs.rows()); }
  int dim() const { return static_cast<int>(inputs.cols()); }
  bool has_gradients() const { return gradients.has_value(); }
  // Observations per training point: 1, or 1 + D with gradients.
  int block_size() const { return has_gradients() ? 1 + dim() : 1; }

  void validate() const;

  // Targets in joint order (see GpModel).
  Eigen::VectorXd joint_targets() const;

  TrainingSet with_point(ConstPointRef x, double y, const std::optional<Eigen::VectorXd>& w) const;
};

// Covariance between the observation blocks of two point sets, in the joint
// order used throughout: observation-major, each point contributing its value
// then (optionally) its D partials.
Eigen::MatrixXd joint_covariance(const Kernel& kernel, const PointSet& a, bool a_grad,
                                 const PointSet& b, bool b_grad);

// Lower Cholesky factor storage. Rows are appended on augmentation.
using LowerFactor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Pivots at or below this fraction of their diagonal entry count as singular.
inline constexpr double kPivotTolerance = 1e-12;

// Cholesky factor of a symmetric matrix (lower triangle read). Pivot i is
// singular when it falls to kPivotTolerance * scale[i] or below; throws
// ConditioningError.
LowerFactor cholesky_lower(const Eigen::MatrixXd& a, const Eigen::VectorXd& scale);

// Conditioned zero-mean GP. Immutable: augment() returns a new model.
//
// The joint observation vector is observation-major: for training point i
// the block [y_i, w_{i,0}, ..., w_{i,D-1}] (gradients only when present).
// This keeps every training point a contiguous block so augmentation only
// appends rows to the Cholesky factor.
class GpModel {
 public:
  const Kernel& kernel() const { return *kernel_; }
  std::shared_ptr<const Kernel> kernel_ptr() const { return kernel_; }
  const TrainingSet& training() const { return train_; }
  int dim() const { return train_.dim(); }
  int joint_size() const { return static_cast<int>(chol_.rows()); }

  // L with L L^T = K_joint + noise.
  const LowerFactor& chol() const { return chol_; }
  // Solution of (K_joint + noise) alpha = joint targets.
  const Eigen::VectorXd& alpha() const { return alpha_; }
  // L^{-1} * joint targets.
  const Eigen::VectorXd& whitened_targets() const { return whitened_; }

  Eigen::VectorXd predict_mean(const PointSet& points) const;
  // Posterior mean of the gradient, one row per point.
  PointSet predict_mean_gradient(const PointSet& points) const;
  Eigen::MatrixXd predict_cov(const PointSet& points) const;
  // diag(predict_cov) without forming the full matrix.
  Eigen::VectorXd predict_var_diag(const PointSet& points) const;

  // Equivalent to conditioning on train + {(x, y, w)}; extends the factor by
  // one block row instead of refactorizing.
  GpModel augment(ConstPointRef x, double y, const std::optional<Eigen::VectorXd>& w = {}) const;

  std::vector<Eigen::VectorXd> sample_posterior(const PointSet& points, int n_samples,
                                                std::uint64_t seed) const;

  // K(joint, f(points)): M x T cross covariance with function values at points.
  Eigen::MatrixXd cross_covariance(const PointSet& points, bool with_gradients = false) const;
  // Solves L * out = rhs in place.
  void whiten(Eigen::MatrixXd& rhs) const;

  friend GpModel condition(TrainingSet train, std::shared_ptr<const Kernel> kernel);

 private:
  GpModel() = default;
  void check_points(const PointSet& points) const;
  void finish_alpha();

  std::shared_ptr<const Kernel> kernel_;
  TrainingSet train_;
  LowerFactor chol_;
  Eigen::VectorXd whitened_;
  Eigen::VectorXd alpha_;
};

GpModel condition(TrainingSet train, std::shared_ptr<const Kernel> kernel);
GpModel condition(TrainingSet train, const KernelHyper& hyper);

// Posterior mean and marginal variance on a fixed point set, kept current as
// the model is augmented. Each update costs O(B * M * T) rather than the
// O(M^2 * T) of predicting from scratch.
class TrackedPoints {
 public:
  TrackedPoints(const GpModel& model, PointSet points);

  // `model` must be an augmentation (possibly repeated) of the last model
  // seen by this tracker.
  void update(const GpModel& model);

  const PointSet& points() const { return points_; }
  Eigen::VectorXd mean() const;
  Eigen::VectorXd var_diag() const;
  double trace() const;

 private:
  PointSet points_;
  std::shared_ptr<const Kernel> kernel_;
  double prior_var_ = 0.0;
  Eigen::MatrixXd whitened_;  // L^{-1} K(joint, points), grows by rows
  Eigen::VectorXd sq_norms_;
  Eigen::VectorXd targets_;   // whitened targets of the last model
};

// Clamps tiny negative variances from cancellation to zero.
double clamp_variance(double var, double prior_var);

struct HyperSearchResult {
  KernelHyper hyper;
  double validation_mse = 0.0;
};

// Grid search over isotropic (amplitude, length scale) pairs scoring held-out
// MSE; pairs whose conditioning fails are skipped.
HyperSearchResult grid_search_hyper(const TrainingSet& train, const PointSet& validation_inputs,
                                    const Eigen::VectorXd& validation_outputs,
                                    std::span<const double> amplitudes,
                                    std::span<const double> length_scales);

}  // namespace gpsys
