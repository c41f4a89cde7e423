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

#include "gpsys/bed.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Cholesky>

#include "gpsys/errors.hpp"

namespace gpsys {
namespace {

constexpr std::uint64_t kPerturbStream = 0x7065;
constexpr std::uint64_t kCandidateStream = 0x6361;
constexpr Eigen::Index kCandidateChunk = 32;
constexpr double kDuplicateTolerance = 1e-9;

PointSet single(ConstPointRef x) {
  PointSet p(1, x.size());
  p.row(0) = x.transpose();
  return p;
}

bool near_training_input(const GpModel& model, ConstPointRef x) {
  const PointSet& inputs = model.training().inputs;
  for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
    if ((inputs.row(i).transpose() - x).norm() < kDuplicateTolerance) return true;
  }
  return false;
}

Eigen::VectorXd block_noise(const TrainingSet& train) {
  Eigen::VectorXd noise = Eigen::VectorXd::Constant(train.block_size(), train.grad_noise_var);
  noise[0] = train.noise_var;
  return noise;
}

}  // namespace

void UtilityInput::validate() const {
  box.validate();
  if (base_points.rows() == 0) throw ContractError("utility input needs at least one point");
  if (base_points.cols() != box.dim()) throw ContractError("utility points do not match the box");
  if (!(regularization_var >= 0.0)) throw ContractError("regularization variance must be >= 0");
  for (Eigen::Index i = 0; i < base_points.rows(); ++i) {
    if (!box.contains(base_points.row(i).transpose(), 1e-12)) {
      throw ContractError("utility point " + std::to_string(i) + " lies outside the box");
    }
  }
}

PointSet perturb(const UtilityInput& input, int iteration) {
  if (!(input.regularization_var >= 0.0)) {
    throw ContractError("regularization variance must be >= 0");
  }
  if (input.regularization_var == 0.0) return input.base_points;
  auto rng = make_rng(input.perturb_seed, kPerturbStream, static_cast<std::uint64_t>(iteration));
  std::normal_distribution<double> noise(0.0, std::sqrt(input.regularization_var));
  PointSet out = input.base_points;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index d = 0; d < out.cols(); ++d) out(i, d) += noise(rng);
    out.row(i) = input.box.clip(out.row(i).transpose()).transpose();
  }
  return out;
}

double TraceSummary::operator()(const GpModel& model, const PointSet& points) const {
  return model.predict_var_diag(points).sum();
}

double MaxVarianceSummary::operator()(const GpModel& model, const PointSet& points) const {
  return model.predict_var_diag(points).maxCoeff();
}

double DeterminantSummary::operator()(const GpModel& model, const PointSet& points) const {
  const Eigen::MatrixXd cov = model.predict_cov(points);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
  return ldlt.vectorD().prod();
}

double utility(const GpModel& model, ConstPointRef x, const PointSet& utility_points,
               const UncertaintySummary& summary) {
  const double before = summary(model, utility_points);
  if (!(before > 0.0)) {
    throw DegenerateUtilityError("utility input carries no posterior uncertainty");
  }
  const PointSet xs = single(x);
  const double mu = model.predict_mean(xs)[0];
  std::optional<Eigen::VectorXd> grad;
  if (model.training().has_gradients()) {
    grad = model.predict_mean_gradient(xs).row(0).transpose();
  }
  try {
    const GpModel augmented = model.augment(x, mu, grad);
    return 1.0 - summary(augmented, utility_points) / before;
  } catch (const ConditioningError&) {
    return 0.0;
  }
}

double utility(const GpModel& model, ConstPointRef x, const PointSet& utility_points) {
  return utility(model, x, utility_points, TraceSummary{});
}

UtilityEvaluator::UtilityEvaluator(const GpModel& model, PointSet utility_points)
    : model_(&model), points_(std::move(utility_points)) {
  whitened_ = model.cross_covariance(points_);
  model.whiten(whitened_);
  const double prior = model.kernel().prior_variance();
  for (Eigen::Index u = 0; u < points_.rows(); ++u) {
    const double k = model.kernel().cov(points_.row(u).transpose(), points_.row(u).transpose());
    trace_ += clamp_variance(k - whitened_.col(u).squaredNorm(), prior);
  }
  if (!(trace_ > 0.0)) {
    throw DegenerateUtilityError("utility input carries no posterior uncertainty");
  }
}

Eigen::VectorXd UtilityEvaluator::evaluate(const PointSet& candidates) const {
  const GpModel& model = *model_;
  const TrainingSet& train = model.training();
  const bool grad = train.has_gradients();
  const Eigen::Index b = train.block_size();
  const Eigen::VectorXd noise = block_noise(train);

  Eigen::VectorXd out(candidates.rows());
  for (Eigen::Index start = 0; start < candidates.rows(); start += kCandidateChunk) {
    const Eigen::Index n = std::min(kCandidateChunk, candidates.rows() - start);
    const PointSet chunk = candidates.middleRows(start, n);
    Eigen::MatrixXd cand_whitened = model.cross_covariance(chunk, grad);
    model.whiten(cand_whitened);
    // Posterior covariance between f(u) and every candidate observation.
    Eigen::MatrixXd cross = joint_covariance(model.kernel(), points_, false, chunk, grad);
    cross.noalias() -= whitened_.transpose() * cand_whitened;

    for (Eigen::Index j = 0; j < n; ++j) {
      Eigen::MatrixXd prior(b, b);
      model.kernel().block(chunk.row(j).transpose(), grad, chunk.row(j).transpose(), grad, prior);
      prior.diagonal() += noise;
      out[start + j] = evaluate_one(cand_whitened.middleCols(j * b, b), prior,
                                    cross.middleCols(j * b, b));
    }
  }
  return out;
}

double UtilityEvaluator::evaluate_one(const Eigen::MatrixXd& cand_whitened,
                                      const Eigen::MatrixXd& cand_prior,
                                      const Eigen::MatrixXd& cand_cross) const {
  Eigen::MatrixXd schur = cand_prior;
  schur.noalias() -= cand_whitened.transpose() * cand_whitened;
  LowerFactor l;
  try {
    l = cholesky_lower(schur, cand_prior.diagonal());
  } catch (const ConditioningError&) {
    return 0.0;
  }
  // ||C L^{-T}||_F^2 = trace(C S^{-1} C^T)
  Eigen::MatrixXd rt = cand_cross.transpose();
  l.triangularView<Eigen::Lower>().solveInPlace(rt);
  return rt.squaredNorm() / trace_;
}

void BedConfig::validate() const {
  if (n_iterations < 1) throw ContractError("n_iterations must be >= 1");
  box.validate();
  utility_input.validate();
  if (utility_input.box.dim() != box.dim()) {
    throw ContractError("utility input box does not match the search box");
  }
  if (candidates.n_uniform < 0) throw ContractError("n_uniform must be >= 0");
  if (!candidates.include_utility_points && candidates.n_uniform == 0) {
    throw ContractError("candidate source is empty");
  }
}

PointSet candidate_points(const BedConfig& cfg, const PointSet& utility_points, int iteration) {
  const Eigen::Index from_utility = cfg.candidates.include_utility_points ? utility_points.rows() : 0;
  PointSet out(from_utility + cfg.candidates.n_uniform, cfg.box.dim());
  if (from_utility > 0) out.topRows(from_utility) = utility_points;
  if (cfg.candidates.n_uniform > 0) {
    auto rng = make_rng(cfg.rng_seed, kCandidateStream, static_cast<std::uint64_t>(iteration));
    out.bottomRows(cfg.candidates.n_uniform) = uniform_points(cfg.box, cfg.candidates.n_uniform, rng);
  }
  return out;
}

Selection select_from(const GpModel& model, const PointSet& candidates,
                      const PointSet& utility_points) {
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < candidates.rows(); ++i) {
    if (!near_training_input(model, candidates.row(i).transpose())) kept.push_back(i);
  }
  if (kept.empty()) throw ExhaustedCandidatesError("every candidate duplicates a training input");

  PointSet filtered(static_cast<Eigen::Index>(kept.size()), candidates.cols());
  for (std::size_t k = 0; k < kept.size(); ++k) {
    filtered.row(static_cast<Eigen::Index>(k)) = candidates.row(kept[k]);
  }
  const UtilityEvaluator evaluator(model, utility_points);
  const Eigen::VectorXd values = evaluator.evaluate(filtered);

  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < values.size(); ++k) {
    if (values[k] > values[best]) best = k;
  }
  return {filtered.row(best).transpose(), values[best]};
}

Selection select_next(const GpModel& model, const BedConfig& cfg, int iteration) {
  const PointSet utility_points = perturb(cfg.utility_input, iteration);
  return select_from(model, candidate_points(cfg, utility_points, iteration), utility_points);
}

RunResult run_bed(GpModel model, const Oracle& oracle, const BedConfig& cfg,
                  const PointSet& test_points, const Eigen::VectorXd& truth) {
  cfg.validate();
  TestSetMonitor monitor(model, test_points, truth);
  ExperimentHistory history;
  history.initial_mse = monitor.mse();
  history.initial_trace = monitor.trace();
  history.initial_samples = model.training().size();

  for (int it = 1; it <= cfg.n_iterations; ++it) {
    try {
      const auto start = std::chrono::steady_clock::now();
      const Selection sel = select_next(model, cfg, it);
      const Observation obs = oracle(sel.x);
      model = model.augment(sel.x, obs.value, gradient_for(model, obs));
      monitor.update(model);
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      history.records.push_back({it, sel.x, obs.value, monitor.mse(), monitor.trace(), sel.utility,
                                 cfg.record_timing ? elapsed.count() : 0.0});
    } catch (const std::exception& e) {
      throw RunAborted("BED iteration " + std::to_string(it) + ": " + e.what(), history);
    }
  }
  return {std::move(model), std::move(history)};
}

}  // namespace gpsys
