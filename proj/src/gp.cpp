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

#include "gpsys/gp.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Cholesky>

#include "gpsys/errors.hpp"

namespace gpsys {

ConditioningError::ConditioningError(int index, double pivot)
    : Error("covariance not positive definite: pivot " + std::to_string(pivot) +
            " at joint index " + std::to_string(index) +
            " (duplicate inputs or insufficient noise)"),
      index_(index),
      pivot_(pivot) {}

namespace {

constexpr Eigen::Index kChunk = 2048;

// Row-wise Cholesky on rows [start, n). Rows below `start` must already hold
// the factor; rows from `start` on hold the lower triangle of the matrix.
void factor_rows(LowerFactor& l, Eigen::Index start, const Eigen::VectorXd* scale = nullptr) {
  const Eigen::Index n = l.rows();
  for (Eigen::Index i = start; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      const double s = j > 0 ? l.row(i).head(j).dot(l.row(j).head(j)) : 0.0;
      l(i, j) = (l(i, j) - s) / l(j, j);
    }
    const double diag = l(i, i);
    const double pivot = diag - (i > 0 ? l.row(i).head(i).squaredNorm() : 0.0);
    const double ref = scale ? (*scale)[i] : diag;
    if (!(pivot > kPivotTolerance * ref)) throw ConditioningError(static_cast<int>(i), pivot);
    l(i, i) = std::sqrt(pivot);
    l.row(i).tail(n - i - 1).setZero();
  }
}

void add_noise(Eigen::Ref<Eigen::MatrixXd> block, int n_points, int block_size, double noise_var,
               double grad_noise_var) {
  for (int p = 0; p < n_points; ++p) {
    const int base = p * block_size;
    block(base, base) += noise_var;
    for (int d = 1; d < block_size; ++d) block(base + d, base + d) += grad_noise_var;
  }
}

PointSet single(ConstPointRef x) {
  PointSet p(1, x.size());
  p.row(0) = x.transpose();
  return p;
}

}  // namespace

LowerFactor cholesky_lower(const Eigen::MatrixXd& a, const Eigen::VectorXd& scale) {
  if (a.rows() != a.cols() || scale.size() != a.rows()) {
    throw ContractError("cholesky_lower needs a square matrix and a matching scale vector");
  }
  LowerFactor l = a.triangularView<Eigen::Lower>();
  factor_rows(l, 0, &scale);
  return l;
}

void TrainingSet::validate() const {
  if (inputs.rows() < 1) throw ContractError("training set must contain at least one point");
  if (outputs.size() != inputs.rows()) {
    throw ContractError("training set has " + std::to_string(inputs.rows()) + " inputs but " +
                        std::to_string(outputs.size()) + " outputs");
  }
  if (gradients && (gradients->rows() != inputs.rows() || gradients->cols() != inputs.cols())) {
    throw ContractError("gradient matrix must be N x D, matching the inputs");
  }
  if (!(noise_var >= 0.0) || !(grad_noise_var >= 0.0)) {
    throw ContractError("noise variances must be >= 0");
  }
}

Eigen::VectorXd TrainingSet::joint_targets() const {
  const int b = block_size();
  Eigen::VectorXd out(static_cast<Eigen::Index>(size()) * b);
  for (int i = 0; i < size(); ++i) {
    out[i * b] = outputs[i];
    if (gradients) out.segment(i * b + 1, dim()) = gradients->row(i).transpose();
  }
  return out;
}

TrainingSet TrainingSet::with_point(ConstPointRef x, double y,
                                    const std::optional<Eigen::VectorXd>& w) const {
  if (x.size() != dim()) throw ContractError("augmented point has the wrong dimension");
  if (w.has_value() != has_gradients()) {
    throw ContractError("gradient presence of the new point must match the training set");
  }
  if (w && w->size() != dim()) throw ContractError("augmented gradient has the wrong dimension");
  TrainingSet next = *this;
  const Eigen::Index n = inputs.rows();
  next.inputs.conservativeResize(n + 1, Eigen::NoChange);
  next.inputs.row(n) = x.transpose();
  next.outputs.conservativeResize(n + 1);
  next.outputs[n] = y;
  if (w) {
    next.gradients->conservativeResize(n + 1, Eigen::NoChange);
    next.gradients->row(n) = w->transpose();
  }
  return next;
}

Eigen::MatrixXd joint_covariance(const Kernel& kernel, const PointSet& a, bool a_grad,
                                 const PointSet& b, bool b_grad) {
  if (a.cols() != kernel.dim() || b.cols() != kernel.dim()) {
    throw ContractError("point dimension does not match the kernel dimension");
  }
  const int dim = kernel.dim();
  const int ba = a_grad ? 1 + dim : 1;
  const int bb = b_grad ? 1 + dim : 1;
  Eigen::MatrixXd out(a.rows() * ba, b.rows() * bb);
  for (Eigen::Index j = 0; j < b.rows(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      kernel.block(a.row(i).transpose(), a_grad, b.row(j).transpose(), b_grad,
                   out.block(i * ba, j * bb, ba, bb));
    }
  }
  return out;
}

GpModel condition(TrainingSet train, std::shared_ptr<const Kernel> kernel) {
  if (!kernel) throw ContractError("condition() needs a kernel");
  train.validate();
  if (train.dim() != kernel->dim()) {
    throw ContractError("training inputs have dimension " + std::to_string(train.dim()) +
                        " but the kernel has " + std::to_string(kernel->dim()));
  }
  GpModel model;
  model.kernel_ = std::move(kernel);
  model.train_ = std::move(train);

  const TrainingSet& t = model.train_;
  const bool grad = t.has_gradients();
  Eigen::MatrixXd k = joint_covariance(*model.kernel_, t.inputs, grad, t.inputs, grad);
  add_noise(k, t.size(), t.block_size(), t.noise_var, t.grad_noise_var);
  model.chol_ = k.triangularView<Eigen::Lower>();
  factor_rows(model.chol_, 0);

  model.whitened_ = model.chol_.triangularView<Eigen::Lower>().solve(t.joint_targets());
  model.finish_alpha();
  return model;
}

GpModel condition(TrainingSet train, const KernelHyper& hyper) {
  return condition(std::move(train), std::make_shared<SquaredExponential>(hyper));
}

void GpModel::finish_alpha() {
  alpha_ = chol_.triangularView<Eigen::Lower>().transpose().solve(whitened_);
}

void GpModel::check_points(const PointSet& points) const {
  if (points.rows() > 0 && points.cols() != dim()) {
    throw ContractError("test points have dimension " + std::to_string(points.cols()) +
                        ", model has " + std::to_string(dim()));
  }
}

Eigen::MatrixXd GpModel::cross_covariance(const PointSet& points, bool with_gradients) const {
  check_points(points);
  return joint_covariance(*kernel_, train_.inputs, train_.has_gradients(), points, with_gradients);
}

void GpModel::whiten(Eigen::MatrixXd& rhs) const {
  chol_.triangularView<Eigen::Lower>().solveInPlace(rhs);
}

Eigen::VectorXd GpModel::predict_mean(const PointSet& points) const {
  check_points(points);
  Eigen::VectorXd out(points.rows());
  for (Eigen::Index start = 0; start < points.rows(); start += kChunk) {
    const Eigen::Index n = std::min(kChunk, points.rows() - start);
    const PointSet chunk = points.middleRows(start, n);
    out.segment(start, n) = cross_covariance(chunk).transpose() * alpha_;
  }
  return out;
}

PointSet GpModel::predict_mean_gradient(const PointSet& points) const {
  check_points(points);
  const int b = 1 + dim();
  const Eigen::VectorXd joint = cross_covariance(points, true).transpose() * alpha_;
  PointSet out(points.rows(), dim());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    out.row(i) = joint.segment(i * b + 1, dim()).transpose();
  }
  return out;
}

Eigen::MatrixXd GpModel::predict_cov(const PointSet& points) const {
  check_points(points);
  Eigen::MatrixXd v = cross_covariance(points);
  whiten(v);
  Eigen::MatrixXd cov = joint_covariance(*kernel_, points, false, points, false);
  cov.noalias() -= v.transpose() * v;
  cov = (0.5 * (cov + cov.transpose())).eval();
  const double prior = kernel_->prior_variance();
  for (Eigen::Index i = 0; i < cov.rows(); ++i) cov(i, i) = clamp_variance(cov(i, i), prior);
  return cov;
}

Eigen::VectorXd GpModel::predict_var_diag(const PointSet& points) const {
  check_points(points);
  const double prior = kernel_->prior_variance();
  Eigen::VectorXd out(points.rows());
  for (Eigen::Index start = 0; start < points.rows(); start += kChunk) {
    const Eigen::Index n = std::min(kChunk, points.rows() - start);
    Eigen::MatrixXd v = cross_covariance(points.middleRows(start, n));
    whiten(v);
    for (Eigen::Index t = 0; t < n; ++t) {
      const double k = kernel_->cov(points.row(start + t).transpose(),
                                    points.row(start + t).transpose());
      out[start + t] = clamp_variance(k - v.col(t).squaredNorm(), prior);
    }
  }
  return out;
}

GpModel GpModel::augment(ConstPointRef x, double y, const std::optional<Eigen::VectorXd>& w) const {
  GpModel next;
  next.kernel_ = kernel_;
  next.train_ = train_.with_point(x, y, w);

  const bool grad = train_.has_gradients();
  const Eigen::Index m = joint_size();
  const Eigen::Index b = train_.block_size();
  const PointSet xs = single(x);

  next.chol_.resize(m + b, m + b);
  next.chol_.topLeftCorner(m, m) = chol_;
  next.chol_.topRightCorner(m, b).setZero();
  next.chol_.block(m, 0, b, m) = joint_covariance(*kernel_, xs, grad, train_.inputs, grad);
  Eigen::MatrixXd self = joint_covariance(*kernel_, xs, grad, xs, grad);
  add_noise(self, 1, static_cast<int>(b), train_.noise_var, train_.grad_noise_var);
  next.chol_.block(m, m, b, b) = self;
  factor_rows(next.chol_, m);

  const Eigen::VectorXd targets = next.train_.joint_targets();
  next.whitened_.resize(m + b);
  next.whitened_.head(m) = whitened_;
  for (Eigen::Index i = m; i < m + b; ++i) {
    const double s = next.chol_.row(i).head(i).dot(next.whitened_.head(i));
    next.whitened_[i] = (targets[i] - s) / next.chol_(i, i);
  }
  next.finish_alpha();
  return next;
}

std::vector<Eigen::VectorXd> GpModel::sample_posterior(const PointSet& points, int n_samples,
                                                       std::uint64_t seed) const {
  if (n_samples < 1) throw ContractError("sample_posterior needs n_samples >= 1");
  const Eigen::VectorXd mean = predict_mean(points);
  Eigen::MatrixXd cov = predict_cov(points);
  cov.diagonal().array() += 1e-9 * kernel_->prior_variance();
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) throw ConditioningError(-1, 0.0);
  const Eigen::MatrixXd l = llt.matrixL();

  auto rng = make_rng(seed, 0x5a3b1e);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Eigen::VectorXd> out;
  out.reserve(n_samples);
  for (int s = 0; s < n_samples; ++s) {
    Eigen::VectorXd z(points.rows());
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = normal(rng);
    out.push_back(mean + l * z);
  }
  return out;
}

double clamp_variance(double var, double prior_var) {
  if (var < 0.0 && var >= -1e-10 * prior_var) return 0.0;
  return var;
}

TrackedPoints::TrackedPoints(const GpModel& model, PointSet points)
    : points_(std::move(points)),
      kernel_(model.kernel_ptr()),
      prior_var_(model.kernel().prior_variance()) {
  whitened_ = model.cross_covariance(points_);
  model.whiten(whitened_);
  sq_norms_ = whitened_.colwise().squaredNorm().transpose();
  targets_ = model.whitened_targets();
}

void TrackedPoints::update(const GpModel& model) {
  const Eigen::Index m_old = whitened_.rows();
  const Eigen::Index m_new = model.joint_size();
  if (model.kernel_ptr() != kernel_ || m_new < m_old) {
    throw ContractError("tracked points can only follow augmentations of the same model");
  }
  targets_ = model.whitened_targets();
  if (m_new == m_old) return;

  const TrainingSet& train = model.training();
  const Eigen::Index b = train.block_size();
  const Eigen::Index first = m_old / b;
  const PointSet added = train.inputs.middleRows(first, train.size() - first);
  Eigen::MatrixXd rows = joint_covariance(*kernel_, added, train.has_gradients(), points_, false);
  const LowerFactor& l = model.chol();
  rows.noalias() -= l.block(m_old, 0, m_new - m_old, m_old) * whitened_;
  l.block(m_old, m_old, m_new - m_old, m_new - m_old)
      .triangularView<Eigen::Lower>()
      .solveInPlace(rows);

  whitened_.conservativeResize(m_new, Eigen::NoChange);
  whitened_.bottomRows(m_new - m_old) = rows;
  sq_norms_ += rows.colwise().squaredNorm().transpose();
}

Eigen::VectorXd TrackedPoints::mean() const {
  return whitened_.transpose() * targets_;
}

Eigen::VectorXd TrackedPoints::var_diag() const {
  Eigen::VectorXd out(points_.rows());
  for (Eigen::Index t = 0; t < out.size(); ++t) {
    const double k = kernel_->cov(points_.row(t).transpose(), points_.row(t).transpose());
    out[t] = clamp_variance(k - sq_norms_[t], prior_var_);
  }
  return out;
}

double TrackedPoints::trace() const {
  return var_diag().sum();
}

HyperSearchResult grid_search_hyper(const TrainingSet& train, const PointSet& validation_inputs,
                                    const Eigen::VectorXd& validation_outputs,
                                    std::span<const double> amplitudes,
                                    std::span<const double> length_scales) {
  if (validation_inputs.rows() != validation_outputs.size() || validation_inputs.rows() == 0) {
    throw ContractError("validation inputs and outputs must be non-empty and aligned");
  }
  HyperSearchResult best{{}, std::numeric_limits<double>::infinity()};
  for (double amp : amplitudes) {
    for (double ell : length_scales) {
      const KernelHyper hyper = KernelHyper::isotropic(amp, ell, train.dim());
      try {
        const GpModel model = condition(train, hyper);
        const double mse =
            (model.predict_mean(validation_inputs) - validation_outputs).squaredNorm() /
            static_cast<double>(validation_outputs.size());
        if (mse < best.validation_mse) best = {hyper, mse};
      } catch (const ConditioningError&) {
      }
    }
  }
  if (!std::isfinite(best.validation_mse)) {
    throw ConditioningError(-1, 0.0);
  }
  return best;
}

}  // namespace gpsys
