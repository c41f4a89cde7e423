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

#include <Eigen/Core>

#include "gpsys/geometry.hpp"

namespace gpsys {

// Squared-exponential hyperparameters. `amplitude` carries the output units,
// `length_scales` one positive entry per input dimension (ARD); an isotropic
// kernel has all entries equal.
struct KernelHyper {
  double amplitude = 1.0;
  Eigen::VectorXd length_scales;

  static KernelHyper isotropic(double amplitude, double length_scale, int dim);

  int dim() const { return static_cast<int>(length_scales.size()); }
  void validate() const;
};

// amplitude^2 * exp(-1/2 sum_d (x_d - x2_d)^2 / l_d^2)
double se_cov(ConstPointRef x, ConstPointRef x2, const KernelHyper& h);

// d/dx_d se_cov(x, x2). Differentiates the first argument only.
double se_cov_d1(int d, ConstPointRef x, ConstPointRef x2, const KernelHyper& h);

// d^2/(dx_d dx2_e) se_cov(x, x2): first derivative on each argument.
double se_cov_d2(int d, int e, ConstPointRef x, ConstPointRef x2, const KernelHyper& h);

// Covariance function seen by the GP, including the derivative blocks needed
// for gradient observations. An observation "block" at a point is either the
// function value alone or the function value followed by the D partials.
class Kernel {
 public:
  virtual ~Kernel() = default;

  virtual int dim() const = 0;
  virtual double prior_variance() const = 0;
  virtual double cov(ConstPointRef x, ConstPointRef x2) const = 0;
  virtual double cov_d1(int d, ConstPointRef x, ConstPointRef x2) const = 0;
  virtual double cov_d2(int d, int e, ConstPointRef x, ConstPointRef x2) const = 0;

  // Fills `out` (rows: block at a, cols: block at b). Row/col 0 is the
  // function value; row/col 1 + d is the partial along axis d when the
  // corresponding flag is set.
  virtual void block(ConstPointRef a, bool a_grad, ConstPointRef b, bool b_grad,
                     Eigen::Ref<Eigen::MatrixXd> out) const;
};

class SquaredExponential final : public Kernel {
 public:
  explicit SquaredExponential(KernelHyper hyper);

  const KernelHyper& hyper() const { return hyper_; }

  int dim() const override { return hyper_.dim(); }
  double prior_variance() const override { return hyper_.amplitude * hyper_.amplitude; }
  double cov(ConstPointRef x, ConstPointRef x2) const override;
  double cov_d1(int d, ConstPointRef x, ConstPointRef x2) const override;
  double cov_d2(int d, int e, ConstPointRef x, ConstPointRef x2) const override;
  void block(ConstPointRef a, bool a_grad, ConstPointRef b, bool b_grad,
             Eigen::Ref<Eigen::MatrixXd> out) const override;

 private:
  KernelHyper hyper_;
  Eigen::VectorXd inv_sq_;  // 1 / l_d^2
};

}  // namespace gpsys
