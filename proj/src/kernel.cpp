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

#include "gpsys/kernel.hpp"

#include <cmath>
#include <string>

#include "gpsys/errors.hpp"

namespace gpsys {
namespace {

void check_dims(ConstPointRef x, ConstPointRef x2, int dim) {
  if (x.size() != dim || x2.size() != dim) {
    throw ContractError("kernel expects points of dimension " + std::to_string(dim) + ", got " +
                        std::to_string(x.size()) + " and " + std::to_string(x2.size()));
  }
}

void check_axis(int d, int dim) {
  if (d < 0 || d >= dim) {
    throw ContractError("axis " + std::to_string(d) + " out of range for dimension " +
                        std::to_string(dim));
  }
}

}  // namespace

KernelHyper KernelHyper::isotropic(double amplitude, double length_scale, int dim) {
  KernelHyper h{amplitude, Eigen::VectorXd::Constant(dim, length_scale)};
  h.validate();
  return h;
}

void KernelHyper::validate() const {
  if (!(amplitude > 0.0)) throw ContractError("kernel amplitude must be > 0");
  if (length_scales.size() == 0) throw ContractError("kernel needs at least one length scale");
  for (Eigen::Index d = 0; d < length_scales.size(); ++d) {
    if (!(length_scales[d] > 0.0)) throw ContractError("kernel length scales must be > 0");
  }
}

double se_cov(ConstPointRef x, ConstPointRef x2, const KernelHyper& h) {
  check_dims(x, x2, h.dim());
  const double r2 = ((x - x2).array() / h.length_scales.array()).square().sum();
  return h.amplitude * h.amplitude * std::exp(-0.5 * r2);
}

double se_cov_d1(int d, ConstPointRef x, ConstPointRef x2, const KernelHyper& h) {
  check_axis(d, h.dim());
  const double l2 = h.length_scales[d] * h.length_scales[d];
  return -(x[d] - x2[d]) / l2 * se_cov(x, x2, h);
}

double se_cov_d2(int d, int e, ConstPointRef x, ConstPointRef x2, const KernelHyper& h) {
  check_axis(d, h.dim());
  check_axis(e, h.dim());
  const double ld2 = h.length_scales[d] * h.length_scales[d];
  const double le2 = h.length_scales[e] * h.length_scales[e];
  const double delta = d == e ? 1.0 / ld2 : 0.0;
  return (delta - (x[d] - x2[d]) * (x[e] - x2[e]) / (ld2 * le2)) * se_cov(x, x2, h);
}

void Kernel::block(ConstPointRef a, bool a_grad, ConstPointRef b, bool b_grad,
                   Eigen::Ref<Eigen::MatrixXd> out) const {
  const int dim = this->dim();
  out(0, 0) = cov(a, b);
  if (a_grad) {
    for (int d = 0; d < dim; ++d) out(1 + d, 0) = cov_d1(d, a, b);
  }
  if (b_grad) {
    // Derivative observation sits in the second slot: k is symmetric, so
    // d/db_e k(a, b) = d/db_e k(b, a).
    for (int e = 0; e < dim; ++e) out(0, 1 + e) = cov_d1(e, b, a);
  }
  if (a_grad && b_grad) {
    for (int d = 0; d < dim; ++d) {
      for (int e = 0; e < dim; ++e) out(1 + d, 1 + e) = cov_d2(d, e, a, b);
    }
  }
}

SquaredExponential::SquaredExponential(KernelHyper hyper) : hyper_(std::move(hyper)) {
  hyper_.validate();
  inv_sq_ = hyper_.length_scales.array().square().inverse();
}

double SquaredExponential::cov(ConstPointRef x, ConstPointRef x2) const {
  return se_cov(x, x2, hyper_);
}

double SquaredExponential::cov_d1(int d, ConstPointRef x, ConstPointRef x2) const {
  return se_cov_d1(d, x, x2, hyper_);
}

double SquaredExponential::cov_d2(int d, int e, ConstPointRef x, ConstPointRef x2) const {
  return se_cov_d2(d, e, x, x2, hyper_);
}

void SquaredExponential::block(ConstPointRef a, bool a_grad, ConstPointRef b, bool b_grad,
                               Eigen::Ref<Eigen::MatrixXd> out) const {
  const int dim = hyper_.dim();
  check_dims(a, b, dim);
  // Single exponential per pair; every derivative entry is a polynomial factor on it.
  double r2 = 0.0;
  for (int d = 0; d < dim; ++d) {
    const double diff = a[d] - b[d];
    r2 += diff * diff * inv_sq_[d];
  }
  const double k = hyper_.amplitude * hyper_.amplitude * std::exp(-0.5 * r2);
  out(0, 0) = k;
  if (!a_grad && !b_grad) return;

  auto scaled = [&](int d) { return (a[d] - b[d]) * inv_sq_[d]; };
  if (a_grad) {
    for (int d = 0; d < dim; ++d) out(1 + d, 0) = -scaled(d) * k;
  }
  if (b_grad) {
    for (int e = 0; e < dim; ++e) out(0, 1 + e) = scaled(e) * k;
  }
  if (a_grad && b_grad) {
    for (int d = 0; d < dim; ++d) {
      const double sd = scaled(d);
      for (int e = 0; e < dim; ++e) {
        out(1 + d, 1 + e) = ((d == e ? inv_sq_[d] : 0.0) - sd * scaled(e)) * k;
      }
    }
  }
}

}  // namespace gpsys
