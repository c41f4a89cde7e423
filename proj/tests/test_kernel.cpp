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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "gpsys/errors.hpp"
#include "gpsys/kernel.hpp"
#include "oracles.hpp"

namespace gpsys {
namespace {

using testing::fd_d1;
using testing::fd_d2;
using testing::random_point;

TEST(SeCov, HandValues) {
  const KernelHyper h = KernelHyper::isotropic(2.0, 0.5, 2);
  const Point a = Point::Zero(2);
  Point b(2);
  b << 0.5, 0.0;
  EXPECT_DOUBLE_EQ(se_cov(a, a, h), 4.0);
  EXPECT_NEAR(se_cov(a, b, h), 4.0 * std::exp(-0.5), 1e-15);
  EXPECT_DOUBLE_EQ(se_cov(a, b, h), se_cov(b, a, h));
}

TEST(SeCov, ArdScalesEachAxis) {
  KernelHyper h{1.0, Eigen::Vector2d(1.0, 2.0)};
  Point a = Point::Zero(2), b(2);
  b << 1.0, 2.0;
  EXPECT_NEAR(se_cov(a, b, h), std::exp(-1.0), 1e-15);
}

class KernelDerivatives : public ::testing::TestWithParam<int> {};

TEST_P(KernelDerivatives, MatchFiniteDifferences) {
  const int dim = GetParam();
  std::mt19937_64 rng(17 + dim);
  std::uniform_real_distribution<double> ls(0.3, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    KernelHyper h{1.3, Eigen::VectorXd(dim)};
    for (int d = 0; d < dim; ++d) h.length_scales[d] = ls(rng);
    const Point x = random_point(rng, dim, -1.0, 1.0);
    const Point x2 = random_point(rng, dim, -1.0, 1.0);
    for (int d = 0; d < dim; ++d) {
      EXPECT_NEAR(se_cov_d1(d, x, x2, h), fd_d1(h, d, x, x2, 1e-3), 1e-9);
      for (int e = 0; e < dim; ++e) {
        EXPECT_NEAR(se_cov_d2(d, e, x, x2, h), fd_d2(h, d, e, x, x2, 1e-3), 1e-7);
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Dims, KernelDerivatives, ::testing::Values(1, 2, 4));

TEST(SeCovDerivatives, AntisymmetryAndZeroLag) {
  const KernelHyper h = KernelHyper::isotropic(1.0, 0.7, 3);
  std::mt19937_64 rng(3);
  const Point x = random_point(rng, 3, -1, 1), x2 = random_point(rng, 3, -1, 1);
  for (int d = 0; d < 3; ++d) {
    EXPECT_NEAR(se_cov_d1(d, x, x2, h), -se_cov_d1(d, x2, x, h), 1e-15);
    EXPECT_DOUBLE_EQ(se_cov_d1(d, x, x, h), 0.0);
    // Variance of a partial: amplitude^2 / l^2.
    EXPECT_NEAR(se_cov_d2(d, d, x, x, h), 1.0 / 0.49, 1e-12);
    for (int e = 0; e < 3; ++e) {
      EXPECT_NEAR(se_cov_d2(d, e, x, x2, h), se_cov_d2(e, d, x2, x, h), 1e-15);
    }
  }
}

TEST(SquaredExponential, BlockMatchesFreeFunctions) {
  const KernelHyper h = KernelHyper::isotropic(0.8, 0.6, 2);
  const SquaredExponential k(h);
  std::mt19937_64 rng(5);
  const Point a = random_point(rng, 2, 0, 1), b = random_point(rng, 2, 0, 1);
  Eigen::MatrixXd block(3, 3);
  k.block(a, true, b, true, block);
  EXPECT_DOUBLE_EQ(block(0, 0), se_cov(a, b, h));
  for (int d = 0; d < 2; ++d) {
    // Row 1+d: partial at a; column 1+e: partial at b.
    EXPECT_NEAR(block(1 + d, 0), se_cov_d1(d, a, b, h), 1e-15);
    EXPECT_NEAR(block(0, 1 + d), se_cov_d1(d, b, a, h), 1e-15);
    for (int e = 0; e < 2; ++e) EXPECT_NEAR(block(1 + d, 1 + e), se_cov_d2(d, e, a, b, h), 1e-15);
  }
  Eigen::MatrixXd reverse(3, 3);
  k.block(b, true, a, true, reverse);
  EXPECT_TRUE(block.isApprox(reverse.transpose(), 1e-14));

  Eigen::MatrixXd value_only(1, 1);
  k.block(a, false, b, false, value_only);
  EXPECT_DOUBLE_EQ(value_only(0, 0), block(0, 0));
  EXPECT_DOUBLE_EQ(k.prior_variance(), 0.64);
}

TEST(KernelHyper, Validation) {
  EXPECT_THROW(KernelHyper::isotropic(0.0, 1.0, 2), ContractError);
  EXPECT_THROW(KernelHyper::isotropic(1.0, -1.0, 2), ContractError);
  EXPECT_THROW(KernelHyper::isotropic(1.0, 1.0, 0), ContractError);
  EXPECT_THROW(SquaredExponential(KernelHyper{1.0, Eigen::VectorXd()}), ContractError);
}

TEST(SeCov, RejectsBadArguments) {
  const KernelHyper h = KernelHyper::isotropic(1.0, 1.0, 2);
  EXPECT_THROW(se_cov(Point::Zero(3), Point::Zero(2), h), ContractError);
  EXPECT_THROW(se_cov_d1(2, Point::Zero(2), Point::Zero(2), h), ContractError);
  EXPECT_THROW(se_cov_d2(0, -1, Point::Zero(2), Point::Zero(2), h), ContractError);
}

}  // namespace
}  // namespace gpsys
