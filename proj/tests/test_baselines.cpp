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

#include "gpsys/baselines.hpp"
#include "gpsys/errors.hpp"
#include "oracles.hpp"

namespace gpsys {
namespace {

const Box kUnitBox = Box::cube(2, 0.5, 1.5);

TEST(AxisSamplePlan, LinspaceCounts) {
  const Point c2 = Point::Ones(2), c4 = Point::Ones(4);
  EXPECT_EQ(AxisSamplePlan::from_linspace(kUnitBox, c2, 25).sample_count(), 49);
  EXPECT_EQ(AxisSamplePlan::from_linspace(Box::cube(4, 0.5, 1.5), c4, 25).sample_count(), 97);
  // Even n: the centre is not on the linspace, so nothing is removed.
  EXPECT_EQ(AxisSamplePlan::from_linspace(kUnitBox, c2, 4).sample_count(), 9);
}

TEST(AxisSamplePlan, PointsLieOnAxes) {
  const AxisSamplePlan plan = AxisSamplePlan::from_linspace(kUnitBox, Point::Ones(2), 5);
  const PointSet p = plan.sample_points();
  ASSERT_EQ(p.rows(), 9);
  EXPECT_EQ(Point(p.row(0).transpose()), Point::Ones(2));
  for (Eigen::Index i = 1; i < p.rows(); ++i) {
    const int off_axis = (std::abs(p(i, 0) - 1.0) > 1e-12) + (std::abs(p(i, 1) - 1.0) > 1e-12);
    EXPECT_EQ(off_axis, 1);
  }
}

TEST(AxisSamplePlan, Validation) {
  AxisSamplePlan plan = AxisSamplePlan::from_linspace(kUnitBox, Point::Ones(2), 5);
  plan.positions[0].push_back(1.0);
  EXPECT_THROW(plan.validate(kUnitBox), ContractError);
  plan = AxisSamplePlan::from_linspace(kUnitBox, Point::Ones(2), 5);
  plan.positions[1].push_back(2.0);
  EXPECT_THROW(plan.validate(kUnitBox), ContractError);
  EXPECT_THROW(AxisSamplePlan::from_linspace(kUnitBox, Point::Ones(3), 5), ContractError);
}

TEST(OnAxisRegression, ExactOnSeparableAxisLinearFunction) {
  const auto f = [](ConstPointRef x) { return (1.0 + 0.5 * (x[0] - 1.0)) * (1.0 - 0.3 * (x[1] - 1.0)); };
  const OnAxisRegression oar(f, AxisSamplePlan::from_linspace(kUnitBox, Point::Ones(2), 5));
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const Point x = testing::random_point(rng, 2, 0.5, 1.5);
    EXPECT_NEAR(oar.predict(x), f(x), 1e-12);
  }
}

TEST(OnAxisRegression, InterpolatesAxisNodesAndMissesCrossTerms) {
  const auto f = [](ConstPointRef x) { return 1.0 + (x[0] - 1.0) * (x[1] - 1.0); };
  const OnAxisRegression oar(f, AxisSamplePlan::from_linspace(kUnitBox, Point::Ones(2), 5));
  // On the axes the product model is exact; off the axes the cross term is
  // invisible to it.
  EXPECT_NEAR(oar.predict(Eigen::Vector2d(1.25, 1.0)), 1.0, 1e-14);
  EXPECT_NEAR(oar.predict(Eigen::Vector2d(1.5, 1.5)), 1.0, 1e-14);
  EXPECT_NEAR(f(Eigen::Vector2d(1.5, 1.5)), 1.25, 1e-14);
  // Linear between nodes.
  const auto g = [](ConstPointRef x) { return std::exp(x[0] - 1.0); };
  const OnAxisRegression og(g, AxisSamplePlan::from_linspace(kUnitBox, Point::Ones(2), 3));
  EXPECT_NEAR(og.axis_value(0, 1.25), 0.5 * (1.0 + std::exp(0.5)), 1e-14);
}

TEST(OnAxisRegression, RefusesToExtrapolate) {
  AxisSamplePlan plan;
  plan.center = Point::Ones(2);
  plan.positions = {{0.75, 1.25}, {0.5, 1.5}};
  const OnAxisRegression oar([](ConstPointRef) { return 1.0; }, plan);
  EXPECT_THROW(oar.predict(Eigen::Vector2d(1.4, 1.0)), ExtrapolationError);
  EXPECT_NO_THROW(oar.predict(Eigen::Vector2d(1.25, 0.5)));
  EXPECT_THROW(oar.predict(Point::Ones(3)), ContractError);
}

Oracle quad_oracle() {
  return [](ConstPointRef x) {
    return Observation{x.squaredNorm(), Eigen::VectorXd(2.0 * x)};
  };
}

GpModel start_model(bool grad) {
  TrainingSet t;
  t.inputs = PointSet(1, 2);
  t.inputs << 1.0, 1.0;
  t.outputs = Eigen::VectorXd::Constant(1, 2.0);
  if (grad) t.gradients = PointSet::Constant(1, 2, 2.0);
  t.noise_var = 1e-8;
  t.grad_noise_var = 1e-8;
  return condition(t, KernelHyper::isotropic(1.0, 0.4, 2));
}

TEST(RandomSampling, SeededInBoxAndRecorded) {
  const PointSet test = uniform_grid(kUnitBox, 6);
  Eigen::VectorXd truth(test.rows());
  for (Eigen::Index i = 0; i < test.rows(); ++i) truth[i] = test.row(i).squaredNorm();
  for (bool grad : {false, true}) {
    const RunResult a = random_sampling_run(start_model(grad), quad_oracle(), 8, kUnitBox, 3, test, truth);
    const RunResult b = random_sampling_run(start_model(grad), quad_oracle(), 8, kUnitBox, 3, test, truth);
    const RunResult c = random_sampling_run(start_model(grad), quad_oracle(), 8, kUnitBox, 4, test, truth);
    ASSERT_EQ(a.history.records.size(), 8u);
    EXPECT_EQ(a.model.training().size(), 9);
    for (std::size_t i = 0; i < 8; ++i) {
      EXPECT_TRUE(kUnitBox.contains(a.history.records[i].x));
      EXPECT_EQ(a.history.records[i].x, b.history.records[i].x);
      EXPECT_TRUE(std::isnan(a.history.records[i].utility));
    }
    EXPECT_NE(a.history.records[0].x, c.history.records[0].x);
  }
}

TEST(GridSampling, SizesAndDuplicateDropping) {
  const PointSet test = uniform_grid(kUnitBox, 6);
  Eigen::VectorXd truth(test.rows());
  for (Eigen::Index i = 0; i < test.rows(); ++i) truth[i] = test.row(i).squaredNorm();
  const GridRunResult r = grid_sampling_run(start_model(true), quad_oracle(), {2, 3, 4}, kUnitBox,
                                            test, truth);
  ASSERT_EQ(r.history.records.size(), 3u);
  EXPECT_EQ(r.history.records[0].iteration, 4);
  // The 3x3 grid contains the initial centre point.
  EXPECT_EQ(r.history.records[1].iteration, 8);
  EXPECT_EQ(r.history.records[2].iteration, 16);
  EXPECT_EQ(r.history.notes.size(), 1u);
  EXPECT_EQ(r.models[1].training().size(), 9);
  EXPECT_LT(r.history.records[2].trace, r.history.records[0].trace);

  EXPECT_THROW(grid_sampling_run(start_model(false), quad_oracle(), {3, 2}, kUnitBox, test, truth),
               ContractError);
  EXPECT_THROW(grid_sampling_run(start_model(false), quad_oracle(), {1}, kUnitBox, test, truth),
               ContractError);
}

}  // namespace
}  // namespace gpsys
