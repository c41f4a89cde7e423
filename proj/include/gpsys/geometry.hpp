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
#include <random>
#include <vector>

#include <Eigen/Core>

namespace gpsys {

using Point = Eigen::VectorXd;
using ConstPointRef = Eigen::Ref<const Eigen::VectorXd>;
// One point per row, so a row is a contiguous Point.
using PointSet = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Axis-aligned input domain, lo < hi on every axis.
struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  static Box cube(int dim, double lo, double hi);

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(ConstPointRef x, double tol = 0.0) const;
  Point clip(ConstPointRef x) const;
  void validate() const;
};

std::vector<double> linspace(double lo, double hi, int n);

// n^D points including the box endpoints, last axis varying fastest.
PointSet uniform_grid(const Box& box, int n);

PointSet stack_points(const std::vector<Point>& points);

// Independent, reproducible generator for a (seed, purpose, index) triple.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0);

PointSet uniform_points(const Box& box, int n, std::mt19937_64& rng);

}  // namespace gpsys
