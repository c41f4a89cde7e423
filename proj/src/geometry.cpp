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

#include "gpsys/geometry.hpp"

#include <string>

#include "gpsys/errors.hpp"

namespace gpsys {

Box Box::cube(int dim, double lo, double hi) {
  Box box{Eigen::VectorXd::Constant(dim, lo), Eigen::VectorXd::Constant(dim, hi)};
  box.validate();
  return box;
}

bool Box::contains(ConstPointRef x, double tol) const {
  if (x.size() != lo.size()) return false;
  for (Eigen::Index d = 0; d < x.size(); ++d) {
    if (x[d] < lo[d] - tol || x[d] > hi[d] + tol) return false;
  }
  return true;
}

Point Box::clip(ConstPointRef x) const {
  return x.cwiseMax(lo).cwiseMin(hi);
}

void Box::validate() const {
  if (lo.size() == 0 || lo.size() != hi.size()) {
    throw ContractError("box bounds must be non-empty and of equal dimension");
  }
  for (Eigen::Index d = 0; d < lo.size(); ++d) {
    if (!(lo[d] < hi[d])) {
      throw ContractError("box axis " + std::to_string(d) + " has lo >= hi");
    }
  }
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw ContractError("linspace needs at least one point");
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) out[i] = lo + step * i;
  out[n - 1] = hi;
  return out;
}

PointSet uniform_grid(const Box& box, int n) {
  box.validate();
  if (n < 1) throw ContractError("grid size must be >= 1");
  const int dim = box.dim();
  std::vector<std::vector<double>> axes;
  for (int d = 0; d < dim; ++d) axes.push_back(linspace(box.lo[d], box.hi[d], n));

  Eigen::Index total = 1;
  for (int d = 0; d < dim; ++d) total *= n;
  PointSet grid(total, dim);
  std::vector<int> idx(dim, 0);
  for (Eigen::Index row = 0; row < total; ++row) {
    for (int d = 0; d < dim; ++d) grid(row, d) = axes[d][idx[d]];
    for (int d = dim - 1; d >= 0; --d) {
      if (++idx[d] < n) break;
      idx[d] = 0;
    }
  }
  return grid;
}

PointSet stack_points(const std::vector<Point>& points) {
  if (points.empty()) return PointSet(0, 0);
  PointSet out(static_cast<Eigen::Index>(points.size()), points.front().size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != out.cols()) throw ContractError("points of mixed dimension");
    out.row(static_cast<Eigen::Index>(i)) = points[i].transpose();
  }
  return out;
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

PointSet uniform_points(const Box& box, int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PointSet out(n, box.dim());
  for (int i = 0; i < n; ++i) {
    for (int d = 0; d < box.dim(); ++d) {
      out(i, d) = box.lo[d] + (box.hi[d] - box.lo[d]) * unit(rng);
    }
  }
  return out;
}

}  // namespace gpsys
