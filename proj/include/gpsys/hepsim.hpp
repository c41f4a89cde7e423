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

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "gpsys/geometry.hpp"
#include "gpsys/history.hpp"

namespace gpsys::hep {

struct Jet {
  double pt = 0.0;   // GeV
  double eta = 0.0;
  double phi = 0.0;  // [0, 2 pi)

  double px() const;
  double py() const;
};

// Three jets, hardest first.
struct Event {
  std::array<Jet, 3> jets;

  // |sum_{i=2,3} pT_i eta_i / sum_{i=2,3} pT_i|
  double subleading_abs_eta() const;
  void validate() const;
};

// Knobs of the synthetic three-jet population. The leading jet pT is
// leading_pt_min + Exp(leading_pt_scale). Jets 2 and 3 share the recoil
// R = -p1 + m, where the imbalance m has a uniform direction and a magnitude
// drawn from Exp(imbalance_scale), or with probability tail_fraction from
// Exp(tail_scale) (m is the MET at unit jet energy scales): jet 2 takes a
// uniform fraction in [split_lo, split_hi] of R along R plus a transverse kick
// of relative size N(0, kt_sigma); jet 3 takes the rest.
struct GeneratorParams {
  double leading_pt_min = 100.0;
  double leading_pt_scale = 120.0;
  double leading_pt_max = 1000.0;
  double split_lo = 0.5;
  double split_hi = 0.95;
  double kt_sigma = 0.2;
  double imbalance_scale = 15.0;
  double tail_fraction = 0.2;
  double tail_scale = 150.0;
  double third_pt_min = 10.0;
  double eta_sigma = 1.2;
  double eta_max = 2.5;

  void validate() const;
};

class EventSet {
 public:
  explicit EventSet(std::vector<Event> events);

  std::size_t size() const { return events_.size(); }
  const std::vector<Event>& events() const { return events_; }
  const Event& operator[](std::size_t i) const { return events_[i]; }

  // Column caches used by the efficiency loops.
  const std::vector<double>& pt1() const { return pt1_; }
  const std::vector<double>& pt2() const { return pt2_; }
  const std::vector<double>& px1() const { return px1_; }
  const std::vector<double>& py1() const { return py1_; }
  const std::vector<double>& px23() const { return px23_; }
  const std::vector<double>& py23() const { return py23_; }
  const std::vector<double>& abs_eta1() const { return abs_eta1_; }
  const std::vector<double>& abs_eta23() const { return abs_eta23_; }

  // event_id,jet_index,pt_gev,eta,phi with jet_index 1..3.
  void write_csv(std::ostream& out) const;
  static EventSet read_csv(std::istream& in);

 private:
  std::vector<Event> events_;
  std::vector<double> pt1_, pt2_, px1_, py1_, px23_, py23_, abs_eta1_, abs_eta23_;
};

EventSet generate_events(int n, std::uint64_t seed, const GeneratorParams& params = {});

struct CutSpec {
  double pt1_threshold = 200.0;  // pass if pT1 / nu1 above
  double pt2_threshold = 200.0;  // pass if pT2 / nu23 below
  double met_threshold = 50.0;   // count if MET below
  double steepness = 0.1;        // |a| of the momentum and MET sigmoids, 1/GeV
  double eta_steepness = 20.0;   // |a| of the central/outer mixing sigmoid
  double eta_boundary = 1.0;

  void validate() const;
};

enum class ScaleMode { Hard, Smooth };

// Per-event jet energy scales: one for j1, one shared by j2 and j3.
struct EffectiveScales {
  double leading = 1.0;
  double subleading = 1.0;
};

// 1 / (1 + exp(-a (x - c))), evaluated without overflow.
double sigmoid(double x, double a, double c);

// 2D nuisance point: (nu1, nu23). 4D: (nu1_central, nu1_outer,
// nu23_central, nu23_outer).
EffectiveScales effective_scales(const Event& e, ConstPointRef nu4, ScaleMode mode,
                                 const CutSpec& cuts = {});
EffectiveScales effective_scales_2d(ConstPointRef nu2);

double met(const Event& e, const EffectiveScales& scales);
double met(const Event& e, ConstPointRef nu, const CutSpec& cuts = {});

double efficiency_hard(const EventSet& events, ConstPointRef nu, const CutSpec& cuts = {});
double efficiency_smooth(const EventSet& events, ConstPointRef nu, const CutSpec& cuts = {});

struct SmoothEfficiency {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

// Smooth efficiency and its exact gradient in nu.
SmoothEfficiency efficiency_smooth_with_gradient(const EventSet& events, ConstPointRef nu,
                                                 const CutSpec& cuts = {});
Eigen::VectorXd efficiency_grad(const EventSet& events, ConstPointRef nu, const CutSpec& cuts = {});

// Efficiency normalized by its hard-cut value at the all-ones point. Values
// use hard cuts; gradients come from the sigmoid-smoothed surrogate divided by
// the same hard central value.
class NormalizedEfficiency {
 public:
  NormalizedEfficiency(std::shared_ptr<const EventSet> events, CutSpec cuts, int dim);

  int dim() const { return dim_; }
  double central() const { return central_; }
  const CutSpec& cuts() const { return cuts_; }
  const EventSet& events() const { return *events_; }

  double value(ConstPointRef nu) const;
  Eigen::VectorXd gradient(ConstPointRef nu) const;
  Observation operator()(ConstPointRef nu) const;

 private:
  std::shared_ptr<const EventSet> events_;
  CutSpec cuts_;
  int dim_;
  double central_;
};

// y = x cos x and dy/dx.
struct ToyValue {
  double y = 0.0;
  double dy = 0.0;
};
ToyValue toy1d(double x);

}  // namespace gpsys::hep
