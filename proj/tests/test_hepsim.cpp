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

#include <chrono>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "gpsys/errors.hpp"
#include "gpsys/hepsim.hpp"
#include "oracles.hpp"

namespace gpsys::hep {
namespace {

constexpr double kPi = std::numbers::pi;

Event make_event(std::array<Jet, 3> jets) {
  Event e;
  e.jets = jets;
  return e;
}

const EventSet& shared_events() {
  static const EventSet events = generate_events(30000, 1);
  return events;
}

TEST(Met, HandValues) {
  const Event e = make_event({Jet{300.0, 0.2, 0.0}, Jet{100.0, -0.4, kPi / 2}, Jet{50.0, 1.5, kPi}});
  EXPECT_NEAR(met(e, EffectiveScales{1.0, 1.0}), std::hypot(250.0, 100.0), 1e-10);
  EXPECT_NEAR(met(e, Eigen::Vector2d(1.5, 0.5)), std::hypot(100.0, 200.0), 1e-10);
  // |eta1| < 1 uses the central leading scale; the pT-weighted subleading eta
  // is (100 * -0.4 + 50 * 1.5) / 150 = 0.233, also central.
  const Eigen::Vector4d nu(1.5, 9.0, 0.5, 9.0);
  EXPECT_NEAR(met(e, nu), std::hypot(100.0, 200.0), 1e-10);
  EXPECT_NEAR(e.subleading_abs_eta(), 35.0 / 150.0, 1e-15);
}

TEST(Met, HomogeneousInTheScales) {
  const EventSet& events = shared_events();
  for (std::size_t i = 0; i < 20; ++i) {
    const double base = met(events[i], EffectiveScales{1.1, 0.9});
    EXPECT_NEAR(met(events[i], EffectiveScales{2.2, 1.8}), base / 2.0, 1e-9);
  }
  EXPECT_THROW(met(events[0], EffectiveScales{0.0, 1.0}), ContractError);
}

TEST(Sigmoid, ValuesLimitsAndStability) {
  EXPECT_DOUBLE_EQ(sigmoid(200.0, 0.1, 200.0), 0.5);
  EXPECT_NEAR(sigmoid(210.0, 0.1, 200.0), 1.0 / (1.0 + std::exp(-1.0)), 1e-15);
  EXPECT_NEAR(sigmoid(210.0, -0.1, 200.0), 1.0 / (1.0 + std::exp(1.0)), 1e-15);
  EXPECT_EQ(sigmoid(1e6, 1.0, 0.0), 1.0);
  EXPECT_EQ(sigmoid(-1e6, 1.0, 0.0), 0.0);
  EXPECT_FALSE(std::isnan(sigmoid(-1e308, 10.0, 0.0)));
  for (double x : {-3.0, 0.5, 7.0}) {
    EXPECT_NEAR(sigmoid(x, 2.0, 1.0) + sigmoid(x, -2.0, 1.0), 1.0, 1e-15);
  }
}

TEST(EffectiveScales, HardAndSmoothMixing) {
  const CutSpec cuts;
  const Eigen::Vector4d nu(0.8, 1.2, 0.9, 1.4);
  const Event central = make_event({Jet{300, 0.1, 0}, Jet{200, 0.2, 1}, Jet{50, -0.3, 2}});
  const Event outer = make_event({Jet{300, -2.0, 0}, Jet{200, 1.8, 1}, Jet{50, 1.6, 2}});
  EffectiveScales s = effective_scales(central, nu, ScaleMode::Hard, cuts);
  EXPECT_EQ(s.leading, 0.8);
  EXPECT_EQ(s.subleading, 0.9);
  s = effective_scales(outer, nu, ScaleMode::Hard, cuts);
  EXPECT_EQ(s.leading, 1.2);
  EXPECT_EQ(s.subleading, 1.4);
  // Smooth weights far from the boundary reproduce the hard assignment.
  s = effective_scales(outer, nu, ScaleMode::Smooth, cuts);
  EXPECT_NEAR(s.leading, 1.2, 1e-6);
  // On the boundary the two scales mix evenly.
  const Event edge = make_event({Jet{300, 1.0, 0}, Jet{200, 1.0, 1}, Jet{50, 1.0, 2}});
  s = effective_scales(edge, nu, ScaleMode::Smooth, cuts);
  EXPECT_NEAR(s.leading, 1.0, 1e-15);
  EXPECT_NEAR(s.subleading, 1.15, 1e-15);
  EXPECT_THROW(effective_scales(edge, Eigen::Vector2d(1, 1), ScaleMode::Hard, cuts), ContractError);
}

// Ten events, pass/fail worked out by hand at nu = (1, 1) and nu = (1.25, 0.8).
EventSet hand_events() {
  std::vector<Event> ev;
  auto add = [&](double pt1, double pt2, double pt3, double phi2, double phi3) {
    ev.push_back(make_event({Jet{pt1, 0.0, 0.0}, Jet{pt2, 0.0, phi2}, Jet{pt3, 0.0, phi3}}));
  };
  add(300, 190, 100, kPi, kPi);              // MET = 10
  add(300, 150, 140, kPi, kPi);              // MET = 10
  add(300, 180, 60, kPi, kPi);               // MET = 60
  add(250, 199, 45, kPi, kPi);               // MET = 6
  add(190, 150, 30, kPi, kPi);               // fails pT1 at nu1 = 1
  add(400, 250, 140, kPi, kPi);              // fails pT2 at nu23 = 1
  add(220, 120, 90, kPi, kPi);               // MET = 10
  add(500, 190, 180, kPi, kPi);              // MET = 130
  add(260, 120, 100, 0.75 * kPi, 1.25 * kPi);  // MET ~ 105
  add(210, 100, 80, kPi, kPi);               // MET = 30
  return EventSet(std::move(ev));
}

// Direct re-implementation of the hard selection from jet kinematics.
double count_efficiency(const EventSet& events, double nu1, double nu23, const CutSpec& cuts) {
  int pass = 0, low = 0;
  for (const Event& e : events.events()) {
    if (!(e.jets[0].pt / nu1 > cuts.pt1_threshold && e.jets[1].pt / nu23 < cuts.pt2_threshold)) continue;
    ++pass;
    double x = 0, y = 0;
    for (int j = 0; j < 3; ++j) {
      const double s = j == 0 ? nu1 : nu23;
      x += e.jets[j].pt * std::cos(e.jets[j].phi) / s;
      y += e.jets[j].pt * std::sin(e.jets[j].phi) / s;
    }
    if (std::hypot(x, y) < cuts.met_threshold) ++low;
  }
  return static_cast<double>(low) / pass;
}

TEST(EfficiencyHard, HandCountedEvents) {
  const EventSet events = hand_events();
  const CutSpec cuts;
  // nu = (1, 1): events 0-3, 6-9 pass (8); MET < 50 for 0, 1, 3, 6, 9 (5).
  EXPECT_DOUBLE_EQ(efficiency_hard(events, Eigen::Vector2d(1, 1), cuts), 5.0 / 8.0);
  EXPECT_DOUBLE_EQ(count_efficiency(events, 1, 1, cuts), 5.0 / 8.0);
  for (const auto& nu : {Eigen::Vector2d(1.25, 0.8), Eigen::Vector2d(0.9, 1.3), Eigen::Vector2d(1.05, 1.05)}) {
    EXPECT_DOUBLE_EQ(efficiency_hard(events, nu, cuts), count_efficiency(events, nu[0], nu[1], cuts));
  }
  EXPECT_THROW(efficiency_hard(events, Eigen::Vector2d(5.0, 1.0), cuts), EmptySelectionError);
  EXPECT_THROW(efficiency_hard(events, Eigen::Vector3d(1, 1, 1), cuts), ContractError);
  EXPECT_THROW(efficiency_hard(events, Eigen::Vector2d(0, 1), cuts), ContractError);
}

TEST(EfficiencySmooth, ApproachesHardForSteepSigmoids) {
  const EventSet& events = shared_events();
  CutSpec steep;
  steep.steepness = 5.0;
  for (double a : {0.7, 1.0, 1.3}) {
    for (double b : {0.6, 1.0, 1.4}) {
      const Eigen::Vector2d nu(a, b);
      EXPECT_NEAR(efficiency_smooth(events, nu, steep), efficiency_hard(events, nu, steep), 0.02);
    }
  }
}

class SmoothGradient : public ::testing::TestWithParam<int> {};

TEST_P(SmoothGradient, MatchesFiniteDifferences) {
  const int dim = GetParam();
  const EventSet events = generate_events(3000, 7);
  const CutSpec cuts;
  std::mt19937_64 rng(dim);
  for (int trial = 0; trial < 4; ++trial) {
    const Point nu = testing::random_point(rng, dim, 0.6, 1.4);
    const SmoothEfficiency s = efficiency_smooth_with_gradient(events, nu, cuts);
    EXPECT_NEAR(s.value, efficiency_smooth(events, nu, cuts), 1e-13);
    for (int d = 0; d < dim; ++d) {
      const double fd = testing::richardson(
          [&](double h) {
            Point p = nu;
            p[d] += h;
            return efficiency_smooth(events, p, cuts);
          },
          1e-4);
      EXPECT_NEAR(s.gradient[d], fd, 1e-5) << "axis " << d;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Dims, SmoothGradient, ::testing::Values(2, 4));

TEST(SmoothGradient, VanishesWhereSelectionSaturates) {
  // One event deep inside every cut: all sigmoids saturate, gradient ~ 0.
  const EventSet one(std::vector<Event>{
      make_event({Jet{900, 0.0, 0.0}, Jet{20, 0.0, kPi}, Jet{15, 0.0, kPi}})});
  // MET at nu = 1 is 865, far above the threshold.
  const SmoothEfficiency s = efficiency_smooth_with_gradient(one, Eigen::Vector2d(1, 1));
  EXPECT_LT(s.gradient.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(s.value, 1e-30);
}

TEST(SmoothGradient, RotatedCopyLeavesValueAndGradientUnchanged) {
  // An event and its copy rotated by pi share every scalar observable, so
  // the gradient equals that of the single event.
  Event e = make_event({Jet{260, 0.3, 0.2}, Jet{150, 0.1, 3.0}, Jet{90, -0.2, 3.6}});
  Event r = e;
  for (Jet& j : r.jets) j.phi = std::fmod(j.phi + kPi, 2 * kPi);
  const Eigen::Vector2d nu(1.05, 0.95);
  const auto single = efficiency_smooth_with_gradient(EventSet({e}), nu);
  const auto pair = efficiency_smooth_with_gradient(EventSet({e, r}), nu);
  EXPECT_NEAR(single.value, pair.value, 1e-14);
  EXPECT_LT((single.gradient - pair.gradient).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(NormalizedEfficiency, CentreIsOneAndGradientScales) {
  auto events = std::make_shared<const EventSet>(generate_events(5000, 3));
  for (int dim : {2, 4}) {
    const NormalizedEfficiency eff(events, CutSpec{}, dim);
    EXPECT_DOUBLE_EQ(eff.value(Eigen::VectorXd::Ones(dim)), 1.0);
    const Point nu = Eigen::VectorXd::Constant(dim, 1.1);
    EXPECT_LT((eff.gradient(nu) - efficiency_grad(*events, nu) / eff.central()).cwiseAbs().maxCoeff(),
              1e-15);
    const Observation obs = eff(nu);
    EXPECT_EQ(obs.value, eff.value(nu));
    ASSERT_TRUE(obs.gradient);
  }
  EXPECT_THROW(NormalizedEfficiency(events, CutSpec{}, 3), ContractError);
}

TEST(EfficiencyHard, FourDimensionalReducesToTwo) {
  const EventSet& events = shared_events();
  for (double a : {0.6, 1.0, 1.4}) {
    for (double b : {0.7, 1.3}) {
      EXPECT_EQ(efficiency_hard(events, Eigen::Vector4d(a, a, b, b)),
                efficiency_hard(events, Eigen::Vector2d(a, b)));
    }
  }
}

TEST(Generator, DeterministicAndFast) {
  const auto start = std::chrono::steady_clock::now();
  const EventSet a = generate_events(30000, 5);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  EXPECT_LT(elapsed.count(), 1.0);
  const EventSet b = generate_events(30000, 5);
  const EventSet c = generate_events(100, 6);
  ASSERT_EQ(a.size(), 30000u);
  for (std::size_t i = 0; i < 100; ++i) {
    EXPECT_EQ(a[i].jets[0].pt, b[i].jets[0].pt);
    EXPECT_EQ(a[i].jets[2].phi, b[i].jets[2].phi);
  }
  EXPECT_NE(a[0].jets[0].pt, c[0].jets[0].pt);
}

TEST(Generator, PopulationStraddlesTheCuts) {
  const EventSet& events = shared_events();
  const CutSpec cuts;
  int low_met = 0, high_met = 0, below = 0, above = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Event& e = events[i];
    e.validate();
    EXPECT_LE(e.jets[0].pt, 1000.0);
    EXPECT_GE(e.jets[2].pt, 10.0);
    for (const Jet& j : e.jets) EXPECT_LE(std::abs(j.eta), 2.5);
    (met(e, EffectiveScales{}) < cuts.met_threshold ? low_met : high_met)++;
    (e.jets[0].pt < 200.0 ? below : above)++;
  }
  EXPECT_GT(low_met, 1000);
  EXPECT_GT(high_met, 1000);
  EXPECT_GT(below, 1000);
  EXPECT_GT(above, 1000);
}

TEST(Generator, RejectsBadParameters) {
  GeneratorParams p;
  p.split_lo = 0.4;
  EXPECT_THROW(generate_events(10, 0, p), ContractError);
  p = GeneratorParams{};
  p.tail_fraction = 1.5;
  EXPECT_THROW(generate_events(10, 0, p), ContractError);
  EXPECT_THROW(generate_events(0, 0), ContractError);
}

TEST(EventSet, CsvRoundTrip) {
  const EventSet a = generate_events(50, 2);
  std::stringstream buf;
  a.write_csv(buf);
  const EventSet b = EventSet::read_csv(buf);
  ASSERT_EQ(b.size(), 50u);
  for (std::size_t i = 0; i < 50; ++i) {
    for (int j = 0; j < 3; ++j) {
      EXPECT_EQ(a[i].jets[j].pt, b[i].jets[j].pt);
      EXPECT_EQ(a[i].jets[j].eta, b[i].jets[j].eta);
      EXPECT_EQ(a[i].jets[j].phi, b[i].jets[j].phi);
    }
  }
  std::stringstream bad("event_id,jet_index,pt_gev,eta,phi\n0,2,100,0,0\n");
  EXPECT_THROW(EventSet::read_csv(bad), ContractError);
  std::stringstream header("id,pt\n");
  EXPECT_THROW(EventSet::read_csv(header), ContractError);
}

TEST(Toy1d, ValueAndDerivative) {
  EXPECT_DOUBLE_EQ(toy1d(0.0).y, 0.0);
  EXPECT_DOUBLE_EQ(toy1d(0.0).dy, 1.0);
  EXPECT_NEAR(toy1d(kPi).y, -kPi, 1e-15);
  const double fd = testing::richardson([](double h) { return toy1d(2.3 + h).y; }, 1e-3);
  EXPECT_NEAR(toy1d(2.3).dy, fd, 1e-10);
}

}  // namespace
}  // namespace gpsys::hep
