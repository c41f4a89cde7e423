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

#include "gpsys/hepsim.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "gpsys/csv.hpp"
#include "gpsys/errors.hpp"

namespace gpsys::hep {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_phi(double phi) {
  double out = std::fmod(phi, kTwoPi);
  if (out < 0.0) out += kTwoPi;
  if (out >= kTwoPi) out = 0.0;
  return out;
}

void check_nu(ConstPointRef nu) {
  if (nu.size() != 2 && nu.size() != 4) {
    throw ContractError("nuisance point must have 2 or 4 components, got " +
                        std::to_string(nu.size()));
  }
  for (Eigen::Index d = 0; d < nu.size(); ++d) {
    if (!(nu[d] > 0.0)) throw ContractError("jet energy scales must be > 0");
  }
}

// S(z) and S(-z) for z = a (x - c); S(z) S(-z) is the derivative factor.
struct SigmoidPair {
  double s;
  double complement;
};

SigmoidPair sigmoid_pair(double x, double a, double c) {
  return {sigmoid(x, a, c), sigmoid(x, -a, c)};
}

// Per-event scales plus the smooth mixing weights toward the outer scale.
struct ResolvedScales {
  EffectiveScales scales;
  double outer_weight1 = 0.0;
  double outer_weight23 = 0.0;
};

ResolvedScales resolve(const EventSet& events, std::size_t i, ConstPointRef nu, ScaleMode mode,
                       const CutSpec& cuts) {
  if (nu.size() == 2) return {{nu[0], nu[1]}, 0.0, 0.0};
  const double eta1 = events.abs_eta1()[i];
  const double eta23 = events.abs_eta23()[i];
  if (mode == ScaleMode::Hard) {
    return {{eta1 < cuts.eta_boundary ? nu[0] : nu[1], eta23 < cuts.eta_boundary ? nu[2] : nu[3]},
            0.0,
            0.0};
  }
  const double m1 = sigmoid(eta1, cuts.eta_steepness, cuts.eta_boundary);
  const double m23 = sigmoid(eta23, cuts.eta_steepness, cuts.eta_boundary);
  return {{(1.0 - m1) * nu[0] + m1 * nu[1], (1.0 - m23) * nu[2] + m23 * nu[3]}, m1, m23};
}

double event_met(const EventSet& events, std::size_t i, const EffectiveScales& s) {
  const double x = events.px1()[i] / s.leading + events.px23()[i] / s.subleading;
  const double y = events.py1()[i] / s.leading + events.py23()[i] / s.subleading;
  return std::hypot(x, y);
}

}  // namespace

double Jet::px() const { return pt * std::cos(phi); }
double Jet::py() const { return pt * std::sin(phi); }

double Event::subleading_abs_eta() const {
  const double num = jets[1].pt * jets[1].eta + jets[2].pt * jets[2].eta;
  return std::abs(num / (jets[1].pt + jets[2].pt));
}

void Event::validate() const {
  if (!(jets[2].pt > 0.0) || jets[1].pt > jets[0].pt || jets[2].pt > jets[1].pt) {
    throw ContractError("jets must satisfy pT1 >= pT2 >= pT3 > 0");
  }
  for (const Jet& j : jets) {
    if (!(j.phi >= 0.0 && j.phi < kTwoPi)) throw ContractError("jet phi must lie in [0, 2 pi)");
    if (!std::isfinite(j.eta)) throw ContractError("jet eta must be finite");
  }
}

void GeneratorParams::validate() const {
  if (!(leading_pt_min > 0.0 && leading_pt_scale > 0.0 && leading_pt_max > leading_pt_min)) {
    throw ContractError("leading pT parameters must be positive with max > min");
  }
  if (!(0.5 <= split_lo && split_lo < split_hi && split_hi < 1.0)) {
    throw ContractError("recoil split must satisfy 0.5 <= lo < hi < 1");
  }
  if (!(tail_fraction >= 0.0 && tail_fraction <= 1.0)) {
    throw ContractError("tail fraction must lie in [0, 1]");
  }
  if (!(kt_sigma >= 0.0 && imbalance_scale > 0.0 && tail_scale > 0.0 && third_pt_min > 0.0 &&
        eta_sigma > 0.0 && eta_max > 0.0)) {
    throw ContractError("generator spreads must be positive");
  }
}

EventSet::EventSet(std::vector<Event> events) : events_(std::move(events)) {
  const std::size_t n = events_.size();
  for (auto* col : {&pt1_, &pt2_, &px1_, &py1_, &px23_, &py23_, &abs_eta1_, &abs_eta23_}) {
    col->resize(n);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Event& e = events_[i];
    e.validate();
    pt1_[i] = e.jets[0].pt;
    pt2_[i] = e.jets[1].pt;
    px1_[i] = e.jets[0].px();
    py1_[i] = e.jets[0].py();
    px23_[i] = e.jets[1].px() + e.jets[2].px();
    py23_[i] = e.jets[1].py() + e.jets[2].py();
    abs_eta1_[i] = std::abs(e.jets[0].eta);
    abs_eta23_[i] = e.subleading_abs_eta();
  }
}

void EventSet::write_csv(std::ostream& out) const {
  out << "event_id,jet_index,pt_gev,eta,phi\n";
  for (std::size_t i = 0; i < events_.size(); ++i) {
    for (int j = 0; j < 3; ++j) {
      const Jet& jet = events_[i].jets[j];
      out << i << ',' << j + 1 << ',' << format_double(jet.pt) << ',' << format_double(jet.eta)
          << ',' << format_double(jet.phi) << '\n';
    }
  }
}

EventSet EventSet::read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "event_id,jet_index,pt_gev,eta,phi") {
    throw ContractError("event CSV header mismatch");
  }
  std::vector<Event> events;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != 5) {
      throw ContractError("event CSV line " + std::to_string(line_no) + ": expected 5 fields");
    }
    const std::size_t id = std::stoul(fields[0]);
    const int jet_index = std::stoi(fields[1]);
    if (id != events.size() - (jet_index == 1 ? 0 : 1) || jet_index < 1 || jet_index > 3) {
      throw ContractError("event CSV line " + std::to_string(line_no) + ": rows out of order");
    }
    if (jet_index == 1) events.emplace_back();
    events.back().jets[jet_index - 1] = {parse_double(fields[2]), parse_double(fields[3]),
                                         parse_double(fields[4])};
  }
  return EventSet(std::move(events));
}

EventSet generate_events(int n, std::uint64_t seed, const GeneratorParams& params) {
  if (n < 1) throw ContractError("event count must be >= 1");
  params.validate();
  auto rng = make_rng(seed, 0x6576);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> leading(1.0 / params.leading_pt_scale);
  std::exponential_distribution<double> imbalance(1.0 / params.imbalance_scale);
  std::exponential_distribution<double> tail(1.0 / params.tail_scale);
  std::normal_distribution<double> kick(0.0, params.kt_sigma);
  std::normal_distribution<double> eta(0.0, params.eta_sigma);

  auto draw_eta = [&] {
    double v;
    do {
      v = eta(rng);
    } while (std::abs(v) > params.eta_max);
    return v;
  };

  std::vector<Event> events;
  events.reserve(n);
  while (static_cast<int>(events.size()) < n) {
    const double pt1 = params.leading_pt_min + leading(rng);
    const double phi1 = kTwoPi * unit(rng);
    const double met0 = unit(rng) < params.tail_fraction ? tail(rng) : imbalance(rng);
    const double phi_met = kTwoPi * unit(rng);
    const double rx = -pt1 * std::cos(phi1) + met0 * std::cos(phi_met);
    const double ry = -pt1 * std::sin(phi1) + met0 * std::sin(phi_met);
    const double f = params.split_lo + (params.split_hi - params.split_lo) * unit(rng);
    const double k = kick(rng);
    // Jet 2 along the recoil plus a perpendicular kick, jet 3 the remainder.
    const double j2x = f * rx - k * ry;
    const double j2y = f * ry + k * rx;
    const Jet jets[3] = {{pt1, 0.0, phi1},
                         {std::hypot(j2x, j2y), 0.0, std::atan2(j2y, j2x)},
                         {std::hypot(rx - j2x, ry - j2y), 0.0, std::atan2(ry - j2y, rx - j2x)}};
    Event e;
    for (int i = 0; i < 3; ++i) e.jets[i] = jets[i];
    std::sort(e.jets.begin(), e.jets.end(), [](const Jet& a, const Jet& b) { return a.pt > b.pt; });
    if (e.jets[0].pt > params.leading_pt_max || e.jets[2].pt < params.third_pt_min) continue;
    for (Jet& j : e.jets) {
      j.eta = draw_eta();
      j.phi = wrap_phi(j.phi);
    }
    events.push_back(e);
  }
  return EventSet(std::move(events));
}

void CutSpec::validate() const {
  if (!(pt1_threshold > 0.0 && pt2_threshold > 0.0 && met_threshold > 0.0)) {
    throw ContractError("cut thresholds must be > 0");
  }
  if (!(steepness > 0.0) || !(eta_steepness > 0.0)) {
    throw ContractError("sigmoid steepness must be > 0");
  }
}

double sigmoid(double x, double a, double c) {
  const double z = a * (x - c);
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double ez = std::exp(z);
  return ez / (1.0 + ez);
}

EffectiveScales effective_scales(const Event& e, ConstPointRef nu4, ScaleMode mode,
                                 const CutSpec& cuts) {
  if (nu4.size() != 4) throw ContractError("effective_scales needs a 4D nuisance point");
  check_nu(nu4);
  const double eta1 = std::abs(e.jets[0].eta);
  const double eta23 = e.subleading_abs_eta();
  if (mode == ScaleMode::Hard) {
    return {eta1 < cuts.eta_boundary ? nu4[0] : nu4[1],
            eta23 < cuts.eta_boundary ? nu4[2] : nu4[3]};
  }
  const double m1 = sigmoid(eta1, cuts.eta_steepness, cuts.eta_boundary);
  const double m23 = sigmoid(eta23, cuts.eta_steepness, cuts.eta_boundary);
  return {(1.0 - m1) * nu4[0] + m1 * nu4[1], (1.0 - m23) * nu4[2] + m23 * nu4[3]};
}

EffectiveScales effective_scales_2d(ConstPointRef nu2) {
  if (nu2.size() != 2) throw ContractError("effective_scales_2d needs a 2D nuisance point");
  check_nu(nu2);
  return {nu2[0], nu2[1]};
}

double met(const Event& e, const EffectiveScales& scales) {
  if (!(scales.leading > 0.0) || !(scales.subleading > 0.0)) {
    throw ContractError("jet energy scales must be > 0");
  }
  const double scale[3] = {scales.leading, scales.subleading, scales.subleading};
  double x = 0.0;
  double y = 0.0;
  for (int i = 0; i < 3; ++i) {
    x += e.jets[i].px() / scale[i];
    y += e.jets[i].py() / scale[i];
  }
  return std::hypot(x, y);
}

double met(const Event& e, ConstPointRef nu, const CutSpec& cuts) {
  check_nu(nu);
  return met(e, nu.size() == 2 ? effective_scales_2d(nu) : effective_scales(e, nu, ScaleMode::Hard, cuts));
}

double efficiency_hard(const EventSet& events, ConstPointRef nu, const CutSpec& cuts) {
  check_nu(nu);
  cuts.validate();
  std::size_t passed = 0;
  std::size_t low_met = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const EffectiveScales s = resolve(events, i, nu, ScaleMode::Hard, cuts).scales;
    if (!(events.pt1()[i] / s.leading > cuts.pt1_threshold)) continue;
    if (!(events.pt2()[i] / s.subleading < cuts.pt2_threshold)) continue;
    ++passed;
    if (event_met(events, i, s) < cuts.met_threshold) ++low_met;
  }
  if (passed == 0) throw EmptySelectionError("no event passes the pT selection");
  return static_cast<double>(low_met) / static_cast<double>(passed);
}

double efficiency_smooth(const EventSet& events, ConstPointRef nu, const CutSpec& cuts) {
  check_nu(nu);
  cuts.validate();
  const double a = cuts.steepness;
  double pass_sum = 0.0;
  double met_sum = 0.0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const EffectiveScales s = resolve(events, i, nu, ScaleMode::Smooth, cuts).scales;
    const double wp = sigmoid(events.pt1()[i] / s.leading, a, cuts.pt1_threshold) *
                      sigmoid(events.pt2()[i] / s.subleading, -a, cuts.pt2_threshold);
    pass_sum += wp;
    met_sum += wp * sigmoid(event_met(events, i, s), -a, cuts.met_threshold);
  }
  if (!(pass_sum > 0.0)) throw EmptySelectionError("smooth selection weight underflowed");
  return met_sum / pass_sum;
}

SmoothEfficiency efficiency_smooth_with_gradient(const EventSet& events, ConstPointRef nu,
                                                 const CutSpec& cuts) {
  check_nu(nu);
  cuts.validate();
  const double a = cuts.steepness;
  const Eigen::Index dim = nu.size();
  double pass_sum = 0.0;
  double met_sum = 0.0;
  Eigen::VectorXd pass_grad = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd met_grad = Eigen::VectorXd::Zero(dim);

  for (std::size_t i = 0; i < events.size(); ++i) {
    const ResolvedScales r = resolve(events, i, nu, ScaleMode::Smooth, cuts);
    const double e1 = r.scales.leading;
    const double e2 = r.scales.subleading;
    const double pt1 = events.pt1()[i];
    const double pt2 = events.pt2()[i];

    const SigmoidPair s1 = sigmoid_pair(pt1 / e1, a, cuts.pt1_threshold);
    const SigmoidPair s2 = sigmoid_pair(pt2 / e2, -a, cuts.pt2_threshold);
    const double wp = s1.s * s2.s;
    // d/de of S(pT/e; +-a, c) = +-a S S(-z) * (-pT / e^2)
    const double dwp_de1 = a * s1.s * s1.complement * (-pt1 / (e1 * e1)) * s2.s;
    const double dwp_de2 = s1.s * (-a) * s2.s * s2.complement * (-pt2 / (e2 * e2));

    const double mx = events.px1()[i] / e1 + events.px23()[i] / e2;
    const double my = events.py1()[i] / e1 + events.py23()[i] / e2;
    const double m = std::hypot(mx, my);
    double dm_de1 = 0.0;
    double dm_de2 = 0.0;
    if (m > 0.0) {
      dm_de1 = -(mx * events.px1()[i] + my * events.py1()[i]) / (e1 * e1 * m);
      dm_de2 = -(mx * events.px23()[i] + my * events.py23()[i]) / (e2 * e2 * m);
    }
    const SigmoidPair sm = sigmoid_pair(m, -a, cuts.met_threshold);
    const double dwm_dm = -a * sm.s * sm.complement;

    const double dw_de1 = dwp_de1 * sm.s + wp * dwm_dm * dm_de1;
    const double dw_de2 = dwp_de2 * sm.s + wp * dwm_dm * dm_de2;

    pass_sum += wp;
    met_sum += wp * sm.s;
    if (dim == 2) {
      pass_grad[0] += dwp_de1;
      pass_grad[1] += dwp_de2;
      met_grad[0] += dw_de1;
      met_grad[1] += dw_de2;
    } else {
      const double m1 = r.outer_weight1;
      const double m23 = r.outer_weight23;
      pass_grad[0] += (1.0 - m1) * dwp_de1;
      pass_grad[1] += m1 * dwp_de1;
      pass_grad[2] += (1.0 - m23) * dwp_de2;
      pass_grad[3] += m23 * dwp_de2;
      met_grad[0] += (1.0 - m1) * dw_de1;
      met_grad[1] += m1 * dw_de1;
      met_grad[2] += (1.0 - m23) * dw_de2;
      met_grad[3] += m23 * dw_de2;
    }
  }
  if (!(pass_sum > 0.0)) throw EmptySelectionError("smooth selection weight underflowed");
  const double value = met_sum / pass_sum;
  return {value, (met_grad - value * pass_grad) / pass_sum};
}

Eigen::VectorXd efficiency_grad(const EventSet& events, ConstPointRef nu, const CutSpec& cuts) {
  return efficiency_smooth_with_gradient(events, nu, cuts).gradient;
}

NormalizedEfficiency::NormalizedEfficiency(std::shared_ptr<const EventSet> events, CutSpec cuts,
                                           int dim)
    : events_(std::move(events)), cuts_(cuts), dim_(dim) {
  if (!events_) throw ContractError("NormalizedEfficiency needs an event set");
  if (dim_ != 2 && dim_ != 4) throw ContractError("efficiency dimension must be 2 or 4");
  cuts_.validate();
  central_ = efficiency_hard(*events_, Eigen::VectorXd::Ones(dim_), cuts_);
  if (!(central_ > 0.0)) throw EmptySelectionError("central efficiency is zero");
}

double NormalizedEfficiency::value(ConstPointRef nu) const {
  return efficiency_hard(*events_, nu, cuts_) / central_;
}

Eigen::VectorXd NormalizedEfficiency::gradient(ConstPointRef nu) const {
  return efficiency_grad(*events_, nu, cuts_) / central_;
}

Observation NormalizedEfficiency::operator()(ConstPointRef nu) const {
  return {value(nu), gradient(nu)};
}

ToyValue toy1d(double x) {
  return {x * std::cos(x), std::cos(x) - x * std::sin(x)};
}

}  // namespace gpsys::hep
