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
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "gpsys/compare.hpp"
#include "gpsys/config.hpp"
#include "gpsys/csv.hpp"
#include "gpsys/errors.hpp"

namespace gpsys {
namespace {

ExperimentConfig parse(const std::string& text, const std::vector<std::string>& overrides = {}) {
  std::istringstream in(text);
  return parse_config(in, overrides);
}

TEST(Config, ScenarioSelectsDefaults) {
  const ExperimentConfig c = parse("[experiment]\nscenario = hep2d\n");
  EXPECT_EQ(c.scenario, Scenario::Hep2d);
  EXPECT_EQ(c.dim(), 2);
  EXPECT_EQ(c.iterations, 44);
  EXPECT_EQ(c.seeds.size(), 10u);
  EXPECT_DOUBLE_EQ(c.gamma2, 1.0 / 50.0);
  EXPECT_EQ(parse("[experiment]\nscenario = hep4d\n").dim(), 4);
  EXPECT_EQ(parse("[experiment]\nscenario = toy1d\n").dim(), 1);
}

TEST(Config, ValuesListsAndFractions) {
  const ExperimentConfig c = parse(
      "[experiment]\nscenario = hep2d\nmodels = derivative\nstrategies = bed, grid\n"
      "seeds = 3,4\n[utility]\ngamma2 = 1/10\n[grid]\nsizes = 2,4\n"
      "[physics]\nsteepness = 0.5\n");
  ASSERT_EQ(c.models.size(), 1u);
  EXPECT_EQ(c.models[0], ModelKind::Derivative);
  EXPECT_EQ(c.strategies, (std::vector<Strategy>{Strategy::Bed, Strategy::Grid}));
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{3, 4}));
  EXPECT_DOUBLE_EQ(c.gamma2, 0.1);
  EXPECT_EQ(c.grid_sizes, (std::vector<int>{2, 4}));
  EXPECT_DOUBLE_EQ(c.cuts.steepness, 0.5);
}

TEST(Config, OverridesApplyInOrder) {
  const ExperimentConfig c = parse("[experiment]\nscenario = hep2d\niterations = 10\n",
                                   {"experiment.iterations=5", "kernel.length_scale=0.5",
                                    "experiment.iterations=7"});
  EXPECT_EQ(c.iterations, 7);
  EXPECT_DOUBLE_EQ(c.length_scale, 0.5);
  // An override may switch the scenario and with it the defaults.
  EXPECT_EQ(parse("[experiment]\nscenario = hep2d\n", {"experiment.scenario=toy1d"}).scenario,
            Scenario::Toy1d);
}

TEST(Config, ErrorsNameTheKey) {
  try {
    parse("[experiment]\nscenario = hep3d\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "experiment.scenario");
    EXPECT_NE(std::string(e.what()).find("toy1d, hep2d, hep4d"), std::string::npos);
  }
  try {
    parse("[experiment]\nscenario = toy1d\n[kernel]\nlengthscale = 1\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "kernel.lengthscale");
  }
  try {
    parse("[experiment]\nscenario = toy1d\niterations = 0\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "experiment.iterations");
  }
  EXPECT_THROW(parse("[kernel]\namplitude = 1\n"), ConfigError);
  EXPECT_THROW(parse("[experiment]\nscenario = toy1d\n", {"iterations"}), ConfigError);
  EXPECT_THROW(parse("[experiment]\nscenario = toy1d\n[utility]\ngamma2 = 1/0\n"), ConfigError);
  EXPECT_THROW(parse("[experiment]\nscenario = toy1d\nmodels = fancy\n"), ConfigError);
  EXPECT_THROW(parse("[experiment]\nscenario = hep2d\n[physics]\nsplit_lo = 0.2\n"), ConfigError);
}

TEST(Config, ToIniRoundTrips) {
  for (const char* scenario : {"toy1d", "hep2d", "hep4d"}) {
    ExperimentConfig c = parse(std::string("[experiment]\nscenario = ") + scenario + "\n",
                               {"kernel.amplitude=1/3", "physics.eta_steepness=7.5",
                                "experiment.timing=true"});
    const std::string ini = to_ini(c);
    const ExperimentConfig back = parse(ini);
    EXPECT_EQ(to_ini(back), ini);
    EXPECT_EQ(back.amplitude, c.amplitude);
    EXPECT_EQ(back.cuts.eta_steepness, 7.5);
    EXPECT_TRUE(back.record_timing);
  }
}

TEST(Csv, DoublesRoundTripExactly) {
  for (double v : {0.0, -1.5, 1.0 / 3.0, 1e-300, 6.02214076e23, std::nextafter(1.0, 2.0)}) {
    EXPECT_EQ(parse_double(format_double(v)), v);
  }
  EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "");
  EXPECT_TRUE(std::isnan(parse_double("")));
  EXPECT_THROW(parse_double("1.5x"), ContractError);
  EXPECT_EQ(split_csv_line("a,,b"), (std::vector<std::string>{"a", "", "b"}));
}

ExperimentHistory sample_history(double scale) {
  ExperimentHistory h;
  h.initial_mse = scale;
  h.initial_trace = 2 * scale;
  for (int it = 1; it <= 3; ++it) {
    h.records.push_back({it, Eigen::Vector2d(0.1 * it, 0.2), 1.0, scale / it, 2 * scale / it,
                         0.5, 0.0});
  }
  return h;
}

TEST(Csv, HistoryAndSummary) {
  std::stringstream buf;
  write_history(buf, sample_history(1.0), 2);
  const CsvTable t = read_csv(buf);
  EXPECT_EQ(t.header, history_header(2));
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(parse_double(t.rows[1][t.column("mse")]), 0.5);
  EXPECT_EQ(t.column("nope"), -1);

  const auto rows = summarize({sample_history(1.0), sample_history(3.0)});
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_DOUBLE_EQ(rows[0].mse_mean, 2.0);
  EXPECT_DOUBLE_EQ(rows[0].mse_std, 1.0);
  ExperimentHistory shorter = sample_history(1.0);
  shorter.records.pop_back();
  EXPECT_THROW(summarize({sample_history(1.0), shorter}), ContractError);
}

CurveFile curve(const std::string& label, std::map<int, std::pair<double, double>> points,
                const std::string& schema = "summary") {
  return {label, schema, std::move(points)};
}

TEST(Compare, RanksWithTiesAndAlignsIterations) {
  const Comparison c = compare_curves({curve("a", {{1, {0.3, 3}}, {2, {0.1, 2}}}),
                                       curve("b", {{1, {0.5, 1}}, {4, {0.1, 1}}}),
                                       curve("a", {{2, {0.2, 5}}})});
  ASSERT_EQ(c.ranking.size(), 3u);
  EXPECT_EQ(c.ranking[2].label, "a#2");
  EXPECT_EQ(c.ranking[0].mse_rank, 1);
  EXPECT_EQ(c.ranking[1].mse_rank, 1);
  EXPECT_EQ(c.ranking[2].mse_rank, 3);
  EXPECT_EQ(c.ranking[1].trace_rank, 1);
  EXPECT_EQ(c.ranking[1].final_iteration, 4);
  std::stringstream out;
  write_aligned(out, c);
  EXPECT_EQ(out.str(),
            "iteration,a_mse,a_trace,b_mse,b_trace,a#2_mse,a#2_trace\n"
            "1,0.3,3,0.5,1,,\n"
            "2,0.1,2,,,0.2,5\n"
            "4,,,0.1,1,,\n");
}

TEST(Compare, RejectsMixedSchemasAndSingleFiles) {
  EXPECT_THROW(compare_curves({curve("a", {{1, {1, 1}}})}), ContractError);
  EXPECT_THROW(compare_curves({curve("a", {{1, {1, 1}}}), curve("b", {{1, {1, 1}}}, "history")}),
               ContractError);
}

}  // namespace
}  // namespace gpsys
