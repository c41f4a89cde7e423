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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gpsys/compare.hpp"
#include "gpsys/config.hpp"
#include "gpsys/errors.hpp"
#include "gpsys/experiment.hpp"
#include "gpsys/version.hpp"

namespace {

constexpr int kConfigExit = 1;
constexpr int kRuntimeExit = 2;

int run_command(const std::string& config_path, const std::vector<std::string>& sets,
                const std::string& out_dir, int test_grid, bool print_config) {
  std::vector<std::string> overrides = sets;
  if (!out_dir.empty()) overrides.push_back("experiment.out=" + out_dir);
  if (test_grid > 0) overrides.push_back("experiment.test_grid=" + std::to_string(test_grid));
  const gpsys::ExperimentConfig cfg = gpsys::load_config(config_path, overrides);
  if (print_config) {
    std::cout << gpsys::to_ini(cfg);
    return 0;
  }
  std::cerr << "building " << gpsys::to_string(cfg.scenario) << " problem\n";
  const gpsys::Problem problem = gpsys::make_problem(cfg);
  const gpsys::ExperimentResult result = gpsys::run_experiment(
      cfg, problem, [](const std::string& arm) { std::cerr << "running " << arm << '\n'; });
  gpsys::write_artifacts(cfg.out_dir, cfg, problem, result);
  for (const gpsys::ArmResult& arm : result.arms) {
    const gpsys::SummaryRow& last = arm.summary.back();
    std::cout << arm.name << ": iteration " << last.iteration << " mse "
              << gpsys::format_double(last.mse_mean) << " trace "
              << gpsys::format_double(last.trace_mean) << '\n';
  }
  if (result.on_axis) {
    std::cout << "on_axis: samples " << result.on_axis->samples << " mse "
              << gpsys::format_double(result.on_axis->mse) << '\n';
  }
  return 0;
}

int compare_command(const std::vector<std::string>& files, const std::string& out_path) {
  const gpsys::Comparison c = gpsys::compare_files(files);
  if (out_path.empty()) {
    gpsys::write_aligned(std::cout, c);
    std::cout << '\n';
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw gpsys::Error("cannot write " + out_path);
    gpsys::write_aligned(out, c);
    const std::filesystem::path p(out_path);
    std::ofstream rank(p.parent_path() / (p.stem().string() + "_ranking.csv"), std::ios::binary);
    gpsys::write_ranking(rank, c);
  }
  gpsys::write_ranking(std::cout, c);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential design of Gaussian process surrogates"};
  app.set_version_flag("--version", std::string(gpsys::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  std::string out_dir;
  int test_grid = 0;
  bool print_config = false;
  CLI::App* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("--config", config_path, "INI config")->required();
  run->add_option("--set", sets, "Override, section.key=value")->allow_extra_args(false);
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--test-grid", test_grid, "Test grid points per axis")->check(CLI::PositiveNumber);
  run->add_flag("--print-config", print_config, "Print the resolved config and exit");

  std::vector<std::string> files;
  std::string compare_out;
  CLI::App* compare = app.add_subcommand("compare", "Align and rank history or summary files");
  compare->add_option("files", files, "CSV files")->required()->expected(2, -1);
  compare->add_option("--out", compare_out, "Aligned CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    if (*run) return run_command(config_path, sets, out_dir, test_grid, print_config);
    return compare_command(files, compare_out);
  } catch (const gpsys::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeExit;
  }
}
