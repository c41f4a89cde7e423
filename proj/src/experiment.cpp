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

#include "gpsys/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <limits>

#include "gpsys/errors.hpp"

namespace gpsys {
namespace {

constexpr std::uint64_t kInitialStream = 0x696e;

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

PointSet physics_cross(const Point& center, double step) {
  const Eigen::Index dim = center.size();
  PointSet out(1 + 2 * dim, dim);
  out.row(0) = center.transpose();
  for (Eigen::Index d = 0; d < dim; ++d) {
    for (int s = 0; s < 2; ++s) {
      Eigen::Index row = 1 + 2 * d + s;
      out.row(row) = center.transpose();
      out(row, d) += s == 0 ? -step : step;
    }
  }
  return out;
}

std::string seed_file(const std::string& arm, std::uint64_t seed) {
  return "history_" + arm + "_seed" + std::to_string(seed) + ".csv";
}

}  // namespace

Problem make_problem(const ExperimentConfig& cfg) {
  cfg.validate();
  Problem p;
  p.scenario = cfg.scenario;
  if (cfg.scenario == Scenario::Toy1d) {
    p.box = Box::cube(1, -10.0, 10.0);
    p.center = Point::Zero(1);
    p.offset = 0.0;
    p.raw_value = [](ConstPointRef x) { return hep::toy1d(x[0]).y; };
    p.oracle = [](ConstPointRef x) {
      const hep::ToyValue v = hep::toy1d(x[0]);
      return Observation{v.y, Eigen::VectorXd::Constant(1, v.dy)};
    };
  } else {
    const int dim = cfg.dim();
    p.box = Box::cube(dim, 0.5, 1.5);
    p.center = Point::Ones(dim);
    p.offset = cfg.offset_targets ? 1.0 : 0.0;
    auto events = std::make_shared<const hep::EventSet>(
        hep::generate_events(cfg.events, cfg.event_seed, cfg.generator));
    auto eff = std::make_shared<const hep::NormalizedEfficiency>(events, cfg.cuts, dim);
    p.efficiency = eff;
    const double offset = p.offset;
    p.raw_value = [eff](ConstPointRef x) { return eff->value(x); };
    p.oracle = [eff, offset](ConstPointRef x) {
      Observation obs = (*eff)(x);
      obs.value -= offset;
      return obs;
    };
  }
  p.test_points = uniform_grid(p.box, cfg.test_grid);
  p.truth.resize(p.test_points.rows());
  for (Eigen::Index i = 0; i < p.test_points.rows(); ++i) {
    p.truth[i] = p.raw_value(p.test_points.row(i).transpose()) - p.offset;
  }
  return p;
}

PointSet initial_inputs(const ExperimentConfig& cfg, const Problem& problem, std::uint64_t seed) {
  if (problem.scenario == Scenario::Toy1d) {
    auto rng = make_rng(seed, kInitialStream);
    return uniform_points(problem.box, cfg.initial_points, rng);
  }
  return physics_cross(problem.center, 0.3);
}

TrainingSet initial_training(const ExperimentConfig& cfg, const Problem& problem, ModelKind model,
                             std::uint64_t seed) {
  TrainingSet t;
  t.inputs = initial_inputs(cfg, problem, seed);
  t.outputs.resize(t.inputs.rows());
  t.noise_var = cfg.noise_var;
  t.grad_noise_var = cfg.grad_noise_var;
  if (model == ModelKind::Derivative) t.gradients = PointSet(t.inputs.rows(), t.inputs.cols());
  for (Eigen::Index i = 0; i < t.inputs.rows(); ++i) {
    const Observation obs = problem.oracle(t.inputs.row(i).transpose());
    t.outputs[i] = obs.value;
    if (t.gradients) {
      if (!obs.gradient) throw ContractError("oracle provides no gradient");
      t.gradients->row(i) = obs.gradient->transpose();
    }
  }
  return t;
}

KernelHyper kernel_hyper(const ExperimentConfig& cfg) {
  return KernelHyper::isotropic(cfg.amplitude, cfg.length_scale, cfg.dim());
}

BedConfig bed_config(const ExperimentConfig& cfg, const Problem& problem, std::uint64_t seed) {
  BedConfig b;
  b.n_iterations = cfg.iterations;
  b.box = problem.box;
  b.rng_seed = seed;
  b.record_timing = cfg.record_timing;
  b.candidates.include_utility_points = cfg.utility_candidates;
  b.candidates.n_uniform = cfg.n_uniform;
  b.utility_input.base_points = uniform_grid(problem.box, cfg.utility_grid);
  b.utility_input.regularization_var = cfg.gamma2;
  b.utility_input.perturb_seed = seed;
  b.utility_input.box = problem.box;
  return b;
}

std::string arm_name(ModelKind model, Strategy strategy) {
  if (strategy == Strategy::OnAxis) return "on_axis";
  return to_string(model) + "_" + to_string(strategy);
}

ArmResult run_arm(const ExperimentConfig& cfg, const Problem& problem, ModelKind model,
                  Strategy strategy) {
  if (strategy == Strategy::OnAxis) throw ContractError("on_axis is not a GP arm");
  ArmResult arm;
  arm.name = arm_name(model, strategy);
  arm.model = model;
  arm.strategy = strategy;
  const KernelHyper hyper = kernel_hyper(cfg);

  for (std::uint64_t seed : cfg.seeds) {
    GpModel initial = condition(initial_training(cfg, problem, model, seed), hyper);
    SeedRun run{seed, {}};
    std::optional<GpModel> final_model;
    switch (strategy) {
      case Strategy::Bed: {
        RunResult r = run_bed(std::move(initial), problem.oracle, bed_config(cfg, problem, seed),
                              problem.test_points, problem.truth);
        run.history = std::move(r.history);
        final_model = std::move(r.model);
        break;
      }
      case Strategy::Random: {
        RunResult r = random_sampling_run(std::move(initial), problem.oracle, cfg.iterations,
                                          problem.box, seed, problem.test_points, problem.truth,
                                          cfg.record_timing);
        run.history = std::move(r.history);
        final_model = std::move(r.model);
        break;
      }
      case Strategy::Grid: {
        GridRunResult r = grid_sampling_run(initial, problem.oracle, cfg.grid_sizes, problem.box,
                                            problem.test_points, problem.truth, cfg.record_timing);
        run.history = std::move(r.history);
        final_model = std::move(r.models.back());
        break;
      }
      case Strategy::OnAxis:
        break;
    }
    if (!arm.first_model) arm.first_model = std::move(final_model);
    arm.runs.push_back(std::move(run));
  }
  std::vector<ExperimentHistory> histories;
  for (const SeedRun& r : arm.runs) histories.push_back(r.history);
  arm.summary = summarize(histories);
  return arm;
}

OnAxisResult run_on_axis(const ExperimentConfig& cfg, const Problem& problem) {
  const AxisSamplePlan plan = AxisSamplePlan::from_linspace(problem.box, problem.center,
                                                            cfg.on_axis_points);
  const OnAxisRegression oar(problem.raw_value, plan);
  OnAxisResult r;
  r.samples = plan.sample_count();
  r.prediction = oar.predict_many(problem.test_points);
  const Eigen::VectorXd shifted = r.prediction.array() - problem.offset;
  r.mse = mean_squared_error(shifted, problem.truth);
  return r;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const Problem& problem,
                                const ProgressLog& log) {
  ExperimentResult result;
  for (Strategy s : cfg.strategies) {
    if (s == Strategy::OnAxis) {
      if (log) log("on_axis");
      result.on_axis = run_on_axis(cfg, problem);
      continue;
    }
    for (ModelKind m : cfg.models) {
      if (log) log(arm_name(m, s));
      result.arms.push_back(run_arm(cfg, problem, m, s));
    }
  }
  return result;
}

void write_artifacts(const std::string& dir, const ExperimentConfig& cfg, const Problem& problem,
                     const ExperimentResult& result) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  fs::create_directories(root);
  open_out(root / "config.ini") << to_ini(cfg);

  const int dim = problem.dim();
  std::vector<std::string> notes;
  {
    std::ofstream runs = open_out(root / "runs.csv");
    runs << "arm,seed,initial_samples,initial_mse,initial_trace,final_mse,final_trace,history\n";
    for (const ArmResult& arm : result.arms) {
      for (const SeedRun& run : arm.runs) {
        const ExperimentHistory& h = run.history;
        const IterationRecord* last = h.records.empty() ? nullptr : &h.records.back();
        const double nan = std::numeric_limits<double>::quiet_NaN();
        runs << arm.name << ',' << run.seed << ',' << h.initial_samples << ','
             << format_double(h.initial_mse) << ',' << format_double(h.initial_trace) << ','
             << format_double(last ? last->mse : nan) << ','
             << format_double(last ? last->trace : nan) << ',' << seed_file(arm.name, run.seed)
             << '\n';
        std::ofstream hist = open_out(root / seed_file(arm.name, run.seed));
        write_history(hist, h, dim);
        for (const std::string& n : h.notes) {
          notes.push_back(arm.name + " seed " + std::to_string(run.seed) + ": " + n);
        }
      }
      std::ofstream summary = open_out(root / ("summary_" + arm.name + ".csv"));
      write_summary(summary, arm.summary);

      if (dim <= 2 && arm.first_model) {
        const GpModel& m = *arm.first_model;
        const Eigen::VectorXd mean = m.predict_mean(problem.test_points).array() + problem.offset;
        const Eigen::VectorXd sd = m.predict_var_diag(problem.test_points).cwiseSqrt();
        const Eigen::VectorXd truth = problem.truth.array() + problem.offset;
        std::ofstream grid = open_out(root / ("grid_" + arm.name + ".csv"));
        write_grid_dump(grid, problem.test_points, mean, sd, truth);
      }
    }
  }
  if (result.on_axis) {
    const OnAxisResult& oar = *result.on_axis;
    open_out(root / "on_axis.csv") << "samples,mse\n"
                                   << oar.samples << ',' << format_double(oar.mse) << '\n';
    if (dim <= 2) {
      const Eigen::VectorXd sd =
          Eigen::VectorXd::Constant(oar.prediction.size(), std::numeric_limits<double>::quiet_NaN());
      const Eigen::VectorXd truth = problem.truth.array() + problem.offset;
      std::ofstream grid = open_out(root / "grid_on_axis.csv");
      write_grid_dump(grid, problem.test_points, oar.prediction, sd, truth);
    }
  }
  if (!notes.empty()) {
    std::ofstream out = open_out(root / "notes.txt");
    for (const std::string& n : notes) out << n << '\n';
  }
}

}  // namespace gpsys
