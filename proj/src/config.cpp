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

#include "gpsys/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "gpsys/csv.hpp"
#include "gpsys/errors.hpp"

namespace gpsys {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  for (const std::string& item : split_csv_line(value)) {
    const std::string t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

double to_double(const std::string& key, const std::string& value) {
  try {
    const double v = parse_double(trim(value));
    if (std::isfinite(v)) return v;
  } catch (const ContractError&) {
  }
  throw ConfigError(key, "expected a finite number, got '" + value + "'");
}

// Accepts a/b so fractions such as 1/50 can be written as in the literature.
double to_real(const std::string& key, const std::string& value) {
  const auto slash = value.find('/');
  if (slash == std::string::npos) return to_double(key, value);
  const double den = to_double(key, value.substr(slash + 1));
  if (den == 0.0) throw ConfigError(key, "division by zero in '" + value + "'");
  return to_double(key, value.substr(0, slash)) / den;
}

long long to_integer(const std::string& key, const std::string& value) {
  const std::string t = trim(value);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size()) {
    throw ConfigError(key, "expected an integer, got '" + value + "'");
  }
  return v;
}

int to_int(const std::string& key, const std::string& value) {
  const long long v = to_integer(key, value);
  if (v < -2147483647LL || v > 2147483647LL) throw ConfigError(key, "integer out of range");
  return static_cast<int>(v);
}

std::uint64_t to_seed(const std::string& key, const std::string& value) {
  const long long v = to_integer(key, value);
  if (v < 0) throw ConfigError(key, "seeds must be >= 0");
  return static_cast<std::uint64_t>(v);
}

bool to_bool(const std::string& key, const std::string& value) {
  const std::string t = trim(value);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError(key, "expected true or false, got '" + value + "'");
}

Scenario to_scenario(const std::string& key, const std::string& value) {
  const std::string t = trim(value);
  if (t == "toy1d") return Scenario::Toy1d;
  if (t == "hep2d") return Scenario::Hep2d;
  if (t == "hep4d") return Scenario::Hep4d;
  throw ConfigError(key, "unknown scenario '" + t + "' (valid: toy1d, hep2d, hep4d)");
}

ModelKind to_model(const std::string& key, const std::string& value) {
  if (value == "regular") return ModelKind::Regular;
  if (value == "derivative") return ModelKind::Derivative;
  throw ConfigError(key, "unknown model '" + value + "' (valid: regular, derivative)");
}

Strategy to_strategy(const std::string& key, const std::string& value) {
  if (value == "bed") return Strategy::Bed;
  if (value == "random") return Strategy::Random;
  if (value == "grid") return Strategy::Grid;
  if (value == "on_axis") return Strategy::OnAxis;
  throw ConfigError(key, "unknown strategy '" + value + "' (valid: bed, random, grid, on_axis)");
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F fmt) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ',';
    out += fmt(items[i]);
  }
  return out;
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

struct Field {
  std::string key;
  std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define GPSYS_REAL(name, member)                                                               \
  Field {                                                                                      \
    name, [](ExperimentConfig& c, const std::string& k, const std::string& v) {                \
      c.member = to_real(k, v);                                                                \
    },                                                                                         \
        [](const ExperimentConfig& c) { return format_double(c.member); }                      \
  }
#define GPSYS_INT(name, member)                                                                \
  Field {                                                                                      \
    name, [](ExperimentConfig& c, const std::string& k, const std::string& v) {                \
      c.member = to_int(k, v);                                                                 \
    },                                                                                         \
        [](const ExperimentConfig& c) { return std::to_string(c.member); }                     \
  }
#define GPSYS_BOOL(name, member)                                                               \
  Field {                                                                                      \
    name, [](ExperimentConfig& c, const std::string& k, const std::string& v) {                \
      c.member = to_bool(k, v);                                                                \
    },                                                                                         \
        [](const ExperimentConfig& c) { return fmt_bool(c.member); }                           \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"experiment.scenario",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.scenario = to_scenario(k, v);
       },
       [](const ExperimentConfig& c) { return to_string(c.scenario); }},
      {"experiment.models",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.models.clear();
         for (const auto& item : split_list(v)) c.models.push_back(to_model(k, item));
       },
       [](const ExperimentConfig& c) {
         return join(c.models, [](ModelKind m) { return to_string(m); });
       }},
      {"experiment.strategies",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.strategies.clear();
         for (const auto& item : split_list(v)) c.strategies.push_back(to_strategy(k, item));
       },
       [](const ExperimentConfig& c) {
         return join(c.strategies, [](Strategy s) { return to_string(s); });
       }},
      GPSYS_INT("experiment.iterations", iterations),
      {"experiment.seeds",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.seeds.clear();
         for (const auto& item : split_list(v)) c.seeds.push_back(to_seed(k, item));
       },
       [](const ExperimentConfig& c) {
         return join(c.seeds, [](std::uint64_t s) { return std::to_string(s); });
       }},
      GPSYS_INT("experiment.test_grid", test_grid),
      GPSYS_INT("experiment.initial_points", initial_points),
      GPSYS_BOOL("experiment.timing", record_timing),
      {"experiment.out",
       [](ExperimentConfig& c, const std::string&, const std::string& v) { c.out_dir = trim(v); },
       [](const ExperimentConfig& c) { return c.out_dir; }},

      GPSYS_REAL("kernel.amplitude", amplitude),
      GPSYS_REAL("kernel.length_scale", length_scale),
      GPSYS_REAL("kernel.noise_var", noise_var),
      GPSYS_REAL("kernel.grad_noise_var", grad_noise_var),

      GPSYS_INT("utility.grid", utility_grid),
      GPSYS_REAL("utility.gamma2", gamma2),
      GPSYS_INT("utility.n_uniform", n_uniform),
      GPSYS_BOOL("utility.candidates_from_input", utility_candidates),

      {"grid.sizes",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.grid_sizes.clear();
         for (const auto& item : split_list(v)) c.grid_sizes.push_back(to_int(k, item));
       },
       [](const ExperimentConfig& c) {
         return join(c.grid_sizes, [](int n) { return std::to_string(n); });
       }},
      GPSYS_INT("on_axis.points", on_axis_points),

      GPSYS_INT("physics.events", events),
      {"physics.event_seed",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.event_seed = to_seed(k, v);
       },
       [](const ExperimentConfig& c) { return std::to_string(c.event_seed); }},
      GPSYS_BOOL("physics.offset_targets", offset_targets),
      GPSYS_REAL("physics.leading_pt_min", generator.leading_pt_min),
      GPSYS_REAL("physics.leading_pt_scale", generator.leading_pt_scale),
      GPSYS_REAL("physics.leading_pt_max", generator.leading_pt_max),
      GPSYS_REAL("physics.split_lo", generator.split_lo),
      GPSYS_REAL("physics.split_hi", generator.split_hi),
      GPSYS_REAL("physics.kt_sigma", generator.kt_sigma),
      GPSYS_REAL("physics.imbalance_scale", generator.imbalance_scale),
      GPSYS_REAL("physics.tail_fraction", generator.tail_fraction),
      GPSYS_REAL("physics.tail_scale", generator.tail_scale),
      GPSYS_REAL("physics.third_pt_min", generator.third_pt_min),
      GPSYS_REAL("physics.eta_sigma", generator.eta_sigma),
      GPSYS_REAL("physics.eta_max", generator.eta_max),
      GPSYS_REAL("physics.pt1_threshold", cuts.pt1_threshold),
      GPSYS_REAL("physics.pt2_threshold", cuts.pt2_threshold),
      GPSYS_REAL("physics.met_threshold", cuts.met_threshold),
      GPSYS_REAL("physics.steepness", cuts.steepness),
      GPSYS_REAL("physics.eta_steepness", cuts.eta_steepness),
      GPSYS_REAL("physics.eta_boundary", cuts.eta_boundary),
  };
  return table;
}

#undef GPSYS_REAL
#undef GPSYS_INT
#undef GPSYS_BOOL

const Field& field(const std::string& key) {
  for (const Field& f : fields()) {
    if (f.key == key) return f;
  }
  throw ConfigError(key, "unknown key");
}

// Ordered key/value pairs from the file followed by the overrides.
using Assignments = std::vector<std::pair<std::string, std::string>>;

Assignments read_assignments(std::istream& in, const std::vector<std::string>& overrides) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("config", "line " + std::to_string(e.line()) + ": " + e.message());
  }
  Assignments out;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError(section, "keys must live in a [section]");
    for (const auto& [key, value] : body) {
      out.emplace_back(section + "." + key, value.data());
    }
  }
  for (const std::string& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError(o, "override must be section.key=value");
    out.emplace_back(trim(o.substr(0, eq)), o.substr(eq + 1));
  }
  return out;
}

void require(bool ok, const std::string& key, const std::string& message) {
  if (!ok) throw ConfigError(key, message);
}

}  // namespace

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::Toy1d: return "toy1d";
    case Scenario::Hep2d: return "hep2d";
    case Scenario::Hep4d: return "hep4d";
  }
  return "?";
}

std::string to_string(ModelKind m) {
  return m == ModelKind::Regular ? "regular" : "derivative";
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::Bed: return "bed";
    case Strategy::Random: return "random";
    case Strategy::Grid: return "grid";
    case Strategy::OnAxis: return "on_axis";
  }
  return "?";
}

int ExperimentConfig::dim() const {
  switch (scenario) {
    case Scenario::Toy1d: return 1;
    case Scenario::Hep2d: return 2;
    case Scenario::Hep4d: return 4;
  }
  return 0;
}

ExperimentConfig default_config(Scenario scenario) {
  ExperimentConfig c;
  c.scenario = scenario;
  c.models = {ModelKind::Regular, ModelKind::Derivative};
  c.strategies = {Strategy::Bed};
  switch (scenario) {
    case Scenario::Toy1d:
      c.iterations = 20;
      c.seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
      c.test_grid = 100;
      c.amplitude = 1.0;
      c.length_scale = 1.0;
      // Numerical nugget; without it the derivative GP's joint covariance
      // becomes singular to working precision within about ten iterations.
      c.noise_var = 1e-10;
      c.grad_noise_var = 1e-10;
      c.utility_grid = 100;
      c.gamma2 = 0.0;
      c.grid_sizes = {4, 8, 12, 16, 20};
      c.offset_targets = false;
      break;
    case Scenario::Hep2d:
      c.iterations = 44;
      c.seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
      c.test_grid = 25;
      c.amplitude = std::sqrt(0.1);
      c.length_scale = 0.25;
      c.noise_var = 1e-4;
      c.grad_noise_var = 0.1;
      c.utility_grid = 10;
      c.gamma2 = 1.0 / 50.0;
      c.grid_sizes = {2, 3, 4, 5, 6};
      break;
    case Scenario::Hep4d:
      c.iterations = 88;
      c.seeds = {0, 1, 2, 3, 4};
      c.test_grid = 25;
      c.amplitude = std::sqrt(0.1);
      c.length_scale = 0.25;
      c.noise_var = 1e-4;
      c.grad_noise_var = 0.1;
      c.utility_grid = 5;
      c.gamma2 = 1.0 / 10.0;
      c.grid_sizes = {2, 3};
      break;
  }
  return c;
}

void ExperimentConfig::validate() const {
  require(!models.empty(), "experiment.models", "list at least one model");
  require(!strategies.empty(), "experiment.strategies", "list at least one strategy");
  require(iterations >= 1, "experiment.iterations", "must be >= 1");
  require(!seeds.empty(), "experiment.seeds", "list at least one seed");
  require(test_grid >= 2, "experiment.test_grid", "must be >= 2");
  require(initial_points >= 1, "experiment.initial_points", "must be >= 1");
  require(!out_dir.empty(), "experiment.out", "must not be empty");
  require(amplitude > 0.0, "kernel.amplitude", "must be > 0");
  require(length_scale > 0.0, "kernel.length_scale", "must be > 0");
  require(noise_var >= 0.0, "kernel.noise_var", "must be >= 0");
  require(grad_noise_var >= 0.0, "kernel.grad_noise_var", "must be >= 0");
  require(utility_grid >= 1, "utility.grid", "must be >= 1");
  require(gamma2 >= 0.0, "utility.gamma2", "must be >= 0");
  require(n_uniform >= 0, "utility.n_uniform", "must be >= 0");
  require(utility_candidates || n_uniform > 0, "utility.n_uniform",
          "must be > 0 when utility.candidates_from_input is false");
  for (std::size_t i = 0; i < grid_sizes.size(); ++i) {
    require(grid_sizes[i] >= 2, "grid.sizes", "every size must be >= 2");
    require(i == 0 || grid_sizes[i] > grid_sizes[i - 1], "grid.sizes", "must be increasing");
  }
  for (Strategy s : strategies) {
    if (s == Strategy::Grid) require(!grid_sizes.empty(), "grid.sizes", "list at least one size");
  }
  require(on_axis_points >= 2, "on_axis.points", "must be >= 2");
  if (scenario != Scenario::Toy1d) {
    require(events >= 1, "physics.events", "must be >= 1");
    try {
      generator.validate();
    } catch (const ContractError& e) {
      throw ConfigError("physics", e.what());
    }
    try {
      cuts.validate();
    } catch (const ContractError& e) {
      throw ConfigError("physics", e.what());
    }
  }
}

ExperimentConfig parse_config(std::istream& in, const std::vector<std::string>& overrides) {
  const Assignments assignments = read_assignments(in, overrides);
  // The last scenario assignment wins and selects the defaults.
  Scenario scenario = Scenario::Toy1d;
  bool have_scenario = false;
  for (const auto& [key, value] : assignments) {
    if (key == "experiment.scenario") {
      scenario = to_scenario(key, value);
      have_scenario = true;
    }
  }
  if (!have_scenario) {
    throw ConfigError("experiment.scenario", "missing (valid: toy1d, hep2d, hep4d)");
  }
  ExperimentConfig cfg = default_config(scenario);
  for (const auto& [key, value] : assignments) {
    if (key == "experiment.scenario") continue;
    field(key).set(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path);
  return parse_config(in, overrides);
}

std::string to_ini(const ExperimentConfig& cfg) {
  std::ostringstream out;
  std::string section;
  for (const Field& f : fields()) {
    const auto dot = f.key.find('.');
    const std::string s = f.key.substr(0, dot);
    if (s != section) {
      if (!section.empty()) out << '\n';
      out << '[' << s << "]\n";
      section = s;
    }
    out << f.key.substr(dot + 1) << " = " << f.get(cfg) << '\n';
  }
  return out.str();
}

}  // namespace gpsys
