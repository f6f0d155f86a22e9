#pragma once

#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "fofpoly/synth.hpp"

namespace fofpoly {

struct GridConfig {
  double lo = 0.0;
  double hi = 1.0;
  int points = 64;
};

struct LambdaRule {
  enum class Type { Theoretical, GridOracle };
  Type type = Type::Theoretical;
  double grid_min = 1e-6;
  double grid_max = 1.0;
  int grid_count = 25;
};

struct ScanGrid {
  double lo = 0.0;
  double hi = 1.0;
  int points = 2;
};

// One config file drives one experiment; every field has a documented range
// and unknown keys are rejected outright.
struct ExperimentConfig {
  std::string kind;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  int threads = 0;  // 0 = hardware
  bool svg_timestamp = false;

  // rate-sweep
  ProcessSpec process;
  GridConfig grid_s1;
  GridConfig grid_s2;
  int degree = 1;
  int oracle_samples = 2000;
  double target_r = 1.0;
  double target_radius = 1.0;
  int target_modes = 8;
  NoiseSpec noise;
  std::string family = "tikhonov";
  std::vector<int> n_values;
  int replicates = 20;
  LambdaRule lambda_rule;
  int n_test = 500;

  // check-reg
  ScanGrid sigma_grid{1e-6, 1.0, 200};
  ScanGrid lambda_grid{1e-4, 1.0, 20};
  std::vector<double> exponents{1.0, 2.0, 4.0};

  // effdim
  std::vector<double> effdim_b{1.5, 2.0, 3.0};
  int effdim_modes = 1000000;
  ScanGrid effdim_lambda{1e-4, 1e-1, 25};

  // minimax
  std::vector<int> minimax_M{8, 16};
  std::vector<double> minimax_s{0.0, 0.5};
  double minimax_b = 2.0;
  double minimax_b0 = 1.0;
  double minimax_u = 0.1;
  double minimax_sigma2 = 1.0;
  double minimax_r = 1.0;
  double minimax_radius = 1.0;

  // oracle-test
  int ot_instances = 10;
  int ot_max_n = 5;
  int ot_max_degree = 2;
  int ot_grid_points = 9;
  std::vector<double> ot_lambdas{0.01, 0.1, 1.0};
  double ot_tolerance = 1e-8;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

// Runs the configured experiment, writing report.json (and table.csv /
// plot.svg where applicable) under output_dir.  Returns the process exit
// code: 0 success, 3 numeric failure.
int run_experiment(const ExperimentConfig& config);

}  // namespace fofpoly
