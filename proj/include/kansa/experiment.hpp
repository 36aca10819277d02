#pragma once

// Declarative convergence experiments: configuration, presets and the sweep
// runner behind the `kansa` command-line tool.

#include <cstdint>
#include <string>
#include <vector>

#include "kansa/analysis.hpp"
#include "kansa/assembly.hpp"
#include "kansa/kernels.hpp"
#include "kansa/solvers.hpp"

namespace kansa {

enum class XSource { regular, halton };

struct ExperimentConfig {
  std::string name = "custom";
  std::vector<std::string> problems{"trig"};
  std::vector<std::string> operators{"laplace"};
  KernelFamily kernel_family = KernelFamily::matern_sobolev;
  int m = 4;
  double epsilon = 1.0;
  TrialSpace trial = TrialSpace::z_union_y;
  std::vector<double> thetas{kThetaInfinity};  // infinity = CLS
  std::vector<int> n_z{121, 256, 441, 676};    // total trial centers, perfect squares
  double delta_interior = 0.5;
  double delta_boundary = 0.5;
  XSource x_source = XSource::regular;
  std::vector<int> n_x;                        // Halton counts per n_Z; empty = match regular
  int eval_grid_n = 100;
  Rcond rcond;
  WeightConvention weight_convention = WeightConvention::squared;
  std::string output_dir;
  std::uint64_t seed = 0;
  int fit_drop_last = 0;
  int jobs = 1;
  bool record_timing = true;
  int probe_resolution = 0;  // 0 = 2 (n_finest - 1) + 1, which hits every cell center
  bool dump_matrices = false;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Parses a JSON document. Unknown keys are rejected.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& config);

const std::vector<std::string>& preset_names();

/// example1, example2, example3, example3_scattered, example4_gaussian,
/// example4_mq. Throws ConfigError for unknown names.
ExperimentConfig preset(const std::string& name);

/// Grid side length for a perfect-square n_Z (throws ConfigError otherwise).
int side_from_count(int n_z);

/// Runs every (n_Z, operator, problem, theta) cell. Matrices are assembled
/// once per (n_Z, operator) and solved for every problem and theta. Solver
/// failures become rows with ok = false; the sweep continues.
ConvergenceStudy run_experiment(const ExperimentConfig& config);

}  // namespace kansa
