#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ptcfem/driver.hpp"

namespace ptcfem {

/// Parsed experiment configuration. The on-disk format is an INI-style text
/// file with [run], [solver], and [output] sections; unknown sections or
/// keys are fatal so typos cannot silently change a run.
struct RunConfig {
  std::string problem;
  std::vector<double> epsilon_list;
  double theta = 0.5;
  double k0 = 1.0;
  int dof_max = 100000;
  double marking_fraction = 0.5;
  int resolution = 4;
  int quadrature_order = 4;
  long seed = 0;

  std::string solver_method = "direct";
  double solver_tolerance = 1e-12;
  int solver_max_iterations = 20000;

  std::filesystem::path output_dir = ".";
};

/// Parses and validates config text. Throws ConfigError on malformed input,
/// unknown keys, or invalid values (including dof_max below the initial
/// mesh's DOF count).
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);

/// AdaptiveConfig corresponding to a run configuration.
AdaptiveConfig make_adaptive_config(const RunConfig& config);

struct EpsilonRunSummary {
  double epsilon = 0.0;
  std::string termination;
  int iterations = 0;
  int final_dof = 0;
  double final_total_estimator = 0.0;
  std::optional<double> fitted_slope;  // empty when the log is too short
  std::string log_csv;
  std::string mesh_vtk;
  std::string solution_vtk;
};

struct ExperimentSummary {
  std::vector<EpsilonRunSummary> runs;
  std::string summary_json;
};

/// Runs the adaptive driver for every epsilon in the sweep; per epsilon it
/// writes an iteration-log CSV (streamed row by row, so a failed run leaves
/// the rows completed so far on disk), final-mesh and final-solution VTK
/// files, and at the end a summary JSON with the fitted slopes.
///
/// The output directory comes from the config unless the PTCFEM_OUTPUT_DIR
/// environment variable overrides it.
ExperimentSummary run_experiment(const RunConfig& config);

}  // namespace ptcfem
