#pragma once

#include <functional>
#include <vector>

#include "ptcfem/estimator.hpp"
#include "ptcfem/fem.hpp"
#include "ptcfem/iteration_log.hpp"
#include "ptcfem/linear_solver.hpp"
#include "ptcfem/mesh.hpp"
#include "ptcfem/problems.hpp"
#include "ptcfem/ptc.hpp"

namespace ptcfem {

/// Knobs of the interplay loop: theta steers the refine-vs-step decision,
/// the rest parameterize marking, step control, and termination.
struct AdaptiveConfig {
  double theta = 0.5;
  double k0 = 1.0;
  int dof_max = 10000;
  double marking_fraction = 0.5;
  int initial_resolution = 4;
  int quadrature_degree = 4;
  // Guard against non-termination; hitting it reports NonConvergence.
  int max_iterations = 500;
  StepControlConfig step_control;
  LinearSolveContract solver;
  // Streamed per completed iteration, before any refinement/step mutation;
  // lets callers flush logs incrementally.
  std::function<void(const IterationRow&)> on_row;
};

enum class Termination { budget_exhausted, converged, non_convergence };

const char* to_string(Termination t);

struct RunResult {
  Mesh mesh;
  FemFunction solution;
  IterationLog log;
  Termination status = Termination::budget_exhausted;
};

/// Minimal-cardinality greedy marking: descending indicator, ties broken by
/// ascending element id, stopping once the marked set carries
/// `fraction` of the total squared indicator. All-zero indicators mark the
/// lowest element id so refinement always makes progress.
std::vector<int> mark(const std::vector<double>& eta_per_element,
                      double fraction);

/// The interplay loop: per iteration solve the linearized step system,
/// evaluate both residual families, then either refine (FEM residual
/// dominant, R^2 <= theta * sum eta^2) carrying the updated iterate onto
/// the refined mesh, or accept the PTC step with the proposed next step
/// size. Runs until the DOF budget is exhausted, stationarity is reached,
/// or the iteration cap trips.
RunResult run(const ProblemSpec& problem, const AdaptiveConfig& config);

}  // namespace ptcfem
