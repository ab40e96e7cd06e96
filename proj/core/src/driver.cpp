#include "ptcfem/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "ptcfem/errors.hpp"

namespace ptcfem {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::budget_exhausted:
      return "BudgetExhausted";
    case Termination::converged:
      return "Converged";
    case Termination::non_convergence:
      return "NonConvergence";
  }
  return "unknown";
}

std::vector<int> mark(const std::vector<double>& eta_per_element,
                      double fraction) {
  const int n = static_cast<int>(eta_per_element.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return eta_per_element[a] > eta_per_element[b];
  });

  // Accumulate the total in the same (sorted) order used by the greedy scan
  // so the two sums are comparable without rounding surprises.
  double total = 0.0;
  for (int id : order) total += eta_per_element[id] * eta_per_element[id];
  if (total == 0.0) return {order.front()};

  const double target = fraction * total;
  std::vector<int> marked;
  double acc = 0.0;
  for (int id : order) {
    if (!(eta_per_element[id] > 0.0)) break;
    marked.push_back(id);
    acc += eta_per_element[id] * eta_per_element[id];
    if (acc >= target) break;
  }
  std::sort(marked.begin(), marked.end());
  return marked;
}

RunResult run(const ProblemSpec& problem, const AdaptiveConfig& config) {
  RunResult result;
  Mesh mesh = build_initial_mesh(problem.domain, config.initial_resolution);
  FemFunction u = FemFunction::from_initial_guess(mesh, problem.initial_guess);
  double k = std::clamp(config.k0, config.step_control.k_min,
                        config.step_control.k_max);

  const AssemblyOptions assembly{config.quadrature_degree};
  const EstimatorOptions estimation{config.quadrature_degree, true};
  result.status = Termination::budget_exhausted;

  int n = 0;
  while (true) {
    const int dof = mesh.interior_vertex_count();
    if (dof > config.dof_max) {
      result.status = Termination::budget_exhausted;
      break;
    }
    if (n >= config.max_iterations) {
      result.status = Termination::non_convergence;
      break;
    }
    const auto tic = std::chrono::steady_clock::now();

    const AssembledSystem system =
        assemble_ptc_system(mesh, u, k, problem, assembly);
    const Eigen::VectorXd delta_interior =
        solve(system.matrix, system.rhs, config.solver);
    const FemFunction delta = scatter_interior(delta_interior, system.dofs, mesh);
    FemFunction u_next = u;
    u_next.coefficients += k * delta.coefficients;

    const EstimatorReport report =
        total_report(mesh, u, delta, k, problem, estimation);
    const bool refine_now =
        report.r_omega_sq <= config.theta * report.eta_total_sq;

    IterationRow row;
    row.n = n;
    row.dof = dof;
    row.k = k;
    row.r_omega = std::sqrt(report.r_omega_sq);
    row.eta_total = std::sqrt(report.eta_total_sq);
    row.total = report.total_estimator;
    row.action = refine_now ? Action::refine : Action::ptc;
    row.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - tic)
            .count();
    result.log.rows.push_back(row);
    if (config.on_row) config.on_row(row);

    if (refine_now) {
      const std::vector<int> marked =
          mark(report.eta_per_element, config.marking_fraction);
      RefinedMesh refined = refine(mesh, marked);
      // Carry the updated iterate onto the new mesh; the step size is
      // retained across refinements so the continuation state survives.
      u = interpolate_to_refined(u_next, mesh, refined.mesh, refined.ancestry);
      mesh = std::move(refined.mesh);
    } else {
      const double delta_norm_sq =
          x_inner_product(mesh, delta, delta, problem.epsilon);
      const double delta_norm = std::sqrt(std::max(0.0, delta_norm_sq));
      const double u_norm = energy_norm(mesh, u, problem.epsilon);
      if (delta_norm <= config.step_control.stationarity_tol *
                            std::max(1.0, u_norm)) {
        u = std::move(u_next);
        result.status = Termination::converged;
        ++n;
        break;
      }
      const double pairing_n = delta_interior.dot(system.rhs);
      const double pairing_np1 =
          evaluate_dual_pairing(mesh, u_next, delta, problem, assembly);
      try {
        const StepControlRecord record = propose_step_size(
            pairing_n, pairing_np1, delta_norm_sq, k, config.step_control);
        k = record.k_star;
      } catch (const DegenerateIncrement&) {
        u = std::move(u_next);
        result.status = Termination::converged;
        ++n;
        break;
      }
      u = std::move(u_next);
    }
    ++n;
  }

  result.mesh = std::move(mesh);
  result.solution = std::move(u);
  return result;
}

}  // namespace ptcfem
