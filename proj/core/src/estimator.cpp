#include "ptcfem/estimator.hpp"

#include <cmath>

#include "ptcfem/errors.hpp"
#include "ptcfem/quadrature.hpp"

namespace ptcfem {

namespace {

double require_finite(double value, const char* what) {
  if (!std::isfinite(value))
    throw NonFiniteCoefficient(std::string(what) +
                               " evaluated to a non-finite value");
  return value;
}

FemFunction advance(const Mesh& mesh, const FemFunction& u_n,
                    const FemFunction& delta_n, double k_n) {
  if (u_n.mesh_generation != mesh.generation ||
      delta_n.mesh_generation != mesh.generation)
    throw MeshMismatch("estimator: functions bound to another mesh");
  FemFunction next = u_n;
  next.coefficients += k_n * delta_n.coefficients;
  return next;
}

}  // namespace

double gradient_jump(const Mesh& mesh, const FemFunction& u,
                     const FacetGeometry& frame) {
  const auto gs = element_gradient(mesh, u, frame.sharp);
  const auto gf = element_gradient(mesh, u, frame.flat);
  return (gf[0] - gs[0]) * frame.normal[0] + (gf[1] - gs[1]) * frame.normal[1];
}

std::pair<double, double> weights(double h_t, double h_e, double epsilon) {
  const double scale = 1.0 / std::sqrt(epsilon);
  return {std::min(1.0, scale * h_t), std::min(1.0, scale * h_e)};
}

std::vector<double> linearization_residual(const Mesh& mesh,
                                           const FemFunction& u_n,
                                           const FemFunction& delta_n,
                                           double k_n,
                                           const ProblemSpec& problem,
                                           const EstimatorOptions& options) {
  const FemFunction u_next = advance(mesh, u_n, delta_n, k_n);
  std::vector<double> r(mesh.element_count(), 0.0);
  for (int e = 0; e < mesh.element_count(); ++e) {
    double sq = 0.0;
    for (const auto& q :
         element_quadrature(mesh, e, options.quadrature_degree)) {
      double u_q = 0.0, d_q = 0.0, un_q = 0.0;
      for (int i = 0; i < (mesh.dim == 1 ? 2 : 3); ++i) {
        const int v = mesh.elements[e][i];
        u_q += q.basis[i] * u_n.coefficients(v);
        d_q += q.basis[i] * delta_n.coefficients(v);
        un_q += q.basis[i] * u_next.coefficients(v);
      }
      // Any spatial source cancels between T_f and f(u_{n+1}).
      const double defect = require_finite(problem.f(u_q), "f") +
                            k_n * require_finite(problem.f_prime(u_q), "f'") *
                                d_q -
                            d_q - require_finite(problem.f(un_q), "f");
      sq += q.weight * defect * defect;
    }
    r[e] = std::sqrt(sq);
  }
  return r;
}

std::vector<double> fem_residual(const Mesh& mesh, const FemFunction& u_n,
                                 const FemFunction& delta_n, double k_n,
                                 const ProblemSpec& problem,
                                 const EstimatorOptions& options) {
  const FemFunction u_next = advance(mesh, u_n, delta_n, k_n);
  const double eps = problem.epsilon;
  std::vector<double> eta_sq(mesh.element_count(), 0.0);

  for (int e = 0; e < mesh.element_count(); ++e) {
    const double h_t = mesh.element_diameter(e);
    const double alpha_t = weights(h_t, h_t, eps).first;
    double sq = 0.0;
    for (const auto& q :
         element_quadrature(mesh, e, options.quadrature_degree)) {
      double u_q = 0.0, d_q = 0.0;
      for (int i = 0; i < (mesh.dim == 1 ? 2 : 3); ++i) {
        const int v = mesh.elements[e][i];
        u_q += q.basis[i] * u_n.coefficients(v);
        d_q += q.basis[i] * delta_n.coefficients(v);
      }
      // Piecewise linears have zero elementwise Laplacian.
      const double p1_laplacian = 0.0;
      double residual = require_finite(problem.reaction(u_q, q.x, q.y), "f") +
                        k_n * require_finite(problem.f_prime(u_q), "f'") *
                            d_q -
                        d_q;
      if (options.include_p1_laplacian) residual += eps * p1_laplacian;
      sq += q.weight * residual * residual;
    }
    eta_sq[e] = alpha_t * alpha_t * sq;
  }

  // Interior facet jumps, shared half and half between the two neighbors.
  const auto line = line_rule(2);
  for (int f : mesh.interior_facets) {
    const FacetGeometry frame = facet_jump_frame(mesh, f);
    const double jump = eps * gradient_jump(mesh, u_next, frame);
    double norm_sq = 0.0;
    if (mesh.dim == 1) {
      norm_sq = jump * jump;  // a 1d facet is a point, the norm a value
    } else {
      for (const auto& p : line.points)
        norm_sq += p.w * frame.h_e * jump * jump;
    }
    const double alpha_e = weights(frame.h_e, frame.h_e, eps).second;
    const double contribution = alpha_e * norm_sq / std::sqrt(eps);
    eta_sq[frame.sharp] += 0.5 * contribution;
    eta_sq[frame.flat] += 0.5 * contribution;
  }

  std::vector<double> eta(mesh.element_count());
  for (int e = 0; e < mesh.element_count(); ++e) eta[e] = std::sqrt(eta_sq[e]);
  return eta;
}

EstimatorReport total_report(const Mesh& mesh, const FemFunction& u_n,
                             const FemFunction& delta_n, double k_n,
                             const ProblemSpec& problem,
                             const EstimatorOptions& options) {
  EstimatorReport report;
  report.r_per_element =
      linearization_residual(mesh, u_n, delta_n, k_n, problem, options);
  report.eta_per_element =
      fem_residual(mesh, u_n, delta_n, k_n, problem, options);
  for (double r : report.r_per_element) report.r_omega_sq += r * r;
  for (double eta : report.eta_per_element)
    report.eta_total_sq += eta * eta;
  report.total_estimator =
      std::sqrt(report.r_omega_sq + report.eta_total_sq);
  return report;
}

}  // namespace ptcfem
