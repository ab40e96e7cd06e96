#include "ptcfem/fem.hpp"

#include <cmath>
#include <limits>

#include "ptcfem/errors.hpp"
#include "ptcfem/quadrature.hpp"

namespace ptcfem {

namespace {

void check_bound(const Mesh& mesh, const FemFunction& u, const char* where) {
  if (u.mesh_generation != mesh.generation)
    throw MeshMismatch(std::string(where) +
                       ": function is bound to another mesh generation");
  if (u.coefficients.size() != mesh.vertex_count())
    throw MeshMismatch(std::string(where) + ": coefficient count mismatch");
}

double require_finite(double value, const char* what) {
  if (!std::isfinite(value))
    throw NonFiniteCoefficient(std::string(what) +
                               " evaluated to a non-finite value");
  return value;
}

// Exact local matrices for P1.
void local_mass(const P1Element& el, double scale, double out[3][3]) {
  if (el.nodes == 2) {
    const double m = scale * el.measure / 6.0;
    out[0][0] = 2 * m;
    out[0][1] = m;
    out[1][0] = m;
    out[1][1] = 2 * m;
    return;
  }
  const double m = scale * el.measure / 12.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = (i == j ? 2 : 1) * m;
}

void local_stiffness(const P1Element& el, double scale, double out[3][3]) {
  for (int i = 0; i < el.nodes; ++i)
    for (int j = 0; j < el.nodes; ++j)
      out[i][j] = scale * el.measure *
                  (el.grad[i][0] * el.grad[j][0] + el.grad[i][1] * el.grad[j][1]);
}

}  // namespace

// Flattens the 1d/2d quadrature rules into one representation.
std::vector<QuadraturePoint> element_quadrature(const Mesh& mesh, int element,
                                                int degree) {
  std::vector<QuadraturePoint> pts;
  const double measure = mesh.element_measure(element);
  const auto& ids = mesh.elements[element];
  if (mesh.dim == 1) {
    const auto rule = line_rule(degree);
    const double xa = mesh.vertices[ids[0]][0];
    const double xb = mesh.vertices[ids[1]][0];
    pts.reserve(rule.points.size());
    for (const auto& p : rule.points) {
      QuadraturePoint q;
      q.x = xa + p.t * (xb - xa);
      q.y = 0.0;
      q.weight = p.w * measure;
      q.basis = {1.0 - p.t, p.t, 0.0};
      pts.push_back(q);
    }
    return pts;
  }
  const auto& rule = triangle_rule(degree);
  const auto& a = mesh.vertices[ids[0]];
  const auto& b = mesh.vertices[ids[1]];
  const auto& c = mesh.vertices[ids[2]];
  pts.reserve(rule.points.size());
  for (const auto& p : rule.points) {
    QuadraturePoint q;
    q.x = p.l0 * a[0] + p.l1 * b[0] + p.l2 * c[0];
    q.y = p.l0 * a[1] + p.l1 * b[1] + p.l2 * c[1];
    q.weight = p.w * measure;
    q.basis = {p.l0, p.l1, p.l2};
    pts.push_back(q);
  }
  return pts;
}

FemFunction FemFunction::zero(const Mesh& mesh) {
  FemFunction u;
  u.mesh_generation = mesh.generation;
  u.coefficients = Eigen::VectorXd::Zero(mesh.vertex_count());
  return u;
}

FemFunction FemFunction::from_initial_guess(const Mesh& mesh,
                                            const InitialGuess& guess) {
  FemFunction u = zero(mesh);
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    if (mesh.boundary_vertex[v]) continue;
    u.coefficients(v) = guess.value(mesh.vertices[v][0], mesh.vertices[v][1]);
  }
  return u;
}

DofMap build_dof_map(const Mesh& mesh) {
  DofMap map;
  map.vertex_to_dof.assign(mesh.vertex_count(), -1);
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    if (mesh.boundary_vertex[v]) continue;
    map.vertex_to_dof[v] = static_cast<int>(map.dof_to_vertex.size());
    map.dof_to_vertex.push_back(v);
  }
  return map;
}

P1Element p1_element(const Mesh& mesh, int element) {
  P1Element el;
  const auto& ids = mesh.elements[element];
  if (mesh.dim == 1) {
    el.nodes = 2;
    el.vertex = {ids[0], ids[1], -1};
    el.measure = mesh.element_measure(element);
    el.diameter = el.measure;
    el.grad[0] = {-1.0 / el.measure, 0.0};
    el.grad[1] = {1.0 / el.measure, 0.0};
    return el;
  }
  el.nodes = 3;
  el.vertex = {ids[0], ids[1], ids[2]};
  el.measure = mesh.element_measure(element);
  el.diameter = mesh.element_diameter(element);
  const auto& a = mesh.vertices[ids[0]];
  const auto& b = mesh.vertices[ids[1]];
  const auto& c = mesh.vertices[ids[2]];
  const double inv = 1.0 / (2.0 * el.measure);
  el.grad[0] = {(b[1] - c[1]) * inv, (c[0] - b[0]) * inv};
  el.grad[1] = {(c[1] - a[1]) * inv, (a[0] - c[0]) * inv};
  el.grad[2] = {(a[1] - b[1]) * inv, (b[0] - a[0]) * inv};
  return el;
}

Eigen::SparseMatrix<double> assemble_x_inner_product(const Mesh& mesh,
                                                     double epsilon) {
  const DofMap dofs = build_dof_map(mesh);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.element_count()) * 9);
  double m[3][3], k[3][3];
  for (int e = 0; e < mesh.element_count(); ++e) {
    const P1Element el = p1_element(mesh, e);
    local_mass(el, 1.0, m);
    local_stiffness(el, epsilon, k);
    for (int i = 0; i < el.nodes; ++i) {
      const int di = dofs.vertex_to_dof[el.vertex[i]];
      if (di < 0) continue;
      for (int j = 0; j < el.nodes; ++j) {
        const int dj = dofs.vertex_to_dof[el.vertex[j]];
        if (dj < 0) continue;
        triplets.emplace_back(di, dj, m[i][j] + k[i][j]);
      }
    }
  }
  Eigen::SparseMatrix<double> x(dofs.count(), dofs.count());
  x.setFromTriplets(triplets.begin(), triplets.end());
  return x;
}

double x_inner_product(const Mesh& mesh, const FemFunction& u,
                       const FemFunction& v, double epsilon) {
  check_bound(mesh, u, "x_inner_product");
  check_bound(mesh, v, "x_inner_product");
  double total = 0.0;
  double m[3][3], k[3][3];
  for (int e = 0; e < mesh.element_count(); ++e) {
    const P1Element el = p1_element(mesh, e);
    local_mass(el, 1.0, m);
    local_stiffness(el, epsilon, k);
    for (int i = 0; i < el.nodes; ++i)
      for (int j = 0; j < el.nodes; ++j)
        total += (m[i][j] + k[i][j]) * u.coefficients(el.vertex[i]) *
                 v.coefficients(el.vertex[j]);
  }
  return total;
}

AssembledSystem assemble_ptc_system(const Mesh& mesh, const FemFunction& u_n,
                                    double k_n, const ProblemSpec& problem,
                                    const AssemblyOptions& options) {
  check_bound(mesh, u_n, "assemble_ptc_system");
  AssembledSystem system;
  system.dofs = build_dof_map(mesh);
  const int n = system.dofs.count();
  system.rhs = Eigen::VectorXd::Zero(n);

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.element_count()) * 9);
  const double eps = problem.epsilon;
  double mass[3][3], stiff[3][3];

  for (int e = 0; e < mesh.element_count(); ++e) {
    const P1Element el = p1_element(mesh, e);
    local_mass(el, 1.0, mass);
    // (1 + k) eps K covers both the inner-product and the -k(-eps K) parts.
    local_stiffness(el, (1.0 + k_n) * eps, stiff);

    std::array<double, 2> grad_u{0.0, 0.0};
    for (int i = 0; i < el.nodes; ++i) {
      const double ci = u_n.coefficients(el.vertex[i]);
      grad_u[0] += ci * el.grad[i][0];
      grad_u[1] += ci * el.grad[i][1];
    }

    double local_matrix[3][3];
    for (int i = 0; i < el.nodes; ++i)
      for (int j = 0; j < el.nodes; ++j)
        local_matrix[i][j] = mass[i][j] + stiff[i][j];

    double load[3] = {0.0, 0.0, 0.0};
    for (const auto& q : element_quadrature(mesh, e, options.quadrature_degree)) {
      double u_q = 0.0;
      for (int i = 0; i < el.nodes; ++i)
        u_q += q.basis[i] * u_n.coefficients(el.vertex[i]);
      const double f_q = require_finite(problem.reaction(u_q, q.x, q.y), "f");
      const double fp_q = require_finite(problem.f_prime(u_q), "f'");
      for (int i = 0; i < el.nodes; ++i) {
        load[i] += q.weight * f_q * q.basis[i];
        for (int j = 0; j < el.nodes; ++j)
          local_matrix[i][j] -= k_n * q.weight * fp_q * q.basis[i] * q.basis[j];
      }
    }
    for (int i = 0; i < el.nodes; ++i)
      load[i] -= eps * el.measure *
                 (grad_u[0] * el.grad[i][0] + grad_u[1] * el.grad[i][1]);

    for (int i = 0; i < el.nodes; ++i) {
      const int di = system.dofs.vertex_to_dof[el.vertex[i]];
      if (di < 0) continue;
      system.rhs(di) += load[i];
      for (int j = 0; j < el.nodes; ++j) {
        const int dj = system.dofs.vertex_to_dof[el.vertex[j]];
        if (dj < 0) continue;
        triplets.emplace_back(di, dj, local_matrix[i][j]);
      }
    }
  }
  system.matrix.resize(n, n);
  system.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return system;
}

double evaluate_dual_pairing(const Mesh& mesh, const FemFunction& u,
                             const FemFunction& v, const ProblemSpec& problem,
                             const AssemblyOptions& options) {
  if (u.mesh_generation != v.mesh_generation)
    throw MeshMismatch("evaluate_dual_pairing: mesh generations differ");
  check_bound(mesh, u, "evaluate_dual_pairing");
  const double eps = problem.epsilon;
  double total = 0.0;
  for (int e = 0; e < mesh.element_count(); ++e) {
    const P1Element el = p1_element(mesh, e);
    std::array<double, 2> grad_u{0.0, 0.0};
    std::array<double, 2> grad_v{0.0, 0.0};
    for (int i = 0; i < el.nodes; ++i) {
      const double cu = u.coefficients(el.vertex[i]);
      const double cv = v.coefficients(el.vertex[i]);
      grad_u[0] += cu * el.grad[i][0];
      grad_u[1] += cu * el.grad[i][1];
      grad_v[0] += cv * el.grad[i][0];
      grad_v[1] += cv * el.grad[i][1];
    }
    for (const auto& q : element_quadrature(mesh, e, options.quadrature_degree)) {
      double u_q = 0.0, v_q = 0.0;
      for (int i = 0; i < el.nodes; ++i) {
        u_q += q.basis[i] * u.coefficients(el.vertex[i]);
        v_q += q.basis[i] * v.coefficients(el.vertex[i]);
      }
      total += q.weight *
               require_finite(problem.reaction(u_q, q.x, q.y), "f") * v_q;
    }
    total -= eps * el.measure *
             (grad_u[0] * grad_v[0] + grad_u[1] * grad_v[1]);
  }
  return total;
}

FemFunction interpolate_to_refined(const FemFunction& u, const Mesh& parent,
                                   const Mesh& child,
                                   const RefinementAncestry& ancestry) {
  check_bound(parent, u, "interpolate_to_refined");
  if (ancestry.parent_generation != parent.generation ||
      ancestry.child_generation != child.generation ||
      ancestry.parent_vertex_count != parent.vertex_count() ||
      parent.vertex_count() +
              static_cast<int>(ancestry.new_vertex_parents.size()) !=
          child.vertex_count())
    throw AncestryMismatch(
        "interpolate_to_refined: ancestry does not link these meshes");

  FemFunction out;
  out.mesh_generation = child.generation;
  out.coefficients = Eigen::VectorXd::Zero(child.vertex_count());
  out.coefficients.head(parent.vertex_count()) = u.coefficients;
  for (std::size_t i = 0; i < ancestry.new_vertex_parents.size(); ++i) {
    const auto& [a, b] = ancestry.new_vertex_parents[i];
    out.coefficients(ancestry.parent_vertex_count + static_cast<int>(i)) =
        0.5 * (u.coefficients(a) + u.coefficients(b));
  }
  return out;
}

double energy_norm(const Mesh& mesh, const FemFunction& u, double epsilon,
                   std::span<const int> subdomain) {
  check_bound(mesh, u, "energy_norm");
  double total = 0.0;
  double m[3][3], k[3][3];
  auto accumulate = [&](int e) {
    const P1Element el = p1_element(mesh, e);
    local_mass(el, 1.0, m);
    local_stiffness(el, epsilon, k);
    for (int i = 0; i < el.nodes; ++i)
      for (int j = 0; j < el.nodes; ++j)
        total += (m[i][j] + k[i][j]) * u.coefficients(el.vertex[i]) *
                 u.coefficients(el.vertex[j]);
  };
  if (subdomain.empty()) {
    for (int e = 0; e < mesh.element_count(); ++e) accumulate(e);
  } else {
    for (int e : subdomain) accumulate(e);
  }
  return std::sqrt(std::max(0.0, total));
}

double evaluate(const Mesh& mesh, const FemFunction& u, double x, double y) {
  check_bound(mesh, u, "evaluate");
  constexpr double tol = 1e-12;
  if (mesh.dim == 1) {
    for (int e = 0; e < mesh.element_count(); ++e) {
      const double xa = mesh.vertices[mesh.elements[e][0]][0];
      const double xb = mesh.vertices[mesh.elements[e][1]][0];
      if (x < xa - tol || x > xb + tol) continue;
      const double t = (x - xa) / (xb - xa);
      return (1.0 - t) * u.coefficients(mesh.elements[e][0]) +
             t * u.coefficients(mesh.elements[e][1]);
    }
    throw Error("evaluate: point outside the mesh");
  }
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto& ids = mesh.elements[e];
    const auto& a = mesh.vertices[ids[0]];
    const auto& b = mesh.vertices[ids[1]];
    const auto& c = mesh.vertices[ids[2]];
    const double area2 = (b[0] - a[0]) * (c[1] - a[1]) -
                         (c[0] - a[0]) * (b[1] - a[1]);
    const double l1 = ((x - a[0]) * (c[1] - a[1]) -
                       (c[0] - a[0]) * (y - a[1])) / area2;
    const double l2 = ((b[0] - a[0]) * (y - a[1]) -
                       (x - a[0]) * (b[1] - a[1])) / area2;
    const double l0 = 1.0 - l1 - l2;
    if (l0 < -tol || l1 < -tol || l2 < -tol) continue;
    return l0 * u.coefficients(ids[0]) + l1 * u.coefficients(ids[1]) +
           l2 * u.coefficients(ids[2]);
  }
  throw Error("evaluate: point outside the mesh");
}

std::array<double, 2> element_gradient(const Mesh& mesh, const FemFunction& u,
                                       int element) {
  const P1Element el = p1_element(mesh, element);
  std::array<double, 2> g{0.0, 0.0};
  for (int i = 0; i < el.nodes; ++i) {
    const double ci = u.coefficients(el.vertex[i]);
    g[0] += ci * el.grad[i][0];
    g[1] += ci * el.grad[i][1];
  }
  return g;
}

Eigen::VectorXd gather_interior(const FemFunction& u, const DofMap& dofs) {
  Eigen::VectorXd out(dofs.count());
  for (int d = 0; d < dofs.count(); ++d)
    out(d) = u.coefficients(dofs.dof_to_vertex[d]);
  return out;
}

FemFunction scatter_interior(const Eigen::VectorXd& interior,
                             const DofMap& dofs, const Mesh& mesh) {
  FemFunction u = FemFunction::zero(mesh);
  for (int d = 0; d < dofs.count(); ++d)
    u.coefficients(dofs.dof_to_vertex[d]) = interior(d);
  return u;
}

FemHilbertProblem::FemHilbertProblem(const Mesh& mesh,
                                     const ProblemSpec& problem,
                                     AssemblyOptions options)
    : mesh_(&mesh),
      problem_(&problem),
      options_(options),
      dofs_(build_dof_map(mesh)),
      x_matrix_(assemble_x_inner_product(mesh, problem.epsilon)) {}

Vec FemHilbertProblem::residual(const Vec& u) const {
  const FemFunction uh = to_function(u);
  Vec out(dofs_.count());
  // <F(u), phi_i> for every interior hat function: one assembly sweep.
  const double eps = problem_->epsilon;
  out.setZero();
  for (int e = 0; e < mesh_->element_count(); ++e) {
    const P1Element el = p1_element(*mesh_, e);
    std::array<double, 2> grad_u{0.0, 0.0};
    for (int i = 0; i < el.nodes; ++i) {
      const double ci = uh.coefficients(el.vertex[i]);
      grad_u[0] += ci * el.grad[i][0];
      grad_u[1] += ci * el.grad[i][1];
    }
    double load[3] = {0.0, 0.0, 0.0};
    for (const auto& q :
         element_quadrature(*mesh_, e, options_.quadrature_degree)) {
      double u_q = 0.0;
      for (int i = 0; i < el.nodes; ++i)
        u_q += q.basis[i] * uh.coefficients(el.vertex[i]);
      const double f_q =
          require_finite(problem_->reaction(u_q, q.x, q.y), "f");
      for (int i = 0; i < el.nodes; ++i)
        load[i] += q.weight * f_q * q.basis[i];
    }
    for (int i = 0; i < el.nodes; ++i) {
      load[i] -= eps * el.measure *
                 (grad_u[0] * el.grad[i][0] + grad_u[1] * el.grad[i][1]);
      const int di = dofs_.vertex_to_dof[el.vertex[i]];
      if (di >= 0) out(di) += load[i];
    }
  }
  return out;
}

Vec FemHilbertProblem::jacobian_apply(const Vec& u, const Vec& w) const {
  const FemFunction uh = to_function(u);
  const FemFunction wh = to_function(w);
  const double eps = problem_->epsilon;
  Vec out = Vec::Zero(dofs_.count());
  for (int e = 0; e < mesh_->element_count(); ++e) {
    const P1Element el = p1_element(*mesh_, e);
    std::array<double, 2> grad_w{0.0, 0.0};
    for (int i = 0; i < el.nodes; ++i) {
      const double ci = wh.coefficients(el.vertex[i]);
      grad_w[0] += ci * el.grad[i][0];
      grad_w[1] += ci * el.grad[i][1];
    }
    double apply[3] = {0.0, 0.0, 0.0};
    for (const auto& q :
         element_quadrature(*mesh_, e, options_.quadrature_degree)) {
      double u_q = 0.0, w_q = 0.0;
      for (int i = 0; i < el.nodes; ++i) {
        u_q += q.basis[i] * uh.coefficients(el.vertex[i]);
        w_q += q.basis[i] * wh.coefficients(el.vertex[i]);
      }
      const double fp_q = require_finite(problem_->f_prime(u_q), "f'");
      for (int i = 0; i < el.nodes; ++i)
        apply[i] += q.weight * fp_q * w_q * q.basis[i];
    }
    for (int i = 0; i < el.nodes; ++i) {
      apply[i] -= eps * el.measure *
                  (grad_w[0] * el.grad[i][0] + grad_w[1] * el.grad[i][1]);
      const int di = dofs_.vertex_to_dof[el.vertex[i]];
      if (di >= 0) out(di) += apply[i];
    }
  }
  return out;
}

double FemHilbertProblem::inner_product(const Vec& a, const Vec& b) const {
  return a.dot(x_matrix_ * b);
}

SpMat FemHilbertProblem::system_matrix(const Vec& u, double t) const {
  return assemble_ptc_system(*mesh_, to_function(u), t, *problem_, options_)
      .matrix;
}

}  // namespace ptcfem
