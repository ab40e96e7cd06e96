#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <memory>
#include <span>
#include <vector>

#include "ptcfem/hilbert_problem.hpp"
#include "ptcfem/mesh.hpp"
#include "ptcfem/problems.hpp"

namespace ptcfem {

/// Piecewise linear function on a mesh, one coefficient per vertex.
/// Coefficients at Dirichlet (boundary) vertices are identically zero.
struct FemFunction {
  int mesh_generation = 0;
  Eigen::VectorXd coefficients;

  static FemFunction zero(const Mesh& mesh);
  static FemFunction from_initial_guess(const Mesh& mesh,
                                        const InitialGuess& guess);
};

/// Interior-DOF numbering: boundary vertices do not carry unknowns.
struct DofMap {
  std::vector<int> vertex_to_dof;  // -1 for boundary vertices
  std::vector<int> dof_to_vertex;
  int count() const { return static_cast<int>(dof_to_vertex.size()); }
};

DofMap build_dof_map(const Mesh& mesh);

/// Linear system for one PTC step, restricted to interior DOFs.
struct AssembledSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  DofMap dofs;
};

struct AssemblyOptions {
  // Polynomial degree the quadrature must integrate exactly: 4 (default,
  // 6-point triangle rule / 3-point Gauss) or 8 (verification tier).
  int quadrature_degree = 4;
};

/// Geometry of one element used by assembly and estimation: vertex ids,
/// measure, and the constant P1 basis gradients.
struct P1Element {
  int nodes = 3;  // 2 in 1d
  std::array<int, 3> vertex{-1, -1, -1};
  double measure = 0.0;
  double diameter = 0.0;
  std::array<std::array<double, 2>, 3> grad{};
};

P1Element p1_element(const Mesh& mesh, int element);

/// Physical quadrature point with weight scaled by the element measure and
/// the P1 basis values at the point (third entry unused in 1d).
struct QuadraturePoint {
  double x = 0.0, y = 0.0;
  double weight = 0.0;
  std::array<double, 3> basis{};
};

std::vector<QuadraturePoint> element_quadrature(const Mesh& mesh, int element,
                                                int degree);

/// Mass-plus-stiffness matrix of the inner product
/// (u,v) = int(uv + eps grad u . grad v), restricted to interior DOFs.
Eigen::SparseMatrix<double> assemble_x_inner_product(const Mesh& mesh,
                                                     double epsilon);

/// (u,v)_X evaluated elementwise with exact local matrices; equals the
/// quadratic form of assemble_x_inner_product for functions with zero trace.
double x_inner_product(const Mesh& mesh, const FemFunction& u,
                       const FemFunction& v, double epsilon);

/// Assembles the step system a(u_n,k_n; delta, v) = l(u_n; v): matrix
/// (delta,v)_X - k int{f'(u_n) delta v - eps grad delta . grad v}, load
/// int{f(u_n) v - eps grad u_n . grad v}. Throws NonFiniteCoefficient if f
/// or f' blows up at a quadrature point.
AssembledSystem assemble_ptc_system(const Mesh& mesh, const FemFunction& u_n,
                                    double k_n, const ProblemSpec& problem,
                                    const AssemblyOptions& options = {});

/// Dual pairing <F(u), v> = int{f(u) v - eps grad u . grad v} by quadrature.
/// Throws MeshMismatch when u and v live on different generations.
double evaluate_dual_pairing(const Mesh& mesh, const FemFunction& u,
                             const FemFunction& v, const ProblemSpec& problem,
                             const AssemblyOptions& options = {});

/// Nodal transfer onto a mesh produced by refine(); since the P1 spaces are
/// nested under bisection, the result represents the same function.
FemFunction interpolate_to_refined(const FemFunction& u, const Mesh& parent,
                                   const Mesh& child,
                                   const RefinementAncestry& ancestry);

/// Energy norm (eps ||grad u||_{0,D}^2 + ||u||_{0,D}^2)^{1/2}; D is the
/// whole domain when `subdomain` is empty.
double energy_norm(const Mesh& mesh, const FemFunction& u, double epsilon,
                   std::span<const int> subdomain = {});

/// Point evaluation of a P1 function (linear element search).
double evaluate(const Mesh& mesh, const FemFunction& u, double x,
                double y = 0.0);

/// Gradient of u on one element (constant per element).
std::array<double, 2> element_gradient(const Mesh& mesh, const FemFunction& u,
                                       int element);

Eigen::VectorXd gather_interior(const FemFunction& u, const DofMap& dofs);
FemFunction scatter_interior(const Eigen::VectorXd& interior,
                             const DofMap& dofs, const Mesh& mesh);

/// HilbertProblem realization of the semilinear operator on the P1 space of
/// a fixed mesh, with vectors indexed by interior DOFs. This is what the
/// adaptive driver feeds to the PTC iteration.
class FemHilbertProblem final : public HilbertProblem {
 public:
  FemHilbertProblem(const Mesh& mesh, const ProblemSpec& problem,
                    AssemblyOptions options = {});

  Eigen::Index dimension() const override { return dofs_.count(); }
  Vec residual(const Vec& u) const override;
  Vec jacobian_apply(const Vec& u, const Vec& w) const override;
  double inner_product(const Vec& a, const Vec& b) const override;
  SpMat system_matrix(const Vec& u, double t) const override;
  SpMat gram_matrix() const override { return x_matrix_; }

  const DofMap& dofs() const { return dofs_; }
  FemFunction to_function(const Vec& interior) const {
    return scatter_interior(interior, dofs_, *mesh_);
  }
  Vec to_interior(const FemFunction& u) const {
    return gather_interior(u, dofs_);
  }

 private:
  const Mesh* mesh_;
  const ProblemSpec* problem_;
  AssemblyOptions options_;
  DofMap dofs_;
  SpMat x_matrix_;
};

}  // namespace ptcfem
