#include "ptcfem/linear_solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <cmath>

#include "ptcfem/errors.hpp"

namespace ptcfem {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

double relative_residual(const SpMat& a, const Vec& x, const Vec& b) {
  const double b_norm = b.norm();
  if (b_norm == 0.0) return x.norm() == 0.0 ? 0.0 : (a * x).norm();
  return (a * x - b).norm() / b_norm;
}

// A factorized solve may sit slightly above a tight tolerance on
// ill-conditioned systems; a few refinement sweeps with the existing
// factorization recover it.
template <typename Factorization>
Vec solve_with_refinement(const Factorization& fact, const SpMat& a,
                          const Vec& b, double tolerance) {
  Vec x = fact.solve(b);
  if (!x.allFinite()) throw SingularFactorization("direct solve produced non-finite values");
  for (int sweep = 0; sweep < 3; ++sweep) {
    if (relative_residual(a, x, b) <= tolerance) break;
    const Vec correction = fact.solve(b - a * x);
    if (!correction.allFinite()) break;
    x += correction;
  }
  return x;
}

Vec solve_direct(const SpMat& a, const Vec& b, const LinearSolveContract& c) {
  // LDLT covers the SPD case and most symmetric indefinite systems; LU is
  // the fallback when the pivot-free factorization breaks down.
  Eigen::SimplicialLDLT<SpMat> ldlt(a);
  if (ldlt.info() == Eigen::Success) {
    Vec x;
    try {
      x = solve_with_refinement(ldlt, a, b, c.tolerance);
    } catch (const SingularFactorization&) {
      x.resize(0);
    }
    if (x.size() > 0 && relative_residual(a, x, b) <= c.tolerance) return x;
  }
  Eigen::SparseLU<SpMat> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success)
    throw SingularFactorization("sparse LU factorization failed");
  const Vec x = solve_with_refinement(lu, a, b, c.tolerance);
  const double res = relative_residual(a, x, b);
  if (!(res <= c.tolerance))
    throw SolverFailure("direct solve residual " + std::to_string(res) +
                        " exceeds contract tolerance");
  return x;
}

Vec solve_cg(const SpMat& a, const Vec& b, const LinearSolveContract& c) {
  // Jacobi-preconditioned CG with explicit breakdown detection, so an
  // indefinite matrix raises IndefiniteMatrix instead of a generic failure.
  const Eigen::Index n = a.rows();
  Vec inv_diag(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = a.coeff(i, i);
    if (!(d > 0.0)) throw IndefiniteMatrix("CG: nonpositive diagonal entry");
    inv_diag(i) = 1.0 / d;
  }
  const double b_norm = b.norm();
  Vec x = Vec::Zero(n);
  if (b_norm == 0.0) return x;

  Vec r = b;
  Vec z = inv_diag.cwiseProduct(r);
  Vec p = z;
  double rho = r.dot(z);
  for (int it = 0; it < c.max_iterations; ++it) {
    if (r.norm() <= c.tolerance * b_norm) return x;
    const Vec ap = a * p;
    const double curvature = p.dot(ap);
    if (!(curvature > 0.0))
      throw IndefiniteMatrix("CG breakdown: nonpositive curvature");
    const double alpha = rho / curvature;
    x += alpha * p;
    r -= alpha * ap;
    z = inv_diag.cwiseProduct(r);
    const double rho_next = r.dot(z);
    p = z + (rho_next / rho) * p;
    rho = rho_next;
  }
  if (r.norm() <= c.tolerance * b_norm) return x;
  throw MaxIterationsExceeded("CG did not converge within " +
                              std::to_string(c.max_iterations) +
                              " iterations");
}

}  // namespace

Vec solve(const SpMat& matrix, const Vec& rhs,
          const LinearSolveContract& contract) {
  if (matrix.rows() != matrix.cols() || matrix.rows() != rhs.size())
    throw SolverFailure("solve: dimension mismatch");
  Vec x = contract.method == SolveMethod::direct
              ? solve_direct(matrix, rhs, contract)
              : solve_cg(matrix, rhs, contract);
  // The contract is checked on every path before returning.
  const double res = relative_residual(matrix, x, rhs);
  if (!(res <= contract.tolerance))
    throw SolverFailure("solve residual " + std::to_string(res) +
                        " exceeds contract tolerance");
  return x;
}

}  // namespace ptcfem
