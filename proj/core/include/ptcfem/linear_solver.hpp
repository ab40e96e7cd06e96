#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace ptcfem {

enum class SolveMethod { direct, conjugate_gradient };

/// Contract for solving the sparse symmetric systems produced by assembly.
/// On success the returned x satisfies ||Ax - b||_2 <= tolerance ||b||_2;
/// a solve that cannot meet the contract throws, it never returns silently.
struct LinearSolveContract {
  SolveMethod method = SolveMethod::direct;
  double tolerance = 1e-12;
  int max_iterations = 10000;
};

/// Solves A x = b under the contract. Throws SingularFactorization,
/// IndefiniteMatrix (CG breakdown; callers may fall back to direct),
/// MaxIterationsExceeded, or SolverFailure when the residual check fails.
Eigen::VectorXd solve(const Eigen::SparseMatrix<double>& matrix,
                      const Eigen::VectorXd& rhs,
                      const LinearSolveContract& contract = {});

}  // namespace ptcfem
