#include "ptcfem/ptc.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>

#include "ptcfem/errors.hpp"

namespace ptcfem {

SpMat HilbertProblem::system_matrix(const Vec& u, double t) const {
  const Eigen::Index n = dimension();
  Eigen::MatrixXd dense(n, n);
  Vec e = Vec::Zero(n);
  Vec g(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    e(j) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      Vec ei = Vec::Zero(n);
      ei(i) = 1.0;
      g(i) = inner_product(ei, e);
    }
    dense.col(j) = g - t * jacobian_apply(u, e);
    e(j) = 0.0;
  }
  return dense.sparseView();
}

SpMat HilbertProblem::gram_matrix() const {
  const Eigen::Index n = dimension();
  Eigen::MatrixXd dense(n, n);
  Vec ei = Vec::Zero(n);
  Vec ej = Vec::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    ej(j) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      ei(i) = 1.0;
      dense(i, j) = inner_product(ei, ej);
      ei(i) = 0.0;
    }
    ej(j) = 0.0;
  }
  return dense.sparseView();
}

double HilbertProblem::x_norm(const Vec& v) const {
  return std::sqrt(std::max(0.0, inner_product(v, v)));
}

PtcStep ptc_step(const HilbertProblem& problem, const PtcState& state,
                 const LinearSolveContract& solver) {
  const Vec rhs = problem.residual(state.u);
  const SpMat matrix = problem.system_matrix(state.u, state.k);
  PtcStep step;
  step.delta = solve(matrix, rhs, solver);
  step.next_iterate = state.u + state.k * step.delta;
  return step;
}

StepControlRecord propose_step_size(double pairing_n, double pairing_np1,
                                    double delta_norm_sq, double k_n,
                                    const StepControlConfig& config) {
  if (!(delta_norm_sq > 0.0))
    throw DegenerateIncrement(
        "propose_step_size: zero increment, iteration is stationary");
  StepControlRecord rec;
  rec.pairing_n = pairing_n;
  rec.pairing_np1 = pairing_np1;
  rec.delta_norm_sq = delta_norm_sq;
  rec.k_n = k_n;

  const double numerator = pairing_n - delta_norm_sq;
  const double denominator = pairing_np1 - delta_norm_sq;
  rec.mu_n = numerator / (k_n * delta_norm_sq);
  rec.l_n = 2.0 * std::abs(denominator) /
            (k_n * k_n * delta_norm_sq * std::sqrt(delta_norm_sq));

  if (std::abs(denominator) < config.degenerate_tol * delta_norm_sq) {
    // Vanishing denominator: the local model is (near) exact, so the
    // iteration is effectively Newton; take the largest admissible step.
    rec.degenerate_denominator = true;
    rec.k_star_unclamped = config.k_max;
    rec.k_star = config.k_max;
    return rec;
  }
  rec.k_star_unclamped = 0.5 * k_n * std::abs(numerator / denominator);
  rec.k_star =
      std::clamp(rec.k_star_unclamped, config.k_min, config.k_max);
  return rec;
}

std::optional<double> theoretical_step_size(double mu, double lipschitz,
                                            double residual_norm) {
  const double excess = lipschitz * residual_norm - mu * mu;
  if (!(excess > 0.0)) return std::nullopt;
  return mu / excess;
}

double reduction_factor(double t, double mu, double lipschitz,
                        double residual_norm) {
  const double damping = 1.0 + t * mu;
  return (1.0 + 0.5 * lipschitz * t * t * residual_norm / damping) / damping;
}

double dual_norm(const HilbertProblem& problem, const Vec& functional) {
  SpMat gram = problem.gram_matrix();
  Eigen::SimplicialLDLT<SpMat> ldlt(gram);
  if (ldlt.info() != Eigen::Success)
    throw SingularFactorization("dual_norm: Gram matrix factorization failed");
  const Vec riesz = ldlt.solve(functional);
  return std::sqrt(std::max(0.0, functional.dot(riesz)));
}

ReductionCheck verify_reduction(const HilbertProblem& problem, const Vec& u0,
                                double t, const LinearSolveContract& solver) {
  const auto mu = problem.coercivity_constant(u0);
  const auto lipschitz = problem.lipschitz_constant();
  if (!mu || !lipschitz)
    throw Error("verify_reduction: backend does not certify mu and L");

  const Vec r0 = problem.residual(u0);
  const double r0_norm = dual_norm(problem, r0);
  ReductionCheck check;
  check.gamma_bound = reduction_factor(t, *mu, *lipschitz, r0_norm);
  if (t == 0.0 || r0_norm == 0.0) {
    check.measured_ratio = 1.0;
    return check;
  }
  PtcState state;
  state.u = u0;
  state.k = t;
  const PtcStep step = ptc_step(problem, state, solver);
  const Vec rt = problem.residual(step.next_iterate);
  check.measured_ratio = dual_norm(problem, rt) / r0_norm;
  return check;
}

}  // namespace ptcfem
