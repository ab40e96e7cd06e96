#pragma once

#include <optional>

#include "ptcfem/hilbert_problem.hpp"
#include "ptcfem/linear_solver.hpp"

namespace ptcfem {

/// State of the pseudo-transient continuation iteration.
struct PtcState {
  int n = 0;
  Vec u;
  double k = 1.0;  // pseudo time step, always > 0
  double residual_norm_estimate = 0.0;
};

/// Clamps and guards for the computable step-size law.
struct StepControlConfig {
  double k_min = 1e-8;
  double k_max = 1e8;
  // Relative threshold below which the step-law denominator counts as
  // degenerate (Newton-like regime): propose k_max.
  double degenerate_tol = 1e-14;
  double stationarity_tol = 1e-12;
};

/// Everything the step-size law computes from one completed step. Pairings
/// keep their sign; the absolute value enters only in the step formula.
struct StepControlRecord {
  double pairing_n = 0.0;      // <F(u_n), delta_n>
  double pairing_np1 = 0.0;    // <F(u_{n+1}), delta_n>
  double delta_norm_sq = 0.0;  // ||delta_n||_X^2
  double k_n = 0.0;
  double mu_n = 0.0;  // computable coercivity estimate
  double l_n = 0.0;   // computable Lipschitz estimate
  double k_star_unclamped = 0.0;
  double k_star = 0.0;  // clamped to [k_min, k_max]
  bool degenerate_denominator = false;
};

struct PtcStep {
  Vec delta;
  Vec next_iterate;  // u_n + k_n * delta
};

/// One linearly implicit step: solves (delta, v)_X - k <F'(u)delta, v> =
/// <F(u), v> and advances u by k*delta. Throws SolverFailure if the system
/// operator has lost invertibility; callers may shrink k and retry.
PtcStep ptc_step(const HilbertProblem& problem, const PtcState& state,
                 const LinearSolveContract& solver = {});

/// Computable step-size proposal
///   k* = (k_n/2) |(<F(u_n),d> - ||d||^2) / (<F(u_{n+1}),d> - ||d||^2)|,
/// together with the mu_n and L_n estimates it is algebraically equal to
/// mu_n / (L_n ||d||). Throws DegenerateIncrement when delta_norm_sq == 0.
StepControlRecord propose_step_size(double pairing_n, double pairing_np1,
                                    double delta_norm_sq, double k_n,
                                    const StepControlConfig& config = {});

/// Residual-minimizing step mu / (L ||F|| - mu^2); empty when
/// L ||F|| <= mu^2, in which case every step contracts and callers use
/// k_max.
std::optional<double> theoretical_step_size(double mu, double lipschitz,
                                            double residual_norm);

/// Reduction factor gamma(t) = (1 + t mu)^{-1} (1 + L t^2 ||F(u0)|| /
/// (2 (1 + t mu))); gamma(0) = 1.
double reduction_factor(double t, double mu, double lipschitz,
                        double residual_norm);

/// Dual norm ||phi||_{X'} via the Riesz map of the problem's Gram matrix.
/// Exact on finite-dimensional backends; used by diagnostics and tests, not
/// by the production step control.
double dual_norm(const HilbertProblem& problem, const Vec& functional);

struct ReductionCheck {
  double measured_ratio = 0.0;
  double gamma_bound = 0.0;
};

/// Measures ||F(u(t))||_{X'} / ||F(u0)||_{X'} against the gamma(t) bound on
/// a backend whose mu and L are certified. Test-suite instrumentation.
ReductionCheck verify_reduction(const HilbertProblem& problem, const Vec& u0,
                                double t,
                                const LinearSolveContract& solver = {});

}  // namespace ptcfem
