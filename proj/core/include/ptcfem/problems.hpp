#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ptcfem/mesh.hpp"

namespace ptcfem {

/// Nodal recipe for the starting iterate: either a constant on all interior
/// nodes or a function evaluated at interior node coordinates. Boundary
/// nodes are always pinned to zero.
struct InitialGuess {
  double constant = 0.0;
  std::function<double(double, double)> nodal;  // used when set

  static InitialGuess interior_constant(double c) { return {c, nullptr}; }
  static InitialGuess from_function(std::function<double(double, double)> f) {
    return {0.0, std::move(f)};
  }
  double value(double x, double y) const {
    return nodal ? nodal(x, y) : constant;
  }
};

/// Semilinear problem -eps*Lap(u) = f(u) + g(x), u = 0 on the boundary.
/// The optional spatial source g keeps manufactured right-hand sides out of
/// the u-dependent part, so f_prime stays the derivative of f.
struct ProblemSpec {
  std::string name;
  DomainSpec domain;
  double epsilon = 1.0;
  std::function<double(double)> f;
  std::function<double(double)> f_prime;
  std::function<double(double, double)> source;  // may be empty (g = 0)
  InitialGuess initial_guess;

  // Declared bounds used for the diagnostic stability constants: sup of f'
  // over the relevant iterate range, and a Lipschitz constant of f'.
  std::optional<double> sigma_f;
  std::optional<double> lipschitz_f_prime;

  double reaction(double u, double x, double y) const {
    return f(u) + (source ? source(x, y) : 0.0);
  }
};

/// Diagnostic constants derived from the problem data. `mu` is empty when
/// the coercivity assumption cannot be certified; the driver proceeds
/// regardless.
struct StabilityConstants {
  double sigma_f = 0.0;
  double lipschitz_f_prime = 0.0;
  double poincare = 0.0;
  std::optional<double> mu;
  double lipschitz_residual = 0.0;  // L = C * L_{f'} / eps with C = 1
};

/// mu = (eps C_P^{-2} - sigma_f) / (eps C_P^{-2} + 1) when sigma_f <
/// eps C_P^{-2}; empty otherwise (not coercive).
std::optional<double> compute_mu(const ProblemSpec& spec, double sigma_f,
                                 double poincare_constant);

StabilityConstants stability_constants(const ProblemSpec& spec);

/// Built-in benchmark problems: "sine-gordon", "ginzburg-landau",
/// "manufactured-linear". Throws UnknownProblem otherwise.
ProblemSpec builtin(const std::string& name, double epsilon);

std::vector<std::string> builtin_names();

/// Exact solution of the manufactured linear benchmark (valid for any eps).
double manufactured_exact(double x, double y);
std::array<double, 2> manufactured_exact_gradient(double x, double y);

}  // namespace ptcfem
