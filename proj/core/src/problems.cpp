#include "ptcfem/problems.hpp"

#include <cmath>
#include <numbers>

#include "ptcfem/errors.hpp"

namespace ptcfem {

std::optional<double> compute_mu(const ProblemSpec& spec, double sigma_f,
                                 double poincare_constant) {
  const double rate = spec.epsilon / (poincare_constant * poincare_constant);
  if (!(sigma_f < rate)) return std::nullopt;
  return (rate - sigma_f) / (rate + 1.0);
}

StabilityConstants stability_constants(const ProblemSpec& spec) {
  StabilityConstants out;
  out.sigma_f = spec.sigma_f.value_or(0.0);
  out.lipschitz_f_prime = spec.lipschitz_f_prime.value_or(0.0);
  out.poincare = spec.domain.poincare_constant();
  out.mu = compute_mu(spec, out.sigma_f, out.poincare);
  out.lipschitz_residual = out.lipschitz_f_prime / spec.epsilon;
  return out;
}

ProblemSpec builtin(const std::string& name, double epsilon) {
  ProblemSpec spec;
  spec.name = name;
  spec.epsilon = epsilon;

  if (name == "sine-gordon") {
    spec.domain = DomainSpec::square(0.0, 1.0);
    spec.f = [](double u) { return -std::sin(u) - u + 1.0; };
    spec.f_prime = [](double u) { return -std::cos(u) - 1.0; };
    spec.initial_guess = InitialGuess::interior_constant(0.5);
    spec.sigma_f = 0.0;          // f'(u) = -cos(u) - 1 <= 0
    spec.lipschitz_f_prime = 1.0;  // |f''| = |sin| <= 1
    return spec;
  }

  if (name == "ginzburg-landau") {
    spec.domain = DomainSpec::square(-1.0, 1.0);
    spec.f = [](double u) { return u * (1.0 - u * u); };
    spec.f_prime = [](double u) { return 1.0 - 3.0 * u * u; };
    spec.initial_guess = InitialGuess::interior_constant(1.0);
    spec.sigma_f = 1.0;  // attained at u = 0; coercivity may fail, run anyway
    spec.lipschitz_f_prime = 12.0;  // |f''| = 6|u| on the iterate range [-2,2]
    return spec;
  }

  if (name == "manufactured-linear") {
    // f(u) = -u + g with g tuned so that u*(x,y) = sin(pi x) sin(pi y)
    // solves -eps Lap(u) = f(u) on the unit square.
    spec.domain = DomainSpec::square(0.0, 1.0);
    spec.f = [](double u) { return -u; };
    spec.f_prime = [](double) { return -1.0; };
    const double pi = std::numbers::pi;
    const double scale = 2.0 * pi * pi * epsilon + 1.0;
    spec.source = [scale, pi](double x, double y) {
      return scale * std::sin(pi * x) * std::sin(pi * y);
    };
    spec.initial_guess = InitialGuess::interior_constant(0.0);
    spec.sigma_f = -1.0;
    spec.lipschitz_f_prime = 0.0;
    return spec;
  }

  throw UnknownProblem("unknown problem: " + name);
}

std::vector<std::string> builtin_names() {
  return {"sine-gordon", "ginzburg-landau", "manufactured-linear"};
}

double manufactured_exact(double x, double y) {
  const double pi = std::numbers::pi;
  return std::sin(pi * x) * std::sin(pi * y);
}

std::array<double, 2> manufactured_exact_gradient(double x, double y) {
  const double pi = std::numbers::pi;
  return {pi * std::cos(pi * x) * std::sin(pi * y),
          pi * std::sin(pi * x) * std::cos(pi * y)};
}

}  // namespace ptcfem
