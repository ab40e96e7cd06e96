#include <cmath>
#include <doctest.h>

#include "ptcfem/quadrature.hpp"

namespace {

// Exact integral of x^p y^q over the reference triangle {x,y>0, x+y<1}:
// p! q! / (p+q+2)!.
double exact_monomial(int p, int q) {
  auto factorial = [](int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  return factorial(p) * factorial(q) / factorial(p + q + 2);
}

double integrate_monomial(const ptcfem::TriangleRule& rule, int p, int q) {
  // Reference triangle has area 1/2; rule weights sum to 1.
  double total = 0.0;
  for (const auto& pt : rule.points)
    total += pt.w * std::pow(pt.l1, p) * std::pow(pt.l2, q);
  return 0.5 * total;
}

}  // namespace

TEST_CASE("triangle rules integrate monomials exactly up to their degree") {
  for (int degree : {4, 8, 12}) {
    const auto& rule = ptcfem::triangle_rule(degree);
    for (int p = 0; p <= degree; ++p) {
      for (int q = 0; p + q <= degree; ++q) {
        const double got = integrate_monomial(rule, p, q);
        const double want = exact_monomial(p, q);
        CHECK(got == doctest::Approx(want).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("triangle rule weights are positive and sum to one") {
  for (int degree : {4, 8}) {
    const auto& rule = ptcfem::triangle_rule(degree);
    double sum = 0.0;
    for (const auto& pt : rule.points) {
      CHECK(pt.w > 0.0);
      CHECK(pt.l0 == doctest::Approx(1.0 - pt.l1 - pt.l2).epsilon(1e-14));
      sum += pt.w;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(ptcfem::triangle_rule(4).points.size() == 6);
}

TEST_CASE("line rules integrate monomials exactly up to their degree") {
  for (int degree : {3, 5, 9}) {
    const auto rule = ptcfem::line_rule(degree);
    for (int p = 0; p <= rule.degree; ++p) {
      double total = 0.0;
      for (const auto& pt : rule.points) total += pt.w * std::pow(pt.t, p);
      CHECK(total == doctest::Approx(1.0 / (p + 1)).epsilon(1e-14));
    }
  }
  CHECK(ptcfem::line_rule(5).points.size() == 3);
}
