#include "ptcfem/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace ptcfem {

namespace {

void push_perm3(std::vector<TrianglePoint>& pts, double a, double b, double w) {
  // All distinct permutations of (a, b, b).
  pts.push_back({a, b, b, w});
  pts.push_back({b, a, b, w});
  pts.push_back({b, b, a, w});
}

void normalize(TriangleRule& rule) {
  double total = 0.0;
  for (const auto& p : rule.points) total += p.w;
  for (auto& p : rule.points) p.w /= total;
}

TriangleRule make_degree4() {
  // Dunavant's 6-point rule, exact for polynomials of degree 4.
  TriangleRule rule;
  rule.degree = 4;
  push_perm3(rule.points, 0.108103018168070, 0.445948490915965,
             0.223381589678011);
  push_perm3(rule.points, 0.816847572980459, 0.091576213509771,
             0.109951743655322);
  normalize(rule);
  return rule;
}

// Collapsed tensor-Gauss (Duffy) rule: map (s,t) in the unit square to the
// triangle via (x,y) = (s, t(1-s)) with Jacobian (1-s). Gauss nodes come
// from Golub-Welsch, so the rule is machine-exact at any degree without
// tabulated constants.
TriangleRule make_duffy(int degree) {
  TriangleRule rule;
  rule.degree = degree;
  const LineRule line = line_rule(degree + 1);  // +1 absorbs the Jacobian
  for (const auto& ps : line.points) {
    for (const auto& pt : line.points) {
      const double x = ps.t;
      const double y = pt.t * (1.0 - ps.t);
      rule.points.push_back(
          {1.0 - x - y, x, y, 2.0 * ps.w * pt.w * (1.0 - ps.t)});
    }
  }
  normalize(rule);
  return rule;
}

}  // namespace

const TriangleRule& triangle_rule(int degree) {
  static const TriangleRule d4 = make_degree4();
  static const TriangleRule d8 = make_duffy(8);
  static const TriangleRule d12 = make_duffy(12);
  if (degree <= 4) return d4;
  if (degree <= 8) return d8;
  if (degree <= 12) return d12;
  throw std::invalid_argument("triangle_rule: degree > 12 not available");
}

LineRule line_rule(int degree) {
  const int n = (degree + 2) / 2;  // n-point Gauss is exact to degree 2n-1
  // Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix for the
  // Legendre recurrence, weights come from the first eigenvector components.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    jacobi(i, i - 1) = b;
    jacobi(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  LineRule rule;
  rule.degree = 2 * n - 1;
  rule.points.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double node = eig.eigenvalues()(i);           // in (-1, 1)
    const double v0 = eig.eigenvectors()(0, i);
    rule.points.push_back({0.5 * (node + 1.0), v0 * v0});  // weights sum to 1
  }
  return rule;
}

}  // namespace ptcfem
