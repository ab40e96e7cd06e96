#pragma once

#include <vector>

namespace ptcfem {

/// Barycentric quadrature node on the reference triangle. Weights sum to 1
/// and are scaled by the element area at assembly time.
struct TrianglePoint {
  double l0, l1, l2;
  double w;
};

struct TriangleRule {
  int degree = 0;
  std::vector<TrianglePoint> points;
};

/// Gauss node on the reference interval (0,1); weights sum to 1.
struct LinePoint {
  double t;
  double w;
};

struct LineRule {
  int degree = 0;
  std::vector<LinePoint> points;
};

/// Symmetric triangle rule exact to the requested polynomial degree.
/// Supported tiers: degree <= 4 (6 points) and degree <= 8 (16 points).
const TriangleRule& triangle_rule(int degree);

/// Gauss-Legendre rule on (0,1) exact to the requested degree
/// (nodes via Golub-Welsch, so any degree is available).
LineRule line_rule(int degree);

}  // namespace ptcfem
