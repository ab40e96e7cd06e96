#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <utility>

#include "ptcfem/fem.hpp"
#include "ptcfem/mesh.hpp"
#include "ptcfem/quadrature.hpp"

// Independent FEM-side oracles: high-order integration of exact errors,
// conformity audits, and pointwise checks. These never reuse the production
// estimator/assembly code paths they are meant to check.
namespace ptcfem_tests {

/// High-order integral of f over one element (degree-12 collapsed Gauss in
/// 2d, 8-point Gauss in 1d).
inline double integrate_element(const ptcfem::Mesh& mesh, int element,
                                const std::function<double(double, double)>& f) {
  double total = 0.0;
  for (const auto& q : ptcfem::element_quadrature(mesh, element, 12))
    total += q.weight * f(q.x, q.y);
  return total;
}

/// Energy-norm error ||u_exact - u_h||_{eps} with exact solution and
/// gradient supplied by the caller, integrated at high order.
inline double exact_energy_error(
    const ptcfem::Mesh& mesh, const ptcfem::FemFunction& u_h, double epsilon,
    const std::function<double(double, double)>& exact,
    const std::function<std::array<double, 2>(double, double)>& exact_grad) {
  double total = 0.0;
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto grad_h = ptcfem::element_gradient(mesh, u_h, e);
    const auto& ids = mesh.elements[e];
    for (const auto& q : ptcfem::element_quadrature(mesh, e, 12)) {
      double uh_q = 0.0;
      for (int i = 0; i < (mesh.dim == 1 ? 2 : 3); ++i)
        uh_q += q.basis[i] * u_h.coefficients(ids[i]);
      const double diff = exact(q.x, q.y) - uh_q;
      const auto g = exact_grad(q.x, q.y);
      const double gx = g[0] - grad_h[0];
      const double gy = g[1] - grad_h[1];
      total += q.weight * (diff * diff + epsilon * (gx * gx + gy * gy));
    }
  }
  return std::sqrt(total);
}

struct FacetAudit {
  bool conforming = true;
  int interior = 0;
  int boundary = 0;
  int bad = 0;
};

/// Re-derives facet adjacency from scratch by counting how many elements
/// share each vertex pair (or vertex in 1d): conformity means every facet
/// is shared by exactly one or two elements, and the mesh's own facet table
/// agrees.
inline FacetAudit audit_facets(const ptcfem::Mesh& mesh) {
  FacetAudit audit;
  std::map<std::pair<int, int>, int> count;
  for (const auto& el : mesh.elements) {
    if (mesh.dim == 1) {
      count[{el[0], -1}] += 1;
      count[{el[1], -1}] += 1;
    } else {
      for (int k = 0; k < 3; ++k) {
        int a = el[k], b = el[(k + 1) % 3];
        if (a > b) std::swap(a, b);
        count[{a, b}] += 1;
      }
    }
  }
  for (const auto& [facet, n] : count) {
    if (n == 1)
      ++audit.boundary;
    else if (n == 2)
      ++audit.interior;
    else {
      ++audit.bad;
      audit.conforming = false;
    }
  }
  if (audit.interior != static_cast<int>(mesh.interior_facets.size()))
    audit.conforming = false;
  if (audit.interior + audit.boundary != static_cast<int>(mesh.facets.size()))
    audit.conforming = false;
  return audit;
}

/// Smallest interior angle over all triangles (radians).
inline double min_angle(const ptcfem::Mesh& mesh) {
  double best = 4.0;
  for (const auto& el : mesh.elements) {
    for (int k = 0; k < 3; ++k) {
      const auto& a = mesh.vertices[el[k]];
      const auto& b = mesh.vertices[el[(k + 1) % 3]];
      const auto& c = mesh.vertices[el[(k + 2) % 3]];
      const double ux = b[0] - a[0], uy = b[1] - a[1];
      const double vx = c[0] - a[0], vy = c[1] - a[1];
      const double angle =
          std::acos((ux * vx + uy * vy) /
                    (std::hypot(ux, uy) * std::hypot(vx, vy)));
      best = std::min(best, angle);
    }
  }
  return best;
}

}  // namespace ptcfem_tests
