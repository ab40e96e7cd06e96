#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace ptcfem {

enum class DomainKind { interval, square };

/// Supported computational domains: an open interval (lo,hi) or the open
/// square (lo,hi)^2.
struct DomainSpec {
  DomainKind kind = DomainKind::square;
  double lo = 0.0;
  double hi = 1.0;

  static DomainSpec interval(double a, double b) {
    return {DomainKind::interval, a, b};
  }
  static DomainSpec square(double a, double b) {
    return {DomainKind::square, a, b};
  }

  int dim() const { return kind == DomainKind::interval ? 1 : 2; }
  double side() const { return hi - lo; }
  double measure() const {
    return kind == DomainKind::interval ? side() : side() * side();
  }
  /// Constant C_P in ||w||_0 <= C_P ||grad w||_0 on H^1_0, from the first
  /// Dirichlet eigenvalue of the Laplacian.
  double poincare_constant() const;
};

/// Conforming simplicial mesh: intervals in 1d, triangles in 2d.
///
/// 2d elements are stored as (v0, v1, v2) where (v0, v1) is the
/// newest-vertex-bisection refinement edge and v2 the peak (newest) vertex;
/// orientation is counterclockwise. 1d elements are (left, right, -1).
struct Mesh {
  struct Facet {
    // 2d: an interior or boundary edge (a, b); 1d: a vertex (a, -1).
    std::array<int, 2> vertices{-1, -1};
    int sharp = -1;  // adjacent element of lower id
    int flat = -1;   // second adjacent element, -1 on the boundary
    bool interior() const { return flat >= 0; }
  };

  DomainSpec domain;
  int dim = 2;
  int generation = 0;
  std::vector<std::array<double, 2>> vertices;  // y unused in 1d
  std::vector<std::array<int, 3>> elements;
  std::vector<bool> boundary_vertex;
  std::vector<Facet> facets;
  std::vector<int> interior_facets;  // indices into facets

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int element_count() const { return static_cast<int>(elements.size()); }
  int interior_vertex_count() const;

  /// Signed measure of an element (length in 1d, area in 2d, positive for
  /// well-oriented meshes).
  double element_measure(int element) const;
  double element_diameter(int element) const;
  double total_measure() const;
};

/// Geometry of one interior facet in the orientation used by gradient jumps:
/// `normal` is the outward unit normal of the sharp-side element; the flat
/// side uses its negative.
struct FacetGeometry {
  int facet = -1;
  int sharp = -1;
  int flat = -1;
  double h_e = 0.0;  // edge length in 2d, mean adjacent element length in 1d
  std::array<double, 2> normal{0.0, 0.0};
};

/// Maps each vertex of a refined mesh back to the parent: vertices carried
/// over keep their ids; a new vertex is the midpoint of the parent edge
/// (a, b) recorded here.
struct RefinementAncestry {
  int parent_generation = 0;
  int child_generation = 0;
  int parent_vertex_count = 0;
  std::vector<std::array<int, 2>> new_vertex_parents;
};

struct RefinedMesh {
  Mesh mesh;
  RefinementAncestry ancestry;
};

/// Structured starting mesh: a uniform partition into `resolution` intervals
/// in 1d, or the criss-cross pattern with resolution^2 cells of 4 triangles
/// each in 2d. Throws UnsupportedDomain for anything else.
Mesh build_initial_mesh(const DomainSpec& domain, int resolution);

/// Bisects every marked element at least once (newest-vertex bisection in
/// 2d, midpoint split in 1d) and adds the closure refinements needed to stay
/// conforming. An empty marked set returns an identical-copy mesh.
RefinedMesh refine(const Mesh& mesh, const std::vector<int>& marked);

/// Jump frame for an interior facet. Throws BoundaryFacet otherwise.
FacetGeometry facet_jump_frame(const Mesh& mesh, int facet);

}  // namespace ptcfem
