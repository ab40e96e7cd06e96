#include "ptcfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "ptcfem/errors.hpp"

namespace ptcfem {

namespace {

double cross2(const std::array<double, 2>& a, const std::array<double, 2>& b,
              const std::array<double, 2>& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
}

double dist2(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return std::hypot(b[0] - a[0], b[1] - a[1]);
}

std::int64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::int64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

// Populates facets/interior_facets. Facet ids follow the first encounter
// while walking elements in ascending id order, so the table is
// deterministic and sharp is always the lower adjacent element id.
void build_facets(Mesh& mesh) {
  mesh.facets.clear();
  mesh.interior_facets.clear();
  if (mesh.dim == 1) {
    std::vector<int> left(mesh.vertex_count(), -1);
    std::vector<int> right(mesh.vertex_count(), -1);
    for (int e = 0; e < mesh.element_count(); ++e) {
      right[mesh.elements[e][0]] = e;  // element starting at this vertex
      left[mesh.elements[e][1]] = e;   // element ending at this vertex
    }
    for (int v = 0; v < mesh.vertex_count(); ++v) {
      Mesh::Facet facet;
      facet.vertices = {v, -1};
      const int a = left[v];
      const int b = right[v];
      if (a >= 0 && b >= 0) {
        facet.sharp = std::min(a, b);
        facet.flat = std::max(a, b);
      } else {
        facet.sharp = a >= 0 ? a : b;
      }
      mesh.facets.push_back(facet);
      if (facet.interior())
        mesh.interior_facets.push_back(static_cast<int>(mesh.facets.size()) - 1);
    }
    return;
  }
  std::unordered_map<std::int64_t, int> index;
  index.reserve(mesh.elements.size() * 2);
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto& el = mesh.elements[e];
    for (int k = 0; k < 3; ++k) {
      const int a = el[k];
      const int b = el[(k + 1) % 3];
      const auto key = edge_key(a, b);
      auto it = index.find(key);
      if (it == index.end()) {
        Mesh::Facet facet;
        facet.vertices = {std::min(a, b), std::max(a, b)};
        facet.sharp = e;
        index.emplace(key, static_cast<int>(mesh.facets.size()));
        mesh.facets.push_back(facet);
      } else {
        mesh.facets[it->second].flat = e;
      }
    }
  }
  for (int f = 0; f < static_cast<int>(mesh.facets.size()); ++f) {
    if (mesh.facets[f].interior()) mesh.interior_facets.push_back(f);
  }
}

}  // namespace

double DomainSpec::poincare_constant() const {
  // First Dirichlet eigenvalue: pi^2/s^2 on an interval, 2 pi^2/s^2 on a
  // square of side s; C_P = lambda_1^{-1/2}.
  const double s = side();
  if (kind == DomainKind::interval) return s / std::numbers::pi;
  return s / (std::numbers::pi * std::numbers::sqrt2);
}

int Mesh::interior_vertex_count() const {
  int n = 0;
  for (bool b : boundary_vertex) n += b ? 0 : 1;
  return n;
}

double Mesh::element_measure(int element) const {
  const auto& el = elements[element];
  if (dim == 1) return vertices[el[1]][0] - vertices[el[0]][0];
  return 0.5 * cross2(vertices[el[0]], vertices[el[1]], vertices[el[2]]);
}

double Mesh::element_diameter(int element) const {
  const auto& el = elements[element];
  if (dim == 1) return element_measure(element);
  const double d01 = dist2(vertices[el[0]], vertices[el[1]]);
  const double d12 = dist2(vertices[el[1]], vertices[el[2]]);
  const double d20 = dist2(vertices[el[2]], vertices[el[0]]);
  return std::max({d01, d12, d20});
}

double Mesh::total_measure() const {
  double total = 0.0;
  for (int e = 0; e < element_count(); ++e) total += element_measure(e);
  return total;
}

Mesh build_initial_mesh(const DomainSpec& domain, int resolution) {
  if (resolution < 1)
    throw UnsupportedDomain("build_initial_mesh: resolution must be >= 1");
  Mesh mesh;
  mesh.domain = domain;
  mesh.dim = domain.dim();
  mesh.generation = 0;
  const int n = resolution;
  const double h = domain.side() / n;

  if (domain.kind == DomainKind::interval) {
    mesh.vertices.reserve(n + 1);
    for (int i = 0; i <= n; ++i)
      mesh.vertices.push_back({domain.lo + i * h, 0.0});
    for (int i = 0; i < n; ++i) mesh.elements.push_back({i, i + 1, -1});
    mesh.boundary_vertex.assign(n + 1, false);
    mesh.boundary_vertex.front() = true;
    mesh.boundary_vertex.back() = true;
    build_facets(mesh);
    return mesh;
  }

  // Criss-cross pattern: (n+1)^2 grid vertices followed by n^2 cell centers;
  // each cell contributes 4 triangles whose refinement edge is the outer
  // cell edge (the longest) and whose peak is the center.
  const int grid = n + 1;
  mesh.vertices.reserve(grid * grid + n * n);
  for (int j = 0; j < grid; ++j)
    for (int i = 0; i < grid; ++i)
      mesh.vertices.push_back({domain.lo + i * h, domain.lo + j * h});
  for (int cj = 0; cj < n; ++cj)
    for (int ci = 0; ci < n; ++ci)
      mesh.vertices.push_back(
          {domain.lo + (ci + 0.5) * h, domain.lo + (cj + 0.5) * h});

  mesh.elements.reserve(4 * n * n);
  for (int cj = 0; cj < n; ++cj) {
    for (int ci = 0; ci < n; ++ci) {
      const int bl = cj * grid + ci;
      const int br = bl + 1;
      const int tl = bl + grid;
      const int tr = tl + 1;
      const int center = grid * grid + cj * n + ci;
      mesh.elements.push_back({bl, br, center});
      mesh.elements.push_back({br, tr, center});
      mesh.elements.push_back({tr, tl, center});
      mesh.elements.push_back({tl, bl, center});
    }
  }

  mesh.boundary_vertex.assign(mesh.vertices.size(), false);
  for (int j = 0; j < grid; ++j)
    for (int i = 0; i < grid; ++i)
      if (i == 0 || j == 0 || i == n || j == n)
        mesh.boundary_vertex[j * grid + i] = true;
  build_facets(mesh);
  return mesh;
}

namespace {

RefinedMesh refine_1d(const Mesh& mesh, const std::vector<bool>& is_marked) {
  RefinedMesh out;
  Mesh& child = out.mesh;
  child.domain = mesh.domain;
  child.dim = 1;
  child.generation = mesh.generation + 1;
  child.vertices = mesh.vertices;
  child.boundary_vertex = mesh.boundary_vertex;
  out.ancestry.parent_generation = mesh.generation;
  out.ancestry.child_generation = child.generation;
  out.ancestry.parent_vertex_count = mesh.vertex_count();

  for (int e = 0; e < mesh.element_count(); ++e) {
    const int a = mesh.elements[e][0];
    const int b = mesh.elements[e][1];
    if (!is_marked[e]) {
      child.elements.push_back({a, b, -1});
      continue;
    }
    const int m = child.vertex_count();
    child.vertices.push_back(
        {0.5 * (mesh.vertices[a][0] + mesh.vertices[b][0]), 0.0});
    child.boundary_vertex.push_back(false);
    out.ancestry.new_vertex_parents.push_back({a, b});
    child.elements.push_back({a, m, -1});
    child.elements.push_back({m, b, -1});
  }
  build_facets(child);
  return out;
}

}  // namespace

RefinedMesh refine(const Mesh& mesh, const std::vector<int>& marked) {
  std::vector<bool> is_marked(mesh.element_count(), false);
  for (int e : marked) {
    if (e < 0 || e >= mesh.element_count())
      throw std::out_of_range("refine: marked element id out of range");
    is_marked[e] = true;
  }
  if (mesh.dim == 1) return refine_1d(mesh, is_marked);

  // Edge lookup: element-local edge k is (el[k], el[(k+1)%3]); k = 0 is the
  // refinement edge.
  std::unordered_map<std::int64_t, int> edge_index;
  edge_index.reserve(mesh.facets.size() * 2);
  for (int f = 0; f < static_cast<int>(mesh.facets.size()); ++f)
    edge_index.emplace(edge_key(mesh.facets[f].vertices[0],
                                mesh.facets[f].vertices[1]),
                       f);
  auto facet_of = [&](int a, int b) {
    return edge_index.at(edge_key(a, b));
  };

  std::vector<bool> edge_marked(mesh.facets.size(), false);
  for (int e = 0; e < mesh.element_count(); ++e)
    if (is_marked[e])
      edge_marked[facet_of(mesh.elements[e][0], mesh.elements[e][1])] = true;

  // Closure: an element with any marked edge must have its refinement edge
  // marked as well. The marked set only grows, so this terminates within
  // #facets passes; exceeding the cap means the bookkeeping is corrupt.
  const int max_passes = static_cast<int>(mesh.facets.size()) + 2;
  int pass = 0;
  for (bool changed = true; changed; ++pass) {
    if (pass > max_passes)
      throw Error("refine: conformity closure did not terminate");
    changed = false;
    for (const auto& el : mesh.elements) {
      const int ref = facet_of(el[0], el[1]);
      if (edge_marked[ref]) continue;
      if (edge_marked[facet_of(el[1], el[2])] ||
          edge_marked[facet_of(el[2], el[0])]) {
        edge_marked[ref] = true;
        changed = true;
      }
    }
  }

  RefinedMesh out;
  Mesh& child = out.mesh;
  child.domain = mesh.domain;
  child.dim = 2;
  child.generation = mesh.generation + 1;
  child.vertices = mesh.vertices;
  child.boundary_vertex = mesh.boundary_vertex;
  out.ancestry.parent_generation = mesh.generation;
  out.ancestry.child_generation = child.generation;
  out.ancestry.parent_vertex_count = mesh.vertex_count();

  // Midpoints in ascending facet id order; a midpoint of a boundary edge
  // lies on the boundary.
  std::vector<int> midpoint(mesh.facets.size(), -1);
  for (int f = 0; f < static_cast<int>(mesh.facets.size()); ++f) {
    if (!edge_marked[f]) continue;
    const int a = mesh.facets[f].vertices[0];
    const int b = mesh.facets[f].vertices[1];
    midpoint[f] = child.vertex_count();
    child.vertices.push_back({0.5 * (mesh.vertices[a][0] + mesh.vertices[b][0]),
                              0.5 * (mesh.vertices[a][1] + mesh.vertices[b][1])});
    child.boundary_vertex.push_back(!mesh.facets[f].interior());
    out.ancestry.new_vertex_parents.push_back({a, b});
  }

  // Bisection of (v0, v1, v2) through m = mid(v0, v1) yields (v2, v0, m) and
  // (v1, v2, m): the new vertex becomes the peak, the opposite edge the new
  // refinement edge, and orientation is preserved.
  auto emit = [&child, &midpoint, &facet_of, &edge_marked](int a, int b,
                                                           int c, int m) {
    const int fb = facet_of(c, a);  // refinement edge of child (c, a, m)
    if (edge_marked[fb]) {
      const int mb = midpoint[fb];
      child.elements.push_back({m, c, mb});
      child.elements.push_back({a, m, mb});
    } else {
      child.elements.push_back({c, a, m});
    }
    const int fa = facet_of(b, c);  // refinement edge of child (b, c, m)
    if (edge_marked[fa]) {
      const int ma = midpoint[fa];
      child.elements.push_back({m, b, ma});
      child.elements.push_back({c, m, ma});
    } else {
      child.elements.push_back({b, c, m});
    }
  };

  for (const auto& el : mesh.elements) {
    const int fref = facet_of(el[0], el[1]);
    if (!edge_marked[fref]) {
      child.elements.push_back(el);
      continue;
    }
    emit(el[0], el[1], el[2], midpoint[fref]);
  }
  build_facets(child);
  return out;
}

FacetGeometry facet_jump_frame(const Mesh& mesh, int facet) {
  const auto& f = mesh.facets.at(facet);
  if (!f.interior())
    throw BoundaryFacet("facet_jump_frame: facet is on the boundary");
  FacetGeometry geo;
  geo.facet = facet;
  geo.sharp = f.sharp;
  geo.flat = f.flat;

  if (mesh.dim == 1) {
    geo.h_e = 0.5 * (mesh.element_measure(f.sharp) +
                     mesh.element_measure(f.flat));
    // Outward direction of the sharp element at the shared vertex.
    const bool sharp_is_left = mesh.elements[f.sharp][1] == f.vertices[0];
    geo.normal = {sharp_is_left ? 1.0 : -1.0, 0.0};
    return geo;
  }

  const auto& p = mesh.vertices[f.vertices[0]];
  const auto& q = mesh.vertices[f.vertices[1]];
  geo.h_e = dist2(p, q);
  std::array<double, 2> n{(q[1] - p[1]) / geo.h_e, (p[0] - q[0]) / geo.h_e};
  // Orient away from the sharp element's off-edge vertex.
  const auto& el = mesh.elements[f.sharp];
  int opposite = el[0];
  for (int k = 0; k < 3; ++k)
    if (el[k] != f.vertices[0] && el[k] != f.vertices[1]) opposite = el[k];
  const auto& o = mesh.vertices[opposite];
  if (n[0] * (o[0] - p[0]) + n[1] * (o[1] - p[1]) > 0.0) {
    n[0] = -n[0];
    n[1] = -n[1];
  }
  geo.normal = n;
  return geo;
}

}  // namespace ptcfem
