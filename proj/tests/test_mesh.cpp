#include <algorithm>
#include <cmath>
#include <doctest.h>
#include <numeric>
#include <random>

#include "ptcfem/errors.hpp"
#include "ptcfem/mesh.hpp"
#include "support/fem_oracles.hpp"

using namespace ptcfem;
using ptcfem_tests::audit_facets;
using ptcfem_tests::min_angle;

TEST_CASE("criss-cross unit square at resolution 1") {
  const Mesh mesh = build_initial_mesh(DomainSpec::square(0.0, 1.0), 1);
  CHECK(mesh.vertex_count() == 5);
  CHECK(mesh.element_count() == 4);
  CHECK(mesh.total_measure() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(mesh.interior_vertex_count() == 1);
  for (int e = 0; e < 4; ++e) CHECK(mesh.element_measure(e) > 0.0);
  CHECK(audit_facets(mesh).conforming);
}

TEST_CASE("interval (0,1) at resolution 4") {
  const Mesh mesh = build_initial_mesh(DomainSpec::interval(0.0, 1.0), 4);
  CHECK(mesh.vertex_count() == 5);
  CHECK(mesh.element_count() == 4);
  CHECK(mesh.interior_vertex_count() == 3);
  CHECK(mesh.total_measure() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("square (-1,1)^2 at resolution 2") {
  const Mesh mesh = build_initial_mesh(DomainSpec::square(-1.0, 1.0), 2);
  CHECK(mesh.element_count() == 16);
  // Area by elementwise summation.
  double area = 0.0;
  for (int e = 0; e < mesh.element_count(); ++e)
    area += mesh.element_measure(e);
  CHECK(area == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(audit_facets(mesh).conforming);
}

TEST_CASE("invalid resolution is rejected") {
  CHECK_THROWS_AS(build_initial_mesh(DomainSpec::square(0.0, 1.0), 0),
                  UnsupportedDomain);
}

TEST_CASE("uniform refinement of the 4-triangle mesh") {
  const Mesh mesh = build_initial_mesh(DomainSpec::square(0.0, 1.0), 1);
  std::vector<int> all(mesh.element_count());
  std::iota(all.begin(), all.end(), 0);
  const RefinedMesh refined = refine(mesh, all);
  CHECK(refined.mesh.element_count() == 8);
  CHECK(refined.mesh.total_measure() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(refined.mesh.generation == 1);
  CHECK(audit_facets(refined.mesh).conforming);
}

TEST_CASE("single-element marking stays conforming") {
  const Mesh mesh = build_initial_mesh(DomainSpec::square(0.0, 1.0), 1);
  for (int target = 0; target < mesh.element_count(); ++target) {
    const RefinedMesh refined = refine(mesh, {target});
    // One bisection of the marked element plus whatever closure demands.
    CHECK(refined.mesh.element_count() > mesh.element_count());
    CHECK(refined.mesh.element_count() <= mesh.element_count() + 3);
    CHECK(refined.mesh.total_measure() ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(audit_facets(refined.mesh).conforming);
  }
  // Same on a mesh whose refinement edges are interior.
  std::vector<int> all(mesh.element_count());
  std::iota(all.begin(), all.end(), 0);
  const Mesh level1 = refine(mesh, all).mesh;
  for (int target = 0; target < level1.element_count(); ++target) {
    const RefinedMesh refined = refine(level1, {target});
    CHECK(audit_facets(refined.mesh).conforming);
    CHECK(refined.mesh.total_measure() ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("1d marking halves one interval") {
  const Mesh mesh = build_initial_mesh(DomainSpec::interval(0.0, 1.0), 4);
  const RefinedMesh refined = refine(mesh, {1});
  CHECK(refined.mesh.vertex_count() == mesh.vertex_count() + 1);
  CHECK(refined.mesh.element_count() == mesh.element_count() + 1);
  // The marked interval [0.25, 0.5] splits, neighbors keep their length.
  std::vector<double> lengths;
  for (int e = 0; e < refined.mesh.element_count(); ++e)
    lengths.push_back(refined.mesh.element_measure(e));
  std::sort(lengths.begin(), lengths.end());
  CHECK(lengths.front() == doctest::Approx(0.125));
  CHECK(lengths.back() == doctest::Approx(0.25));
  CHECK(std::count_if(lengths.begin(), lengths.end(), [](double l) {
          return std::abs(l - 0.125) < 1e-14;
        }) == 2);
}

TEST_CASE("empty marked set returns an identical copy") {
  const Mesh mesh = build_initial_mesh(DomainSpec::square(0.0, 1.0), 2);
  const RefinedMesh refined = refine(mesh, {});
  CHECK(refined.mesh.vertex_count() == mesh.vertex_count());
  CHECK(refined.mesh.element_count() == mesh.element_count());
  CHECK(refined.ancestry.new_vertex_parents.empty());
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    CHECK(refined.mesh.vertices[v][0] == mesh.vertices[v][0]);
    CHECK(refined.mesh.vertices[v][1] == mesh.vertices[v][1]);
  }
}

TEST_CASE("repeated random refinement conserves area and stays conforming") {
  Mesh mesh = build_initial_mesh(DomainSpec::square(0.0, 1.0), 2);
  const double initial_angle = min_angle(mesh);
  std::mt19937 rng(42);
  for (int round = 0; round < 10; ++round) {
    std::vector<int> marked;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int e = 0; e < mesh.element_count(); ++e)
      if (coin(rng) < 0.3) marked.push_back(e);
    if (marked.empty()) marked.push_back(0);
    const RefinedMesh refined = refine(mesh, marked);

    CHECK(refined.mesh.total_measure() ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(audit_facets(refined.mesh).conforming);
    // Nestedness: parent vertices keep ids and coordinates.
    for (int v = 0; v < mesh.vertex_count(); ++v) {
      CHECK(refined.mesh.vertices[v][0] == mesh.vertices[v][0]);
      CHECK(refined.mesh.vertices[v][1] == mesh.vertices[v][1]);
    }
    // Positivity of every element measure.
    for (int e = 0; e < refined.mesh.element_count(); ++e)
      CHECK(refined.mesh.element_measure(e) > 1e-14);
    mesh = refined.mesh;
  }
  CHECK(min_angle(mesh) >= initial_angle / 2.0 - 1e-12);
}

TEST_CASE("facet jump frame on the criss-cross diagonals") {
  const Mesh mesh = build_initial_mesh(DomainSpec::square(0.0, 1.0), 1);
  REQUIRE(mesh.interior_facets.size() == 4);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int f : mesh.interior_facets) {
    const FacetGeometry geo = facet_jump_frame(mesh, f);
    CHECK(std::hypot(geo.normal[0], geo.normal[1]) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(geo.normal[0]) == doctest::Approx(inv_sqrt2));
    CHECK(std::abs(geo.normal[1]) == doctest::Approx(inv_sqrt2));
    CHECK(geo.h_e == doctest::Approx(inv_sqrt2));
    CHECK(geo.sharp < geo.flat);
  }
}

TEST_CASE("boundary facet is rejected") {
  const Mesh mesh = build_initial_mesh(DomainSpec::square(0.0, 1.0), 1);
  int boundary = -1;
  for (int f = 0; f < static_cast<int>(mesh.facets.size()); ++f)
    if (!mesh.facets[f].interior()) boundary = f;
  REQUIRE(boundary >= 0);
  CHECK_THROWS_AS(facet_jump_frame(mesh, boundary), BoundaryFacet);
}

TEST_CASE("1d facet frame uses mean adjacent length") {
  Mesh mesh = build_initial_mesh(DomainSpec::interval(0.0, 1.0), 2);
  const RefinedMesh refined = refine(mesh, {0});  // lengths 0.25, 0.25, 0.5
  int facet_at_half = -1;
  for (int f : refined.mesh.interior_facets) {
    const int v = refined.mesh.facets[f].vertices[0];
    if (std::abs(refined.mesh.vertices[v][0] - 0.5) < 1e-14) facet_at_half = f;
  }
  REQUIRE(facet_at_half >= 0);
  const FacetGeometry geo = facet_jump_frame(refined.mesh, facet_at_half);
  CHECK(geo.h_e == doctest::Approx(0.375));  // mean of 0.25 and 0.5
  CHECK(std::abs(geo.normal[0]) == 1.0);
}
