#include "ptcfem/vtk.hpp"

#include <cstdio>
#include <fstream>

#include "ptcfem/errors.hpp"

namespace ptcfem {

namespace {

std::string num(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

void write_grid(std::ostream& out, const Mesh& mesh,
                const std::string& title) {
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.vertex_count() << " double\n";
  for (const auto& v : mesh.vertices)
    out << num(v[0]) << ' ' << num(v[1]) << " 0\n";

  const int nodes = mesh.dim == 1 ? 2 : 3;
  out << "CELLS " << mesh.element_count() << ' '
      << mesh.element_count() * (nodes + 1) << '\n';
  for (const auto& el : mesh.elements) {
    out << nodes;
    for (int i = 0; i < nodes; ++i) out << ' ' << el[i];
    out << '\n';
  }
  out << "CELL_TYPES " << mesh.element_count() << '\n';
  const int cell_type = mesh.dim == 1 ? 3 : 5;  // VTK_LINE / VTK_TRIANGLE
  for (int e = 0; e < mesh.element_count(); ++e) out << cell_type << '\n';
}

std::ofstream open_or_throw(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path.string());
  return out;
}

}  // namespace

void write_mesh_vtk(const std::filesystem::path& path, const Mesh& mesh,
                    const std::string& title) {
  auto out = open_or_throw(path);
  write_grid(out, mesh, title);
}

void write_solution_vtk(const std::filesystem::path& path, const Mesh& mesh,
                        const FemFunction& u, const std::string& field,
                        const std::string& title) {
  if (u.mesh_generation != mesh.generation ||
      u.coefficients.size() != mesh.vertex_count())
    throw MeshMismatch("write_solution_vtk: function not bound to this mesh");
  auto out = open_or_throw(path);
  write_grid(out, mesh, title);
  out << "POINT_DATA " << mesh.vertex_count() << '\n';
  out << "SCALARS " << field << " double 1\n";
  out << "LOOKUP_TABLE default\n";
  for (int v = 0; v < mesh.vertex_count(); ++v)
    out << num(u.coefficients(v)) << '\n';
}

}  // namespace ptcfem
