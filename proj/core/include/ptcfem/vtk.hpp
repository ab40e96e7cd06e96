#pragma once

#include <filesystem>
#include <string>

#include "ptcfem/fem.hpp"
#include "ptcfem/mesh.hpp"

namespace ptcfem {

/// Legacy ASCII VTK (unstructured grid) with vertices written in ascending
/// id order, so output is byte-stable across runs.
void write_mesh_vtk(const std::filesystem::path& path, const Mesh& mesh,
                    const std::string& title = "ptcfem mesh");

/// Mesh plus a POINT_DATA scalar field holding the solution values.
void write_solution_vtk(const std::filesystem::path& path, const Mesh& mesh,
                        const FemFunction& u, const std::string& field = "u",
                        const std::string& title = "ptcfem solution");

}  // namespace ptcfem
