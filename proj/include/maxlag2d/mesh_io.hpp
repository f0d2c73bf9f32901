#pragma once

#include <string>
#include <vector>

#include "maxlag2d/mesh.hpp"

namespace maxlag {

/// Reads a .tri file:
///   line 1: "nv nt nb"
///   nv lines "x y", nt lines "i j k" (0-based, CCW), nb lines "i j marker".
/// Clockwise triangles are reoriented with a warning; a triangle referencing
/// a missing vertex is rejected ("dangling index").
Mesh read_mesh(const std::string& path,
               std::vector<std::string>* warnings = nullptr);

/// Writes the .tri format with full-precision decimal coordinates, so that
/// write . read is the identity on coordinates and connectivity.
void write_mesh(const Mesh& mesh, const std::string& path);

}  // namespace maxlag
