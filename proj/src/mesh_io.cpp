#include "maxlag2d/mesh_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace maxlag {

Mesh read_mesh(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file: " + path);

  long long nv = -1, nt = -1, nb = -1;
  if (!(in >> nv >> nt >> nb) || nv < 0 || nt < 0 || nb < 0)
    throw std::runtime_error("malformed counts in " + path);

  Mesh mesh;
  mesh.vertices.resize(size_t(nv));
  for (auto& p : mesh.vertices)
    if (!(in >> p.x >> p.y))
      throw std::runtime_error("malformed vertex record in " + path);

  mesh.triangles.resize(size_t(nt));
  for (long long t = 0; t < nt; ++t) {
    auto& tri = mesh.triangles[t];
    if (!(in >> tri[0] >> tri[1] >> tri[2]))
      throw std::runtime_error("malformed triangle record in " + path);
    for (int v : tri)
      if (v < 0 || v >= nv)
        throw std::runtime_error("dangling index in triangle " +
                                 std::to_string(t));
    if (signed_area2(mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                     mesh.vertices[tri[2]]) < 0.0) {
      std::swap(tri[1], tri[2]);
      if (warnings)
        warnings->push_back("reoriented clockwise triangle " +
                            std::to_string(t));
    }
  }

  mesh.boundary_edges.resize(size_t(nb));
  for (auto& be : mesh.boundary_edges)
    if (!(in >> be.a >> be.b >> be.marker))
      throw std::runtime_error("malformed boundary record in " + path);

  // Rebuild boundary orientation and corners from the connectivity; the
  // declared boundary edges only contribute markers.
  finalize_mesh(mesh);
  return mesh;
}

void write_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mesh file: " + path);
  out << mesh.vertices.size() << ' ' << mesh.triangles.size() << ' '
      << mesh.boundary_edges.size() << '\n';
  char buf[64];
  for (const auto& p : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g", p.x, p.y);
    out << buf << '\n';
  }
  for (const auto& tri : mesh.triangles)
    out << tri[0] << ' ' << tri[1] << ' ' << tri[2] << '\n';
  for (const auto& be : mesh.boundary_edges)
    out << be.a << ' ' << be.b << ' ' << be.marker << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace maxlag
