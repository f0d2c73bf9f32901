#pragma once

#include <vector>

#include "maxlag2d/mesh.hpp"

namespace maxlag {

enum class SplitKind { None, PowellSabin, CloughTocher };

/// A macro-element refinement of a parent mesh, with provenance.
///
/// For the Powell--Sabin split, constructed_singular_points records every
/// new on-edge vertex (interior crossing points and boundary midpoints);
/// these lie on exactly two straight lines by construction, so they are
/// tagged rather than re-detected numerically.
struct RefinedMesh {
  Mesh mesh;
  SplitKind split_kind = SplitKind::None;
  std::vector<int> parent;           // refined triangle -> parent triangle
  std::vector<int> interior_points;  // parent triangle -> incenter/barycenter
  std::vector<int> constructed_singular_points;  // sorted vertex ids
};

/// Incenter of the triangle (p0, p1, p2); throws on a degenerate triangle.
Point2 incenter(Point2 p0, Point2 p1, Point2 p2);

/// Splits every triangle into six: the incenter is joined to the three
/// vertices, adjacent incenters are joined across shared edges (splitting
/// both wedges at the crossing point), and boundary-edge midpoints are
/// joined to the incenter.
RefinedMesh powell_sabin(const Mesh& mesh);

/// Splits every triangle into three at its barycenter.
RefinedMesh clough_tocher(const Mesh& mesh);

/// Wraps an unrefined mesh in the RefinedMesh interface (split_kind None,
/// identity parent map).
RefinedMesh no_split(const Mesh& mesh);

}  // namespace maxlag
