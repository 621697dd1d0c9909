#pragma once

#include <array>
#include <string>
#include <vector>

#include "maspline/common.hpp"

namespace maspline {

// Undirected edge of a triangulation.  `left` is the first triangle that
// registered the edge while walking triangles in order; `right` the second,
// or -1 on the boundary.  With all triangles counterclockwise, the two
// incident triangles traverse an interior edge in opposite directions.
struct Edge {
  int v0 = -1;
  int v1 = -1;
  int left = -1;
  int right = -1;
  bool boundary() const { return right < 0; }
};

// Conforming triangulation of a planar domain.  Triangles are stored
// counterclockwise; edge connectivity is derived once at construction.
struct TriMesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<Edge> edges;
  // tri_edges[t][i] is the edge between local vertices i and (i+1)%3 of t.
  std::vector<std::array<int, 3>> tri_edges;
  double h = 0.0;  // longest edge length

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }

  std::array<Vec2, 3> tri_vertices(int t) const {
    const auto& tri = triangles[t];
    return {vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]};
  }
  double area(int t) const {
    auto v = tri_vertices(t);
    return 0.5 * cross(v[1] - v[0], v[2] - v[0]);
  }
};

// Validates and completes a triangulation: normalizes orientation to
// counterclockwise, extracts edge connectivity, and rejects duplicate
// vertices, zero-area triangles, out-of-range indices, non-conforming
// incidence (an edge shared by more than two triangles), hanging vertices,
// and boundary edges that do not close into loops.
TriMesh make_mesh(std::vector<Vec2> vertices,
                  std::vector<std::array<int, 3>> triangles);

// Uniform triangulation of the unit square: m x m squares, each split along
// the diagonal of negative slope, giving 2 m^2 triangles.
TriMesh build_square_mesh(int m);

// Reads a mesh from `<base>.node` / `<base>.ele`.  `path` may be the base
// name or either file name.  Format: the .node file starts with a header
// line "<nv> 2" followed by nv lines "<idx> <x> <y>"; the .ele file starts
// with "<nt> 3" followed by nt lines "<idx> <v1> <v2> <v3>".  Indices are
// 1-based and lines starting with '#' (or trailing '#' comments) are ignored.
TriMesh load_mesh(const std::string& path);

// Splits every triangle into four by connecting edge midpoints.
TriMesh refine_uniform(const TriMesh& mesh);

// Barycentric coordinates of p with respect to the triangle (v0, v1, v2).
std::array<double, 3> barycentric(const std::array<Vec2, 3>& v, Vec2 p);

// Cartesian gradients of the three barycentric coordinate functions.
std::array<Vec2, 3> barycentric_gradients(const std::array<Vec2, 3>& v);

}  // namespace maspline
