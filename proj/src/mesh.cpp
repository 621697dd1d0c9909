#include "maspline/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

namespace maspline {

namespace {

// Full validation is wanted for user-supplied meshes; generated meshes
// (structured grids, uniform refinements) are conforming by construction and
// skip the quadratic hanging-vertex scan.
TriMesh assemble_mesh(std::vector<Vec2> vertices,
                      std::vector<std::array<int, 3>> triangles,
                      bool check_hanging) {
  TriMesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.triangles = std::move(triangles);

  const int nv = mesh.n_vertices();
  const int nt = mesh.n_triangles();
  MASPLINE_REQUIRE(nv >= 3 && nt >= 1, "mesh: need at least one triangle");

  double bbox = 0.0;
  for (const auto& p : mesh.vertices)
    bbox = std::max({bbox, std::abs(p.x), std::abs(p.y)});
  const double tol = 1e-12 * std::max(bbox, 1.0);

  {
    // duplicate vertices: sort indices by coordinates and compare neighbors
    std::vector<int> order(nv);
    for (int i = 0; i < nv; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const auto &pa = mesh.vertices[a], &pb = mesh.vertices[b];
      return pa.x != pb.x ? pa.x < pb.x : pa.y < pb.y;
    });
    for (int i = 0; i + 1 < nv; ++i) {
      const auto& a = mesh.vertices[order[i]];
      const auto& b = mesh.vertices[order[i + 1]];
      if (std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol)
        throw Error("mesh: duplicate vertices " + std::to_string(order[i]) +
                    " and " + std::to_string(order[i + 1]));
    }
  }

  for (int t = 0; t < nt; ++t) {
    auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k)
      MASPLINE_REQUIRE(tri[k] >= 0 && tri[k] < nv,
                       "mesh: triangle " + std::to_string(t) +
                           " has out-of-range vertex index");
    MASPLINE_REQUIRE(tri[0] != tri[1] && tri[1] != tri[2] && tri[0] != tri[2],
                     "mesh: triangle " + std::to_string(t) +
                         " repeats a vertex");
    double a2 = cross(mesh.vertices[tri[1]] - mesh.vertices[tri[0]],
                      mesh.vertices[tri[2]] - mesh.vertices[tri[0]]);
    if (std::abs(a2) <= 2.0 * tol * tol)
      throw Error("mesh: triangle " + std::to_string(t) + " has zero area");
    if (a2 < 0.0) std::swap(tri[1], tri[2]);  // normalize to counterclockwise
  }

  // edge extraction; first incidence becomes `left`
  std::map<std::pair<int, int>, int> edge_id;
  mesh.tri_edges.assign(nt, {-1, -1, -1});
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      int a = tri[k], b = tri[(k + 1) % 3];
      auto key = std::minmax(a, b);
      auto it = edge_id.find(key);
      if (it == edge_id.end()) {
        Edge e;
        e.v0 = a;
        e.v1 = b;
        e.left = t;
        edge_id.emplace(key, mesh.n_edges());
        mesh.tri_edges[t][k] = mesh.n_edges();
        mesh.edges.push_back(e);
      } else {
        Edge& e = mesh.edges[it->second];
        if (e.right >= 0)
          throw Error("mesh: non-conforming, edge (" + std::to_string(key.first) +
                      "," + std::to_string(key.second) +
                      ") is shared by more than two triangles");
        e.right = t;
        mesh.tri_edges[t][k] = it->second;
      }
    }
  }

  // boundary edges must close into loops: every endpoint of a boundary edge
  // belongs to exactly two boundary edges
  std::vector<int> bcount(nv, 0);
  for (const auto& e : mesh.edges)
    if (e.boundary()) {
      ++bcount[e.v0];
      ++bcount[e.v1];
    }
  for (int v = 0; v < nv; ++v)
    if (bcount[v] != 0 && bcount[v] != 2)
      throw Error("mesh: boundary edges do not form closed loops at vertex " +
                  std::to_string(v));

  if (check_hanging) {
    for (int v = 0; v < nv; ++v) {
      Vec2 p = mesh.vertices[v];
      for (const auto& e : mesh.edges) {
        if (e.v0 == v || e.v1 == v) continue;
        Vec2 a = mesh.vertices[e.v0], b = mesh.vertices[e.v1];
        Vec2 ab = b - a;
        double len2 = dot(ab, ab);
        double s = dot(p - a, ab) / len2;
        if (s <= 0.0 || s >= 1.0) continue;
        Vec2 foot = a + s * ab;
        if (norm(p - foot) <= tol)
          throw Error("mesh: non-conforming, vertex " + std::to_string(v) +
                      " hangs on edge (" + std::to_string(e.v0) + "," +
                      std::to_string(e.v1) + ")");
      }
    }
  }

  mesh.h = 0.0;
  for (const auto& e : mesh.edges)
    mesh.h = std::max(mesh.h, norm(mesh.vertices[e.v1] - mesh.vertices[e.v0]));
  return mesh;
}

}  // namespace

TriMesh make_mesh(std::vector<Vec2> vertices,
                  std::vector<std::array<int, 3>> triangles) {
  return assemble_mesh(std::move(vertices), std::move(triangles), true);
}

TriMesh build_square_mesh(int m) {
  MASPLINE_REQUIRE(m >= 1, "build_square_mesh: m must be >= 1");
  std::vector<Vec2> verts;
  verts.reserve(static_cast<size_t>(m + 1) * (m + 1));
  for (int j = 0; j <= m; ++j)
    for (int i = 0; i <= m; ++i)
      verts.push_back({static_cast<double>(i) / m, static_cast<double>(j) / m});

  auto vid = [m](int i, int j) { return j * (m + 1) + i; };
  std::vector<std::array<int, 3>> tris;
  tris.reserve(static_cast<size_t>(2) * m * m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      int bl = vid(i, j), br = vid(i + 1, j);
      int tl = vid(i, j + 1), tr = vid(i + 1, j + 1);
      // split along the negative-slope diagonal tl-br
      tris.push_back({bl, br, tl});
      tris.push_back({br, tr, tl});
    }
  return assemble_mesh(std::move(verts), std::move(tris), false);
}

namespace {

// strips '#' comments; returns false when the line holds no tokens
bool next_tokens(std::istream& in, std::vector<std::string>& tok) {
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    tok.clear();
    std::string t;
    while (ls >> t) tok.push_back(t);
    if (!tok.empty()) return true;
  }
  return false;
}

double parse_num(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    MASPLINE_REQUIRE(pos == s.size(), "trailing characters");
    return v;
  } catch (...) {
    throw Error("mesh: cannot parse " + what + " from '" + s + "'");
  }
}

int parse_int(const std::string& s, const std::string& what) {
  double v = parse_num(s, what);
  int i = static_cast<int>(v);
  MASPLINE_REQUIRE(static_cast<double>(i) == v, "mesh: " + what +
                                                    " is not an integer: " + s);
  return i;
}

}  // namespace

TriMesh load_mesh(const std::string& path) {
  std::string base = path;
  for (const char* ext : {".node", ".ele"}) {
    size_t n = std::string(ext).size();
    if (base.size() > n && base.compare(base.size() - n, n, ext) == 0) {
      base.erase(base.size() - n);
      break;
    }
  }

  std::ifstream nodef(base + ".node");
  if (!nodef) throw Error("mesh: cannot open '" + base + ".node'");
  std::vector<std::string> tok;
  MASPLINE_REQUIRE(next_tokens(nodef, tok) && tok.size() >= 2,
                   "mesh: missing .node header");
  int nv = parse_int(tok[0], "vertex count");
  int dim = parse_int(tok[1], "dimension");
  MASPLINE_REQUIRE(dim == 2, "mesh: .node dimension must be 2");
  MASPLINE_REQUIRE(nv >= 3, "mesh: too few vertices");
  std::vector<Vec2> verts(nv);
  std::vector<bool> seen(nv, false);
  for (int i = 0; i < nv; ++i) {
    MASPLINE_REQUIRE(next_tokens(nodef, tok), "mesh: truncated .node file");
    MASPLINE_REQUIRE(tok.size() >= 3, "mesh: malformed .node line");
    int idx = parse_int(tok[0], "vertex index");
    MASPLINE_REQUIRE(idx >= 1 && idx <= nv, "mesh: vertex index out of range");
    MASPLINE_REQUIRE(!seen[idx - 1], "mesh: repeated vertex index " +
                                         std::to_string(idx));
    seen[idx - 1] = true;
    verts[idx - 1] = {parse_num(tok[1], "x coordinate"),
                      parse_num(tok[2], "y coordinate")};
  }

  std::ifstream elef(base + ".ele");
  if (!elef) throw Error("mesh: cannot open '" + base + ".ele'");
  MASPLINE_REQUIRE(next_tokens(elef, tok) && tok.size() >= 2,
                   "mesh: missing .ele header");
  int nt = parse_int(tok[0], "triangle count");
  int npe = parse_int(tok[1], "nodes per triangle");
  MASPLINE_REQUIRE(npe == 3, "mesh: .ele must list 3 nodes per triangle");
  MASPLINE_REQUIRE(nt >= 1, "mesh: no triangles");
  std::vector<std::array<int, 3>> tris(nt);
  std::vector<bool> tseen(nt, false);
  for (int i = 0; i < nt; ++i) {
    MASPLINE_REQUIRE(next_tokens(elef, tok), "mesh: truncated .ele file");
    MASPLINE_REQUIRE(tok.size() >= 4, "mesh: malformed .ele line");
    int idx = parse_int(tok[0], "triangle index");
    MASPLINE_REQUIRE(idx >= 1 && idx <= nt, "mesh: triangle index out of range");
    MASPLINE_REQUIRE(!tseen[idx - 1], "mesh: repeated triangle index " +
                                          std::to_string(idx));
    tseen[idx - 1] = true;
    for (int k = 0; k < 3; ++k) {
      int v = parse_int(tok[1 + k], "triangle vertex");
      MASPLINE_REQUIRE(v >= 1 && v <= nv,
                       "mesh: triangle vertex index out of range");
      tris[idx - 1][k] = v - 1;
    }
  }
  return assemble_mesh(std::move(verts), std::move(tris), true);
}

TriMesh refine_uniform(const TriMesh& mesh) {
  std::vector<Vec2> verts = mesh.vertices;
  std::vector<int> mid(mesh.n_edges());
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Edge& ed = mesh.edges[e];
    mid[e] = static_cast<int>(verts.size());
    verts.push_back(0.5 * (mesh.vertices[ed.v0] + mesh.vertices[ed.v1]));
  }
  std::vector<std::array<int, 3>> tris;
  tris.reserve(static_cast<size_t>(4) * mesh.n_triangles());
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    int m01 = mid[mesh.tri_edges[t][0]];
    int m12 = mid[mesh.tri_edges[t][1]];
    int m20 = mid[mesh.tri_edges[t][2]];
    tris.push_back({tri[0], m01, m20});
    tris.push_back({tri[1], m12, m01});
    tris.push_back({tri[2], m20, m12});
    tris.push_back({m01, m12, m20});
  }
  return assemble_mesh(std::move(verts), std::move(tris), false);
}

std::array<double, 3> barycentric(const std::array<Vec2, 3>& v, Vec2 p) {
  double a2 = cross(v[1] - v[0], v[2] - v[0]);
  double l1 = cross(v[1] - p, v[2] - p) / a2;
  double l2 = cross(v[2] - p, v[0] - p) / a2;
  return {l1, l2, 1.0 - l1 - l2};
}

std::array<Vec2, 3> barycentric_gradients(const std::array<Vec2, 3>& v) {
  double a2 = cross(v[1] - v[0], v[2] - v[0]);
  auto perp = [a2](Vec2 from, Vec2 to) {
    // gradient of the coordinate vanishing on segment (from, to)
    return Vec2{(from.y - to.y) / a2, (to.x - from.x) / a2};
  };
  return {perp(v[1], v[2]), perp(v[2], v[0]), perp(v[0], v[1])};
}

}  // namespace maspline
