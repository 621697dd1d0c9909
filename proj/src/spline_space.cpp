#include "maspline/spline_space.hpp"

#include <cmath>

namespace maspline {

SplineSpace make_space(std::shared_ptr<const TriMesh> mesh, int d, int r) {
  MASPLINE_REQUIRE(mesh != nullptr, "make_space: null mesh");
  MASPLINE_REQUIRE(d >= 1 && d <= 16, "make_space: degree must be in [1,16]");
  MASPLINE_REQUIRE(r >= 0 && r < d, "make_space: smoothness must satisfy 0 <= r < d");
  SplineSpace sp;
  sp.mesh = std::move(mesh);
  sp.d = d;
  sp.r = r;
  sp.nb = n_basis(d);
  sp.N = static_cast<long>(sp.mesh->n_triangles()) * sp.nb;
  return sp;
}

Eigen::SparseMatrix<double> ConstraintSystem::matrix() const {
  Eigen::SparseMatrix<double> R(rows(), cols);
  R.setFromTriplets(entries.begin(), entries.end());
  return R;
}

Eigen::VectorXd ConstraintSystem::g() const {
  return Eigen::Map<const Eigen::VectorXd>(rhs.data(), rows());
}

ConstraintSystem concat(ConstraintSystem a, const ConstraintSystem& b) {
  MASPLINE_REQUIRE(a.cols == b.cols, "concat: constraint systems of different spaces");
  int shift = a.rows();
  for (const auto& t : b.entries)
    a.entries.emplace_back(t.row() + shift, t.col(), t.value());
  a.rhs.insert(a.rhs.end(), b.rhs.begin(), b.rhs.end());
  a.kinds.insert(a.kinds.end(), b.kinds.begin(), b.kinds.end());
  return a;
}

namespace {

// Maps canonical multi-indices (exponent on a, exponent on b, exponent on the
// off-edge vertex) to flat coefficient indices of a triangle listing the
// global vertices (a, b) among its corners.
struct EdgeView {
  int d = 0;
  std::array<int, 3> slot{};  // local position of a, b, off-vertex
  int off_vertex = -1;        // global index of the off-edge vertex

  int operator()(int ia, int ib, int ioff) const {
    int loc[3];
    loc[slot[0]] = ia;
    loc[slot[1]] = ib;
    loc[slot[2]] = ioff;
    return bb_index(d, loc[0], loc[1], loc[2]);
  }
};

EdgeView edge_view(const TriMesh& mesh, int t, int va, int vb, int d) {
  EdgeView view;
  view.d = d;
  const auto& tri = mesh.triangles[t];
  int sa = -1, sb = -1, soff = -1;
  for (int k = 0; k < 3; ++k) {
    if (tri[k] == va)
      sa = k;
    else if (tri[k] == vb)
      sb = k;
    else
      soff = k;
  }
  MASPLINE_REQUIRE(sa >= 0 && sb >= 0 && soff >= 0,
                   "edge_view: triangle does not contain the edge");
  view.slot = {sa, sb, soff};
  view.off_vertex = tri[soff];
  return view;
}

}  // namespace

ConstraintSystem smoothness_constraints(const SplineSpace& space) {
  const TriMesh& mesh = *space.mesh;
  const int d = space.d;
  ConstraintSystem sys;
  sys.cols = space.N;

  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Edge& ed = mesh.edges[e];
    if (ed.boundary()) continue;
    EdgeView left = edge_view(mesh, ed.left, ed.v0, ed.v1, d);
    EdgeView right = edge_view(mesh, ed.right, ed.v0, ed.v1, d);
    const int offL = space.offset(ed.left);
    const int offR = space.offset(ed.right);

    // barycentric coordinates of the right off-vertex with respect to the
    // left triangle, in canonical (a, b, off-left) order
    std::array<Vec2, 3> frameL = {mesh.vertices[ed.v0], mesh.vertices[ed.v1],
                                  mesh.vertices[left.off_vertex]};
    std::array<double, 3> w =
        barycentric(frameL, mesh.vertices[right.off_vertex]);

    for (int s = 0; s <= space.r; ++s) {
      std::vector<double> bs = bernstein_values(s, w);
      for (int i = d - s; i >= 0; --i) {
        int j = d - s - i;
        int row = sys.rows();
        sys.entries.emplace_back(row, offR + right(i, j, s), 1.0);
        for (int ki = s; ki >= 0; --ki)
          for (int kk = 0; ki + kk <= s; ++kk) {
            int kj = s - ki - kk;
            sys.entries.emplace_back(row, offL + left(i + ki, j + kj, kk),
                                     -bs[bb_index(s, ki, kj, kk)]);
          }
        sys.rhs.push_back(0.0);
        sys.kinds.push_back(RowKind::smoothness);
      }
    }
  }
  return sys;
}

namespace {

// Pinning each boundary edge to an independent interpolant of g would
// conflict with the smoothness rows: around a boundary vertex interior to a
// straight side, the C^r rows chain the gradient (and higher jets) across
// the whole triangle fan, which forces the boundary trace to be C^r *along*
// the side — a relation two independent edge interpolants violate at
// interpolation-error scale, leaving R c = G unsolvable.  The trace
// coefficients are therefore computed per maximal collinear run of boundary
// edges: the C^r piecewise interpolant of g that matches the run's endpoint
// values exactly and fits the per-edge equally spaced samples in least
// squares.  A run of one edge (every edge of a strictly convex polygon)
// reduces to plain interpolation at the d+1 edge domain points, and
// polynomial data is reproduced exactly in all cases.
struct ChainEdge {
  int edge = -1;
  bool forward = true;  // chain direction equals the stored v0 -> v1
};

// Trace coefficients for one collinear chain, one (d+1)-block per edge in
// chain order and direction.
Eigen::VectorXd solve_chain_trace(const TriMesh& mesh, const ScalarFn& g,
                                  int d, int r,
                                  const std::vector<ChainEdge>& chain,
                                  const Eigen::MatrixXd& V) {
  const int k = static_cast<int>(chain.size());
  const int nu = k * (d + 1);

  auto endpoints = [&](const ChainEdge& ce) {
    const Edge& ed = mesh.edges[ce.edge];
    Vec2 a = mesh.vertices[ce.forward ? ed.v0 : ed.v1];
    Vec2 b = mesh.vertices[ce.forward ? ed.v1 : ed.v0];
    return std::pair<Vec2, Vec2>{a, b};
  };

  // least-squares block: g sampled at the d+1 equally spaced points per edge
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nu, nu);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(nu);
  for (int c = 0; c < k; ++c) {
    auto [pa, pb] = endpoints(chain[c]);
    A.block(c * (d + 1), c * (d + 1), d + 1, d + 1) = V;
    for (int p = 0; p <= d; ++p) {
      Vec2 x = pa + (static_cast<double>(p) / d) * (pb - pa);
      b(c * (d + 1) + p) = g(x.x, x.y);
    }
  }
  if (k == 1) return Eigen::PartialPivLU<Eigen::MatrixXd>(V).solve(b);

  // equalities: exact values at the chain endpoints (duplicated corner rows
  // of adjacent chains must agree), and C^0..C^r junctions in between,
  // stated through Bernstein endpoint differences scaled by edge length
  const int mc = 2 + (k - 1) * (r + 1);
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(mc, nu);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(mc);
  {
    auto [pa, pb] = endpoints(chain.front());
    C(0, 0) = 1.0;
    e(0) = g(pa.x, pa.y);
  }
  {
    auto [pa, pb] = endpoints(chain.back());
    C(1, nu - 1) = 1.0;
    e(1) = g(pb.x, pb.y);
  }
  int row = 2;
  for (int c = 0; c + 1 < k; ++c) {
    auto [la, lb] = endpoints(chain[c]);
    auto [ra, rb] = endpoints(chain[c + 1]);
    double hl = norm(lb - la), hr = norm(rb - ra);
    for (int s = 0; s <= r; ++s, ++row) {
      // s-th derivative match: backward difference of the left block equals
      // the forward difference of the right block (d!/(d-s)! cancels)
      double binom = 1.0;
      for (int i = 0; i <= s; ++i) {
        double sgn_l = (i % 2 == 0) ? 1.0 : -1.0;
        double sgn_r = ((s - i) % 2 == 0) ? 1.0 : -1.0;
        C(row, c * (d + 1) + d - i) += sgn_l * binom / std::pow(hl, s);
        C(row, (c + 1) * (d + 1) + i) -= sgn_r * binom / std::pow(hr, s);
        binom = binom * (s - i) / (i + 1.0);
      }
    }
  }

  // nullspace method for the equality-constrained least squares
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(C);
  Eigen::VectorXd xp = cod.solve(e);
  Eigen::FullPivLU<Eigen::MatrixXd> clu(C);
  Eigen::MatrixXd Z = clu.kernel();
  Eigen::VectorXd y =
      (A * Z).colPivHouseholderQr().solve(b - A * xp);
  return xp + Z * y;
}

}  // namespace

ConstraintSystem dirichlet_constraints(const SplineSpace& space,
                                       const ScalarFn& g, TraceMode mode) {
  const TriMesh& mesh = *space.mesh;
  const int d = space.d;
  ConstraintSystem sys;
  sys.cols = space.N;

  // univariate Bernstein collocation matrix at t_p = p/d, shared by all edges
  Eigen::MatrixXd V(d + 1, d + 1);
  for (int p = 0; p <= d; ++p) {
    double t = static_cast<double>(p) / d;
    double binom = 1.0;
    for (int j = 0; j <= d; ++j) {
      V(p, j) = binom * std::pow(1.0 - t, d - j) * std::pow(t, j);
      binom = binom * (d - j) / (j + 1.0);
    }
  }

  // boundary loop walk: each boundary vertex touches exactly two boundary
  // edges (validated at mesh construction)
  std::vector<std::array<int, 2>> at_vertex(mesh.n_vertices(), {-1, -1});
  std::vector<int> boundary_edges;
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Edge& ed = mesh.edges[e];
    if (!ed.boundary()) continue;
    boundary_edges.push_back(e);
    for (int v : {ed.v0, ed.v1}) {
      auto& slot = at_vertex[v];
      (slot[0] < 0 ? slot[0] : slot[1]) = e;
    }
  }

  // per-edge trace coefficients in the stored v0 -> v1 parameterization
  std::vector<Eigen::VectorXd> trace(mesh.n_edges());

  std::vector<char> seen(mesh.n_edges(), 0);
  for (int e0 : boundary_edges) {
    if (seen[e0]) continue;
    std::vector<ChainEdge> loop;
    loop.push_back({e0, true});
    seen[e0] = 1;
    int tail = mesh.edges[e0].v1, cur = e0;
    while (true) {
      auto inc = at_vertex[tail];
      int nxt = (inc[0] == cur) ? inc[1] : inc[0];
      if (nxt == e0) break;
      bool fwd = mesh.edges[nxt].v0 == tail;
      loop.push_back({nxt, fwd});
      seen[nxt] = 1;
      tail = fwd ? mesh.edges[nxt].v1 : mesh.edges[nxt].v0;
      cur = nxt;
    }

    const int n = static_cast<int>(loop.size());
    auto direction = [&](const ChainEdge& ce) {
      const Edge& ed = mesh.edges[ce.edge];
      Vec2 t = mesh.vertices[ed.v1] - mesh.vertices[ed.v0];
      return ce.forward ? t : -1.0 * t;
    };
    // corner[i]: the junction entering loop[i] breaks collinearity
    std::vector<char> corner(n, 0);
    int n_corners = 0;
    for (int i = 0; i < n; ++i) {
      Vec2 a = direction(loop[(i + n - 1) % n]), b = direction(loop[i]);
      bool straight = std::abs(cross(a, b)) <= 1e-12 * norm(a) * norm(b) &&
                      dot(a, b) > 0.0;
      corner[i] = !straight;
      n_corners += corner[i];
    }
    if (n_corners == 0) corner[0] = 1;  // fully smooth loop: split anywhere
    if (mode == TraceMode::per_edge)
      std::fill(corner.begin(), corner.end(), 1);

    int start = 0;
    while (!corner[start]) ++start;
    for (int taken = 0; taken < n;) {
      std::vector<ChainEdge> chain;
      chain.push_back(loop[start]);
      int i = (start + 1) % n;
      while (!corner[i]) {
        chain.push_back(loop[i]);
        i = (i + 1) % n;
      }
      Eigen::VectorXd x =
          solve_chain_trace(mesh, g, d, space.r, chain, V);
      for (size_t c = 0; c < chain.size(); ++c) {
        Eigen::VectorXd& t = trace[chain[c].edge];
        t.resize(d + 1);
        for (int j = 0; j <= d; ++j)
          t(chain[c].forward ? j : d - j) = x(c * (d + 1) + j);
      }
      taken += static_cast<int>(chain.size());
      start = i;
    }
  }

  // one row per edge domain point; corner coefficients are pinned once per
  // adjacent edge, and the duplicated rows agree by construction
  for (int e : boundary_edges) {
    const Edge& ed = mesh.edges[e];
    EdgeView view = edge_view(mesh, ed.left, ed.v0, ed.v1, d);
    const int off = space.offset(ed.left);
    for (int j = 0; j <= d; ++j) {
      int row = sys.rows();
      sys.entries.emplace_back(row, off + view(d - j, j, 0), 1.0);
      sys.rhs.push_back(trace[e](j));
      sys.kinds.push_back(RowKind::dirichlet);
    }
  }
  return sys;
}

SplineFunction interpolate(const SplineSpace& space, const ScalarFn& f) {
  const TriMesh& mesh = *space.mesh;
  const int d = space.d, nb = space.nb;

  // collocation at the domain points is the same linear system on every
  // triangle; factor it once
  Eigen::MatrixXd A(nb, nb);
  for (int p = 0; p < nb; ++p) {
    auto mi = bb_multi_index(d, p);
    std::array<double, 3> bary = {static_cast<double>(mi[0]) / d,
                                  static_cast<double>(mi[1]) / d,
                                  static_cast<double>(mi[2]) / d};
    std::vector<double> row = bernstein_values(d, bary);
    for (int q = 0; q < nb; ++q) A(p, q) = row[q];
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);

  SplineFunction u;
  u.space = space;
  u.c.resize(space.N);
  Eigen::VectorXd vals(nb);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    auto v = mesh.tri_vertices(t);
    for (int p = 0; p < nb; ++p) {
      auto mi = bb_multi_index(d, p);
      Vec2 x = (static_cast<double>(mi[0]) / d) * v[0] +
               (static_cast<double>(mi[1]) / d) * v[1] +
               (static_cast<double>(mi[2]) / d) * v[2];
      vals(p) = f(x.x, x.y);
    }
    u.c.segment(space.offset(t), nb) = lu.solve(vals);
  }
  return u;
}

int locate_triangle(const TriMesh& mesh, Vec2 p) {
  constexpr double tol = -1e-12;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    auto b = barycentric(mesh.tri_vertices(t), p);
    if (b[0] >= tol && b[1] >= tol && b[2] >= tol) return t;
  }
  return -1;
}

EvalResult eval_at(const SplineFunction& u, int t,
                   const std::array<double, 3>& bary) {
  const SplineSpace& sp = u.space;
  return eval_bezier(sp.d, u.c.data() + sp.offset(t),
                     sp.mesh->tri_vertices(t), bary);
}

EvalResult eval(const SplineFunction& u, Vec2 p) {
  int t = locate_triangle(*u.space.mesh, p);
  if (t < 0)
    throw Error("eval: point (" + std::to_string(p.x) + "," +
                std::to_string(p.y) + ") lies outside the mesh");
  return eval_at(u, t, barycentric(u.space.mesh->tri_vertices(t), p));
}

}  // namespace maspline
