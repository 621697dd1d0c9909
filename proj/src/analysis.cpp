#include "maspline/analysis.hpp"

#include <cmath>

#include "maspline/parallel.hpp"

namespace maspline {

namespace {

int quad_degree(int d) { return std::max(3 * d - 4, 2 * d); }

double frob2(const Sym2& h) {
  return h.a11 * h.a11 + 2.0 * h.a12 * h.a12 + h.a22 * h.a22;
}

}  // namespace

ErrorTriple error_norms(const SplineFunction& u, const ExactSolution& exact) {
  const SplineSpace& space = u.space;
  const TriMesh& mesh = *space.mesh;
  BasisTable tbl =
      make_basis_table(space.d, triangle_rule(quad_degree(space.d)));
  SplineQuadData data = spline_quad_data(u, tbl, true, true, true);
  const int nq = tbl.rule.size();
  const int ntri = mesh.n_triangles();

  // per-triangle partial sums, reduced serially in triangle order so the
  // result does not depend on the thread schedule
  std::vector<double> p0(ntri), p1(ntri), p2(ntri);
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (int t = 0; t < ntri; ++t) {
    auto verts = mesh.tri_vertices(t);
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (int q = 0; q < nq; ++q) {
      const auto& b = tbl.rule.points[q];
      Vec2 x = b[0] * verts[0] + b[1] * verts[1] + b[2] * verts[2];
      const size_t i = static_cast<size_t>(t) * nq + q;
      const double w = tbl.rule.weights[q];
      const double ev = data.value[i] - exact.value(x.x, x.y);
      const Vec2 eg = data.grad[i] - exact.grad(x.x, x.y);
      const Sym2 eh = data.hess[i] - exact.hess(x.x, x.y);
      s0 += w * ev * ev;
      s1 += w * dot(eg, eg);
      s2 += w * frob2(eh);
    }
    const double a2 = 2.0 * mesh.area(t);
    p0[t] = a2 * s0;
    p1[t] = a2 * s1;
    p2[t] = a2 * s2;
  }
  double v0 = 0.0, v1 = 0.0, v2 = 0.0;
  for (int t = 0; t < ntri; ++t) {
    v0 += p0[t];
    v1 += p1[t];
    v2 += p2[t];
  }
  ErrorTriple e;
  e.l2 = std::sqrt(v0);
  e.h1 = std::sqrt(v0 + v1);
  e.h2 = std::sqrt(v0 + v1 + v2);
  return e;
}

double ma_residual(const SplineFunction& u, const ScalarFn& f) {
  const SplineSpace& space = u.space;
  MASPLINE_REQUIRE(space.d >= 2, "degree must be at least 2 for Hessians");
  const TriMesh& mesh = *space.mesh;
  BasisTable tbl =
      make_basis_table(space.d, triangle_rule(quad_degree(space.d)));
  MatrixField hess = spline_quad_data(u, tbl, false, false, true).hess;
  ScalarField fq = sample_scalar(mesh, tbl.rule, f);
  const int nq = tbl.rule.size();
  double acc = 0.0;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    double part = 0.0;
    for (int q = 0; q < nq; ++q) {
      const size_t i = static_cast<size_t>(t) * nq + q;
      const double x = det2(hess[i]) - fq[i];
      part += tbl.rule.weights[q] * x * x;
    }
    acc += 2.0 * mesh.area(t) * part;
  }
  return std::sqrt(acc);
}

double l2_norm(const SplineFunction& u) {
  ExactSolution zero{[](double, double) { return 0.0; },
                     [](double, double) { return Vec2{}; },
                     [](double, double) { return Sym2{}; }};
  return error_norms(u, zero).l2;
}

double h1_norm(const SplineFunction& u) {
  ExactSolution zero{[](double, double) { return 0.0; },
                     [](double, double) { return Vec2{}; },
                     [](double, double) { return Sym2{}; }};
  return error_norms(u, zero).h1;
}

double observed_order(const std::vector<std::pair<double, double>>& errors) {
  MASPLINE_REQUIRE(errors.size() >= 2,
                   "observed_order needs at least two levels");
  double sx = 0.0, sy = 0.0;
  for (const auto& [h, v] : errors) {
    MASPLINE_REQUIRE(h > 0.0, "mesh sizes must be positive");
    MASPLINE_REQUIRE(v > 0.0, "error values must be positive");
    sx += std::log(h);
    sy += std::log(v);
  }
  const double n = static_cast<double>(errors.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [h, v] : errors) {
    const double dx = std::log(h) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(v) - my);
  }
  MASPLINE_REQUIRE(sxx > 0.0, "mesh sizes must not all coincide");
  return sxy / sxx;
}

JumpReport jump_diagnostics(const SplineFunction& u) {
  const TriMesh& mesh = *u.space.mesh;
  JumpReport rep;
  const int samples = 20;
  for (const Edge& e : mesh.edges) {
    if (e.boundary()) continue;
    const Vec2 a = mesh.vertices[e.v0], b = mesh.vertices[e.v1];
    auto vl = mesh.tri_vertices(e.left);
    auto vr = mesh.tri_vertices(e.right);
    for (int s = 0; s < samples; ++s) {
      const double t = static_cast<double>(s) / (samples - 1);
      const Vec2 p = a + t * (b - a);
      EvalResult L = eval_at(u, e.left, barycentric(vl, p));
      EvalResult R = eval_at(u, e.right, barycentric(vr, p));
      rep.value = std::max(rep.value, std::abs(L.value - R.value));
      rep.gradient = std::max(rep.gradient, norm(L.grad - R.grad));
    }
  }
  return rep;
}

}  // namespace maspline
