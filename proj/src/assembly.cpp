#include "maspline/assembly.hpp"

#include <cmath>
#include <cstring>

#include "element_kernels.hpp"
#include "maspline/parallel.hpp"

namespace maspline {

namespace detail {

void tri_mass(const SplineSpace& space, const BasisTable& tbl, int t,
              double* blk) {
  const int nb = space.nb;
  const double a2 = 2.0 * space.mesh->area(t);
  for (int q = 0; q < tbl.rule.size(); ++q) {
    const double w = a2 * tbl.rule.weights[q];
    const double* v = tbl.val.data() + static_cast<size_t>(q) * nb;
    for (int i = 0; i < nb; ++i) {
      const double wv = w * v[i];
      for (int j = 0; j <= i; ++j) blk[i * nb + j] += wv * v[j];
    }
  }
  for (int i = 0; i < nb; ++i)
    for (int j = i + 1; j < nb; ++j) blk[i * nb + j] = blk[j * nb + i];
}

void tri_weighted_stiffness(const SplineSpace& space, const BasisTable& tbl,
                            const MatrixField& A, int t, double* blk,
                            Scratch& s) {
  const int nb = space.nb;
  const int nq = tbl.rule.size();
  s.resize(nb);
  TriGeometry geom = tri_geometry(space.mesh->tri_vertices(t));
  const double a2 = 2.0 * geom.area;
  for (int q = 0; q < nq; ++q) {
    basis_at_point(tbl, geom, q, nullptr, s.grad.data(), nullptr);
    const double w = a2 * tbl.rule.weights[q];
    const Sym2& Aq = A[static_cast<size_t>(t) * nq + q];
    for (int i = 0; i < nb; ++i) {
      const Vec2 Ag = apply(Aq, s.grad[i]);
      for (int j = 0; j <= i; ++j)
        blk[i * nb + j] += w * dot(Ag, s.grad[j]);
    }
  }
  for (int i = 0; i < nb; ++i)
    for (int j = i + 1; j < nb; ++j) blk[i * nb + j] = blk[j * nb + i];
}

void tri_biharmonic(const SplineSpace& space, const BasisTable& tbl, int t,
                    double* blk, Scratch& s) {
  const int nb = space.nb;
  s.resize(nb);
  TriGeometry geom = tri_geometry(space.mesh->tri_vertices(t));
  const double a2 = 2.0 * geom.area;
  std::vector<double> lap(nb);
  for (int q = 0; q < tbl.rule.size(); ++q) {
    basis_at_point(tbl, geom, q, nullptr, nullptr, s.hess.data());
    for (int i = 0; i < nb; ++i) lap[i] = trace(s.hess[i]);
    const double w = a2 * tbl.rule.weights[q];
    for (int i = 0; i < nb; ++i) {
      const double wl = w * lap[i];
      for (int j = 0; j <= i; ++j) blk[i * nb + j] += wl * lap[j];
    }
  }
  for (int i = 0; i < nb; ++i)
    for (int j = i + 1; j < nb; ++j) blk[i * nb + j] = blk[j * nb + i];
}

void tri_load(const SplineSpace& space, const BasisTable& tbl,
              const ScalarField& f, int t, double* out) {
  const int nb = space.nb;
  const int nq = tbl.rule.size();
  const double a2 = 2.0 * space.mesh->area(t);
  for (int q = 0; q < nq; ++q) {
    const double w = a2 * tbl.rule.weights[q] * f[static_cast<size_t>(t) * nq + q];
    const double* v = tbl.val.data() + static_cast<size_t>(q) * nb;
    for (int i = 0; i < nb; ++i) out[i] += w * v[i];
  }
}

void tri_spline_data(const SplineFunction& u, const BasisTable& tbl, int t,
                     double* value, Vec2* grad, Sym2* hess, Scratch& s) {
  const SplineSpace& sp = u.space;
  const int nb = sp.nb;
  const int nq = tbl.rule.size();
  s.resize(nb);
  TriGeometry geom = tri_geometry(sp.mesh->tri_vertices(t));
  const double* c = u.c.data() + sp.offset(t);
  for (int q = 0; q < nq; ++q) {
    basis_at_point(tbl, geom, q, value ? s.val.data() : nullptr,
                   grad ? s.grad.data() : nullptr,
                   hess ? s.hess.data() : nullptr);
    if (value) {
      double v = 0.0;
      for (int a = 0; a < nb; ++a) v += c[a] * s.val[a];
      value[q] = v;
    }
    if (grad) {
      Vec2 g{0.0, 0.0};
      for (int a = 0; a < nb; ++a) g = g + c[a] * s.grad[a];
      grad[q] = g;
    }
    if (hess) {
      Sym2 h;
      for (int a = 0; a < nb; ++a) h = h + c[a] * s.hess[a];
      hess[q] = h;
    }
  }
}

void tri_det_hessian_load(const SplineSpace& space, const BasisTable& tbl,
                          const SplineFunction& u, int t, double* out,
                          Scratch& s) {
  const int nb = space.nb;
  const int nq = tbl.rule.size();
  std::vector<Sym2> hess(nq);
  tri_spline_data(u, tbl, t, nullptr, nullptr, hess.data(), s);
  const double a2 = 2.0 * space.mesh->area(t);
  for (int q = 0; q < nq; ++q) {
    const double w = a2 * tbl.rule.weights[q] * det2(hess[q]);
    const double* v = tbl.val.data() + static_cast<size_t>(q) * nb;
    for (int i = 0; i < nb; ++i) out[i] += w * v[i];
  }
}

double tri_energy(const SplineSpace& space, const BasisTable& tbl,
                  const SplineFunction& u, const ScalarField& f, int t,
                  Scratch& s) {
  const int nq = tbl.rule.size();
  std::vector<double> val(nq);
  std::vector<Vec2> grad(nq);
  std::vector<Sym2> hess(nq);
  tri_spline_data(u, tbl, t, val.data(), grad.data(), hess.data(), s);
  const double a2 = 2.0 * space.mesh->area(t);
  double acc = 0.0;
  for (int q = 0; q < nq; ++q) {
    const double w = a2 * tbl.rule.weights[q];
    acc += w * (dot(apply(cof2(hess[q]), grad[q]), grad[q]) +
                4.0 * f[static_cast<size_t>(t) * nq + q] * val[q]);
  }
  return acc;
}

}  // namespace detail

ScalarField sample_scalar(const TriMesh& mesh, const TriQuadRule& rule,
                          const ScalarFn& f) {
  const int nq = rule.size();
  ScalarField out(static_cast<size_t>(mesh.n_triangles()) * nq);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    auto v = mesh.tri_vertices(t);
    for (int q = 0; q < nq; ++q) {
      const auto& b = rule.points[q];
      Vec2 x = b[0] * v[0] + b[1] * v[1] + b[2] * v[2];
      out[static_cast<size_t>(t) * nq + q] = f(x.x, x.y);
    }
  }
  return out;
}

void require_positive(const ScalarField& f, const TriMesh& mesh,
                      const TriQuadRule& rule, const char* what) {
  const int nq = rule.size();
  for (int t = 0; t < mesh.n_triangles(); ++t)
    for (int q = 0; q < nq; ++q) {
      double v = f[static_cast<size_t>(t) * nq + q];
      if (!(v > 0.0)) {
        auto b = rule.points[q];
        auto vv = mesh.tri_vertices(t);
        Vec2 x = b[0] * vv[0] + b[1] * vv[1] + b[2] * vv[2];
        throw Error(std::string(what) + " must be positive; got " +
                    std::to_string(v) + " at (" + std::to_string(x.x) + "," +
                    std::to_string(x.y) + ") in triangle " + std::to_string(t));
      }
    }
}

SplineQuadData spline_quad_data(const SplineFunction& u, const BasisTable& tbl,
                                bool need_value, bool need_grad,
                                bool need_hess) {
  const int ntri = u.space.mesh->n_triangles();
  const int nq = tbl.rule.size();
  SplineQuadData out;
  if (need_value) out.value.resize(static_cast<size_t>(ntri) * nq);
  if (need_grad) out.grad.resize(static_cast<size_t>(ntri) * nq);
  if (need_hess) out.hess.resize(static_cast<size_t>(ntri) * nq);
#pragma omp parallel num_threads(max_threads())
  {
    detail::Scratch s;
#pragma omp for schedule(static)
    for (int t = 0; t < ntri; ++t)
      detail::tri_spline_data(
          u, tbl, t,
          need_value ? out.value.data() + static_cast<size_t>(t) * nq : nullptr,
          need_grad ? out.grad.data() + static_cast<size_t>(t) * nq : nullptr,
          need_hess ? out.hess.data() + static_cast<size_t>(t) * nq : nullptr,
          s);
  }
  return out;
}

Eigen::VectorXd BlockDiagonalMatrix::apply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y(rows());
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (int t = 0; t < ntri; ++t) {
    const double* blk = block(t);
    const double* xi = x.data() + static_cast<size_t>(t) * nb;
    double* yi = y.data() + static_cast<size_t>(t) * nb;
    for (int i = 0; i < nb; ++i) {
      double acc = 0.0;
      for (int j = 0; j < nb; ++j) acc += blk[i * nb + j] * xi[j];
      yi[i] = acc;
    }
  }
  return y;
}

double BlockDiagonalMatrix::quad_form(const Eigen::VectorXd& x) const {
  return x.dot(apply(x));
}

void BlockDiagonalMatrix::add_scaled(const BlockDiagonalMatrix& other,
                                     double s) {
  MASPLINE_REQUIRE(other.ntri == ntri && other.nb == nb,
                   "add_scaled: shape mismatch");
  for (size_t i = 0; i < a.size(); ++i) a[i] += s * other.a[i];
}

void BlockDiagonalMatrix::scale(double s) {
  for (double& v : a) v *= s;
}

std::vector<Eigen::Triplet<double>> BlockDiagonalMatrix::triplets() const {
  std::vector<Eigen::Triplet<double>> out;
  out.reserve(a.size());
  for (int t = 0; t < ntri; ++t) {
    const double* blk = block(t);
    const int off = t * nb;
    for (int i = 0; i < nb; ++i)
      for (int j = 0; j < nb; ++j)
        out.emplace_back(off + i, off + j, blk[i * nb + j]);
  }
  return out;
}

Eigen::SparseMatrix<double> BlockDiagonalMatrix::sparse() const {
  Eigen::SparseMatrix<double> S(rows(), rows());
  auto trips = triplets();
  S.setFromTriplets(trips.begin(), trips.end());
  return S;
}

namespace {

BlockDiagonalMatrix empty_blocks(const SplineSpace& space) {
  BlockDiagonalMatrix M;
  M.ntri = space.mesh->n_triangles();
  M.nb = space.nb;
  M.a.assign(static_cast<size_t>(M.ntri) * M.nb * M.nb, 0.0);
  return M;
}

}  // namespace

BlockDiagonalMatrix mass_matrix(const SplineSpace& space,
                                const BasisTable& tbl) {
  BlockDiagonalMatrix M = empty_blocks(space);
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (int t = 0; t < M.ntri; ++t) detail::tri_mass(space, tbl, t, M.block(t));
  return M;
}

BlockDiagonalMatrix weighted_stiffness(const SplineSpace& space,
                                       const BasisTable& tbl,
                                       const MatrixField& A) {
  MASPLINE_REQUIRE(A.size() == static_cast<size_t>(space.mesh->n_triangles()) *
                                   tbl.rule.size(),
                   "weighted_stiffness: field size does not match the rule");
  BlockDiagonalMatrix M = empty_blocks(space);
#pragma omp parallel num_threads(max_threads())
  {
    detail::Scratch s;
#pragma omp for schedule(static)
    for (int t = 0; t < M.ntri; ++t)
      detail::tri_weighted_stiffness(space, tbl, A, t, M.block(t), s);
  }
  return M;
}

BlockDiagonalMatrix stiffness_matrix(const SplineSpace& space,
                                     const BasisTable& tbl) {
  MatrixField I(static_cast<size_t>(space.mesh->n_triangles()) *
                    tbl.rule.size(),
                Sym2{1.0, 0.0, 1.0});
  return weighted_stiffness(space, tbl, I);
}

BlockDiagonalMatrix biharmonic_matrix(const SplineSpace& space,
                                      const BasisTable& tbl) {
  MASPLINE_REQUIRE(space.d >= 2, "biharmonic form needs degree >= 2");
  BlockDiagonalMatrix M = empty_blocks(space);
#pragma omp parallel num_threads(max_threads())
  {
    detail::Scratch s;
#pragma omp for schedule(static)
    for (int t = 0; t < M.ntri; ++t)
      detail::tri_biharmonic(space, tbl, t, M.block(t), s);
  }
  return M;
}

Eigen::VectorXd load_vector(const SplineSpace& space, const BasisTable& tbl,
                            const ScalarField& f) {
  Eigen::VectorXd L = Eigen::VectorXd::Zero(space.N);
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (int t = 0; t < space.mesh->n_triangles(); ++t)
    detail::tri_load(space, tbl, f, t, L.data() + space.offset(t));
  return L;
}

Eigen::VectorXd det_hessian_load(const SplineSpace& space,
                                 const BasisTable& tbl,
                                 const SplineFunction& u) {
  Eigen::VectorXd L = Eigen::VectorXd::Zero(space.N);
#pragma omp parallel num_threads(max_threads())
  {
    detail::Scratch s;
#pragma omp for schedule(static)
    for (int t = 0; t < space.mesh->n_triangles(); ++t)
      detail::tri_det_hessian_load(space, tbl, u, t,
                                   L.data() + space.offset(t), s);
  }
  return L;
}

Eigen::VectorXd boundary_flux_vector(const SplineSpace& space) {
  const TriMesh& mesh = *space.mesh;
  const int d = space.d;
  Eigen::VectorXd F = Eigen::VectorXd::Zero(space.N);
  LineRule lr = line_rule(std::max(d - 1, 1));
  std::vector<Vec2> grads(space.nb);
  for (const Edge& e : mesh.edges) {
    if (!e.boundary()) continue;
    const int t = e.left;
    auto verts = mesh.tri_vertices(t);
    TriGeometry geom = tri_geometry(verts);
    Vec2 A = mesh.vertices[e.v0], B = mesh.vertices[e.v1];
    Vec2 dir = B - A;
    double len = norm(dir);
    // counterclockwise traversal keeps the interior on the left, so the
    // outward normal is the direction rotated by -90 degrees
    Vec2 nrm{dir.y / len, -dir.x / len};
    for (int q = 0; q < lr.size(); ++q) {
      Vec2 p = A + lr.points[q] * dir;
      basis_gradients_at(d, geom, barycentric(verts, p), grads.data());
      const double w = lr.weights[q] * len;
      for (int a = 0; a < space.nb; ++a)
        F(space.offset(t) + a) += w * dot(grads[a], nrm);
    }
  }
  return F;
}

double energy_functional(const SplineSpace& space, const BasisTable& tbl,
                         const SplineFunction& u, const ScalarField& f) {
  const int ntri = space.mesh->n_triangles();
  std::vector<double> partial(ntri);
#pragma omp parallel num_threads(max_threads())
  {
    detail::Scratch s;
#pragma omp for schedule(static)
    for (int t = 0; t < ntri; ++t)
      partial[t] = detail::tri_energy(space, tbl, u, f, t, s);
  }
  // deterministic reduction in triangle order
  double acc = 0.0;
  for (int t = 0; t < ntri; ++t) acc += partial[t];
  return acc;
}

}  // namespace maspline
