#include "maspline/reference.hpp"

#include "element_kernels.hpp"

namespace maspline::reference {

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
  detail::Scratch s;
  for (int t = 0; t < M.ntri; ++t)
    detail::tri_weighted_stiffness(space, tbl, A, t, M.block(t), s);
  return M;
}

BlockDiagonalMatrix stiffness_matrix(const SplineSpace& space,
                                     const BasisTable& tbl) {
  MatrixField I(static_cast<size_t>(space.mesh->n_triangles()) *
                    tbl.rule.size(),
                Sym2{1.0, 0.0, 1.0});
  return reference::weighted_stiffness(space, tbl, I);
}

BlockDiagonalMatrix biharmonic_matrix(const SplineSpace& space,
                                      const BasisTable& tbl) {
  MASPLINE_REQUIRE(space.d >= 2, "biharmonic form needs degree >= 2");
  BlockDiagonalMatrix M = empty_blocks(space);
  detail::Scratch s;
  for (int t = 0; t < M.ntri; ++t)
    detail::tri_biharmonic(space, tbl, t, M.block(t), s);
  return M;
}

Eigen::VectorXd load_vector(const SplineSpace& space, const BasisTable& tbl,
                            const ScalarField& f) {
  Eigen::VectorXd L = Eigen::VectorXd::Zero(space.N);
  for (int t = 0; t < space.mesh->n_triangles(); ++t)
    detail::tri_load(space, tbl, f, t, L.data() + space.offset(t));
  return L;
}

Eigen::VectorXd det_hessian_load(const SplineSpace& space,
                                 const BasisTable& tbl,
                                 const SplineFunction& u) {
  Eigen::VectorXd L = Eigen::VectorXd::Zero(space.N);
  detail::Scratch s;
  for (int t = 0; t < space.mesh->n_triangles(); ++t)
    detail::tri_det_hessian_load(space, tbl, u, t, L.data() + space.offset(t),
                                 s);
  return L;
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
  detail::Scratch s;
  for (int t = 0; t < ntri; ++t)
    detail::tri_spline_data(
        u, tbl, t,
        need_value ? out.value.data() + static_cast<size_t>(t) * nq : nullptr,
        need_grad ? out.grad.data() + static_cast<size_t>(t) * nq : nullptr,
        need_hess ? out.hess.data() + static_cast<size_t>(t) * nq : nullptr,
        s);
  return out;
}

double energy_functional(const SplineSpace& space, const BasisTable& tbl,
                         const SplineFunction& u, const ScalarField& f) {
  const int ntri = space.mesh->n_triangles();
  detail::Scratch s;
  double acc = 0.0;
  for (int t = 0; t < ntri; ++t)
    acc += detail::tri_energy(space, tbl, u, f, t, s);
  return acc;
}

}  // namespace maspline::reference
