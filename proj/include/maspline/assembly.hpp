#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "maspline/spline_space.hpp"

namespace maspline {

inline double det2(const Sym2& a) { return a.a11 * a.a22 - a.a12 * a.a12; }
// Cofactor (= adjugate) of a symmetric 2x2 matrix: cof(A) A = det(A) I.
inline Sym2 cof2(const Sym2& a) { return {a.a22, -a.a12, a.a11}; }

// Fields sampled at the quadrature points of a rule, flat index t*nq + q.
using ScalarField = std::vector<double>;
using MatrixField = std::vector<Sym2>;

ScalarField sample_scalar(const TriMesh& mesh, const TriQuadRule& rule,
                          const ScalarFn& f);
// Throws naming the offending quadrature point unless f > 0 everywhere.
void require_positive(const ScalarField& f, const TriMesh& mesh,
                      const TriQuadRule& rule, const char* what);

// Value/gradient/Hessian of a spline at every tabulated quadrature point.
// Unrequested arrays stay empty.
struct SplineQuadData {
  std::vector<double> value;
  std::vector<Vec2> grad;
  std::vector<Sym2> hess;
};
SplineQuadData spline_quad_data(const SplineFunction& u, const BasisTable& tbl,
                                bool need_value, bool need_grad,
                                bool need_hess);

inline MatrixField cof_of(const MatrixField& h) {
  MatrixField out(h.size());
  for (size_t i = 0; i < h.size(); ++i) out[i] = cof2(h[i]);
  return out;
}
inline ScalarField det_of(const MatrixField& h) {
  ScalarField out(h.size());
  for (size_t i = 0; i < h.size(); ++i) out[i] = det2(h[i]);
  return out;
}
inline ScalarField trace_of(const MatrixField& h) {
  ScalarField out(h.size());
  for (size_t i = 0; i < h.size(); ++i) out[i] = trace(h[i]);
  return out;
}

// In the discontinuous per-triangle layout every bilinear form couples only
// coefficients of the same triangle, so assembled matrices are block
// diagonal with one dense nb x nb block per triangle.
struct BlockDiagonalMatrix {
  int ntri = 0;
  int nb = 0;
  std::vector<double> a;  // [t * nb * nb + i * nb + j]

  long rows() const { return static_cast<long>(ntri) * nb; }
  double* block(int t) { return a.data() + static_cast<size_t>(t) * nb * nb; }
  const double* block(int t) const {
    return a.data() + static_cast<size_t>(t) * nb * nb;
  }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  double quad_form(const Eigen::VectorXd& x) const;  // x^T A x
  void add_scaled(const BlockDiagonalMatrix& other, double s);  // A += s B
  void scale(double s);
  std::vector<Eigen::Triplet<double>> triplets() const;
  Eigen::SparseMatrix<double> sparse() const;
};

// OpenMP-parallel assembly kernels.  All of them fill disjoint per-triangle
// slots, so results are deterministic and identical to the serial reference
// implementations in maspline::reference.
BlockDiagonalMatrix mass_matrix(const SplineSpace& space,
                                const BasisTable& tbl);
// int_T A grad(phi_i) . grad(phi_j); pass cof(D^2 u_k) for the linearized
// Monge-Ampere operator, or use stiffness_matrix for A = I.
BlockDiagonalMatrix weighted_stiffness(const SplineSpace& space,
                                       const BasisTable& tbl,
                                       const MatrixField& A);
BlockDiagonalMatrix stiffness_matrix(const SplineSpace& space,
                                     const BasisTable& tbl);
// int_T lap(phi_i) lap(phi_j)
BlockDiagonalMatrix biharmonic_matrix(const SplineSpace& space,
                                      const BasisTable& tbl);
// L_a = int s phi_a
Eigen::VectorXd load_vector(const SplineSpace& space, const BasisTable& tbl,
                            const ScalarField& s);
// L_a = int det(D^2 u) phi_a
Eigen::VectorXd det_hessian_load(const SplineSpace& space,
                                 const BasisTable& tbl,
                                 const SplineFunction& u);
// F_a = boundary integral of d(phi_a)/dn (outward normal); serial, the
// boundary workload is negligible
Eigen::VectorXd boundary_flux_vector(const SplineSpace& space);

// J(u) = int (cof D^2 u) Du . Du + 2 n int f u with n = 2
double energy_functional(const SplineSpace& space, const BasisTable& tbl,
                         const SplineFunction& u, const ScalarField& f);

}  // namespace maspline
