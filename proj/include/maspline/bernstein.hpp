#pragma once

#include <array>
#include <vector>

#include "maspline/common.hpp"
#include "maspline/quadrature.hpp"

namespace maspline {

// Bernstein-Bezier polynomials of degree d on a triangle,
//   B_{ijk}(l) = d!/(i!j!k!) l1^i l2^j l3^k,  i+j+k = d,
// with coefficients stored lexicographically in (i,j,k), i descending and,
// within equal i, j descending.  So (d,0,0) comes first and (0,0,d) last.

inline int n_basis(int d) { return (d + 1) * (d + 2) / 2; }

// flat index of (i,j,k) with i+j+k = d
inline int bb_index(int d, int i, int j, int k) {
  (void)j;
  int m = d - i;
  return m * (m + 1) / 2 + k;
}

std::array<int, 3> bb_multi_index(int d, int idx);

// values of all n_basis(d) Bernstein polynomials at a barycentric point;
// `out` must hold n_basis(d) doubles
void bernstein_values(int d, const std::array<double, 3>& b, double* out);
std::vector<double> bernstein_values(int d, const std::array<double, 3>& b);

// Value, gradient and Hessian (in Cartesian coordinates) of the polynomial
// with Bezier net `c` over the triangle with vertices `verts`, evaluated at
// barycentric point `b` by de Casteljau reduction of the net.
struct EvalResult {
  double value = 0.0;
  Vec2 grad;
  Sym2 hess;
};
EvalResult eval_bezier(int d, const double* c, const std::array<Vec2, 3>& verts,
                       const std::array<double, 3>& b);

// Basis values tabulated at the points of a quadrature rule, at degrees d,
// d-1 and d-2, together with index-shift tables.  These turn per-triangle
// basis derivative evaluation into a few lookups:
//   grad B_a = d * sum_m Dl_m * val1[q][down1[a][m]]
//   hess B_a = d(d-1) * sum_{m,n} Dl_m Dl_n^T * val2[q][down2[a][3m+n]]
// where Dl_m are the barycentric coordinate gradients of the triangle.
struct BasisTable {
  int d = 0;
  int nb = 0;
  TriQuadRule rule;
  std::vector<double> val;   // [q * nb + a]
  std::vector<double> val1;  // [q * n_basis(d-1) + a'], empty for d == 0
  std::vector<double> val2;  // [q * n_basis(d-2) + a''], empty for d <= 1
  std::vector<std::array<int, 3>> down1;  // index of (multi - e_m), -1 if invalid
  std::vector<std::array<int, 9>> down2;  // index of (multi - e_m - e_n)
};
BasisTable make_basis_table(int d, TriQuadRule rule);

// Per-triangle geometric data shared by the evaluation formulas above.
struct TriGeometry {
  std::array<Vec2, 3> verts;
  std::array<Vec2, 3> bgrad;  // barycentric coordinate gradients
  double area = 0.0;
};
TriGeometry tri_geometry(const std::array<Vec2, 3>& verts);

// Physical value/gradient/Hessian of every basis function at one tabulated
// quadrature point.  Output arrays must hold nb entries each; any of them may
// be null to skip that order.
void basis_at_point(const BasisTable& tbl, const TriGeometry& geom, int q,
                    double* values, Vec2* grads, Sym2* hessians);

// Physical gradients of all n_basis(d) basis functions at an arbitrary
// barycentric point (no tabulation); `grads` must hold n_basis(d) entries.
void basis_gradients_at(int d, const TriGeometry& geom,
                        const std::array<double, 3>& b, Vec2* grads);

}  // namespace maspline
