#pragma once

// Per-triangle assembly cores shared by the OpenMP kernels (assembly.cpp)
// and their serial reference twins (reference.cpp).  Each core writes only
// the slots of its own triangle, which is what makes the parallel loops
// race-free and bit-reproducible.

#include "maspline/assembly.hpp"

namespace maspline::detail {

struct Scratch {
  std::vector<double> val;
  std::vector<Vec2> grad;
  std::vector<Sym2> hess;
  void resize(int nb) {
    val.resize(nb);
    grad.resize(nb);
    hess.resize(nb);
  }
};

void tri_mass(const SplineSpace& space, const BasisTable& tbl, int t,
              double* blk);
void tri_weighted_stiffness(const SplineSpace& space, const BasisTable& tbl,
                            const MatrixField& A, int t, double* blk,
                            Scratch& s);
void tri_biharmonic(const SplineSpace& space, const BasisTable& tbl, int t,
                    double* blk, Scratch& s);
void tri_load(const SplineSpace& space, const BasisTable& tbl,
              const ScalarField& f, int t, double* out);
void tri_det_hessian_load(const SplineSpace& space, const BasisTable& tbl,
                          const SplineFunction& u, int t, double* out,
                          Scratch& s);
void tri_spline_data(const SplineFunction& u, const BasisTable& tbl, int t,
                     double* value, Vec2* grad, Sym2* hess, Scratch& s);
double tri_energy(const SplineSpace& space, const BasisTable& tbl,
                  const SplineFunction& u, const ScalarField& f, int t,
                  Scratch& s);

}  // namespace maspline::detail
