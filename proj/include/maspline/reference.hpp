#pragma once

#include "maspline/assembly.hpp"

namespace maspline::reference {

// Serial reference implementations of the assembly kernels.  They run the
// same per-triangle cores as the OpenMP versions in plain loops and must
// produce bitwise identical results; the tests and the benchmark target
// compare the two.
BlockDiagonalMatrix mass_matrix(const SplineSpace& space,
                                const BasisTable& tbl);
BlockDiagonalMatrix weighted_stiffness(const SplineSpace& space,
                                       const BasisTable& tbl,
                                       const MatrixField& A);
BlockDiagonalMatrix stiffness_matrix(const SplineSpace& space,
                                     const BasisTable& tbl);
BlockDiagonalMatrix biharmonic_matrix(const SplineSpace& space,
                                      const BasisTable& tbl);
Eigen::VectorXd load_vector(const SplineSpace& space, const BasisTable& tbl,
                            const ScalarField& s);
Eigen::VectorXd det_hessian_load(const SplineSpace& space,
                                 const BasisTable& tbl,
                                 const SplineFunction& u);
SplineQuadData spline_quad_data(const SplineFunction& u, const BasisTable& tbl,
                                bool need_value, bool need_grad,
                                bool need_hess);
double energy_functional(const SplineSpace& space, const BasisTable& tbl,
                         const SplineFunction& u, const ScalarField& f);

}  // namespace maspline::reference
