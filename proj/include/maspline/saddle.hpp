#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <vector>

#include "maspline/assembly.hpp"

namespace maspline {

// Metric on the multiplier space used by the augmented-Lagrangian
// regularization block.  `identity` is the default; `row_gram_diag` scales
// each multiplier by the squared norm of its constraint row (a diagonal
// constraint-space mass), useful when rows have very different magnitudes.
enum class MultiplierMetric { identity, row_gram_diag };

struct ALParams {
  double mu = 1e-5;
  MultiplierMetric metric = MultiplierMetric::identity;
  // converged when ||R c - G|| <= tol_constraint * (1 + ||G||)
  double tol_constraint = 1e-10;
  // stop early when the residual changes by less than tol_stall * (1 + ||G||)
  double tol_stall = 1e-14;
  int max_outer = 200;
};

struct ALStats {
  int outer = 0;
  bool converged = false;
  std::vector<double> constraint_residuals;  // ||R c - G|| per outer iteration
};

// Solves  K c + R^T lambda = L,  R c = G  by the regularized iteration
//
//   [ K      R^T     ] [ c^(l+1)      ]   [ L                     ]
//   [ R   -s*mu*M    ] [ lambda^(l+1) ] = [ G - s*mu*M lambda^(l) ]
//
// where s = `sign` is +1 when c^T K c is positive (semi)definite and coercive
// on ker R, and -1 when it is negative (the concave-branch linearizations).
// The sign flip keeps the block matrix nonsingular in both cases.  The block
// matrix is factored once at construction and reused across outer iterations
// and across repeated solves with different right-hand sides.
class ConstrainedSolver {
 public:
  ConstrainedSolver(const BlockDiagonalMatrix& K, const ConstraintSystem& R,
                    int sign = +1, ALParams params = {});

  // lambda_io: optional multiplier warm start on entry, final multiplier on
  // exit (resized/zeroed if it does not match the row count).
  Eigen::VectorXd solve(const Eigen::VectorXd& L, const Eigen::VectorXd& G,
                        Eigen::VectorXd* lambda_io = nullptr,
                        ALStats* stats = nullptr) const;

  long n() const { return N_; }
  int m() const { return m_; }

 private:
  long N_ = 0;
  int m_ = 0;
  int sign_ = +1;
  ALParams params_;
  Eigen::SparseMatrix<double> R_;
  Eigen::VectorXd metric_diag_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
};

}  // namespace maspline
