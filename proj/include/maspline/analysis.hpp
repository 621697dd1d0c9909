#pragma once

#include <utility>
#include <vector>

#include "maspline/assembly.hpp"

namespace maspline {

// Closed-form solution with derivatives, for error measurement.
struct ExactSolution {
  ScalarFn value;
  std::function<Vec2(double, double)> grad;
  std::function<Sym2(double, double)> hess;
};

// Full norms: h1 and h2 include the lower-order terms, so l2 <= h1 <= h2.
struct ErrorTriple {
  double l2 = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
};

// L2 / H1 / H2 norms of u_h - exact by triangle-wise quadrature with the
// assembly rule of the space's degree.
ErrorTriple error_norms(const SplineFunction& u, const ExactSolution& exact);

// ||det D^2 u_h - f||_{L2}
double ma_residual(const SplineFunction& u, const ScalarFn& f);

// L2 and full H1 norm of a spline function.
double l2_norm(const SplineFunction& u);
double h1_norm(const SplineFunction& u);

// Least-squares slope of log(error) against log(h) over refinement levels.
// Requires at least two samples with positive h and positive error values.
double observed_order(const std::vector<std::pair<double, double>>& errors);

// Maxima over interior edges of |[u]| and |[Du]| at 20 points per edge;
// measures how well the smoothness constraints were enforced.
struct JumpReport {
  double value = 0.0;
  double gradient = 0.0;
};
JumpReport jump_diagnostics(const SplineFunction& u);

}  // namespace maspline
