#pragma once

#include <functional>
#include <string>
#include <vector>

#include "maspline/saddle.hpp"

namespace maspline {

enum class Branch { convex, concave };

// det D^2 u = f in Omega (f > 0), u = g on the boundary.  The equation has
// one convex and one concave solution (u and -u swap roles when g = 0); the
// branch selects which one the iterations target.  The trace mode selects
// how g is turned into boundary constraint values (see TraceMode).
struct ProblemSpec {
  ScalarFn f;
  ScalarFn g;
  Branch branch = Branch::convex;
  TraceMode trace = TraceMode::compatible;
};

// Parameters shared by the damped Newton driver (epsilon = 0) and the
// vanishing-moment driver (epsilon > 0, biharmonic regularization).
struct NewtonParams {
  double tau = 1.0;        // damping, tau >= 1; steps scale by 1/tau
  double epsilon = 0.0;    // regularization strength; 0 = reduced problem
  // converged when ||det D^2 u_k - f||_0 <= tol_residual_rel * (1 + ||f||_0).
  // On a fixed mesh the residual floors at discretization error, so the
  // driver also accepts a relative H^1 increment below tol_increment_rel as
  // convergence (the Newton tail collapses the increment quadratically).
  double tol_residual_rel = 1e-10;
  double tol_increment_rel = 1e-9;
  int max_iters = 30;
  ALParams al;
};

struct BFOParams {
  double constant = 2.0;       // the 2 in sqrt(lap^2 + 2 (f - det))
  double tol_increment = 1e-8; // H^1 norm of the iterate increment
  int max_iters = 300;
  ALParams al;
  // called after every update with (iteration index, new iterate)
  std::function<void(int, const SplineFunction&)> observer;
};

struct SolveReport {
  int iterations = 0;
  // Newton/VM: L2 residual ||det D^2 u_k - f||_0 after each step;
  // BFO: H^1 increment after each step.
  std::vector<double> residual_history;
  bool converged = false;
  double residual = 0.0;             // final ||det D^2 u - f||_0
  double constraint_residual = 0.0;  // final ||R c - G||
  double wall_ms = 0.0;
  std::string note;  // convergence/divergence detail
};

struct SolveResult {
  SplineFunction u;
  SolveReport report;
};

// Scalar update of the Poisson fixed-point method:
//   n=2: sqrt(max(0, lap^2 + constant2d * (f - det)))
//   n=3: cbrt(lap^3 + 9 * (f - det))
// The clamp keeps the 2D update real when the radicand dips negative.
double bfo_update(int n, double lap, double f, double det,
                  double constant2d = 2.0);

// Solves the Poisson problem Delta u = rhs, u = g on the boundary, in weak
// form int Du . Dw = -int rhs w over the constrained space.
SplineFunction poisson_solve(const SplineSpace& space, const ScalarFn& rhs,
                             const ScalarFn& g,
                             TraceMode mode = TraceMode::compatible);

// Initial guess Delta u0 = +-2 sqrt(f), u0 = g on the boundary (sign by
// branch).  Throws when f is not positive at every quadrature point.
SplineFunction initial_guess(const ProblemSpec& prob, const SplineSpace& space);

// Damped Newton on det D^2 u = f (requires params.epsilon == 0).  Each step
// solves, over the constrained space,
//   int (cof D^2 u_k) D u_{k+1} . D w = (1 - 1/(2 tau)) int (cof D^2 u_k) D u_k . D w
//                                       - (1/tau) int f w.
// For the concave branch with nonzero g the driver first solves the convex
// problem with -g and starts from the negated result.
SolveResult newton_solve(const ProblemSpec& prob, const SplineSpace& space,
                         const NewtonParams& params,
                         const SplineFunction* u0 = nullptr);

// Newton on the regularized problem -eps_b Delta^2 u + det D^2 u = f with
// second boundary condition Delta u = sign * epsilon^2, where eps_b =
// sign * epsilon and sign follows the branch.  Requires params.epsilon > 0.
// Each step solves
//   sign*eps int D(u_{k+1}) D(v) [Laplacians] + int (cof D^2 u_k) Du_{k+1}.Dv
//     = (1 - 1/tau) sign*eps int Du_k Dv [Laplacians]
//       + (1 - 1/(2 tau)) int (cof D^2 u_k) Du_k . Dv
//       + (eps^3/tau) boundary_flux - (1/tau) int f v.
SolveResult vm_solve(const ProblemSpec& prob, const SplineSpace& space,
                     const NewtonParams& params,
                     const SplineFunction* u0 = nullptr);

// Poisson fixed point: u_{k+1} solves Delta u_{k+1} = +-sqrt(lap^2 +
// c (f - det)) evaluated pointwise from u_k, with u = g on the boundary.
// Initial guess: zero when g = 0, else the harmonic extension of g.  The
// stiffness block system is factored once and reused for every iteration.
SolveResult bfo_solve(const ProblemSpec& prob, const SplineSpace& space,
                      const BFOParams& params,
                      const SplineFunction* u0 = nullptr);

}  // namespace maspline
