#include "maspline/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace maspline {

namespace {

int quad_degree(int d) { return std::max(3 * d - 4, 2 * d); }

double branch_sign(Branch b) { return b == Branch::convex ? 1.0 : -1.0; }

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
  }
};

double field_l2(const TriMesh& mesh, const TriQuadRule& rule,
                const ScalarField& v) {
  const int nq = rule.size();
  double acc = 0.0;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    double part = 0.0;
    for (int q = 0; q < nq; ++q) {
      const double x = v[static_cast<size_t>(t) * nq + q];
      part += rule.weights[q] * x * x;
    }
    acc += 2.0 * mesh.area(t) * part;
  }
  return std::sqrt(acc);
}

double residual_l2(const TriMesh& mesh, const TriQuadRule& rule,
                   const MatrixField& hess, const ScalarField& fq) {
  const int nq = rule.size();
  double acc = 0.0;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    double part = 0.0;
    for (int q = 0; q < nq; ++q) {
      const size_t i = static_cast<size_t>(t) * nq + q;
      const double x = det2(hess[i]) - fq[i];
      part += rule.weights[q] * x * x;
    }
    acc += 2.0 * mesh.area(t) * part;
  }
  return std::sqrt(acc);
}

double constraint_residual(const ConstraintSystem& R, const Eigen::VectorXd& c,
                           const Eigen::VectorXd& G) {
  if (R.rows() == 0) return 0.0;
  return (R.matrix() * c - G).norm();
}

// full H^1 norm from precomputed mass and stiffness blocks
struct H1Norm {
  const BlockDiagonalMatrix* mass;
  const BlockDiagonalMatrix* stiff;
  double operator()(const Eigen::VectorXd& c) const {
    return std::sqrt(mass->quad_form(c) + stiff->quad_form(c));
  }
};

// Initial guess of the regularized driver: eps*int(Du Dv Laplacians) +
// int Du.Dv = sign * (eps^3 flux - int 2 sqrt(f) v), u = g on the boundary.
SplineFunction vm_init(const SplineSpace& space, const BasisTable& tbl,
                       const ScalarField& fq, const ConstraintSystem& R,
                       const Eigen::VectorXd& G,
                       const BlockDiagonalMatrix& stiff,
                       const BlockDiagonalMatrix& B, const Eigen::VectorXd& F,
                       double eps, double sgn, const ALParams& al) {
  BlockDiagonalMatrix M = stiff;
  M.add_scaled(B, eps);
  ScalarField rq(fq.size());
  for (size_t i = 0; i < fq.size(); ++i) rq[i] = 2.0 * std::sqrt(fq[i]);
  Eigen::VectorXd rhs =
      sgn * (eps * eps * eps * F - load_vector(space, tbl, rq));
  ConstrainedSolver solver(M, R, +1, al);
  return {space, solver.solve(rhs, G)};
}

SolveResult solve_newton_like(const ProblemSpec& prob, const SplineSpace& space,
                              const NewtonParams& p, const SplineFunction* u0) {
  Timer timer;
  MASPLINE_REQUIRE(space.d >= 2, "degree must be at least 2 for Hessians");
  MASPLINE_REQUIRE(p.tau >= 1.0, "tau must be >= 1");
  MASPLINE_REQUIRE(p.epsilon >= 0.0, "epsilon must be >= 0");
  const double sgn = branch_sign(prob.branch);
  const double eps = p.epsilon;

  BasisTable tbl =
      make_basis_table(space.d, triangle_rule(quad_degree(space.d)));
  ScalarField fq = sample_scalar(*space.mesh, tbl.rule, prob.f);
  require_positive(fq, *space.mesh, tbl.rule, "f");

  ConstraintSystem R =
      concat(smoothness_constraints(space),
             dirichlet_constraints(space, prob.g, prob.trace));
  Eigen::VectorXd G = R.g();

  BlockDiagonalMatrix mass = mass_matrix(space, tbl);
  BlockDiagonalMatrix stiff = stiffness_matrix(space, tbl);
  H1Norm h1{&mass, &stiff};
  Eigen::VectorXd P = load_vector(space, tbl, fq);
  BlockDiagonalMatrix B;
  Eigen::VectorXd F;
  if (eps > 0.0) {
    B = biharmonic_matrix(space, tbl);
    F = boundary_flux_vector(space);
  }

  const double f_norm = field_l2(*space.mesh, tbl.rule, fq);
  const double tol_res = p.tol_residual_rel * (1.0 + f_norm);
  const double guard = 1e12 * (1.0 + f_norm);

  SolveResult out;
  if (u0) {
    MASPLINE_REQUIRE(u0->c.size() == space.N, "initial guess has wrong size");
    out.u = *u0;
  } else if (prob.branch == Branch::concave && G.norm() > 0.0) {
    // nonzero boundary data: solve the convex problem with -g first and
    // start the concave iteration from the negated result
    ScalarFn g = prob.g;
    ProblemSpec mirror{prob.f,
                       [g](double x, double y) { return -g(x, y); },
                       Branch::convex, prob.trace};
    SolveResult boot = solve_newton_like(mirror, space, p, nullptr);
    out.u = SplineFunction{space, -boot.u.c};
    out.report.note = "bootstrapped from mirrored convex solve; ";
  } else if (eps > 0.0) {
    out.u = vm_init(space, tbl, fq, R, G, stiff, B, F, eps, sgn, p.al);
  } else {
    out.u = initial_guess(prob, space);
  }

  Eigen::VectorXd lambda;
  ALStats al_stats;
  MatrixField hess = spline_quad_data(out.u, tbl, false, false, true).hess;
  double res = residual_l2(*space.mesh, tbl.rule, hess, fq);

  for (int k = 1; k <= p.max_iters; ++k) {
    BlockDiagonalMatrix K = weighted_stiffness(space, tbl, cof_of(hess));
    Eigen::VectorXd rhs =
        (1.0 - 1.0 / (2.0 * p.tau)) * K.apply(out.u.c) - (1.0 / p.tau) * P;
    BlockDiagonalMatrix* Msys = &K;
    BlockDiagonalMatrix Mreg;
    if (eps > 0.0) {
      Mreg = K;
      Mreg.add_scaled(B, sgn * eps);
      Msys = &Mreg;
      rhs += (1.0 - 1.0 / p.tau) * B.apply((sgn * eps) * out.u.c) +
             (eps * eps * eps / p.tau) * F;
    }

    Eigen::VectorXd c_next;
    try {
      ConstrainedSolver solver(*Msys, R, sgn > 0.0 ? +1 : -1, p.al);
      c_next = solver.solve(rhs, G, &lambda, &al_stats);
    } catch (const Error& e) {
      out.report.note += "linear solve failed at iteration " +
                         std::to_string(k) + ": " + e.what();
      break;
    }

    const double inc = h1(c_next - out.u.c);
    const double scale = h1(c_next);
    const double inc_rel = inc / (scale > 0.0 ? scale : 1.0);
    out.u.c = std::move(c_next);
    out.report.iterations = k;

    hess = spline_quad_data(out.u, tbl, false, false, true).hess;
    res = residual_l2(*space.mesh, tbl.rule, hess, fq);
    out.report.residual_history.push_back(res);

    if (!std::isfinite(res) || res > guard) {
      out.report.note += "diverged at iteration " + std::to_string(k);
      break;
    }
    if (res <= tol_res) {
      out.report.converged = true;
      out.report.note += "residual tolerance met";
      break;
    }
    if (inc_rel <= p.tol_increment_rel) {
      out.report.converged = true;
      out.report.note += "increment tolerance met";
      break;
    }
  }

  out.report.residual = res;
  out.report.constraint_residual = constraint_residual(R, out.u.c, G);
  if (out.report.converged && al_stats.outer > 0 && !al_stats.converged) {
    // the nonlinear iteration settled but the constraint system never
    // closed (e.g. an incompatible boundary trace): report the compromise
    out.report.converged = false;
    out.report.note += "; constraints did not close, ||Rc-G|| = " +
                       std::to_string(out.report.constraint_residual);
  }
  out.report.wall_ms = timer.ms();
  return out;
}

}  // namespace

double bfo_update(int n, double lap, double f, double det, double constant2d) {
  MASPLINE_REQUIRE(n == 2 || n == 3, "dimension must be 2 or 3");
  if (n == 2)
    return std::sqrt(std::max(0.0, lap * lap + constant2d * (f - det)));
  return std::cbrt(lap * lap * lap + 9.0 * (f - det));
}

SplineFunction poisson_solve(const SplineSpace& space, const ScalarFn& rhs,
                             const ScalarFn& g, TraceMode mode) {
  BasisTable tbl =
      make_basis_table(space.d, triangle_rule(quad_degree(space.d)));
  ConstraintSystem R = concat(smoothness_constraints(space),
                              dirichlet_constraints(space, g, mode));
  BlockDiagonalMatrix K = stiffness_matrix(space, tbl);
  Eigen::VectorXd L =
      -load_vector(space, tbl, sample_scalar(*space.mesh, tbl.rule, rhs));
  ConstrainedSolver solver(K, R);
  return {space, solver.solve(L, R.g())};
}

SplineFunction initial_guess(const ProblemSpec& prob,
                             const SplineSpace& space) {
  TriQuadRule rule = triangle_rule(quad_degree(space.d));
  ScalarField fq = sample_scalar(*space.mesh, rule, prob.f);
  require_positive(fq, *space.mesh, rule, "f");
  const double sgn = branch_sign(prob.branch);
  ScalarFn f = prob.f;
  return poisson_solve(
      space,
      [f, sgn](double x, double y) { return sgn * (2.0 * std::sqrt(f(x, y))); },
      prob.g, prob.trace);
}

SolveResult newton_solve(const ProblemSpec& prob, const SplineSpace& space,
                         const NewtonParams& params, const SplineFunction* u0) {
  MASPLINE_REQUIRE(params.epsilon == 0.0,
                   "newton_solve handles the reduced problem only; use "
                   "vm_solve for epsilon > 0");
  return solve_newton_like(prob, space, params, u0);
}

SolveResult vm_solve(const ProblemSpec& prob, const SplineSpace& space,
                     const NewtonParams& params, const SplineFunction* u0) {
  MASPLINE_REQUIRE(params.epsilon > 0.0, "vm_solve requires epsilon > 0");
  return solve_newton_like(prob, space, params, u0);
}

SolveResult bfo_solve(const ProblemSpec& prob, const SplineSpace& space,
                      const BFOParams& p, const SplineFunction* u0) {
  Timer timer;
  MASPLINE_REQUIRE(space.d >= 2, "degree must be at least 2 for Hessians");
  MASPLINE_REQUIRE(p.constant > 0.0, "update constant must be positive");
  const double sgn = branch_sign(prob.branch);

  BasisTable tbl =
      make_basis_table(space.d, triangle_rule(quad_degree(space.d)));
  ScalarField fq = sample_scalar(*space.mesh, tbl.rule, prob.f);
  require_positive(fq, *space.mesh, tbl.rule, "f");

  ConstraintSystem R =
      concat(smoothness_constraints(space),
             dirichlet_constraints(space, prob.g, prob.trace));
  Eigen::VectorXd G = R.g();

  BlockDiagonalMatrix stiff = stiffness_matrix(space, tbl);
  BlockDiagonalMatrix mass = mass_matrix(space, tbl);
  H1Norm h1{&mass, &stiff};
  // the stiffness matrix never changes: one factorization serves the whole run
  ConstrainedSolver solver(stiff, R, +1, p.al);

  SolveResult out;
  Eigen::VectorXd lambda;
  ALStats al_stats;
  if (u0) {
    MASPLINE_REQUIRE(u0->c.size() == space.N, "initial guess has wrong size");
    out.u = *u0;
  } else if (G.norm() > 0.0) {
    // harmonic extension of the boundary data
    out.u = SplineFunction{
        space,
        solver.solve(Eigen::VectorXd::Zero(space.N), G, &lambda, &al_stats)};
  } else {
    out.u = SplineFunction{space, Eigen::VectorXd::Zero(space.N)};
  }

  ScalarField rq(fq.size());
  // the map is only locally contractive: on problems it cannot solve the
  // H^1 increments bottom out and then grow again as the iterate drifts away
  // from the near-fixed-point it had reached; keep that best iterate so a
  // stalled run still returns the bounded state it passed through
  double inc_min = std::numeric_limits<double>::infinity();
  int inc_min_it = 0;
  Eigen::VectorXd c_best;
  int grow_run = 0;
  for (int k = 1; k <= p.max_iters; ++k) {
    MatrixField hess = spline_quad_data(out.u, tbl, false, false, true).hess;
    for (size_t i = 0; i < fq.size(); ++i)
      rq[i] = sgn * bfo_update(2, trace(hess[i]), fq[i], det2(hess[i]),
                               p.constant);
    Eigen::VectorXd L = -load_vector(space, tbl, rq);

    Eigen::VectorXd c_next;
    try {
      c_next = solver.solve(L, G, &lambda, &al_stats);
    } catch (const Error& e) {
      out.report.note += "linear solve failed at iteration " +
                         std::to_string(k) + ": " + e.what();
      break;
    }

    const double inc = h1(c_next - out.u.c);
    out.u.c = std::move(c_next);
    out.report.iterations = k;
    out.report.residual_history.push_back(inc);
    if (p.observer) p.observer(k, out.u);

    if (!std::isfinite(inc)) {
      out.report.note += "diverged at iteration " + std::to_string(k);
      break;
    }
    if (inc <= p.tol_increment) {
      out.report.converged = true;
      out.report.note += "increment tolerance met";
      break;
    }
    if (inc < inc_min) {
      inc_min = inc;
      inc_min_it = k;
      c_best = out.u.c;
      grow_run = 0;
    } else {
      grow_run = inc > 1.5 * inc_min ? grow_run + 1 : 0;
    }
    if (grow_run >= 3) {
      out.u.c = std::move(c_best);
      out.report.note += "increments stopped contracting after iteration " +
                         std::to_string(inc_min_it) +
                         "; returning that iterate";
      break;
    }
  }

  MatrixField hess = spline_quad_data(out.u, tbl, false, false, true).hess;
  out.report.residual = residual_l2(*space.mesh, tbl.rule, hess, fq);
  out.report.constraint_residual = constraint_residual(R, out.u.c, G);
  if (out.report.converged && al_stats.outer > 0 && !al_stats.converged) {
    out.report.converged = false;
    out.report.note += "; constraints did not close, ||Rc-G|| = " +
                       std::to_string(out.report.constraint_residual);
  }
  out.report.wall_ms = timer.ms();
  return out;
}

}  // namespace maspline
