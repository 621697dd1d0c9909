// Acceptance harness: runs the eleven gate checks and prints one PASS/FAIL
// line per criterion (details indented below each line).  Exits 0 only if
// every criterion passes.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "maspline/analysis.hpp"
#include "maspline/reference.hpp"
#include "maspline/runner.hpp"
#include "maspline/solvers.hpp"
#include "maspline/testcases.hpp"

using namespace maspline;

namespace {

struct Line {
  std::string text;
};
std::vector<Line> detail;

void note(const std::string& s) { detail.push_back({s}); }

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

bool within_factor(double measured, double target, double factor) {
  return measured <= factor * target && measured >= target / factor;
}

std::shared_ptr<TriMesh> square(int m) {
  return std::make_shared<TriMesh>(build_square_mesh(m));
}

struct Solved {
  SolveResult result;
  ErrorTriple errors;
  SplineSpace space;
};

Solved run_newton(int test, int d, int m, double epsilon = 0.0,
                  Branch branch = Branch::convex, int max_iters = -1,
                  TraceMode trace = TraceMode::compatible) {
  TestCase tc = get_test_case(test, branch);
  ProblemSpec prob{tc.f, tc.g, branch, trace};
  SplineSpace sp = make_space(square(m), d, 1);
  NewtonParams p;
  p.epsilon = epsilon;
  if (max_iters > 0) p.max_iters = max_iters;
  SolveResult out = epsilon > 0 ? vm_solve(prob, sp, p) : newton_solve(prob, sp, p);
  ErrorTriple e{};
  if (tc.has_exact) e = error_norms(out.u, tc.exact);
  return {std::move(out), e, sp};
}

Solved run_bfo(int test, int d, int m, Branch branch = Branch::convex) {
  TestCase tc = get_test_case(test, branch);
  ProblemSpec prob{tc.f, tc.g, branch};
  SplineSpace sp = make_space(square(m), d, 1);
  BFOParams p;
  SolveResult out = bfo_solve(prob, sp, p);
  ErrorTriple e{};
  if (tc.has_exact) e = error_norms(out.u, tc.exact);
  return {std::move(out), e, sp};
}

int cli_exit_code(const std::string& args) {
  std::string cmd = std::string(MASPLINE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// ---------------------------------------------------------------- criteria

bool criterion_1() {
  // paper degree table at h = 1/2: L2, H1, H2 per degree
  const double paper[6][3] = {
      {1.0610e-3, 1.1101e-2, 1.6383e-1}, {3.5127e-5, 4.8553e-4, 9.0596e-3},
      {4.1572e-6, 6.5142e-5, 1.9364e-3}, {1.9685e-7, 3.6401e-6, 1.4774e-4},
      {2.2699e-8, 4.1498e-7, 2.2424e-5}, {1.2430e-9, 2.2586e-8, 1.5479e-6}};
  // reference values were computed with independent per-edge boundary
  // interpolation, so the comparison runs in that trace mode; such solves
  // report converged = false by design (the trace is a least-squares
  // compromise), so only the error magnitudes are judged here
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  double prev[3] = {1e30, 1e30, 1e30};
  for (int d = 3; d <= 8; ++d) {
    Solved s = run_newton(1, d, 2, 0.0, Branch::convex, -1, TraceMode::per_edge);
    double got[3] = {s.errors.l2, s.errors.h1, s.errors.h2};
    const double* ref = paper[d - 3];
    bool row_ok = true;
    for (int k = 0; k < 3; ++k) {
      row_ok = row_ok && within_factor(got[k], ref[k], 3.0);
      row_ok = row_ok && got[k] < prev[k];  // strictly decreasing columns
      prev[k] = got[k];
    }
    note(fmt("d=%d  l2 %.3e (paper %.3e)  h1 %.3e (%.3e)  h2 %.3e (%.3e)  "
             "n_it %d%s",
             d, got[0], ref[0], got[1], ref[1], got[2], ref[2],
             s.result.report.iterations, row_ok ? "" : "  <-- out of range"));
    ok = ok && row_ok;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
  note(fmt("total runtime %.1f s (budget 120 s)", secs));
  return ok && secs < 120.0;
}

bool criterion_2() {
  // same per-edge trace regime as the degree table above
  Solved s = run_newton(1, 5, 4, 0.0, Branch::convex, -1, TraceMode::per_edge);
  const double ref[3] = {1.1531e-7, 2.3916e-6, 1.3444e-4};
  double got[3] = {s.errors.l2, s.errors.h1, s.errors.h2};
  bool ok = true;
  for (int k = 0; k < 3; ++k) ok = ok && within_factor(got[k], ref[k], 3.0);
  note(fmt("h=1/4 d=5: l2 %.4e (paper %.4e)  h1 %.4e (%.4e)  h2 %.4e (%.4e)",
           got[0], ref[0], got[1], ref[1], got[2], ref[2]));
  return ok;
}

bool criterion_3() {
  TestCase tc = get_test_case(1, Branch::convex);
  Solved reduced = run_newton(1, 5, 4);

  bool ok = true;
  double prev_l2 = 1e30;
  std::optional<SplineFunction> at_1e5;
  for (double eps : {1e-3, 1e-4, 1e-5, 1e-6, 1e-7}) {
    Solved s = run_newton(1, 5, 4, eps);
    note(fmt("eps %.0e: l2 %.4e  h1 %.4e  h2 %.4e  n_it %d", eps, s.errors.l2,
             s.errors.h1, s.errors.h2, s.result.report.iterations));
    ok = ok && s.result.report.converged && s.errors.l2 < prev_l2;
    prev_l2 = s.errors.l2;
    if (eps == 1e-5) at_1e5 = s.result.u;
  }

  Solved tail = run_newton(1, 5, 4, 1e-11);
  bool agree = true;
  const double pairs[3][2] = {{tail.errors.l2, reduced.errors.l2},
                              {tail.errors.h1, reduced.errors.h1},
                              {tail.errors.h2, reduced.errors.h2}};
  for (auto& p : pairs)
    agree = agree && std::abs(p[0] - p[1]) <= 1e-3 * std::abs(p[1]);
  note(fmt("eps 1e-11: l2 %.6e vs reduced %.6e (rel %.1e) -> %s",
           tail.errors.l2, reduced.errors.l2,
           std::abs(tail.errors.l2 - reduced.errors.l2) / reduced.errors.l2,
           agree ? "3 significant digits" : "disagree"));
  ok = ok && agree;

  // boundary-layer probe at eps = 1e-5: band error vs interior error
  const int n = 41;
  double band = 0.0, interior = 0.0;
  for (int i = 1; i < n - 1; ++i)
    for (int j = 1; j < n - 1; ++j) {
      double x = double(i) / (n - 1), y = double(j) / (n - 1);
      double err = std::abs(eval(*at_1e5, {x, y}).value - tc.exact.value(x, y));
      double dist = std::min(std::min(x, 1 - x), std::min(y, 1 - y));
      if (dist <= 0.08)
        band = std::max(band, err);
      else
        interior = std::max(interior, err);
    }
  note(fmt("eps 1e-5 boundary band max |err| %.3e vs interior %.3e (ratio %.2f)",
           band, interior, band / interior));
  ok = ok && band <= 10.0 * interior;
  return ok;
}

bool criterion_4() {
  const double ref_l2[2] = {2.8275e-6, 5.4642e-8};
  const int ms[2] = {2, 4};
  bool ok = true;
  for (int i = 0; i < 2; ++i) {
    Solved s = run_bfo(1, 5, ms[i]);
    int n_it = s.result.report.iterations;
    bool row_ok = s.result.report.converged &&
                  within_factor(s.errors.l2, ref_l2[i], 5.0) && n_it >= 15 &&
                  n_it <= 100;
    note(fmt("h=1/%d: l2 %.4e (paper %.4e)  n_it %d%s", ms[i], s.errors.l2,
             ref_l2[i], n_it, row_ok ? "" : "  <-- out of range"));
    ok = ok && row_ok;
  }
  return ok;
}

bool criterion_5() {
  // Newton on the singular-data problem: fine meshes lose accuracy
  double l2_at[5] = {0, 0, 0, 0, 0};
  bool conv_at[5] = {};
  int idx = 0;
  for (int m : {2, 4, 8, 16}) {
    Solved s = run_newton(2, 3, m, 0.0, Branch::convex, 20);
    l2_at[idx] = s.errors.l2;
    conv_at[idx] = s.result.report.converged;
    note(fmt("newton h=1/%-2d: l2 %.4e  converged %d  history %zu entries", m,
             s.errors.l2, int(s.result.report.converged),
             s.result.report.residual_history.size()));
    if (!s.result.report.converged &&
        s.result.report.residual_history.empty())
      return false;  // non-convergence must still record its history
    ++idx;
  }
  bool deteriorates = !conv_at[3] || l2_at[3] > l2_at[2];
  note(fmt("deterioration at h=1/16: %s",
           deteriorates ? "yes" : "no (error still decreasing)"));

  // BFO stays bounded on the coarse mesh
  Solved b = run_bfo(2, 3, 2);
  note(fmt("bfo h=1/2: l2 %.4e  n_it %d", b.errors.l2,
           b.result.report.iterations));
  bool bfo_ok = b.errors.l2 > 1e-2 && b.errors.l2 < 1.0;

  // a starved run must exit with code 2
  int code = cli_exit_code(
      "--test 2 --method newton --degree 3 --m 4 --max-iters 2 "
      "--tol-residual 1e-14");
  note(fmt("starved CLI run exit code %d (want 2)", code));
  return deteriorates && bfo_ok && code == 2;
}

bool criterion_6() {
  SplineSpace sp = make_space(square(4), 4, 1);
  TestCase tc = get_test_case(3, Branch::convex);
  ProblemSpec cvx{tc.f, tc.g, Branch::convex};
  ProblemSpec ccv{tc.f, tc.g, Branch::concave};
  bool ok = true;

  {
    // the fixed-point iteration drifts on this corner-singular problem, so
    // the symmetry is checked on whatever the capped run returns; no
    // convergence flag is required of it
    BFOParams p;
    p.max_iters = 60;
    SolveResult a = bfo_solve(cvx, sp, p);
    SolveResult b = bfo_solve(ccv, sp, p);
    double mirror = l2_norm(SplineFunction{sp, a.u.c + b.u.c});
    note(fmt("bfo (%d iterations): ||u_convex + u_concave||_0 = %.3e",
             a.report.iterations, mirror));
    ok = ok && a.report.iterations == b.report.iterations && mirror <= 1e-8;
  }
  {
    NewtonParams p;
    p.epsilon = 1e-5;
    SolveResult a = vm_solve(cvx, sp, p);
    SolveResult b = vm_solve(ccv, sp, p);
    double mirror = l2_norm(SplineFunction{sp, a.u.c + b.u.c});
    note(fmt("vm eps=1e-5: ||u_convex + u_concave||_0 = %.3e", mirror));
    ok = ok && a.report.converged && b.report.converged && mirror <= 1e-8;
  }
  return ok;
}

bool criterion_7() {
  auto fact = [](int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  double worst = 0.0;
  for (int q = 1; q <= 20; ++q) {
    TriQuadRule rule = triangle_rule(q);
    for (int a = 0; a <= q; ++a)
      for (int b = 0; a + b <= q; ++b) {
        int c = q - a - b;
        double s = 0.0;
        for (int i = 0; i < rule.size(); ++i)
          s += rule.weights[i] * std::pow(rule.points[i][0], a) *
               std::pow(rule.points[i][1], b) * std::pow(rule.points[i][2], c);
        double exact = fact(a) * fact(b) * fact(c) / fact(a + b + c + 2);
        worst = std::max(worst, std::abs(s - exact));
      }
  }
  note(fmt("largest monomial defect over rules of degree 1..20: %.2e", worst));
  return worst <= 1e-12;
}

bool criterion_8() {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> uni(-5.0, 5.0);
  double worst_cof = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    Sym2 h{uni(rng), uni(rng), uni(rng)};
    Sym2 c = cof2(h);
    double d = det2(h);
    worst_cof = std::max({worst_cof, std::abs(c.a11 * h.a11 + c.a12 * h.a12 - d),
                          std::abs(c.a11 * h.a12 + c.a12 * h.a22),
                          std::abs(c.a12 * h.a11 + c.a22 * h.a12),
                          std::abs(c.a12 * h.a12 + c.a22 * h.a22 - d)});
  }
  note(fmt("cof(H) H = det(H) I defect over 1000 draws: %.2e", worst_cof));

  bool psd_ok = true;
  for (int rep = 0; rep < 1000; ++rep) {
    double a = uni(rng), b = uni(rng), c = uni(rng), d = uni(rng);
    Sym2 h{a * a + c * c, a * b + c * d, b * b + d * d};
    double t = trace(h);
    psd_ok = psd_ok && det2(h) <= 0.25 * t * t + 1e-12;
  }
  note(fmt("det(H) <= tr(H)^2/4 on 1000 PSD draws: %s", psd_ok ? "holds" : "violated"));

  // divergence-free cofactor rows for random quartics, via derivative nets
  std::array<Vec2, 3> verts = {Vec2{0.2, 0.1}, Vec2{1.4, 0.3}, Vec2{0.3, 1.3}};
  TriGeometry geom = tri_geometry(verts);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_div = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> p(n_basis(4));
    for (double& v : p) v = uni(rng);
    std::vector<double> px(n_basis(3)), py(n_basis(3));
    for (int i = 0; i < n_basis(3); ++i) {
      auto mi = bb_multi_index(3, i);
      double sx = 0.0, sy = 0.0;
      for (int mm = 0; mm < 3; ++mm) {
        std::array<int, 3> up = mi;
        up[mm] += 1;
        double cv = p[bb_index(4, up[0], up[1], up[2])];
        sx += geom.bgrad[mm].x * cv;
        sy += geom.bgrad[mm].y * cv;
      }
      px[i] = 4 * sx;
      py[i] = 4 * sy;
    }
    for (int k = 0; k < 50; ++k) {
      double b1 = unit(rng), b2 = unit(rng) * (1.0 - b1);
      std::array<double, 3> b{b1, b2, 1.0 - b1 - b2};
      Sym2 hx = eval_bezier(3, px.data(), verts, b).hess;
      Sym2 hy = eval_bezier(3, py.data(), verts, b).hess;
      worst_div = std::max({worst_div, std::abs(hx.a22 - hy.a12),
                            std::abs(-hx.a12 + hy.a11)});
    }
  }
  note(fmt("div(cof D^2 p) defect for degree-4 p: %.2e", worst_div));
  return worst_cof <= 1e-12 && psd_ok && worst_div <= 1e-10;
}

bool criterion_9() {
  struct Probe {
    const char* label;
    Solved s;
    ScalarFn g;
  };
  TestCase t1 = get_test_case(1, Branch::convex);
  std::vector<Probe> probes;
  probes.push_back({"newton test1 d=4 h=1/2", run_newton(1, 4, 2), t1.g});
  probes.push_back({"bfo    test1 d=5 h=1/2", run_bfo(1, 5, 2), t1.g});
  probes.push_back({"vm     test1 d=4 h=1/2", run_newton(1, 4, 2, 1e-5), t1.g});

  bool ok = true;
  for (auto& p : probes) {
    const SplineSpace& sp = p.s.space;
    ConstraintSystem cs =
        concat(smoothness_constraints(sp), dirichlet_constraints(sp, p.g));
    double gn = cs.g().norm();
    double bound = 1e-9 * (1.0 + gn);
    JumpReport j = jump_diagnostics(p.s.result.u);
    bool row_ok = p.s.result.report.converged &&
                  p.s.result.report.constraint_residual <= bound &&
                  j.value <= 1e-8 && j.gradient <= 1e-8;
    note(fmt("%s: ||Rc-G|| %.2e (bound %.2e)  jumps %.2e / %.2e%s", p.label,
             p.s.result.report.constraint_residual, bound, j.value, j.gradient,
             row_ok ? "" : "  <-- violated"));
    ok = ok && row_ok;
  }

  // the circle mesh run exercises the file-loaded domain
  TestCase t4 = get_test_case(4, Branch::convex);
  auto mesh = std::make_shared<TriMesh>(
      load_mesh(std::string(MASPLINE_DATA_DIR) + "/circle216"));
  SplineSpace sp = make_space(mesh, 3, 1);
  ProblemSpec prob{t4.f, t4.g, Branch::convex};
  NewtonParams np;
  SolveResult out = newton_solve(prob, sp, np);
  ConstraintSystem cs =
      concat(smoothness_constraints(sp), dirichlet_constraints(sp, t4.g));
  double bound = 1e-9 * (1.0 + cs.g().norm());
  JumpReport j = jump_diagnostics(out.u);
  bool circle_ok = out.report.converged &&
                   out.report.constraint_residual <= bound && j.value <= 1e-8 &&
                   j.gradient <= 1e-8;
  note(fmt("newton test4 d=3 circle: ||Rc-G|| %.2e (bound %.2e)  jumps %.2e / %.2e",
           out.report.constraint_residual, bound, j.value, j.gradient));
  return ok && circle_ok;
}

bool criterion_10() {
  TestCase tc = get_test_case(1, Branch::convex);
  bool ok = true;
  for (int d : {3, 4}) {
    std::vector<std::pair<double, double>> pts;
    for (int m : {2, 4, 8}) {
      SplineSpace sp = make_space(square(m), d, 1);
      SplineFunction u = interpolate(sp, tc.exact.value);
      pts.push_back({1.0 / m, error_norms(u, tc.exact).l2});
    }
    double order = observed_order(pts);
    note(fmt("interpolation d=%d: observed L2 order %.2f (need >= %.1f)", d,
             order, d + 0.8));
    ok = ok && order >= d + 0.8;
  }

  std::vector<std::pair<double, double>> h2pts;
  for (int m : {1, 2, 4}) {
    Solved s = run_newton(1, 5, m);
    ok = ok && s.result.report.converged;
    h2pts.push_back({1.0 / m, s.errors.h2});
  }
  double h2order = observed_order(h2pts);
  note(fmt("newton d=5 H2 error order %.2f (need >= 1)", h2order));
  return ok && h2order >= 1.0;
}

bool criterion_11() {
  TestCase tc = get_test_case(1, Branch::convex);
  auto mesh = square(4);
  std::vector<double> corr, wrong;
  for (int d : {3, 4, 5}) {
    SplineSpace sp = make_space(mesh, d, 1);
    BasisTable tbl =
        make_basis_table(d, triangle_rule(std::max(3 * d - 4, 2 * d)));
    SplineFunction ustar = interpolate(sp, tc.exact.value);

    MatrixField cof = cof_of(spline_quad_data(ustar, tbl, false, false, true).hess);
    BlockDiagonalMatrix K = weighted_stiffness(sp, tbl, cof);
    ScalarField fq = sample_scalar(*mesh, tbl.rule, tc.f);
    Eigen::VectorXd P = load_vector(sp, tbl, fq);
    Eigen::VectorXd half_K_u = 0.5 * K.apply(ustar.c);

    // dual (H1-Riesz) norm over the zero-boundary constrained test space
    ConstraintSystem R0 = concat(
        smoothness_constraints(sp),
        dirichlet_constraints(sp, [](double, double) { return 0.0; }));
    BlockDiagonalMatrix gram = mass_matrix(sp, tbl);
    gram.add_scaled(stiffness_matrix(sp, tbl), 1.0);
    ConstrainedSolver riesz(gram, R0);
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(R0.rows());
    auto dual_norm = [&](const Eigen::VectorXd& ell) {
      Eigen::VectorXd w = riesz.solve(ell, zero);
      return std::sqrt(std::max(0.0, ell.dot(w)));
    };
    corr.push_back(dual_norm(half_K_u + P));
    wrong.push_back(dual_norm(half_K_u - P));
    note(fmt("d=%d: corrected-sign residual %.3e, printed-sign residual %.3e",
             d, corr.back(), wrong.back()));
  }
  bool corr_decreasing = corr[1] < corr[0] && corr[2] < corr[1];
  bool wrong_flat = wrong[1] >= 0.5 * wrong[0] && wrong[2] >= 0.5 * wrong[0];
  bool separated = wrong[2] > 10.0 * corr[2];
  note(fmt("corrected decreasing: %s; printed-sign stays O(1): %s; "
           "separation at d=5: %.1fx",
           corr_decreasing ? "yes" : "no", wrong_flat ? "yes" : "no",
           wrong[2] / corr[2]));
  return corr_decreasing && wrong_flat && separated;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<bool()> fn;
  };
  const Criterion criteria[] = {
      {1, "degree table, smooth problem, h=1/2 (factor 3, decreasing, <2min)",
       criterion_1},
      {2, "refined run h=1/4 d=5 (factor 3)", criterion_2},
      {3, "regularized sweep: monotone in eps, tail agreement, no boundary layer",
       criterion_3},
      {4, "fixed-point errors and iteration counts at d=5", criterion_4},
      {5, "singular data: newton deteriorates, fixed point stays bounded, exit 2",
       criterion_5},
      {6, "branch symmetry u_concave = -u_convex (fixed point and regularized)",
       criterion_6},
      {7, "quadrature monomial oracle to 1e-12", criterion_7},
      {8, "cofactor identities and divergence-free rows", criterion_8},
      {9, "constraint residual and jump bounds on converged solves", criterion_9},
      {10, "interpolation and solver convergence orders", criterion_10},
      {11, "weak-form sign consistency under degree refinement", criterion_11},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    detail.clear();
    bool pass = false;
    std::string error;
    try {
      pass = c.fn();
    } catch (const std::exception& e) {
      error = e.what();
    }
    if (!pass) ++failures;
    std::printf("%s  %2d  %s\n", pass ? "PASS" : "FAIL", c.id, c.name);
    for (const auto& l : detail) std::printf("          %s\n", l.text.c_str());
    if (!error.empty()) std::printf("          exception: %s\n", error.c_str());
    std::fflush(stdout);
  }
  if (failures)
    std::printf("%d of 11 criteria failing\n", failures);
  else
    std::printf("all 11 criteria pass\n");
  return failures == 0 ? 0 : 1;
}
