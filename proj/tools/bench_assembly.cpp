#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "CLI11.hpp"
#include "maspline/parallel.hpp"
#include "maspline/reference.hpp"
#include "maspline/solvers.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double time_best_ms(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    auto t0 = Clock::now();
    fn();
    best = std::min(
        best, std::chrono::duration<double, std::milli>(Clock::now() - t0)
                  .count());
  }
  return best;
}

bool bits_equal(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

bool bits_equal(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) return false;
  for (long i = 0; i < a.size(); ++i)
    if (a(i) != b(i)) return false;
  return true;
}

void report(const char* name, double serial_ms, double parallel_ms,
            bool equal) {
  std::printf("%-18s %10.3f %12.3f %9.2fx   %s\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms,
              equal ? "bitwise equal" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  int m = 24, d = 5, reps = 5;
  CLI::App app{
      "Benchmark: OpenMP assembly kernels against the serial reference"};
  app.add_option("--m", m, "square subdivisions per side (default 24)");
  app.add_option("--degree", d, "polynomial degree (default 5)");
  app.add_option("--reps", reps, "repetitions, best-of (default 5)");
  CLI11_PARSE(app, argc, argv);

  using namespace maspline;
  auto mesh = std::make_shared<TriMesh>(build_square_mesh(m));
  SplineSpace space = make_space(mesh, d, 1);
  BasisTable tbl =
      make_basis_table(d, triangle_rule(std::max(3 * d - 4, 2 * d)));
  std::printf("mesh: %d triangles, degree %d (%ld coefficients), %d thread(s)\n",
              mesh->n_triangles(), d, space.N, max_threads());
  std::printf("%-18s %10s %12s %10s\n", "kernel", "serial_ms", "parallel_ms",
              "speedup");

  SplineFunction u = interpolate(
      space, [](double x, double y) { return std::exp(0.5 * (x * x + y * y)); });
  ScalarField fq = sample_scalar(*mesh, tbl.rule,
                                 [](double x, double y) {
                                   return (1.0 + x * x + y * y) *
                                          std::exp(x * x + y * y);
                                 });

  {
    BlockDiagonalMatrix a, b;
    double ts = time_best_ms(reps, [&] { a = reference::mass_matrix(space, tbl); });
    double tp = time_best_ms(reps, [&] { b = mass_matrix(space, tbl); });
    report("mass_matrix", ts, tp, bits_equal(a.a, b.a));
  }
  {
    BlockDiagonalMatrix a, b;
    double ts =
        time_best_ms(reps, [&] { a = reference::stiffness_matrix(space, tbl); });
    double tp = time_best_ms(reps, [&] { b = stiffness_matrix(space, tbl); });
    report("stiffness_matrix", ts, tp, bits_equal(a.a, b.a));
  }
  {
    BlockDiagonalMatrix a, b;
    double ts =
        time_best_ms(reps, [&] { a = reference::biharmonic_matrix(space, tbl); });
    double tp = time_best_ms(reps, [&] { b = biharmonic_matrix(space, tbl); });
    report("biharmonic_matrix", ts, tp, bits_equal(a.a, b.a));
  }
  {
    MatrixField cof;
    {
      auto hess = reference::spline_quad_data(u, tbl, false, false, true).hess;
      cof = cof_of(hess);
    }
    BlockDiagonalMatrix a, b;
    double ts = time_best_ms(
        reps, [&] { a = reference::weighted_stiffness(space, tbl, cof); });
    double tp =
        time_best_ms(reps, [&] { b = weighted_stiffness(space, tbl, cof); });
    report("weighted_stiffness", ts, tp, bits_equal(a.a, b.a));
  }
  {
    Eigen::VectorXd a, b;
    double ts =
        time_best_ms(reps, [&] { a = reference::load_vector(space, tbl, fq); });
    double tp = time_best_ms(reps, [&] { b = load_vector(space, tbl, fq); });
    report("load_vector", ts, tp, bits_equal(a, b));
  }
  {
    Eigen::VectorXd a, b;
    double ts = time_best_ms(
        reps, [&] { a = reference::det_hessian_load(space, tbl, u); });
    double tp =
        time_best_ms(reps, [&] { b = det_hessian_load(space, tbl, u); });
    report("det_hessian_load", ts, tp, bits_equal(a, b));
  }
  {
    SplineQuadData a, b;
    double ts = time_best_ms(
        reps, [&] { a = reference::spline_quad_data(u, tbl, true, true, true); });
    double tp =
        time_best_ms(reps, [&] { b = spline_quad_data(u, tbl, true, true, true); });
    bool eq = bits_equal(a.value, b.value);
    for (size_t i = 0; eq && i < a.grad.size(); ++i)
      eq = a.grad[i].x == b.grad[i].x && a.grad[i].y == b.grad[i].y;
    for (size_t i = 0; eq && i < a.hess.size(); ++i)
      eq = a.hess[i].a11 == b.hess[i].a11 && a.hess[i].a12 == b.hess[i].a12 &&
           a.hess[i].a22 == b.hess[i].a22;
    report("spline_quad_data", ts, tp, eq);
  }
  {
    double ja = 0.0, jb = 0.0;
    double ts = time_best_ms(
        reps, [&] { ja = reference::energy_functional(space, tbl, u, fq); });
    double tp =
        time_best_ms(reps, [&] { jb = energy_functional(space, tbl, u, fq); });
    report("energy_functional", ts, tp, ja == jb);
  }
  return 0;
}
