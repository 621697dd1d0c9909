#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "maspline/testcases.hpp"

namespace maspline {

struct RunConfig {
  int test = 1;
  std::string method = "newton";  // newton | bfo | vm
  int d = 3;
  int r = 1;
  int m = 2;              // square subdivisions per side (h label 1/m)
  std::string mesh_path;  // mesh file; overrides m, required for test 4
  double epsilon = 0.0;   // vm only
  double mu = 1e-5;
  double tau = 1.0;
  double bfo_constant = 2.0;
  Branch branch = Branch::convex;
  TraceMode trace = TraceMode::compatible;
  double tol_residual = -1.0;  // < 0: method default
  int max_iters = -1;          // < 0: method default
  std::string out_csv;         // append the row here when nonempty
  int grid_nx = 0;
  int grid_ny = 0;
  std::string grid_out;  // grid-sample file when nonempty
};

struct RunOutcome {
  SolveResult result;
  bool has_errors = false;
  ErrorTriple errors;
  double h_label = 0.0;  // 1/m for built squares, longest edge otherwise
  std::string csv_row;   // one line, no trailing newline
};

inline constexpr const char* kCsvHeader =
    "test,method,d,r,h,epsilon,n_it,l2,h1,h2,residual,converged,wall_ms";

// Solve one configuration; computes error norms when the test has an exact
// solution and formats the CSV row.  Throws maspline::Error on bad configs.
RunOutcome run(const RunConfig& cfg);

// One run per axis value ("d" | "h" | "epsilon"; h values are subdivision
// counts m), streaming header + rows to `os`; appends an observed-order
// comment line for the h axis when an exact solution exists.  Returns 0 when
// every run converged, 2 otherwise.
int sweep(const RunConfig& cfg, const std::string& axis,
          const std::vector<double>& values, std::ostream& os);

// Samples u on an nx x ny grid over the mesh bounding box (points outside
// the domain are skipped) and writes "x,y,u,ux,uy" CSV to path.
void export_grid(const SplineFunction& u, int nx, int ny,
                 const std::string& path);

// CLI single-run entry: solve, print the CSV (and append to cfg.out_csv /
// export the grid when requested); returns 0 on convergence, 2 otherwise.
int run_main(const RunConfig& cfg);

}  // namespace maspline
