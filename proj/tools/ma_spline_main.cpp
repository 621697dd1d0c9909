#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "maspline/runner.hpp"

namespace {

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    size_t pos = 0;
    double v = std::stod(item, &pos);
    if (pos != item.size())
      throw maspline::Error("bad numeric value '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  maspline::RunConfig cfg;
  std::string branch = "convex";
  std::string trace = "compatible";
  std::string grid;
  std::string sweep_axis;
  std::string sweep_values;

  CLI::App app{
      "Spline-element solver for the 2D Dirichlet Monge-Ampere equation "
      "det D^2 u = f"};
  app.add_option("--test", cfg.test, "test problem (1..4)")
      ->check(CLI::Range(1, 4));
  app.add_option("--method", cfg.method, "newton | bfo | vm")
      ->check(CLI::IsMember({"newton", "bfo", "vm"}));
  app.add_option("--degree", cfg.d, "polynomial degree d");
  app.add_option("--smoothness", cfg.r, "continuity order r (default 1)");
  app.add_option("--m", cfg.m, "square subdivisions per side (h = 1/m)");
  app.add_option("--mesh", cfg.mesh_path,
                 "mesh file (<base>, <base>.node or <base>.ele); required for "
                 "test 4");
  app.add_option("--epsilon", cfg.epsilon,
                 "vanishing-moment regularization (vm method only)");
  app.add_option("--mu", cfg.mu, "augmented-Lagrangian penalty (default 1e-5)");
  app.add_option("--tau", cfg.tau, "Newton damping, >= 1 (default 1)");
  app.add_option("--bfo-constant", cfg.bfo_constant,
                 "constant in the fixed-point update (2 or 4, default 2)");
  app.add_option("--branch", branch, "convex | concave")
      ->check(CLI::IsMember({"convex", "concave"}));
  app.add_option("--trace-mode", trace,
                 "boundary trace fit: compatible (collinear-run fit, "
                 "constraints close) | per-edge (independent edge "
                 "interpolation, least-squares compromise)")
      ->check(CLI::IsMember({"compatible", "per-edge"}));
  app.add_option("--tol-residual", cfg.tol_residual,
                 "convergence tolerance (newton/vm: relative residual; bfo: "
                 "H1 increment)");
  app.add_option("--max-iters", cfg.max_iters, "iteration cap");
  app.add_option("--out", cfg.out_csv, "append the result row to this CSV");
  app.add_option("--grid", grid, "grid sample counts NX,NY");
  app.add_option("--grid-out", cfg.grid_out, "grid-sample output file");
  app.add_option("--sweep", sweep_axis, "sweep axis: d | h | epsilon")
      ->check(CLI::IsMember({"d", "h", "epsilon"}));
  app.add_option("--sweep-values", sweep_values,
                 "comma-separated values for --sweep (subdivision counts m "
                 "for the h axis)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    cfg.branch = branch == "concave" ? maspline::Branch::concave
                                     : maspline::Branch::convex;
    cfg.trace = trace == "per-edge" ? maspline::TraceMode::per_edge
                                    : maspline::TraceMode::compatible;
    if (!grid.empty()) {
      auto v = parse_values(grid);
      if (v.size() != 2) throw maspline::Error("--grid expects NX,NY");
      cfg.grid_nx = static_cast<int>(v[0]);
      cfg.grid_ny = static_cast<int>(v[1]);
    }
    if (!sweep_axis.empty()) {
      auto values = parse_values(sweep_values);
      return maspline::sweep(cfg, sweep_axis, values, std::cout);
    }
    return maspline::run_main(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
