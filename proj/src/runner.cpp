#include "maspline/runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace maspline {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6e", v);
  return buf;
}

std::string csv_row(const RunConfig& cfg, double h, const RunOutcome& out) {
  std::ostringstream os;
  os << cfg.test << ',' << cfg.method << ',' << cfg.d << ',' << cfg.r << ','
     << fmt(h) << ',' << fmt(cfg.epsilon) << ',' << out.result.report.iterations
     << ',';
  if (out.has_errors)
    os << fmt(out.errors.l2) << ',' << fmt(out.errors.h1) << ','
       << fmt(out.errors.h2) << ',';
  else
    os << ",,,";
  os << fmt(out.result.report.residual) << ','
     << (out.result.report.converged ? 1 : 0) << ','
     << fmt(out.result.report.wall_ms);
  return os.str();
}

}  // namespace

RunOutcome run(const RunConfig& cfg) {
  MASPLINE_REQUIRE(cfg.method == "newton" || cfg.method == "bfo" ||
                       cfg.method == "vm",
                   "method must be newton, bfo or vm");
  if (cfg.method == "vm")
    MASPLINE_REQUIRE(cfg.epsilon != 0.0, "vm needs a nonzero --epsilon");
  else
    MASPLINE_REQUIRE(cfg.epsilon == 0.0,
                     "--epsilon only applies to the vm method");
  MASPLINE_REQUIRE(cfg.m >= 1, "m must be at least 1");

  TestCase tc = get_test_case(cfg.test, cfg.branch);

  std::shared_ptr<const TriMesh> mesh;
  double h_label;
  if (!cfg.mesh_path.empty()) {
    mesh = std::make_shared<TriMesh>(load_mesh(cfg.mesh_path));
    h_label = mesh->h;
  } else if (tc.square_domain) {
    mesh = std::make_shared<TriMesh>(build_square_mesh(cfg.m));
    h_label = 1.0 / cfg.m;
  } else {
    throw Error("test " + std::to_string(cfg.test) +
                " runs on a mesh file; pass --mesh");
  }

  SplineSpace space = make_space(mesh, cfg.d, cfg.r);
  ProblemSpec prob{tc.f, tc.g, cfg.branch, cfg.trace};

  RunOutcome out;
  if (cfg.method == "bfo") {
    BFOParams p;
    p.constant = cfg.bfo_constant;
    p.al.mu = cfg.mu;
    if (cfg.tol_residual >= 0.0) p.tol_increment = cfg.tol_residual;
    if (cfg.max_iters >= 0) p.max_iters = cfg.max_iters;
    out.result = bfo_solve(prob, space, p);
  } else {
    NewtonParams p;
    p.tau = cfg.tau;
    p.epsilon = cfg.epsilon;
    p.al.mu = cfg.mu;
    if (cfg.tol_residual >= 0.0) p.tol_residual_rel = cfg.tol_residual;
    if (cfg.max_iters >= 0) p.max_iters = cfg.max_iters;
    out.result = cfg.method == "vm" ? vm_solve(prob, space, p)
                                    : newton_solve(prob, space, p);
  }

  if (tc.has_exact) {
    out.has_errors = true;
    out.errors = error_norms(out.result.u, tc.exact);
  }
  out.h_label = h_label;
  out.csv_row = csv_row(cfg, h_label, out);
  return out;
}

int sweep(const RunConfig& base, const std::string& axis,
          const std::vector<double>& values, std::ostream& os) {
  MASPLINE_REQUIRE(axis == "d" || axis == "h" || axis == "epsilon",
                   "sweep axis must be d, h or epsilon");
  os << kCsvHeader << '\n';
  bool all_converged = true;
  std::vector<std::pair<double, double>> l2s, h1s, h2s;
  for (double v : values) {
    RunConfig cfg = base;
    if (axis == "d")
      cfg.d = static_cast<int>(v);
    else if (axis == "h")
      cfg.m = static_cast<int>(v);
    else
      cfg.epsilon = v;
    RunOutcome out = run(cfg);
    os << out.csv_row << '\n';
    all_converged = all_converged && out.result.report.converged;
    if (out.has_errors) {
      l2s.emplace_back(out.h_label, out.errors.l2);
      h1s.emplace_back(out.h_label, out.errors.h1);
      h2s.emplace_back(out.h_label, out.errors.h2);
    }
  }
  if (axis == "h" && l2s.size() >= 2) {
    os << "# observed order: l2 " << observed_order(l2s) << ", h1 "
       << observed_order(h1s) << ", h2 " << observed_order(h2s) << '\n';
  }
  return all_converged ? 0 : 2;
}

void export_grid(const SplineFunction& u, int nx, int ny,
                 const std::string& path) {
  MASPLINE_REQUIRE(nx >= 1 && ny >= 1, "grid must be at least 1x1");
  const TriMesh& mesh = *u.space.mesh;
  double xmin = mesh.vertices[0].x, xmax = xmin;
  double ymin = mesh.vertices[0].y, ymax = ymin;
  for (const Vec2& v : mesh.vertices) {
    xmin = std::min(xmin, v.x);
    xmax = std::max(xmax, v.x);
    ymin = std::min(ymin, v.y);
    ymax = std::max(ymax, v.y);
  }
  std::ofstream f(path);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << "x,y,u,ux,uy\n";
  for (int j = 0; j < ny; ++j) {
    const double y =
        ny > 1 ? ymin + (ymax - ymin) * j / (ny - 1) : 0.5 * (ymin + ymax);
    for (int i = 0; i < nx; ++i) {
      const double x =
          nx > 1 ? xmin + (xmax - xmin) * i / (nx - 1) : 0.5 * (xmin + xmax);
      const int t = locate_triangle(mesh, {x, y});
      if (t < 0) continue;  // outside the domain
      EvalResult r = eval_at(u, t, barycentric(mesh.tri_vertices(t), {x, y}));
      // full double precision so the samples round-trip for downstream checks
      char row[160];
      std::snprintf(row, sizeof(row), "%.12e,%.12e,%.12e,%.12e,%.12e\n", x, y,
                    r.value, r.grad.x, r.grad.y);
      f << row;
    }
  }
  if (!f.good()) throw Error("write to " + path + " failed");
}

int run_main(const RunConfig& cfg) {
  RunOutcome out = run(cfg);
  std::cout << kCsvHeader << '\n' << out.csv_row << '\n';
  if (!out.result.report.note.empty())
    std::cerr << "note: " << out.result.report.note << '\n';

  if (!cfg.out_csv.empty()) {
    const bool fresh = [&] {
      std::ifstream probe(cfg.out_csv);
      return !probe.good() || probe.peek() == std::ifstream::traits_type::eof();
    }();
    std::ofstream f(cfg.out_csv, std::ios::app);
    if (!f) throw Error("cannot open " + cfg.out_csv + " for writing");
    if (fresh) f << kCsvHeader << '\n';
    f << out.csv_row << '\n';
    if (!f.good()) throw Error("write to " + cfg.out_csv + " failed");
  }
  if (!cfg.grid_out.empty()) {
    MASPLINE_REQUIRE(cfg.grid_nx >= 1 && cfg.grid_ny >= 1,
                     "--grid-out needs --grid NX,NY");
    export_grid(out.result.u, cfg.grid_nx, cfg.grid_ny, cfg.grid_out);
  }
  return out.result.report.converged ? 0 : 2;
}

}  // namespace maspline
