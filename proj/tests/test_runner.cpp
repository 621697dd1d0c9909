#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "doctest.h"
#include "maspline/runner.hpp"

using namespace maspline;

namespace {

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.push_back("");
  return out;
}

struct CliResult {
  int code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  std::string cmd = std::string(MASPLINE_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult r;
  std::array<char, 512> buf;
  while (fgets(buf.data(), buf.size(), pipe) != nullptr) r.output += buf.data();
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("run produces a well-formed CSV row") {
  RunConfig cfg;
  cfg.test = 1;
  cfg.method = "newton";
  cfg.d = 3;
  cfg.m = 2;
  RunOutcome out = run(cfg);

  CHECK(out.result.report.converged);
  CHECK(out.has_errors);
  CHECK(out.h_label == doctest::Approx(0.5));

  auto fields = split(out.csv_row);
  REQUIRE(fields.size() == 13);
  CHECK(fields[0] == "1");
  CHECK(fields[1] == "newton");
  CHECK(fields[2] == "3");
  CHECK(fields[3] == "1");
  CHECK(fields[4] == "5.000000e-01");
  CHECK(fields[11] == "1");  // converged
  CHECK(std::stod(fields[7]) > 0.0);
  CHECK(std::stod(fields[7]) < 1e-2);  // l2 error at d=3, h=1/2
}

TEST_CASE("runs without an exact solution leave the error fields empty") {
  RunConfig cfg;
  cfg.test = 3;
  cfg.method = "bfo";
  cfg.d = 3;
  cfg.m = 2;
  RunOutcome out = run(cfg);
  CHECK_FALSE(out.has_errors);
  auto fields = split(out.csv_row);
  REQUIRE(fields.size() == 13);
  CHECK(fields[7] == "");
  CHECK(fields[8] == "");
  CHECK(fields[9] == "");
  CHECK(std::stod(fields[10]) > 0.0);  // equation residual is still recorded
}

TEST_CASE("run validates its configuration") {
  RunConfig cfg;
  cfg.method = "simplex";
  CHECK_THROWS_AS(run(cfg), Error);

  cfg = RunConfig{};
  cfg.method = "vm";  // vm needs epsilon > 0
  CHECK_THROWS_AS(run(cfg), Error);

  cfg = RunConfig{};
  cfg.epsilon = 1e-3;  // newton must not carry epsilon
  CHECK_THROWS_AS(run(cfg), Error);

  cfg = RunConfig{};
  cfg.test = 4;  // circle domain requires a mesh file
  CHECK_THROWS_AS(run(cfg), Error);

  cfg = RunConfig{};
  cfg.m = 0;
  CHECK_THROWS_AS(run(cfg), Error);
}

TEST_CASE("circle benchmark runs from the mesh file") {
  RunConfig cfg;
  cfg.test = 4;
  cfg.method = "newton";
  cfg.d = 3;
  cfg.mesh_path = std::string(MASPLINE_DATA_DIR) + "/circle216";
  RunOutcome out = run(cfg);
  CHECK(out.result.report.converged);
  CHECK(out.has_errors);
  CHECK(out.h_label == doctest::Approx(0.2421).epsilon(1e-2));
  CHECK(out.errors.l2 < 5e-3);
  auto fields = split(out.csv_row);
  CHECK(fields[0] == "4");
}

TEST_CASE("grid export clips to the domain and matches point evaluation") {
  RunConfig cfg;
  cfg.test = 4;
  cfg.method = "newton";
  cfg.d = 3;
  cfg.mesh_path = std::string(MASPLINE_DATA_DIR) + "/circle216";
  RunOutcome out = run(cfg);

  export_grid(out.result.u, 11, 11, "grid_circle.csv");
  std::ifstream f("grid_circle.csv");
  REQUIRE(f.good());
  std::string header;
  std::getline(f, header);
  CHECK(header == "x,y,u,ux,uy");
  int rows = 0;
  std::string line;
  while (std::getline(f, line)) {
    auto v = split(line);
    REQUIRE(v.size() == 5);
    double x = std::stod(v[0]), y = std::stod(v[1]);
    CHECK(x * x + y * y <= 1.0 + 1e-9);  // outside points were skipped
    EvalResult r = eval(out.result.u, {x, y});
    CHECK(std::stod(v[2]) == doctest::Approx(r.value).epsilon(1e-10));
    ++rows;
  }
  CHECK(rows > 60);       // the inscribed disk keeps most of the 121 points
  CHECK(rows < 11 * 11);  // the bounding-box corners fall outside
}

TEST_CASE("concave fixed-point iterate is a nonnegative symmetric bowl") {
  // the fixed-point iteration does not settle on this corner-singular
  // problem, so cap the run and test the shape of the returned iterate
  RunConfig cfg;
  cfg.test = 3;
  cfg.method = "bfo";
  cfg.d = 3;
  cfg.m = 2;
  cfg.max_iters = 15;
  cfg.branch = Branch::concave;
  RunOutcome out = run(cfg);
  CHECK(out.result.report.iterations == 15);
  double umax = 0.0;
  for (double x = 0.1; x < 1.0; x += 0.15)
    for (double y = 0.1; y < 1.0; y += 0.15)
      umax = std::max(umax, std::abs(eval(out.result.u, {x, y}).value));
  REQUIRE(umax > 0.0);
  for (double x = 0.1; x < 1.0; x += 0.15)
    for (double y = 0.1; y < 1.0; y += 0.15) {
      double uxy = eval(out.result.u, {x, y}).value;
      double uyx = eval(out.result.u, {y, x}).value;
      CHECK(uxy >= -1e-10);
      // the mesh and the problem are symmetric under coordinate exchange;
      // roundoff asymmetry grows with the non-contractive iteration, so the
      // antisymmetric part is bounded relative to the iterate's size
      CHECK(std::abs(uxy - uyx) <= 1e-2 * umax);
    }
}

TEST_CASE("sweep streams rows and an order line for the h axis") {
  RunConfig cfg;
  cfg.test = 1;
  cfg.method = "newton";
  cfg.d = 3;

  std::ostringstream os;
  int code = sweep(cfg, "h", {1, 2}, os);
  CHECK(code == 0);
  auto ls = lines_of(os.str());
  REQUIRE(ls.size() == 4);
  CHECK(ls[0] == kCsvHeader);
  CHECK(split(ls[1])[4] == "1.000000e+00");
  CHECK(split(ls[2])[4] == "5.000000e-01");
  CHECK(ls[3].rfind("# observed order:", 0) == 0);

  std::ostringstream os2;
  code = sweep(cfg, "d", {3, 4}, os2);
  CHECK(code == 0);
  auto ls2 = lines_of(os2.str());
  REQUIRE(ls2.size() == 3);  // no order line on the degree axis
  CHECK(split(ls2[1])[2] == "3");
  CHECK(split(ls2[2])[2] == "4");

  std::ostringstream os3;
  CHECK(sweep(cfg, "h", {}, os3) == 0);  // empty sweep: header only
  CHECK(lines_of(os3.str()).size() == 1);
  CHECK_THROWS_AS(sweep(cfg, "tau", {1.0}, os3), Error);
}

TEST_CASE("command line: converged run exits 0 and prints the CSV") {
  CliResult r = run_cli("--test 1 --method newton --degree 3 --m 1");
  CHECK(r.code == 0);
  auto ls = lines_of(r.output);
  REQUIRE(ls.size() >= 2);
  CHECK(ls[0] == kCsvHeader);
  CHECK(split(ls[1])[0] == "1");
  CHECK(split(ls[1])[11] == "1");
}

TEST_CASE("command line: iteration-starved run exits 2") {
  CliResult r = run_cli(
      "--test 1 --method newton --degree 3 --m 2 --max-iters 1 "
      "--tol-residual 1e-15");
  CHECK(r.code == 2);
  auto ls = lines_of(r.output);
  bool row_present = false;
  for (const auto& l : ls)
    if (split(l).size() == 13 && split(l)[11] == "0") row_present = true;
  CHECK(row_present);  // the row is still reported with converged = 0
}

TEST_CASE("command line: per-edge trace mode is honest about non-closure") {
  // independent edge interpolation of a curved boundary makes the
  // constraints unsatisfiable; the run finishes but may not claim success
  CliResult r = run_cli(
      "--test 1 --method newton --degree 3 --m 2 --trace-mode per-edge");
  CHECK(r.code == 2);
  auto ls = lines_of(r.output);
  REQUIRE(ls.size() >= 2);
  CHECK(split(ls[1])[11] == "0");

  CliResult ok = run_cli(
      "--test 1 --method newton --degree 3 --m 2 --trace-mode compatible");
  CHECK(ok.code == 0);
  CHECK(run_cli("--test 1 --method newton --trace-mode nope").code == 1);
}

TEST_CASE("command line: usage and input errors exit 1") {
  CHECK(run_cli("--method simplex").code == 1);
  CHECK(run_cli("--test 7").code == 1);
  CHECK(run_cli("--no-such-flag").code == 1);
  CHECK(run_cli("--test 4 --method newton").code == 1);  // missing --mesh
  CHECK(run_cli("--test 4 --mesh /no/such/mesh").code == 1);
  CHECK(run_cli("--help").code == 0);
}

TEST_CASE("command line: result rows accumulate into --out") {
  std::remove("accum.csv");
  CHECK(run_cli("--test 1 --method newton --degree 3 --m 1 --out accum.csv")
            .code == 0);
  CHECK(run_cli("--test 1 --method bfo --degree 3 --m 1 --out accum.csv")
            .code == 0);
  std::ifstream f("accum.csv");
  REQUIRE(f.good());
  std::string line;
  std::vector<std::string> ls;
  while (std::getline(f, line)) ls.push_back(line);
  REQUIRE(ls.size() == 3);
  CHECK(ls[0] == kCsvHeader);
  CHECK(split(ls[1])[1] == "newton");
  CHECK(split(ls[2])[1] == "bfo");
}

TEST_CASE("command line: sweep prints one row per value") {
  CliResult r = run_cli(
      "--test 1 --method newton --degree 3 --sweep h --sweep-values 1,2");
  CHECK(r.code == 0);
  auto ls = lines_of(r.output);
  REQUIRE(ls.size() == 4);
  CHECK(ls[0] == kCsvHeader);
  CHECK(ls[3].rfind("# observed order:", 0) == 0);
}

TEST_CASE("command line: grid export writes the sample file") {
  std::remove("cli_grid.csv");
  CliResult r = run_cli(
      "--test 1 --method newton --degree 3 --m 1 --grid 5,5 "
      "--grid-out cli_grid.csv");
  CHECK(r.code == 0);
  std::ifstream f("cli_grid.csv");
  REQUIRE(f.good());
  std::string header;
  std::getline(f, header);
  CHECK(header == "x,y,u,ux,uy");
  int rows = 0;
  std::string line;
  while (std::getline(f, line)) ++rows;
  CHECK(rows == 25);  // the square keeps every bounding-box point
}
