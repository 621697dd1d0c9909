#pragma once

#include <memory>
#include <string>

#include "maspline/analysis.hpp"
#include "maspline/solvers.hpp"

namespace maspline {

// The four benchmark problems of the experiments:
//   1: u = e^{(x^2+y^2)/2} on the unit square (smooth, convex)
//   2: u = -sqrt(2 - x^2 - y^2) on the unit square (f singular at (1,1))
//   3: f = 1, g = 0 on the unit square (no closed-form solution)
//   4: the Test 1 function on the unit circle (mesh read from file);
//      exact and boundary data carry the branch sign.
struct TestCase {
  int id = 0;
  std::string name;
  ScalarFn f;
  ScalarFn g;
  bool has_exact = false;
  ExactSolution exact;
  bool square_domain = true;  // false: circle, mesh loaded from file
};

TestCase get_test_case(int id, Branch branch);

}  // namespace maspline
