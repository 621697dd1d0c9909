#include "maspline/testcases.hpp"

#include <cmath>

namespace maspline {

namespace {

// u = s * e^{(x^2+y^2)/2}: the exact solution of Tests 1 and 4 (s = +-1 by
// branch on the circle, +1 on the square)
ExactSolution exp_bowl(double s) {
  auto val = [s](double x, double y) {
    return s * std::exp(0.5 * (x * x + y * y));
  };
  return ExactSolution{
      val,
      [val](double x, double y) {
        const double u = val(x, y);
        return Vec2{x * u, y * u};
      },
      [val](double x, double y) {
        const double u = val(x, y);
        return Sym2{(1.0 + x * x) * u, x * y * u, (1.0 + y * y) * u};
      }};
}

const ScalarFn exp_bowl_f = [](double x, double y) {
  const double r2 = x * x + y * y;
  return (1.0 + r2) * std::exp(r2);
};

}  // namespace

TestCase get_test_case(int id, Branch branch) {
  TestCase tc;
  tc.id = id;
  switch (id) {
    case 1: {
      tc.name = "smooth exponential on the unit square";
      tc.f = exp_bowl_f;
      tc.has_exact = true;
      tc.exact = exp_bowl(1.0);
      tc.g = tc.exact.value;
      break;
    }
    case 2: {
      tc.name = "solution with unbounded Hessian at the corner (1,1)";
      // u = -sqrt(2 - x^2 - y^2), f = 2 / (2 - x^2 - y^2)^2
      auto val = [](double x, double y) {
        return -std::sqrt(2.0 - x * x - y * y);
      };
      tc.f = [](double x, double y) {
        const double w = 2.0 - x * x - y * y;
        return 2.0 / (w * w);
      };
      tc.g = val;
      tc.has_exact = true;
      tc.exact = ExactSolution{
          val,
          [](double x, double y) {
            const double w = std::sqrt(2.0 - x * x - y * y);
            return Vec2{x / w, y / w};
          },
          [](double x, double y) {
            const double w = 2.0 - x * x - y * y;
            const double c = std::pow(w, -1.5);
            return Sym2{(2.0 - y * y) * c, x * y * c, (2.0 - x * x) * c};
          }};
      break;
    }
    case 3: {
      tc.name = "constant source, zero boundary data";
      tc.f = [](double, double) { return 1.0; };
      tc.g = [](double, double) { return 0.0; };
      tc.has_exact = false;
      break;
    }
    case 4: {
      tc.name = "exponential on the unit circle";
      const double s = branch == Branch::convex ? 1.0 : -1.0;
      tc.f = exp_bowl_f;
      tc.has_exact = true;
      tc.exact = exp_bowl(s);
      tc.g = tc.exact.value;
      tc.square_domain = false;
      break;
    }
    default:
      throw Error("unknown test case " + std::to_string(id) +
                  " (expected 1..4)");
  }
  return tc;
}

}  // namespace maspline
