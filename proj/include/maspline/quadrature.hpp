#pragma once

#include <array>
#include <utility>
#include <vector>

namespace maspline {

// Quadrature rule on the reference triangle, points in barycentric
// coordinates, weights summing to 1/2 (the reference area).  Integrals over a
// physical triangle T are 2*area(T) * sum_q w_q * f(x_q).
struct TriQuadRule {
  int degree = 0;  // every polynomial of this total degree integrates exactly
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int size() const { return static_cast<int>(weights.size()); }
};

// Symmetric rules are tabulated for degree <= 5 (closed-form node values);
// beyond that the rule falls back to a tensor Gauss-Legendre grid collapsed
// onto the triangle (Duffy transform), which stays exact to the requested
// degree.  Every constructed rule is verified against the monomial formula
//   int_T l1^a l2^b l3^c = a! b! c! / (a+b+c+2)!  (reference triangle)
// before being returned.
TriQuadRule triangle_rule(int degree);

// Gauss-Legendre points and weights on [0,1]; exact to degree 2n-1.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre_01(int n);

// 1D rule on [0,1] exact to the given polynomial degree.
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
  int size() const { return static_cast<int>(weights.size()); }
};
LineRule line_rule(int degree);

}  // namespace maspline
