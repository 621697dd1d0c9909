#include "maspline/quadrature.hpp"

#include <cmath>

#include "maspline/common.hpp"

namespace maspline {

namespace {

long double factorial(int n) {
  long double r = 1.0L;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// int over the reference triangle of l1^a l2^b l3^c
double monomial_integral(int a, int b, int c) {
  return static_cast<double>(factorial(a) * factorial(b) * factorial(c) /
                             factorial(a + b + c + 2));
}

void verify_rule(const TriQuadRule& rule) {
  for (int a = 0; a <= rule.degree; ++a)
    for (int b = 0; a + b <= rule.degree; ++b)
      for (int c = 0; a + b + c <= rule.degree; ++c) {
        double s = 0.0;
        for (int q = 0; q < rule.size(); ++q) {
          const auto& p = rule.points[q];
          s += rule.weights[q] * std::pow(p[0], a) * std::pow(p[1], b) *
               std::pow(p[2], c);
        }
        double ref = monomial_integral(a, b, c);
        if (std::abs(s - ref) > 1e-13 * (1.0 + std::abs(ref)))
          throw Error("triangle_rule: rule of degree " +
                      std::to_string(rule.degree) +
                      " failed the monomial exactness check");
      }
}

void push_orbit(TriQuadRule& rule, double a, double w) {
  double b = 1.0 - 2.0 * a;
  rule.points.push_back({b, a, a});
  rule.points.push_back({a, b, a});
  rule.points.push_back({a, a, b});
  rule.weights.insert(rule.weights.end(), 3, w);
}

TriQuadRule collapsed_rule(int degree) {
  // Duffy map (u,v) -> (x,y) = (u(1-v), v) sends the unit square to the
  // reference triangle with Jacobian (1-v).  A monomial x^a y^b of total
  // degree <= q becomes degree <= q in u and <= q+1 in v (Jacobian included),
  // so n Gauss points per direction with 2n-1 >= q+1 are exact.
  int n = (degree + 3) / 2;
  auto [xs, ws] = gauss_legendre_01(n);
  TriQuadRule rule;
  rule.degree = degree;
  rule.points.reserve(static_cast<size_t>(n) * n);
  rule.weights.reserve(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double u = xs[i], v = xs[j];
      double x = u * (1.0 - v), y = v;
      rule.points.push_back({1.0 - x - y, x, y});
      rule.weights.push_back(ws[i] * ws[j] * (1.0 - v));
    }
  return rule;
}

}  // namespace

TriQuadRule triangle_rule(int degree) {
  MASPLINE_REQUIRE(degree >= 0, "triangle_rule: degree must be >= 0");
  TriQuadRule rule;
  rule.degree = degree;
  if (degree <= 1) {
    rule.points.push_back({1. / 3, 1. / 3, 1. / 3});
    rule.weights.push_back(0.5);
  } else if (degree == 2) {
    push_orbit(rule, 1. / 6, 1. / 6);
  } else if (degree == 5) {
    // 7-point rule: centroid plus the two orbits at (6 +- sqrt(15))/21
    double s = std::sqrt(15.0);
    rule.points.push_back({1. / 3, 1. / 3, 1. / 3});
    rule.weights.push_back(0.5 * 9. / 40);
    push_orbit(rule, (6.0 + s) / 21.0, 0.5 * (155.0 + s) / 1200.0);
    push_orbit(rule, (6.0 - s) / 21.0, 0.5 * (155.0 - s) / 1200.0);
  } else {
    rule = collapsed_rule(degree);
  }
  verify_rule(rule);
  return rule;
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre_01(int n) {
  MASPLINE_REQUIRE(n >= 1, "gauss_legendre_01: n must be >= 1");
  std::vector<double> x(n), w(n);
  for (int k = 0; k < n; ++k) {
    // Newton iteration on P_n over [-1,1], Chebyshev-flavored start
    double t = std::cos(M_PI * (k + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      double pn = (n == 1) ? p1 : p1;
      double dpn = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = pn / dpn;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    // recompute derivative at the converged node for the weight
    double p0 = 1.0, p1 = t;
    for (int j = 2; j <= n; ++j) {
      double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    double dpn = n * (t * p1 - p0) / (t * t - 1.0);
    x[n - 1 - k] = 0.5 * (1.0 + t);               // map to [0,1], ascending
    w[n - 1 - k] = 1.0 / ((1.0 - t * t) * dpn * dpn);  // includes the 1/2 scale
  }
  return {x, w};
}

LineRule line_rule(int degree) {
  MASPLINE_REQUIRE(degree >= 0, "line_rule: degree must be >= 0");
  int n = degree / 2 + 1;  // 2n-1 >= degree
  auto [x, w] = gauss_legendre_01(n);
  return {std::move(x), std::move(w)};
}

}  // namespace maspline
