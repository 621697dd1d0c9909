#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace maspline {

// All user-facing failures (bad input files, invalid configurations,
// solver breakdowns) are reported as maspline::Error.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define MASPLINE_REQUIRE(cond, msg) \
  do {                              \
    if (!(cond)) throw ::maspline::Error(msg); \
  } while (0)

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }
// z-component of the cross product, i.e. twice the signed area of (0,a,b).
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

// Symmetric 2x2 matrix, the natural container for Hessians.
struct Sym2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a22 = 0.0;
};

inline Sym2 operator+(Sym2 a, Sym2 b) {
  return {a.a11 + b.a11, a.a12 + b.a12, a.a22 + b.a22};
}
inline Sym2 operator-(Sym2 a, Sym2 b) {
  return {a.a11 - b.a11, a.a12 - b.a12, a.a22 - b.a22};
}
inline Sym2 operator*(double s, Sym2 a) {
  return {s * a.a11, s * a.a12, s * a.a22};
}
inline Vec2 apply(Sym2 a, Vec2 v) {
  return {a.a11 * v.x + a.a12 * v.y, a.a12 * v.x + a.a22 * v.y};
}
inline double trace(Sym2 a) { return a.a11 + a.a22; }

}  // namespace maspline
