#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <memory>
#include <vector>

#include "maspline/bernstein.hpp"
#include "maspline/mesh.hpp"

namespace maspline {

using ScalarFn = std::function<double(double, double)>;

// Piecewise polynomial space of degree d on a triangulation, stored as one
// independent Bezier net per triangle (no shared degrees of freedom).
// Smoothness of order r and boundary values are not built into the basis;
// they are expressed as linear constraint rows (below) and enforced by the
// constrained solvers.
struct SplineSpace {
  std::shared_ptr<const TriMesh> mesh;
  int d = 0;
  int r = 0;
  int nb = 0;   // coefficients per triangle
  long N = 0;   // total coefficients
  int offset(int t) const { return t * nb; }
};

SplineSpace make_space(std::shared_ptr<const TriMesh> mesh, int d, int r);

struct SplineFunction {
  SplineSpace space;
  Eigen::VectorXd c;
};

enum class RowKind { smoothness, dirichlet };

// Rows of the linear system R c = g gathering smoothness and boundary
// conditions.  Rows may be redundant (corner coefficients are pinned once per
// adjacent boundary edge); the saddle-point solver tolerates that.
struct ConstraintSystem {
  long cols = 0;
  std::vector<Eigen::Triplet<double>> entries;
  std::vector<double> rhs;
  std::vector<RowKind> kinds;

  int rows() const { return static_cast<int>(rhs.size()); }
  Eigen::SparseMatrix<double> matrix() const;
  Eigen::VectorXd g() const;
};

// C^r continuity across every interior edge: for s = 0..r and each
// cross-edge coefficient of one triangle, a row equating it to the degree-s
// de Casteljau combination of the neighbor's coefficients, weighted by the
// barycentric coordinates of the far vertex with respect to the neighbor.
// All right-hand sides are zero.
ConstraintSystem smoothness_constraints(const SplineSpace& space);

// How boundary values of g become per-edge Bezier trace coefficients.
//
// compatible (default): the trace is fit per maximal run of collinear
// boundary edges — a least-squares fit of g sampled at d+1 equally spaced
// points per edge, subject to matching g exactly at the run's endpoints and
// to C^r parameter continuity at the vertices interior to the run.  The
// continuity conditions make the values compatible with the smoothness
// rows, which chain tangential derivatives across those vertices, so the
// full constraint system Rc = G stays solvable and the multiplier iteration
// drives ||Rc - G|| to solver tolerance.
//
// per_edge: every boundary edge is fit independently (plain univariate
// interpolation of g at its d+1 points).  For non-polynomial g on meshes
// with collinear boundary junctions this makes Rc = G unsatisfiable by an
// O(h^{d-1}) margin; solves then settle at the least-squares compromise,
// report converged = false, and carry a matching constraint_residual.
// Useful for reproducing published results computed in that regime.
//
// On a single-edge run the two modes coincide with plain interpolation.
enum class TraceMode { compatible, per_edge };

// Pins the Bezier coefficients along every boundary edge to a univariate
// degree-d trace of g, built according to the trace mode.  Corner
// coefficients are constrained by both adjacent edges; the duplicate rows
// are consistent and kept.
ConstraintSystem dirichlet_constraints(const SplineSpace& space,
                                       const ScalarFn& g,
                                       TraceMode mode = TraceMode::compatible);

ConstraintSystem concat(ConstraintSystem a, const ConstraintSystem& b);

// Per-triangle interpolation at the Bezier domain points (i v1 + j v2 + k v3)/d.
SplineFunction interpolate(const SplineSpace& space, const ScalarFn& f);

// First triangle (lowest index) containing p, with barycentric tolerance
// -1e-12; returns -1 if p lies outside the mesh.
int locate_triangle(const TriMesh& mesh, Vec2 p);

// Value/gradient/Hessian of u at a barycentric point of triangle t.
EvalResult eval_at(const SplineFunction& u, int t,
                   const std::array<double, 3>& bary);

// Evaluation at a physical point; throws when p is outside the mesh.
EvalResult eval(const SplineFunction& u, Vec2 p);

}  // namespace maspline
