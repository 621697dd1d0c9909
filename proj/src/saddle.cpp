#include "maspline/saddle.hpp"

#include <cmath>

namespace maspline {

ConstrainedSolver::ConstrainedSolver(const BlockDiagonalMatrix& K,
                                     const ConstraintSystem& R, int sign,
                                     ALParams params)
    : N_(K.rows()), m_(R.rows()), sign_(sign), params_(std::move(params)) {
  MASPLINE_REQUIRE(sign_ == 1 || sign_ == -1, "sign must be +1 or -1");
  MASPLINE_REQUIRE(m_ == 0 || R.cols == N_,
                   "constraint columns do not match the matrix size");
  MASPLINE_REQUIRE(params_.mu > 0.0, "mu must be positive");

  R_.resize(m_, N_);
  R_.setFromTriplets(R.entries.begin(), R.entries.end());

  metric_diag_ = Eigen::VectorXd::Ones(m_);
  if (params_.metric == MultiplierMetric::row_gram_diag && m_ > 0) {
    metric_diag_.setZero();
    for (const auto& e : R.entries)
      metric_diag_(e.row()) += e.value() * e.value();
    for (int i = 0; i < m_; ++i)
      MASPLINE_REQUIRE(metric_diag_(i) > 0.0,
                       "constraint row " + std::to_string(i) + " is zero");
  }

  std::vector<Eigen::Triplet<double>> trips = K.triplets();
  trips.reserve(trips.size() + 2 * R.entries.size() + m_);
  for (const auto& e : R.entries) {
    trips.emplace_back(N_ + e.row(), e.col(), e.value());
    trips.emplace_back(e.col(), N_ + e.row(), e.value());
  }
  const double s = -sign_ * params_.mu;
  for (int i = 0; i < m_; ++i)
    trips.emplace_back(N_ + i, N_ + i, s * metric_diag_(i));

  Eigen::SparseMatrix<double> S(N_ + m_, N_ + m_);
  S.setFromTriplets(trips.begin(), trips.end());
  S.makeCompressed();
  lu_.compute(S);
  if (lu_.info() != Eigen::Success)
    throw Error(
        "saddle factorization failed: block system is singular (constraints "
        "inconsistent with the quadratic form, or form not definite on the "
        "constraint kernel)");
}

Eigen::VectorXd ConstrainedSolver::solve(const Eigen::VectorXd& L,
                                         const Eigen::VectorXd& G,
                                         Eigen::VectorXd* lambda_io,
                                         ALStats* stats) const {
  MASPLINE_REQUIRE(L.size() == N_, "right-hand side has wrong size");
  MASPLINE_REQUIRE(G.size() == m_, "constraint values have wrong size");

  Eigen::VectorXd lambda;
  if (lambda_io && lambda_io->size() == m_)
    lambda = *lambda_io;
  else
    lambda = Eigen::VectorXd::Zero(m_);

  const double g_scale = 1.0 + G.norm();
  const double tol = params_.tol_constraint * g_scale;
  const double stall = params_.tol_stall * g_scale;

  Eigen::VectorXd rhs(N_ + m_), c, best_c, best_lambda;
  double best_res = -1.0, prev_res = -1.0;
  if (stats) {
    stats->outer = 0;
    stats->converged = false;
    stats->constraint_residuals.clear();
  }

  for (int l = 0; l < params_.max_outer; ++l) {
    rhs.head(N_) = L;
    rhs.tail(m_) =
        G - (sign_ * params_.mu) * metric_diag_.cwiseProduct(lambda);
    Eigen::VectorXd sol = lu_.solve(rhs);
    if (lu_.info() != Eigen::Success)
      throw Error("saddle solve failed at outer iteration " +
                  std::to_string(l));
    c = sol.head(N_);
    lambda = sol.tail(m_);

    const double res = m_ > 0 ? (R_ * c - G).norm() : 0.0;
    if (stats) {
      stats->outer = l + 1;
      stats->constraint_residuals.push_back(res);
    }
    if (best_res < 0.0 || res < best_res) {
      best_res = res;
      best_c = c;
      best_lambda = lambda;
    }
    if (res <= tol) {
      if (stats) stats->converged = true;
      if (lambda_io) *lambda_io = lambda;
      return c;
    }
    if (prev_res >= 0.0 && std::abs(prev_res - res) < stall) break;
    prev_res = res;
  }

  if (lambda_io) *lambda_io = best_lambda;
  return best_c;
}

}  // namespace maspline
