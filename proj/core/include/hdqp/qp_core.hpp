#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hdqp/errors.hpp"

namespace hdqp::qp {

/// An equality-constrained quadratic program
///
///     minimize  w' Sigma w   subject to  V' w = U,
///
/// with Sigma a p x p positive definite covariance, V the p x k matrix of
/// constraint vectors and U the k targets. By the Markowitz convention the
/// last column of V is the mean vector when the mean constraint is active.
///
/// Construction validates the invariants once (symmetry, positive
/// definiteness, invertibility of the Gram matrix M = V' Sigma^{-1} V) and
/// keeps a Cholesky factor of Sigma, so repeated solves never form
/// Sigma^{-1} explicitly. k = p is allowed (the constraints then pin the
/// solution completely); k > p always fails the M invertibility check.
class ProblemSpec {
 public:
  ProblemSpec(Eigen::MatrixXd sigma, Eigen::MatrixXd v_cols, Eigen::VectorXd u);

  int p() const { return static_cast<int>(sigma_.rows()); }
  int k() const { return static_cast<int>(v_.cols()); }

  const Eigen::MatrixXd& sigma() const { return sigma_; }
  const Eigen::MatrixXd& v_cols() const { return v_; }
  const Eigen::VectorXd& u() const { return u_; }
  /// Last constraint column (the mean vector under the Markowitz convention).
  Eigen::VectorXd mu() const { return v_.col(v_.cols() - 1); }

  /// Gram matrix M = V' Sigma^{-1} V and its inverse.
  const Eigen::MatrixXd& gram() const { return m_; }
  const Eigen::MatrixXd& gram_inverse() const { return m_inv_; }

  /// Sigma^{-1} V, cached at construction.
  const Eigen::MatrixXd& sigma_inv_v() const { return w_; }

  /// Solves Sigma x = rhs against the cached factorization.
  Eigen::MatrixXd solve_sigma(const Eigen::MatrixXd& rhs) const;

 private:
  Eigen::MatrixXd sigma_;
  Eigen::MatrixXd v_;
  Eigen::VectorXd u_;
  Eigen::LLT<Eigen::MatrixXd> sigma_llt_;
  Eigen::MatrixXd w_;      // Sigma^{-1} V
  Eigen::MatrixXd m_;      // V' Sigma^{-1} V
  Eigen::MatrixXd m_inv_;
};

struct OptimalSolution {
  Eigen::VectorXd weights;    ///< Sigma^{-1} V M^{-1} U
  double risk = 0.0;          ///< U' M^{-1} U  ( = weights' Sigma weights )
  Eigen::MatrixXd m_inverse;  ///< M^{-1}, kept for downstream predictions
};

/// Closed-form solution of the equality-constrained program.
OptimalSolution solve_eqc(const ProblemSpec& spec);

/// gamma' w_opt through the bordered (k+1) x (k+1) matrix of Sigma^{-1}
/// inner products, without solving for the weights. Throws
/// SingularMatrixError when gamma lies in the span of V's columns under the
/// Sigma^{-1} inner product (the bordered matrix is then singular).
double linear_functional(const ProblemSpec& spec, const Eigen::VectorXd& gamma);

struct PartitionedInverse {
  Eigen::MatrixXd b11, b12, b21, b22;
  /// Reassembles the four blocks into one matrix.
  Eigen::MatrixXd assemble() const;
};

/// Blockwise inverse of [[a11, a12], [a21, a22]]:
///   b11 = (a11 - a12 a22^{-1} a21)^{-1}
///   b22 = (a22 - a21 a11^{-1} a12)^{-1}
///   b12 = -a11^{-1} a12 b22
///   b21 = -b22 a21 a11^{-1}
/// Throws SingularMatrixError naming the block or Schur complement that
/// failed to factor.
PartitionedInverse partitioned_inverse(const Eigen::MatrixXd& a11,
                                       const Eigen::MatrixXd& a12,
                                       const Eigen::MatrixXd& a21,
                                       const Eigen::MatrixXd& a22);

struct FrontierPoint {
  double mu_p = 0.0;
  double risk = 0.0;
};
using FrontierCurve = std::vector<FrontierPoint>;

/// Minimal risk as a function of the target mean return mu_p, holding the
/// other constraint targets fixed. V = [extra_v, mu], U = [extra_u; mu_p].
/// extra_v may have zero columns (mean constraint only).
FrontierCurve efficient_frontier(const Eigen::MatrixXd& sigma,
                                 const Eigen::VectorXd& mu,
                                 const Eigen::MatrixXd& extra_v,
                                 const Eigen::VectorXd& extra_u,
                                 const Eigen::VectorXd& mu_p_grid);

}  // namespace hdqp::qp
