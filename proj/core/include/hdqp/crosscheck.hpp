#pragma once

#include <Eigen/Dense>

#include "hdqp/ineq_qp.hpp"

namespace hdqp::crosscheck {

/// Reference solvers that deliberately avoid the closed-form paths, used by
/// the acceptance suite and tests to validate the primary implementations.
/// Nothing here may call into qp_core / spectral / ineq_qp solvers.

/// Equality-constrained QP minimized by projected gradient descent: start
/// from the least-squares feasible point V (V'V)^{-1} U, project gradients
/// onto the null space of V', exact line search per step.
struct IterativeQp {
  Eigen::VectorXd weights;
  double risk = 0.0;
  int iterations = 0;
};

IterativeQp projected_gradient_qp(const Eigen::MatrixXd& sigma,
                                  const Eigen::MatrixXd& v,
                                  const Eigen::VectorXd& u,
                                  double tol = 1e-12, int max_iter = 200000);

/// Dense grid search for min U'AU over a finite box, step h per coordinate.
double grid_search_box(const Eigen::MatrixXd& a, const Eigen::VectorXd& lower,
                       const Eigen::VectorXd& upper, double h);

/// Root of sum_{j<=60} e^{-1}/j! / (1 + rho j x) = 1 - rho by plain
/// bisection on [lo, hi]; the series truncation and the bracket are fixed,
/// independent of the spectral solver.
double poisson_series_root(double rho);

/// Monte Carlo estimate of m_hat' S^{-1} m_hat for X = Lambda Y (identity
/// covariance), the direct quadratic-form route for kappa(n, p).
double direct_kappa_quadform_mc(const Eigen::MatrixXd& lambda, int p,
                                int replicates, std::uint64_t seed);

}  // namespace hdqp::crosscheck
