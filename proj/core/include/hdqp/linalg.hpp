#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "hdqp/errors.hpp"

namespace hdqp::linalg {

/// Relative asymmetry max|A - A'| / max|A| (0 for the zero matrix).
double asymmetry(const Eigen::MatrixXd& a);

/// Throws DomainError when the relative asymmetry exceeds tol.
void require_symmetric(const Eigen::MatrixXd& a, double tol,
                       const std::string& name);

/// Inverse of a small symmetric matrix through its eigendecomposition.
/// Throws SingularMatrixError (naming `name`) when the smallest eigenvalue
/// magnitude is below rel_tol times the largest, i.e. the condition number
/// check is relative to the matrix scale.
Eigen::MatrixXd invert_symmetric(const Eigen::MatrixXd& a, double rel_tol,
                                 const std::string& name);

/// Cholesky factor of a symmetric positive definite matrix; throws
/// NotPositiveDefiniteError (naming `name`) on failure.
Eigen::LLT<Eigen::MatrixXd> spd_factor(const Eigen::MatrixXd& a,
                                       const std::string& name);

/// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol);

/// Quantile with linear interpolation between order statistics (the common
/// "type 7" convention). `sorted` must be ascending and nonempty.
double quantile_sorted(const std::vector<double>& sorted, double prob);

}  // namespace hdqp::linalg
