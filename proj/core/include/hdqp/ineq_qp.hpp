#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "hdqp/errors.hpp"

namespace hdqp::ineq {

/// Axis-aligned box; entries of lower may be -inf and entries of upper +inf.
struct Box {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

/// Constraint set Q for the target vector U: a singleton, a box, or a
/// finite union of boxes.
class ConstraintSet {
 public:
  enum class Kind { singleton, box, finite_union };

  static ConstraintSet singleton(Eigen::VectorXd u);
  static ConstraintSet box(Eigen::VectorXd lower, Eigen::VectorXd upper);
  static ConstraintSet finite_union(std::vector<Box> boxes);

  Kind kind() const { return kind_; }
  int dim() const;
  const Eigen::VectorXd& point() const { return point_; }
  const std::vector<Box>& boxes() const { return boxes_; }
  bool contains_origin() const;

 private:
  ConstraintSet() = default;
  Kind kind_ = Kind::singleton;
  Eigen::VectorXd point_;
  std::vector<Box> boxes_;
};

/// Parses the config syntax `Q = box; lower = [1, -inf]; upper = [2, inf]`
/// (also `Q = singleton; u = [...]` and `Q = union; lower1/upper1,
/// lower2/upper2, ...`).
ConstraintSet parse_constraint_set(const std::string& text);

struct Minimum {
  Eigen::VectorXd argmin;
  double value = 0.0;
};

/// Minimizes U' A U over Q for positive definite A. Boxes with dimension
/// k <= 8 are solved exactly by enumerating the 3^k face patterns; larger
/// boxes fall back to projected gradient with 1e-10 stationarity.
Minimum minimize_over_q(const Eigen::MatrixXd& a, const ConstraintSet& q);

/// inf_Q U' M_hat^{-1} U, the plug-in frontier over a constraint set.
double empirical_ineq_frontier(const Eigen::MatrixXd& m_hat,
                               const ConstraintSet& q);

/// Deterministic equivalent inf_Q U' M_0^{-1} U with
/// M_0 = S M + kappa_n e_k e_k'. Warns once if Q contains the origin (the
/// asymptotic approximation degenerates there, though the value 0 is still
/// correct).
double deterministic_equivalent(const Eigen::MatrixXd& m, double s,
                                double kappa_n, const ConstraintSet& q);

/// Consistent estimate of fTheo(Q): the minimization run with M_hat
/// replaced by (1/S_hat)(M_hat - kappa_n e_k e_k') (PSD-repaired when
/// needed). Reduces to the equality-constrained corrected frontier on
/// singletons.
double corrected_ineq_frontier(const Eigen::MatrixXd& m_hat, double kappa_n,
                               double s_hat, const ConstraintSet& q);

}  // namespace hdqp::ineq
