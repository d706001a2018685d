#include "hdqp/qp_core.hpp"

#include <algorithm>
#include <utility>

#include "hdqp/linalg.hpp"

namespace hdqp::qp {

namespace {
constexpr double kSymTol = 1e-12;
constexpr double kPivotTol = 1e-12;
}  // namespace

ProblemSpec::ProblemSpec(Eigen::MatrixXd sigma, Eigen::MatrixXd v_cols,
                         Eigen::VectorXd u)
    : sigma_(std::move(sigma)), v_(std::move(v_cols)), u_(std::move(u)) {
  linalg::require_symmetric(sigma_, kSymTol, "sigma");
  const int p = static_cast<int>(sigma_.rows());
  const int k = static_cast<int>(v_.cols());
  if (v_.rows() != p) throw DomainError("constraint vectors have wrong length");
  if (u_.size() != k) throw DomainError("targets U have wrong length");
  if (k < 1 || k > p) throw DomainError("need 1 <= k <= p");

  sigma_llt_ = linalg::spd_factor(sigma_, "sigma");
  w_ = sigma_llt_.solve(v_);
  m_ = v_.transpose() * w_;
  m_ = 0.5 * (m_ + m_.transpose()).eval();
  m_inv_ = linalg::invert_symmetric(m_, kPivotTol, "M");
}

Eigen::MatrixXd ProblemSpec::solve_sigma(const Eigen::MatrixXd& rhs) const {
  return sigma_llt_.solve(rhs);
}

OptimalSolution solve_eqc(const ProblemSpec& spec) {
  OptimalSolution out;
  out.m_inverse = spec.gram_inverse();
  out.weights = spec.sigma_inv_v() * (out.m_inverse * spec.u());
  out.risk = spec.u().dot(out.m_inverse * spec.u());
  return out;
}

double linear_functional(const ProblemSpec& spec, const Eigen::VectorXd& gamma) {
  const int k = spec.k();
  if (gamma.size() != spec.p()) throw DomainError("gamma has wrong length");
  const Eigen::VectorXd sg = spec.solve_sigma(gamma);
  const Eigen::VectorXd vsg = spec.v_cols().transpose() * sg;
  const double gg = gamma.dot(sg);

  // When gamma lies in the span of V's columns the bordered matrix below is
  // singular, but gamma' w is pinned by the constraints: gamma = V c gives
  // gamma' w = c' U. The Schur complement of M in the bordered matrix is the
  // squared Sigma^{-1}-norm of the out-of-span component, so it detects
  // membership directly.
  const Eigen::VectorXd coeffs = spec.gram_inverse() * vsg;
  const double out_of_span = gg - vsg.dot(coeffs);
  if (out_of_span <= kPivotTol * std::max(gg, 1.0))
    return coeffs.dot(spec.u());

  Eigen::MatrixXd bordered(k + 1, k + 1);
  bordered.topLeftCorner(k, k) = spec.gram();
  bordered.topRightCorner(k, 1) = vsg;
  bordered.bottomLeftCorner(1, k) = vsg.transpose();
  bordered(k, k) = gg;

  const Eigen::MatrixXd inv =
      linalg::invert_symmetric(bordered, kPivotTol, "bordered matrix");
  double acc = 0.0;
  for (int i = 0; i < k; ++i) acc += spec.u()(i) * inv(i, k);
  return -acc / inv(k, k);
}

Eigen::MatrixXd PartitionedInverse::assemble() const {
  const int r1 = static_cast<int>(b11.rows());
  const int r2 = static_cast<int>(b21.rows());
  const int c1 = static_cast<int>(b11.cols());
  const int c2 = static_cast<int>(b12.cols());
  Eigen::MatrixXd out(r1 + r2, c1 + c2);
  out.topLeftCorner(r1, c1) = b11;
  out.topRightCorner(r1, c2) = b12;
  out.bottomLeftCorner(r2, c1) = b21;
  out.bottomRightCorner(r2, c2) = b22;
  return out;
}

namespace {

Eigen::PartialPivLU<Eigen::MatrixXd> lu_checked(const Eigen::MatrixXd& a,
                                                const std::string& name) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const Eigen::VectorXd diag = lu.matrixLU().diagonal().cwiseAbs();
  const double largest = diag.maxCoeff();
  if (largest == 0.0 || diag.minCoeff() < kPivotTol * a.cwiseAbs().maxCoeff())
    throw SingularMatrixError(name + " is singular to working precision");
  return lu;
}

}  // namespace

PartitionedInverse partitioned_inverse(const Eigen::MatrixXd& a11,
                                       const Eigen::MatrixXd& a12,
                                       const Eigen::MatrixXd& a21,
                                       const Eigen::MatrixXd& a22) {
  if (a11.rows() != a11.cols() || a22.rows() != a22.cols())
    throw DomainError("diagonal blocks must be square");
  if (a12.rows() != a11.rows() || a12.cols() != a22.cols() ||
      a21.rows() != a22.rows() || a21.cols() != a11.cols())
    throw DomainError("off-diagonal block shapes do not match");

  const auto lu11 = lu_checked(a11, "A11");
  const auto lu22 = lu_checked(a22, "A22");

  const Eigen::MatrixXd schur11 = a11 - a12 * lu22.solve(a21);
  const Eigen::MatrixXd schur22 = a22 - a21 * lu11.solve(a12);

  PartitionedInverse out;
  out.b11 = lu_checked(schur11, "Schur complement of A22").inverse();
  out.b22 = lu_checked(schur22, "Schur complement of A11").inverse();
  out.b12 = -lu11.solve(a12 * out.b22);
  out.b21 = -out.b22 * a21 * lu11.inverse();
  return out;
}

FrontierCurve efficient_frontier(const Eigen::MatrixXd& sigma,
                                 const Eigen::VectorXd& mu,
                                 const Eigen::MatrixXd& extra_v,
                                 const Eigen::VectorXd& extra_u,
                                 const Eigen::VectorXd& mu_p_grid) {
  if (mu_p_grid.size() == 0) throw DomainError("mu_p grid is empty");
  const int p = static_cast<int>(sigma.rows());
  const int k_extra = static_cast<int>(extra_v.cols());
  if (extra_u.size() != k_extra)
    throw DomainError("extra constraint targets have wrong length");

  Eigen::MatrixXd v(p, k_extra + 1);
  if (k_extra > 0) v.leftCols(k_extra) = extra_v;
  v.col(k_extra) = mu;

  Eigen::VectorXd u(k_extra + 1);
  u.head(k_extra) = extra_u;
  u(k_extra) = mu_p_grid(0);

  // One factorization serves the whole grid; only U changes per point.
  const ProblemSpec spec(sigma, v, u);
  const Eigen::MatrixXd& m_inv = spec.gram_inverse();

  FrontierCurve curve;
  curve.reserve(static_cast<std::size_t>(mu_p_grid.size()));
  for (int i = 0; i < mu_p_grid.size(); ++i) {
    u(k_extra) = mu_p_grid(i);
    curve.push_back({mu_p_grid(i), u.dot(m_inv * u)});
  }
  return curve;
}

}  // namespace hdqp::qp
