#include "hdqp/theory.hpp"

#include "hdqp/linalg.hpp"

namespace hdqp::theory {

namespace {
constexpr double kPivotTol = 1e-12;

Eigen::MatrixXd checked_inverse(const Eigen::MatrixXd& m, const char* name) {
  linalg::require_symmetric(m, 1e-10, name);
  return linalg::invert_symmetric(m, kPivotTol, name);
}
}  // namespace

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::gaussian_exact: return "gaussian_exact";
    case Regime::elliptical_asymptotic: return "elliptical_asymptotic";
    case Regime::bootstrap: return "bootstrap";
    case Regime::correlated: return "correlated";
  }
  return "unknown";
}

double gaussian_risk_factor(int n, int p, int k) {
  return static_cast<double>(gaussian_risk_df(n, p, k)) / (n - 1.0);
}

int gaussian_risk_df(int n, int p, int k) {
  const int df = n - 1 - p + k;
  if (df <= 0) throw DomainError("need n - 1 - p + k > 0");
  return df;
}

double oracle_mean_penalty(const Eigen::MatrixXd& m, const Eigen::VectorXd& u,
                           double alpha) {
  if (alpha < 0.0) throw DomainError("alpha must be nonnegative");
  const Eigen::MatrixXd m_inv = checked_inverse(m, "M");
  const int k = static_cast<int>(m.rows());
  const double num = u.dot(m_inv.col(k - 1));
  const double den = 1.0 + alpha * m_inv(k - 1, k - 1);
  return alpha * num * num / den;
}

double predicted_emp_frontier(const Eigen::MatrixXd& m, const Eigen::VectorXd& u,
                              double rho_n, double s) {
  if (!(rho_n > 0.0 && rho_n < 1.0))
    throw DomainError("rho_n must lie in (0, 1)");
  return predicted_emp_frontier_kappa(m, u, rho_n / (1.0 - rho_n), s);
}

double predicted_emp_frontier_kappa(const Eigen::MatrixXd& m,
                                    const Eigen::VectorXd& u, double kappa_n,
                                    double s) {
  if (!(s > 0.0)) throw DomainError("S must be positive");
  if (kappa_n < 0.0) throw DomainError("kappa_n must be nonnegative");
  const Eigen::MatrixXd m_inv = checked_inverse(m, "M");
  const int k = static_cast<int>(m.rows());
  const double f_theo = u.dot(m_inv * u);
  const double cross = m_inv.col(k - 1).dot(u);
  const double penalty = (kappa_n / s) * cross * cross /
                         (1.0 + (kappa_n / s) * m_inv(k - 1, k - 1));
  return (f_theo - penalty) / s;
}

double predicted_emp_frontier_gaussian(const Eigen::MatrixXd& m,
                                       const Eigen::VectorXd& u, int n, int p,
                                       int k) {
  if (m.rows() != k) throw DomainError("M must be k x k");
  const double factor = gaussian_risk_factor(n, p, k);
  const Eigen::MatrixXd m_inv = checked_inverse(m, "M");
  const double f_theo = u.dot(m_inv * u);
  const double alpha = static_cast<double>(p) / n;
  const double cross = m_inv.col(k - 1).dot(u);
  const double penalty =
      alpha * cross * cross / (1.0 + alpha * m_inv(k - 1, k - 1));
  return factor * (f_theo - penalty);
}

WeightBias predicted_weight_bias(const Eigen::MatrixXd& sigma,
                                 const Eigen::MatrixXd& v,
                                 const Eigen::MatrixXd& m,
                                 const Eigen::VectorXd& u, double s,
                                 double kappa_n) {
  if (!(s > 0.0)) throw DomainError("S must be positive");
  if (kappa_n < 0.0) throw DomainError("kappa_n must be nonnegative");
  const Eigen::MatrixXd m_inv = checked_inverse(m, "M");
  const int k = static_cast<int>(m.rows());

  WeightBias out;
  const Eigen::LLT<Eigen::MatrixXd> llt = linalg::spd_factor(sigma, "sigma");
  out.w_b = llt.solve(v * m_inv.col(k - 1));
  out.zeta = m_inv.col(k - 1).dot(u) /
             (1.0 + (kappa_n / s) * m_inv(k - 1, k - 1));
  return out;
}

double predicted_realized_returns(const Eigen::MatrixXd& m,
                                  const Eigen::VectorXd& u, double s,
                                  double kappa_n, double mu_p) {
  if (!(s > 0.0)) throw DomainError("S must be positive");
  if (kappa_n < 0.0) throw DomainError("kappa_n must be nonnegative");
  const Eigen::MatrixXd m_inv = checked_inverse(m, "M");
  const int k = static_cast<int>(m.rows());
  const double den = 1.0 + (kappa_n / s) * m_inv(k - 1, k - 1);
  double cross = 0.0;
  for (int i = 0; i + 1 < k; ++i) cross += u(i) * m_inv(k - 1, i);
  return mu_p / den - (kappa_n / s) * cross / den;
}

double conditional_weight_expectation(const Eigen::MatrixXd& n_gamma,
                                      const Eigen::VectorXd& u) {
  linalg::require_symmetric(n_gamma, 1e-10, "N_gamma");
  const int k = static_cast<int>(n_gamma.rows()) - 1;
  if (k < 1) throw DomainError("N_gamma must be at least 2 x 2");
  if (u.size() != k) throw DomainError("U must have k entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(n_gamma);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw SingularMatrixError("N_gamma is not positive definite");
  const double pivot = n_gamma(k, k);
  double acc = 0.0;
  for (int i = 0; i < k; ++i) acc += u(i) * n_gamma(i, k);
  return -acc / pivot;
}

}  // namespace hdqp::theory
