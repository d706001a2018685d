#pragma once

#include <Eigen/Dense>
#include <string>

#include "hdqp/errors.hpp"

namespace hdqp::theory {

enum class Regime { gaussian_exact, elliptical_asymptotic, bootstrap, correlated };

std::string to_string(Regime regime);

/// Inputs a prediction was evaluated at, kept for reproducibility of reports.
struct InputsDigest {
  int n = 0, p = 0, k = 0;
  double rho = 0.0, s = 0.0, kappa = 0.0;
};

struct Prediction {
  std::string name;
  double value = 0.0;
  Regime regime = Regime::gaussian_exact;
  InputsDigest inputs;
};

/// Mean of chi^2_{n-1-p+k} / (n-1): the multiplicative risk factor from
/// covariance estimation in the Gaussian case. Requires n-1-p+k > 0.
double gaussian_risk_factor(int n, int p, int k);

/// Degrees of freedom of the chi^2 law above, for distributional tests.
int gaussian_risk_df(int n, int p, int k);

/// Risk drop from mean estimation: alpha (U'M^{-1}e_k)^2 /
/// (1 + alpha e_k'M^{-1}e_k). The oracle risk is approximately
/// wTheo' Sigma wTheo minus this penalty.
double oracle_mean_penalty(const Eigen::MatrixXd& m, const Eigen::VectorXd& u,
                           double alpha);

/// Predicted plug-in frontier value, elliptical/asymptotic form:
/// (1/S) (fTheo - (kappa_n/S) (e_k'M^{-1}U)^2 / (1 + (kappa_n/S) e_k'M^{-1}e_k))
/// with kappa_n = rho_n/(1-rho_n).
double predicted_emp_frontier(const Eigen::MatrixXd& m, const Eigen::VectorXd& u,
                              double rho_n, double s);

/// Same formula with the bias term supplied directly (kappa_n = 0 recovers
/// fTheo / S exactly); the rho_n form delegates here with
/// kappa_n = rho_n/(1-rho_n).
double predicted_emp_frontier_kappa(const Eigen::MatrixXd& m,
                                    const Eigen::VectorXd& u, double kappa_n,
                                    double s);

/// Gaussian finite-n variant: (1 - (p-k)/(n-1)) (fTheo - penalty(alpha=p/n)).
/// Keeps the covariance factor and the mean penalty composed but separate.
double predicted_emp_frontier_gaussian(const Eigen::MatrixXd& m,
                                       const Eigen::VectorXd& u, int n, int p,
                                       int k);

struct WeightBias {
  Eigen::VectorXd w_b;  ///< Sigma^{-1} V M^{-1} e_k
  double zeta = 0.0;    ///< e_k'M^{-1}U / (1 + (kappa_n/S) e_k'M^{-1}e_k)
};

/// Bias direction and scale for the plug-in weights: predicted
/// gamma' wEmp = gamma' wTheo - zeta (kappa_n/S) gamma' w_b.
WeightBias predicted_weight_bias(const Eigen::MatrixXd& sigma,
                                 const Eigen::MatrixXd& v,
                                 const Eigen::MatrixXd& m,
                                 const Eigen::VectorXd& u, double s,
                                 double kappa_n);

/// Predicted mu' wEmp when u_k = mu_p: the realized expected return of
/// the plug-in portfolio (below mu_p for large mu_p).
double predicted_realized_returns(const Eigen::MatrixXd& m,
                                  const Eigen::VectorXd& u, double s,
                                  double kappa_n, double mu_p);

/// Exact Gaussian conditional mean E(gamma' wEmp | mu_hat) =
/// - sum_{i<=k} u_i N(i, k+1) / N(k+1, k+1) for the (k+1)x(k+1) matrix
/// N = (Vhat_gamma' Sigma^{-1} Vhat_gamma)^{-1}.
double conditional_weight_expectation(const Eigen::MatrixXd& n_gamma,
                                      const Eigen::VectorXd& u);

}  // namespace hdqp::theory
