#pragma once

#include <Eigen/Dense>
#include <string>

#include "hdqp/datagen.hpp"
#include "hdqp/errors.hpp"

namespace hdqp::estimators {

/// lambda_i^2 estimates: ||X_i - mu_hat||^2 / trace(Sigma_hat). Their mean
/// is (n-1)/n by construction. Throws DegenerateSampleError when the trace
/// vanishes.
Eigen::VectorXd estimate_lambda_sq(const datagen::SampleSet& sample);

/// Variant centered at a known mean; used only by oracle tests.
Eigen::VectorXd estimate_lambda_sq_known_mean(const datagen::SampleSet& sample,
                                              const Eigen::VectorXd& mu);

/// S_hat: root of g_hat_n(x) = 1 - rho_n with the lambda_i^2 estimates above.
double estimate_limit_scaling(const datagen::SampleSet& sample);

struct MTildeResult {
  Eigen::MatrixXd m_tilde;
  bool psd_repair_applied = false;
};

/// M_tilde = M_hat - kappa_n e_k e_k'. When the result has an eigenvalue
/// below `floor`, eigenvalues are clipped at the floor and the repair is
/// flagged. Pass floor <= 0 for the default 1e-8 * max|M_tilde|.
MTildeResult m_tilde(const Eigen::MatrixXd& m_hat, double kappa_n,
                     double floor = 0.0);

/// Corrected weights Sigma_hat^{-1} V_hat M_tilde^{-1} U. Also evaluates the
/// equivalent form wEmp + kappa_n z_hat w_b_hat (with M_hat reconstructed as
/// M_tilde + kappa_n e_k e_k') and checks the two agree to 1e-8 relative.
Eigen::VectorXd corrected_weights(const Eigen::MatrixXd& sigma_hat,
                                  const Eigen::MatrixXd& v_hat,
                                  const Eigen::MatrixXd& m_tilde,
                                  const Eigen::VectorXd& u, double kappa_n);

/// Corrected frontier estimate
/// S_hat (f_naive + kappa_n (e_k'M_tilde^{-1}U)^2 /
///        (1 + kappa_n e_k'M_tilde^{-1}e_k)).
double corrected_frontier(double f_naive, const Eigen::MatrixXd& m_tilde,
                          const Eigen::VectorXd& u, double kappa_n,
                          double s_hat);

/// Scatter estimate (1/n) sum (X_i - center)(X_i - center)' / lambda_sq_hat_i.
/// Throws DegenerateSampleError when any lambda_sq_hat entry is below 1e-8.
Eigen::MatrixXd robust_scatter(const datagen::SampleSet& sample,
                               const Eigen::VectorXd& center,
                               const Eigen::VectorXd& lambda_sq_hat);

/// Everything the corrections need from one sample, computed once: the
/// Cholesky factor of Sigma_hat, W_hat = Sigma_hat^{-1} V_hat, M_hat,
/// M_tilde, kappa_n and S_hat. The per-target quantities (weights,
/// frontier values) are then O(p k) per call, so one analysis serves a
/// whole mu_P grid.
class SampleAnalysis {
 public:
  /// v_minus_k holds the deterministic constraint columns; the estimated
  /// mean is appended as the final column of V_hat.
  SampleAnalysis(const datagen::SampleSet& sample,
                 const Eigen::MatrixXd& v_minus_k);

  int k() const { return static_cast<int>(v_hat_.cols()); }
  double kappa_n() const { return kappa_n_; }
  double s_hat() const { return s_hat_; }
  bool psd_repair_applied() const { return repair_; }
  const Eigen::MatrixXd& m_hat() const { return m_hat_; }
  const Eigen::MatrixXd& m_tilde() const { return m_tilde_; }
  const Eigen::VectorXd& lambda_sq_hat() const { return lambda_sq_hat_; }
  const Eigen::MatrixXd& v_hat() const { return v_hat_; }

  Eigen::VectorXd naive_weights(const Eigen::VectorXd& u) const;
  Eigen::VectorXd corrected_weights(const Eigen::VectorXd& u) const;
  double naive_frontier(const Eigen::VectorXd& u) const;
  double corrected_frontier(const Eigen::VectorXd& u) const;

  /// Solves Sigma_hat x = rhs against the cached factor.
  Eigen::VectorXd solve_sigma_hat(const Eigen::VectorXd& rhs) const;

 private:
  Eigen::LLT<Eigen::MatrixXd> sigma_llt_;
  Eigen::MatrixXd v_hat_;
  Eigen::MatrixXd w_hat_;  // Sigma_hat^{-1} V_hat
  Eigen::MatrixXd m_hat_, m_hat_inv_, m_tilde_, m_tilde_inv_;
  Eigen::VectorXd lambda_sq_hat_;
  double kappa_n_ = 0.0;
  double s_hat_ = 0.0;
  bool repair_ = false;
};

/// One-sample correction summary.
struct CorrectionReport {
  double kappa_n = 0.0;
  Eigen::VectorXd lambda_sq_hat;
  double s_hat = 0.0;
  Eigen::MatrixXd m_hat;
  Eigen::MatrixXd m_tilde;
  Eigen::VectorXd w_naive;
  Eigen::VectorXd w_corrected;
  double f_naive = 0.0;
  double f_corrected = 0.0;
  bool psd_repair_applied = false;
};

CorrectionReport analyze_sample(const datagen::SampleSet& sample,
                                const Eigen::MatrixXd& v_minus_k,
                                const Eigen::VectorXd& u);

/// Flat CSV serialization of a report. Column order:
/// kappa_n, s_hat, f_naive, f_corrected, psd_repair_applied,
/// lambda_sq_mean, lambda_sq_min, lambda_sq_max, w_naive_norm,
/// w_corrected_norm.
std::string correction_report_csv_header();
std::string correction_report_csv_row(const CorrectionReport& report);

}  // namespace hdqp::estimators
