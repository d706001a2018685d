#include "hdqp/estimators.hpp"

#include <cmath>
#include <sstream>

#include "hdqp/linalg.hpp"
#include "hdqp/spectral.hpp"

namespace hdqp::estimators {

namespace {
constexpr double kPivotTol = 1e-12;
constexpr double kLambdaFloor = 1e-8;

Eigen::VectorXd lambda_sq_from_center(const datagen::SampleSet& sample,
                                      const Eigen::VectorXd& center) {
  const double tr = sample.sigma_hat.trace();
  if (!(tr > 0.0))
    throw DegenerateSampleError("sample covariance has zero trace");
  const int n = sample.n();
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i)
    out(i) = (sample.data.row(i).transpose() - center).squaredNorm() / tr;
  return out;
}

}  // namespace

Eigen::VectorXd estimate_lambda_sq(const datagen::SampleSet& sample) {
  return lambda_sq_from_center(sample, sample.mu_hat);
}

Eigen::VectorXd estimate_lambda_sq_known_mean(const datagen::SampleSet& sample,
                                              const Eigen::VectorXd& mu) {
  return lambda_sq_from_center(sample, mu);
}

double estimate_limit_scaling(const datagen::SampleSet& sample) {
  return spectral::solve_empirical(estimate_lambda_sq(sample), sample.rho_n())
      .value;
}

MTildeResult m_tilde(const Eigen::MatrixXd& m_hat, double kappa_n,
                     double floor) {
  linalg::require_symmetric(m_hat, 1e-10, "M_hat");
  const int k = static_cast<int>(m_hat.rows());
  MTildeResult out;
  out.m_tilde = m_hat;
  out.m_tilde(k - 1, k - 1) -= kappa_n;

  if (floor <= 0.0) floor = 1e-8 * out.m_tilde.cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.m_tilde);
  if (es.eigenvalues().minCoeff() < floor) {
    const Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(floor);
    out.m_tilde = es.eigenvectors() * clipped.asDiagonal() *
                  es.eigenvectors().transpose();
    out.psd_repair_applied = true;
  }
  return out;
}

Eigen::VectorXd corrected_weights(const Eigen::MatrixXd& sigma_hat,
                                  const Eigen::MatrixXd& v_hat,
                                  const Eigen::MatrixXd& m_tilde,
                                  const Eigen::VectorXd& u, double kappa_n) {
  const Eigen::LLT<Eigen::MatrixXd> llt =
      linalg::spd_factor(sigma_hat, "sigma_hat");
  const Eigen::MatrixXd w_hat = llt.solve(v_hat);
  const Eigen::MatrixXd m_tilde_inv =
      linalg::invert_symmetric(m_tilde, kPivotTol, "M_tilde");

  const int k = static_cast<int>(m_tilde.rows());
  const Eigen::VectorXd direct = w_hat * (m_tilde_inv * u);

  // Equivalent route: wEmp + kappa_n z_hat w_b_hat against the reconstructed
  // M_hat = M_tilde + kappa_n e_k e_k'.
  Eigen::MatrixXd m_hat = m_tilde;
  m_hat(k - 1, k - 1) += kappa_n;
  const Eigen::MatrixXd m_hat_inv =
      linalg::invert_symmetric(m_hat, kPivotTol, "M_hat");
  const Eigen::VectorXd w_emp = w_hat * (m_hat_inv * u);
  const Eigen::VectorXd w_b = w_hat * m_tilde_inv.col(k - 1);
  const double z_hat = m_tilde_inv.col(k - 1).dot(u) /
                       (1.0 + kappa_n * m_tilde_inv(k - 1, k - 1));
  const Eigen::VectorXd via_bias = w_emp + kappa_n * z_hat * w_b;

  const double scale = std::max(1.0, direct.norm());
  if ((direct - via_bias).norm() > 1e-8 * scale)
    throw Error("corrected-weight forms disagree beyond tolerance");
  return direct;
}

double corrected_frontier(double f_naive, const Eigen::MatrixXd& m_tilde,
                          const Eigen::VectorXd& u, double kappa_n,
                          double s_hat) {
  if (!(s_hat > 0.0)) throw DomainError("S_hat must be positive");
  if (!std::isfinite(f_naive)) throw DomainError("f_naive must be finite");
  const Eigen::MatrixXd m_tilde_inv =
      linalg::invert_symmetric(m_tilde, kPivotTol, "M_tilde");
  const int k = static_cast<int>(m_tilde.rows());
  const double cross = m_tilde_inv.col(k - 1).dot(u);
  return s_hat * (f_naive + kappa_n * cross * cross /
                                (1.0 + kappa_n * m_tilde_inv(k - 1, k - 1)));
}

Eigen::MatrixXd robust_scatter(const datagen::SampleSet& sample,
                               const Eigen::VectorXd& center,
                               const Eigen::VectorXd& lambda_sq_hat) {
  const int n = sample.n();
  const int p = sample.p();
  if (lambda_sq_hat.size() != n)
    throw DomainError("lambda_sq_hat must have one entry per observation");
  if (lambda_sq_hat.minCoeff() <= kLambdaFloor)
    throw DegenerateSampleError("lambda_sq_hat entry below floor");
  Eigen::MatrixXd centered = sample.data.rowwise() - center.transpose();
  centered.array().colwise() /= lambda_sq_hat.array().sqrt();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(p, p);
  acc.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose());
  Eigen::MatrixXd out = acc.selfadjointView<Eigen::Lower>();
  out /= static_cast<double>(n);
  return out;
}

SampleAnalysis::SampleAnalysis(const datagen::SampleSet& sample,
                               const Eigen::MatrixXd& v_minus_k) {
  const int p = sample.p();
  const int k_minus = static_cast<int>(v_minus_k.cols());
  if (v_minus_k.rows() != p && k_minus > 0)
    throw DomainError("v_minus_k has wrong length");

  v_hat_.resize(p, k_minus + 1);
  if (k_minus > 0) v_hat_.leftCols(k_minus) = v_minus_k;
  v_hat_.col(k_minus) = sample.mu_hat;

  sigma_llt_ = linalg::spd_factor(sample.sigma_hat, "sigma_hat");
  w_hat_ = sigma_llt_.solve(v_hat_);
  m_hat_ = v_hat_.transpose() * w_hat_;
  m_hat_ = 0.5 * (m_hat_ + m_hat_.transpose()).eval();
  m_hat_inv_ = linalg::invert_symmetric(m_hat_, kPivotTol, "M_hat");

  kappa_n_ = spectral::kappa(sample.rho_n());
  lambda_sq_hat_ = estimate_lambda_sq(sample);
  s_hat_ = spectral::solve_empirical(lambda_sq_hat_, sample.rho_n()).value;

  const MTildeResult mt = hdqp::estimators::m_tilde(m_hat_, kappa_n_);
  m_tilde_ = mt.m_tilde;
  repair_ = mt.psd_repair_applied;
  m_tilde_inv_ = linalg::invert_symmetric(m_tilde_, kPivotTol, "M_tilde");
}

Eigen::VectorXd SampleAnalysis::naive_weights(const Eigen::VectorXd& u) const {
  return w_hat_ * (m_hat_inv_ * u);
}

Eigen::VectorXd SampleAnalysis::solve_sigma_hat(
    const Eigen::VectorXd& rhs) const {
  return sigma_llt_.solve(rhs);
}

Eigen::VectorXd SampleAnalysis::corrected_weights(
    const Eigen::VectorXd& u) const {
  const int kk = k();
  const Eigen::VectorXd direct = w_hat_ * (m_tilde_inv_ * u);
  const Eigen::VectorXd w_b = w_hat_ * m_tilde_inv_.col(kk - 1);
  const double z_hat = m_tilde_inv_.col(kk - 1).dot(u) /
                       (1.0 + kappa_n_ * m_tilde_inv_(kk - 1, kk - 1));
  Eigen::MatrixXd m_hat = m_tilde_;
  m_hat(kk - 1, kk - 1) += kappa_n_;
  const Eigen::VectorXd w_emp =
      w_hat_ * (linalg::invert_symmetric(m_hat, kPivotTol, "M_hat") * u);
  const Eigen::VectorXd via_bias = w_emp + kappa_n_ * z_hat * w_b;
  if ((direct - via_bias).norm() > 1e-8 * std::max(1.0, direct.norm()))
    throw Error("corrected-weight forms disagree beyond tolerance");
  return direct;
}

double SampleAnalysis::naive_frontier(const Eigen::VectorXd& u) const {
  return u.dot(m_hat_inv_ * u);
}

double SampleAnalysis::corrected_frontier(const Eigen::VectorXd& u) const {
  const int kk = k();
  const double f_naive = naive_frontier(u);
  const double cross = m_tilde_inv_.col(kk - 1).dot(u);
  return s_hat_ * (f_naive + kappa_n_ * cross * cross /
                                 (1.0 + kappa_n_ * m_tilde_inv_(kk - 1, kk - 1)));
}

CorrectionReport analyze_sample(const datagen::SampleSet& sample,
                                const Eigen::MatrixXd& v_minus_k,
                                const Eigen::VectorXd& u) {
  const SampleAnalysis analysis(sample, v_minus_k);
  CorrectionReport report;
  report.kappa_n = analysis.kappa_n();
  report.lambda_sq_hat = analysis.lambda_sq_hat();
  report.s_hat = analysis.s_hat();
  report.m_hat = analysis.m_hat();
  report.m_tilde = analysis.m_tilde();
  report.w_naive = analysis.naive_weights(u);
  report.w_corrected = analysis.corrected_weights(u);
  report.f_naive = analysis.naive_frontier(u);
  report.f_corrected = analysis.corrected_frontier(u);
  report.psd_repair_applied = analysis.psd_repair_applied();
  return report;
}

std::string correction_report_csv_header() {
  return "kappa_n,s_hat,f_naive,f_corrected,psd_repair_applied,"
         "lambda_sq_mean,lambda_sq_min,lambda_sq_max,w_naive_norm,"
         "w_corrected_norm";
}

std::string correction_report_csv_row(const CorrectionReport& report) {
  std::ostringstream os;
  os.precision(17);
  os << report.kappa_n << ',' << report.s_hat << ',' << report.f_naive << ','
     << report.f_corrected << ',' << (report.psd_repair_applied ? 1 : 0) << ','
     << report.lambda_sq_hat.mean() << ',' << report.lambda_sq_hat.minCoeff()
     << ',' << report.lambda_sq_hat.maxCoeff() << ','
     << report.w_naive.norm() << ',' << report.w_corrected.norm();
  return os.str();
}

}  // namespace hdqp::estimators
