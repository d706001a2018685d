#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>

#include "hdqp/errors.hpp"

namespace hdqp::spectral {

/// Law G of the squared ellipticity parameters tau = lambda^2, as queried by
/// the fixed-point solver: the only operation needed is
/// integral d G(tau) / (1 + a tau) for a >= 0.
class WeightDistribution {
 public:
  enum class Kind { point_mass, empirical, poisson_one, scaled_t_sq };

  static WeightDistribution point_mass(double c);  // c > 0
  /// Atoms at the given positive tau values with equal mass. Zeros are
  /// rejected; use solve_empirical for raw vectors that may contain zeros.
  static WeightDistribution empirical(Eigen::VectorXd tau);
  /// Poisson(1), the bootstrap weight limit law. Mass e^{-1} at zero.
  static WeightDistribution poisson_one();
  /// Law of tau = ((df-2)/df) T^2 with T t-distributed, so E(tau) = 1.
  static WeightDistribution scaled_t_sq(int df);

  Kind kind() const { return kind_; }
  double mean_tau() const { return mean_tau_; }
  double mass_at_zero() const { return mass_at_zero_; }

  /// integral d G(tau) / (1 + a tau), exact per family: closed form for a
  /// point mass, finite sum for empirical atoms, series truncated below
  /// 1e-18 for Poisson(1), adaptive quadrature for the scaled-t^2 law.
  double integral_inv_one_plus(double a) const;

 private:
  WeightDistribution() = default;
  Kind kind_ = Kind::point_mass;
  double c_ = 1.0;
  int df_ = 0;
  Eigen::VectorXd tau_;
  double mean_tau_ = 1.0;
  double mass_at_zero_ = 0.0;
};

/// Solved scaling S with the aspect ratio it was solved at and the residual
/// |integral dG/(1 + rho tau S) - (1 - rho)| of the defining equation.
struct LimitScaling {
  double value = 0.0;
  double rho = 0.0;
  double residual = 0.0;
};

/// Root of integral dG(tau)/(1 + rho tau S) = 1 - rho in S. The map is
/// continuous, convex and decreasing on [0, inf), so the root is unique
/// when it exists; found by doubling a bracket from 1 and bisecting to a
/// residual below 1e-10.
///
/// Errors: DomainError for rho outside (0,1) (and, for Poisson(1), for rho
/// outside (0, 1 - 1/e)); NoRootError when G's mass at zero is >= 1 - rho.
LimitScaling solve_limit_scaling(const WeightDistribution& g, double rho);

/// Discretized equation value g_n(x) = (1/n) sum 1/(1 + x tau_i rho_n).
/// Zero entries are allowed and contribute the constant 1/n.
double empirical_g_value(const Eigen::VectorXd& lambda_sq, double rho_n,
                         double x);

/// Root of g_n(x) = 1 - rho_n. Requires the fraction of nonzero entries to
/// exceed rho_n (else NoRootError).
LimitScaling solve_empirical(const Eigen::VectorXd& lambda_sq, double rho_n);

/// The mean-estimation bias kappa_n = rho_n / (1 - rho_n).
double kappa(double rho_n);

struct KappaCorrelated {
  double kappa_np = 0.0;       ///< (1/n) sum omega_i^2 E P(i,i)
  double std_error = 0.0;      ///< Monte Carlo standard error of kappa_np
  double sigma_hat_form = 0.0; ///< kappa / (1 - kappa), the Sigma-hat^{-1} limit
  int replicates = 0;
};

/// Monte Carlo estimate of kappa(n,p) for correlated observations with
/// mixing matrix Lambda (n x n, full rank): omega = A' e from the SVD
/// Lambda = A D B', and P(i,i) the diagonal of the random projection
/// D Y (Y' D^2 Y)^{-1} Y' D, computed per index from solves against
/// Y' D^2 Y (equivalently 1 - 1/(1 + q_i d_i^2) in leave-one-out form),
/// never forming the n x n projection.
KappaCorrelated kappa_correlated_mc(const Eigen::MatrixXd& lambda, int p,
                                    int replicates, std::uint64_t seed);

/// Marcenko-Pastur density f_rho(x) = sqrt((y+ - x)(x - y-)) / (2 pi rho x)
/// on [y-, y+], zero outside; support edges y-+ = (1 -+ sqrt(rho))^2.
double mp_density(double x, double rho);
std::pair<double, double> mp_edges(double rho);

}  // namespace hdqp::spectral
