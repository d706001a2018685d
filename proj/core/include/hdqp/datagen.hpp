#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "hdqp/errors.hpp"

namespace hdqp::datagen {

enum class ModelTag { gaussian, elliptical, correlated };

std::string to_string(ModelTag tag);
ModelTag model_tag_from_string(const std::string& s);

/// Law of the scalar ellipticity parameter lambda in X_i = mu + lambda_i
/// Sigma^{1/2} Y_i. Normalized so E(lambda^2) = 1: the scaled-t law carries
/// the factor sqrt((df-2)/df), and empirical tau vectors are divided by
/// their mean.
class LambdaLaw {
 public:
  enum class Kind { point_mass, scaled_t, empirical };

  static LambdaLaw point_mass(double c);
  /// lambda proportional to a t-variate with integer df > 2, scaled so
  /// E(lambda^2) = 1. Throws DomainError("degrees of freedom...") for df <= 2.
  static LambdaLaw scaled_t(int df);
  /// Empirical law of tau = lambda^2, used positionally: entry i supplies
  /// lambda_i, so the vector length must equal the sample size n.
  static LambdaLaw empirical(Eigen::VectorXd tau);

  Kind kind() const { return kind_; }
  double point() const { return c_; }
  int df() const { return df_; }
  const Eigen::VectorXd& tau() const { return tau_; }
  std::string describe() const;

 private:
  LambdaLaw() = default;
  Kind kind_ = Kind::point_mass;
  double c_ = 1.0;
  int df_ = 0;
  Eigen::VectorXd tau_;
};

/// One generated n x p observation matrix with its model metadata and the
/// derived sample moments.
struct SampleSet {
  Eigen::MatrixXd data;             // rows are observations X_i
  ModelTag model = ModelTag::gaussian;
  std::string model_detail;         // law / Lambda description, for metadata
  Eigen::VectorXd lambda_sq_true;   // tau_i = lambda_i^2 when elliptical
  std::uint64_t seed = 0;
  Eigen::VectorXd mu_hat;
  Eigen::MatrixXd sigma_hat;        // (X - Xbar)'(X - Xbar) / (n - 1)

  int n() const { return static_cast<int>(data.rows()); }
  int p() const { return static_cast<int>(data.cols()); }
  double rho_n() const { return static_cast<double>(p()) / n(); }
};

/// mu_hat and sigma_hat from a data matrix; the exact computation the
/// samplers use, so recomputation reproduces stored moments bit for bit.
void compute_moments(const Eigen::MatrixXd& data, Eigen::VectorXd& mu_hat,
                     Eigen::MatrixXd& sigma_hat);

/// Toeplitz covariance Sigma(i,j) = alpha^|i-j|; positive definite for
/// alpha in [0,1). Throws DomainError("alpha...") otherwise.
Eigen::MatrixXd toeplitz_sigma(int p, double alpha);

/// Eigendecomposition of a covariance with a deterministic sign convention
/// (first nonzero component of each eigenvector positive) plus the symmetric
/// square root. Computed once and shared by the samplers and the
/// constraint builder.
struct SpectralModel {
  explicit SpectralModel(const Eigen::MatrixXd& sigma);
  Eigen::MatrixXd sigma;
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // columns, sign-fixed
  Eigen::MatrixXd sqrt;          // symmetric square root
};

struct Constraints {
  Eigen::VectorXd v1;
  Eigen::VectorXd mu;
};

/// v1 = eigenvector at rank idx_v1 (1-based, counted from the smallest
/// eigenvalue) and mu = sqrt(weight) v1 + sqrt(1-weight) beta2 with beta2
/// the eigenvector at rank idx_beta2. ||mu|| = 1 by orthonormality.
Constraints build_constraints(const SpectralModel& model, int idx_v1,
                              int idx_beta2, double weight);
Constraints build_constraints(const Eigen::MatrixXd& sigma, int idx_v1,
                              int idx_beta2, double weight);

/// Rows i.i.d. N(mu, Sigma); same generation path as the elliptical sampler
/// with lambda == 1, so both produce identical output for identical seeds.
SampleSet sample_gaussian(int n, const Eigen::VectorXd& mu,
                          const SpectralModel& model, std::uint64_t seed);
SampleSet sample_gaussian(int n, const Eigen::VectorXd& mu,
                          const Eigen::MatrixXd& sigma, std::uint64_t seed);

/// X_i = mu + lambda_i Sigma^{1/2} Y_i with lambda drawn from `law`,
/// independent of Y. lambda_sq_true records the realized tau_i.
SampleSet sample_elliptical(int n, const Eigen::VectorXd& mu,
                            const SpectralModel& model, const LambdaLaw& law,
                            std::uint64_t seed);
SampleSet sample_elliptical(int n, const Eigen::VectorXd& mu,
                            const Eigen::MatrixXd& sigma, const LambdaLaw& law,
                            std::uint64_t seed);

/// X = e_n mu' + Lambda Y Sigma^{1/2} with a full-rank n x n mixing matrix
/// Lambda (rows of Y mixed in "time"). Diagonal Lambda reduces exactly to
/// the elliptical sampler. Throws RankDeficientError when the smallest
/// singular value of Lambda is below 1e-10 times the largest.
SampleSet sample_correlated(int n, const Eigen::VectorXd& mu,
                            const SpectralModel& model,
                            const Eigen::MatrixXd& lambda, std::uint64_t seed);
SampleSet sample_correlated(int n, const Eigen::VectorXd& mu,
                            const Eigen::MatrixXd& sigma,
                            const Eigen::MatrixXd& lambda, std::uint64_t seed);

/// Observations as CSV (one row per observation, no header) plus a sidecar
/// metadata file of key=value lines: model, detail, seed, n, p.
void write_sample(const SampleSet& sample, const std::string& data_path,
                  const std::string& meta_path);
SampleSet read_sample(const std::string& data_path,
                      const std::string& meta_path);

}  // namespace hdqp::datagen
