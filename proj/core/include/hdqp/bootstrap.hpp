#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "hdqp/datagen.hpp"
#include "hdqp/errors.hpp"

namespace hdqp::bootstrap {

/// Multinomial(1/n, ..., 1/n, n) resampling weights: n draws with
/// replacement, tallied. Deterministic per seed.
Eigen::VectorXi multinomial_weights(int n, std::uint64_t seed);

/// Empirical distribution of the weights over {0, 1, 2, ...}: entry j is
/// #{w_i = j} / n. Total mass 1.
std::vector<double> weight_empirical_distribution(
    const Eigen::VectorXi& weights);

struct BootstrapMoments {
  Eigen::VectorXd mu_star;    ///< X' D e / n
  Eigen::MatrixXd sigma_star; ///< X' D X / (n-1) - n/(n-1) mu* mu*'
  int support = 0;            ///< number of distinct observations resampled
};

/// Resampled moments for the given weight vector (entries >= 0 summing
/// to n). With weights identically 1 this reproduces (mu_hat, sigma_hat).
BootstrapMoments bootstrap_moments(const datagen::SampleSet& sample,
                                   const Eigen::VectorXi& weights);

/// One full draw: weights, moments and the seed that produced them.
struct BootstrapDraw {
  Eigen::VectorXi weights;
  Eigen::VectorXd mu_star;
  Eigen::MatrixXd sigma_star;
  int support = 0;
  std::uint64_t seed = 0;
};

BootstrapDraw make_draw(const datagen::SampleSet& sample, std::uint64_t seed);

/// Statistics of one draw against a reference direction: the ratio
/// v'(Sigma*)^{-1}v / v'Sigma^{-1}v (denominator supplied) and the
/// quadratic form mu*' (Sigma*)^{-1} mu*. Refuses to invert a degenerate
/// resample (support <= p) with DegenerateSampleError rather than
/// regularizing, so bias measurements stay clean.
struct DrawStatistics {
  double v_ratio = 0.0;
  double mu_quad = 0.0;
  int support = 0;
};

DrawStatistics draw_statistics(const BootstrapDraw& draw,
                               const Eigen::VectorXd& v,
                               double v_sigma_inv_v);

/// Flat CSV serialization of per-draw results, appendable to the harness
/// output stream. Columns: draw_index, seed, support, v_ratio, mu_quad.
std::string draw_statistics_csv_header();
std::string draw_statistics_csv_row(int draw_index, std::uint64_t seed,
                                    const DrawStatistics& stats);

/// S* for the bootstrap: the scaling solved with G = Poisson(1). Valid for
/// rho in (0, 1 - 1/e); strictly above 1/(1-rho).
double bootstrap_limit_scaling(double rho);

/// The three first-order limits when bootstrapping mean-mu data:
///   v'(Sigma*)^{-1}v / v'Sigma^{-1}v -> S*
///   mu*'(Sigma*)^{-1}v / sqrt(v'Sigma^{-1}v) -> 0        (mu = 0)
///   mu*'(Sigma*)^{-1}mu* -> S* mu'Sigma^{-1}mu + (S*-1)
/// (S* - 1) is the bootstrap analog of kappa_n.
struct BootstrapPredictions {
  double s_star = 0.0;
  double quad_v = 0.0;
  double cross = 0.0;
  double quad_mu = 0.0;
};

BootstrapPredictions bootstrap_predictions(double rho, double mu_sq);

}  // namespace hdqp::bootstrap
